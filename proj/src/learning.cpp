#include "pdfscout/learning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace pdfscout {

namespace {

constexpr double kAlphaCap = 6.907755278982137;  // 0.5 * ln(1e6)

void require_both_classes(const Dataset& data) {
    bool pos = false, neg = false;
    for (Eigen::Index i = 0; i < data.y.size(); ++i) {
        if (data.y[i] == +1) pos = true;
        else if (data.y[i] == -1) neg = true;
        else throw Error(Errc::BadConfig, "labels must be -1 or +1");
    }
    if (!pos || !neg) throw Error(Errc::SingleClass, "training data holds a single class");
}

}  // namespace

Dataset make_dataset(const std::vector<FeatureVector>& vectors, const std::vector<int>& labels) {
    if (vectors.empty() || vectors.size() != labels.size())
        throw Error(Errc::BadConfig, "vector/label count mismatch");
    Dataset data;
    data.spec_id = vectors.front().spec_id;
    data.X.resize(Eigen::Index(vectors.size()), vectors.front().values.size());
    data.y.resize(Eigen::Index(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].spec_id != data.spec_id)
            throw Error(Errc::SpecMismatch, "mixed feature specs in one dataset");
        data.X.row(Eigen::Index(i)) = vectors[i].values.transpose();
        data.y[Eigen::Index(i)] = labels[i];
    }
    return data;
}

Dataset load_dataset_csv(std::istream& in, const FeatureSpec& spec) {
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::BadConfig, "empty CSV");
    // Slot names in this project contain no commas; plain split suffices.
    std::vector<std::string> header;
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
    std::vector<std::string> expected = slot_names(spec);
    expected.push_back("label");
    if (header != expected)
        throw Error(Errc::SpecMismatch, "CSV header does not match the feature spec layout");

    std::vector<Eigen::VectorXd> rows;
    std::vector<int> labels;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ls(line);
        Eigen::VectorXd row(Eigen::Index(spec.dimension()));
        for (Eigen::Index j = 0; j < row.size(); ++j) {
            if (!std::getline(ls, cell, ','))
                throw Error(Errc::BadConfig, "short row at line " + std::to_string(lineno));
            row[j] = std::stod(cell);
        }
        if (!std::getline(ls, cell, ','))
            throw Error(Errc::BadConfig, "missing label at line " + std::to_string(lineno));
        labels.push_back(std::stoi(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(Errc::BadConfig, "CSV holds no rows");

    Dataset data;
    data.spec_id = spec.id();
    data.X.resize(Eigen::Index(rows.size()), Eigen::Index(spec.dimension()));
    data.y.resize(Eigen::Index(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        data.X.row(Eigen::Index(i)) = rows[i].transpose();
        data.y[Eigen::Index(i)] = labels[i];
    }
    return data;
}

Model train_naive_bayes(const Dataset& data, double smoothing) {
    require_both_classes(data);
    if (!(smoothing > 0)) throw Error(Errc::BadConfig, "smoothing must be positive");

    const Eigen::Index n = data.size();
    const Eigen::Index d = data.dim();

    std::int64_t n_pos = 0;
    Eigen::VectorXd present_pos = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd present_neg = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < n; ++i) {
        bool pos = data.y[i] == +1;
        n_pos += pos;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (data.X(i, j) > 0.0) (pos ? present_pos : present_neg)[j] += 1.0;
        }
    }
    std::int64_t n_neg = n - n_pos;

    NaiveBayesModel nb;
    nb.smoothing = smoothing;
    nb.log_prior_pos = std::log(double(n_pos) / double(n));
    nb.log_prior_neg = std::log(double(n_neg) / double(n));
    nb.log_rate_pos.resize(d);
    nb.log_comp_pos.resize(d);
    nb.log_rate_neg.resize(d);
    nb.log_comp_neg.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double r_pos = (present_pos[j] + smoothing) / (double(n_pos) + 2.0 * smoothing);
        double r_neg = (present_neg[j] + smoothing) / (double(n_neg) + 2.0 * smoothing);
        nb.log_rate_pos[j] = std::log(r_pos);
        nb.log_comp_pos[j] = std::log(1.0 - r_pos);
        nb.log_rate_neg[j] = std::log(r_neg);
        nb.log_comp_neg[j] = std::log(1.0 - r_neg);
    }

    Model model;
    model.impl = std::move(nb);
    model.spec_id = data.spec_id;
    model.meta.rounds = 0;
    return model;
}

namespace {

struct StumpCandidate {
    double error = std::numeric_limits<double>::infinity();
    int feature = 0;
    double threshold = 0.0;
    int polarity = +1;

    bool better_than(const StumpCandidate& o) const {
        if (error != o.error) return error < o.error;
        if (feature != o.feature) return feature < o.feature;
        if (threshold != o.threshold) return threshold < o.threshold;
        return polarity > o.polarity;  // +1 preferred
    }
};

// Exhaustive weighted search; rows must already be in canonical order so
// float accumulation is permutation-independent.
StumpCandidate best_stump(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                          const Eigen::VectorXd& w,
                          const std::vector<std::vector<int>>& feature_order) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    StumpCandidate best;

    for (Eigen::Index j = 0; j < d; ++j) {
        const std::vector<int>& order = feature_order[std::size_t(j)];

        // err(theta) for polarity +1: weight of {x >= theta, y = -1} plus
        // weight of {x < theta, y = +1}. Start below the minimum and sweep.
        double err_plus = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (y[i] == -1) err_plus += w[i];

        double below_min = X(order.front(), j) - 1.0;
        auto consider = [&](double threshold, double err) {
            StumpCandidate cand;
            cand.feature = int(j);
            cand.threshold = threshold;
            cand.polarity = +1;
            cand.error = err;
            if (cand.better_than(best)) best = cand;
            cand.polarity = -1;
            cand.error = 1.0 - err;
            if (cand.better_than(best)) best = cand;
        };
        consider(below_min, err_plus);

        std::size_t i = 0;
        while (i < order.size()) {
            double v = X(order[i], j);
            // Move every row with this value below the threshold.
            double delta = 0.0;
            std::size_t k = i;
            while (k < order.size() && X(order[k], j) == v) {
                delta += y[order[k]] == +1 ? w[order[k]] : -w[order[k]];
                ++k;
            }
            err_plus += delta;
            if (k < order.size()) {
                double next = X(order[k], j);
                consider((v + next) / 2.0, err_plus);
            }
            i = k;
        }
    }
    return best;
}

}  // namespace

Model train_adaboost(const Dataset& data, int rounds, std::uint64_t seed) {
    require_both_classes(data);
    if (rounds < 1) throw Error(Errc::BadConfig, "rounds must be >= 1");

    const Eigen::Index n = data.size();
    const Eigen::Index d = data.dim();

    // Canonical row order: sort by (features, label). Training then cannot
    // depend on how the caller happened to order the dataset.
    std::vector<int> canon(static_cast<std::size_t>(n));
    std::iota(canon.begin(), canon.end(), 0);
    std::sort(canon.begin(), canon.end(), [&](int a, int b) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (data.X(a, j) != data.X(b, j)) return data.X(a, j) < data.X(b, j);
        }
        return data.y[a] < data.y[b];
    });
    Eigen::MatrixXd X(n, d);
    Eigen::VectorXi y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        X.row(i) = data.X.row(canon[std::size_t(i)]);
        y[i] = data.y[canon[std::size_t(i)]];
    }

    std::vector<std::vector<int>> feature_order(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        std::vector<int>& order = feature_order[std::size_t(j)];
        order.resize(std::size_t(n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return X(a, j) < X(b, j); });
    }

    BoostedModel boosted;
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / double(n));
    Eigen::VectorXd margin = Eigen::VectorXd::Zero(n);  // y_i * F(x_i)

    for (int t = 0; t < rounds; ++t) {
        StumpCandidate cand = best_stump(X, y, w, feature_order);
        double eps = cand.error;

        if (eps >= 0.5) {
            if (boosted.stumps.empty()) {
                // No stump beats chance: fall back to the majority class.
                std::int64_t pos = 0;
                for (Eigen::Index i = 0; i < n; ++i) pos += y[i] == +1;
                boosted.fallback_label = 2 * pos >= n ? +1 : -1;
                Model model;
                model.impl = std::move(boosted);
                model.spec_id = data.spec_id;
                model.meta.seed = seed;
                model.meta.rounds = 0;
                return model;
            }
            break;
        }

        Stump stump;
        stump.feature = cand.feature;
        stump.threshold = cand.threshold;
        stump.polarity = cand.polarity;
        stump.alpha = eps <= 0.0 ? kAlphaCap
                                 : std::min(0.5 * std::log((1.0 - eps) / eps), kAlphaCap);
        boosted.stumps.push_back(stump);
        boosted.round_errors.push_back(eps);

        double loss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            int h = stump.predict(X.row(i).transpose());
            margin[i] += stump.alpha * double(h * y[i]);
            loss += std::exp(-margin[i]);
        }
        boosted.loss_curve.push_back(loss / double(n));

        if (eps <= 0.0) break;  // perfect stump; nothing left to reweight

        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            int h = stump.predict(X.row(i).transpose());
            w[i] *= std::exp(-stump.alpha * double(h * y[i]));
            total += w[i];
        }
        w /= total;
    }

    Model model;
    model.impl = std::move(boosted);
    model.spec_id = data.spec_id;
    model.meta.seed = seed;
    model.meta.rounds = int(std::get<BoostedModel>(model.impl).stumps.size());
    return model;
}

double score(const Model& model, const Eigen::VectorXd& x) {
    if (const auto* nb = std::get_if<NaiveBayesModel>(&model.impl)) {
        double s = nb->log_prior_pos - nb->log_prior_neg;
        for (Eigen::Index j = 0; j < nb->log_rate_pos.size(); ++j) {
            bool present = j < x.size() && x[j] > 0.0;
            s += present ? nb->log_rate_pos[j] - nb->log_rate_neg[j]
                         : nb->log_comp_pos[j] - nb->log_comp_neg[j];
        }
        return s;
    }
    const auto& boosted = std::get<BoostedModel>(model.impl);
    if (boosted.stumps.empty()) return double(boosted.fallback_label);
    double s = 0.0;
    for (const Stump& stump : boosted.stumps) s += stump.alpha * double(stump.predict(x));
    return s;
}

int predict_label(const Model& model, const Eigen::VectorXd& x) {
    return score(model, x) >= 0.0 ? +1 : -1;
}

int predict(const Model& model, const FeatureVector& x) {
    if (x.spec_id != model.spec_id)
        throw Error(Errc::SpecMismatch, "feature vector spec " + x.spec_id +
                                            " does not match model spec " + model.spec_id);
    return predict_label(model, x.values);
}

Metrics evaluate(const Model& model, const Dataset& data) {
    if (data.spec_id != model.spec_id)
        throw Error(Errc::SpecMismatch, "dataset spec does not match model spec");
    Metrics m;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        int label = predict_label(model, data.X.row(i).transpose());
        if (data.y[i] == +1)
            label == +1 ? ++m.tp : ++m.fn;
        else
            label == +1 ? ++m.fp : ++m.tn;
    }
    std::int64_t pos = m.tp + m.fn, neg = m.fp + m.tn;
    m.detection_rate = pos ? double(m.tp) / double(pos) : 0.0;
    m.false_positive_rate = neg ? double(m.fp) / double(neg) : 0.0;
    m.accuracy = double(m.tp + m.tn) / double(data.size());
    return m;
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    Eigen::VectorXd out(Eigen::Index(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) out[Eigen::Index(i)] = j[i].get<double>();
    return out;
}

constexpr int kFormatVersion = 1;

}  // namespace

std::string model_to_json(const Model& model) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["spec_id"] = model.spec_id;
    j["training_meta"] = {{"seed", model.meta.seed},
                          {"rounds", model.meta.rounds},
                          {"timestamp", model.meta.timestamp}};
    if (const auto* nb = std::get_if<NaiveBayesModel>(&model.impl)) {
        j["family"] = "naive_bayes";
        j["naive_bayes"] = {{"smoothing", nb->smoothing},
                            {"log_prior_pos", nb->log_prior_pos},
                            {"log_prior_neg", nb->log_prior_neg},
                            {"log_rate_pos", vector_to_json(nb->log_rate_pos)},
                            {"log_comp_pos", vector_to_json(nb->log_comp_pos)},
                            {"log_rate_neg", vector_to_json(nb->log_rate_neg)},
                            {"log_comp_neg", vector_to_json(nb->log_comp_neg)}};
    } else {
        const auto& boosted = std::get<BoostedModel>(model.impl);
        j["family"] = "adaboost";
        nlohmann::json stumps = nlohmann::json::array();
        for (const Stump& s : boosted.stumps)
            stumps.push_back({{"feature", s.feature},
                              {"threshold", s.threshold},
                              {"polarity", s.polarity},
                              {"alpha", s.alpha}});
        j["adaboost"] = {{"stumps", std::move(stumps)},
                         {"fallback_label", boosted.fallback_label}};
    }
    return j.dump(2);
}

Model model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::CorruptModelFile, e.what());
    }
    try {
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw Error(Errc::SpecMismatch, "unsupported model format version");
        Model model;
        model.spec_id = j.at("spec_id").get<std::string>();
        const auto& meta = j.at("training_meta");
        model.meta.seed = meta.at("seed").get<std::uint64_t>();
        model.meta.rounds = meta.at("rounds").get<int>();
        model.meta.timestamp = meta.at("timestamp").get<std::string>();
        std::string family = j.at("family").get<std::string>();
        if (family == "naive_bayes") {
            const auto& src = j.at("naive_bayes");
            NaiveBayesModel nb;
            nb.smoothing = src.at("smoothing").get<double>();
            nb.log_prior_pos = src.at("log_prior_pos").get<double>();
            nb.log_prior_neg = src.at("log_prior_neg").get<double>();
            nb.log_rate_pos = vector_from_json(src.at("log_rate_pos"));
            nb.log_comp_pos = vector_from_json(src.at("log_comp_pos"));
            nb.log_rate_neg = vector_from_json(src.at("log_rate_neg"));
            nb.log_comp_neg = vector_from_json(src.at("log_comp_neg"));
            model.impl = std::move(nb);
        } else if (family == "adaboost") {
            const auto& src = j.at("adaboost");
            BoostedModel boosted;
            boosted.fallback_label = src.at("fallback_label").get<int>();
            for (const auto& s : src.at("stumps")) {
                Stump stump;
                stump.feature = s.at("feature").get<int>();
                stump.threshold = s.at("threshold").get<double>();
                stump.polarity = s.at("polarity").get<int>();
                stump.alpha = s.at("alpha").get<double>();
                boosted.stumps.push_back(stump);
            }
            model.impl = std::move(boosted);
        } else {
            throw Error(Errc::CorruptModelFile, "unknown model family " + family);
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::CorruptModelFile, e.what());
    }
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path);
    out << model_to_json(model) << "\n";
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

}  // namespace pdfscout
