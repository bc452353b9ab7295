// Acceptance suite: each criterion prints one [PASS]/[FAIL] line; the binary
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "pdfscout/corpus.hpp"
#include "pdfscout/features.hpp"
#include "pdfscout/filters.hpp"
#include "pdfscout/forensics.hpp"
#include "pdfscout/injection.hpp"
#include "pdfscout/learning.hpp"
#include "pdfscout/parser.hpp"
#include "pdfscout/writer.hpp"

using namespace pdfscout;

namespace {

struct Checker {
    bool all_passed = true;

    void run(const std::string& id, const std::string& label,
             const std::function<std::string()>& body) {
        auto t0 = std::chrono::steady_clock::now();
        std::string failure;
        try {
            failure = body();
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char line[512];
        if (failure.empty()) {
            std::snprintf(line, sizeof(line), "[PASS] %s: %s (%.2f s)", id.c_str(), label.c_str(),
                          secs);
        } else {
            std::snprintf(line, sizeof(line), "[FAIL] %s: %s (%.2f s) -- %s", id.c_str(),
                          label.c_str(), secs, failure.c_str());
            all_passed = false;
        }
        std::cout << line << std::endl;
    }
};

#define EXPECT(cond, msg)                                     \
    do {                                                      \
        if (!(cond)) return std::string(msg);                 \
    } while (0)

Document strict(const std::string& bytes) { return parse_document(bytes, ParseMode::Strict); }

std::set<std::int64_t> domain(const Document& doc) {
    std::set<std::int64_t> out;
    for (const auto& [number, obj] : effective_objects(doc)) out.insert(number);
    return out;
}

// ---- shared corpus, generated once ----------------------------------------

struct Shared {
    std::vector<GeneratedFile> benign;
    std::vector<GeneratedFile> malicious;
    Dataset content_dataset;  // all 400 files under the default content spec

    static Shared make() {
        Shared s;
        CorpusConfig config;  // pinned defaults: seed 7, 200 + 200
        auto [benign, malicious] = generate_corpus(config);
        s.benign = std::move(benign);
        s.malicious = std::move(malicious);

        FeatureSpec spec = default_spec();
        std::vector<FeatureVector> vectors;
        std::vector<int> labels;
        for (const auto* side : {&s.benign, &s.malicious}) {
            for (const GeneratedFile& f : *side) {
                vectors.push_back(vectorize(strict(f.bytes), spec));
                labels.push_back(f.label);
            }
        }
        s.content_dataset = make_dataset(vectors, labels);
        return s;
    }
};

// ---- criterion bodies ------------------------------------------------------

std::string criterion_round_trip(const Shared& shared) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> files;
    for (const GeneratedFile& f : shared.benign) files.push_back(f.bytes);
    for (const GeneratedFile& f : shared.malicious) files.push_back(f.bytes);
    // Multi-revision and post-x-ref variants join the pool.
    for (int i = 0; i < 50; ++i) {
        const std::string& host = shared.benign[std::size_t(i)].bytes;
        files.push_back(inject_incremental(host, Payload::js(attack_js_code())).bytes);
        files.push_back(inject_graph_merge(host, Payload::exe("MZ" + std::to_string(i))).bytes);
        files.push_back(
            inject_after_xref(host, Payload::benign_names({{"Widget", i % 3 + 1}})).bytes);
    }
    EXPECT(files.size() >= 500, "pool smaller than 500 documents");

    std::size_t checked = 0;
    for (const std::string& bytes : files) {
        Document doc = strict(bytes);
        Document back = strict(serialize(doc));
        if (!effective_graph_equal(doc, back))
            return "round trip mismatch on document " + std::to_string(checked);
        ++checked;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT(secs < 60.0, "round trips exceeded 60 s");
    return "";
}

std::string criterion_differential(const Shared& shared) {
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const GeneratedFile& target = i % 2 == 0 ? shared.benign[std::size_t(i / 2)]
                                                 : shared.malicious[std::size_t(i / 2)];
        Payload payload = i % 3 == 0
                              ? Payload::js(attack_js_code())
                              : Payload::benign_names({{"Pages", i % 5 + 1}, {"Font", 1}});
        auto result = inject_after_xref(target.bytes, payload);

        Document original = strict(target.bytes);
        Document injected_strict = strict(result.bytes);
        if (!effective_graph_equal(original, injected_strict))
            return "strict graph changed for file " + std::to_string(i);

        Document injected_scavenge = parse_document(result.bytes, ParseMode::Scavenge);
        std::set<std::int64_t> extra;
        for (std::int64_t n : domain(injected_scavenge))
            if (!domain(injected_strict).count(n)) extra.insert(n);
        if (extra != std::set<std::int64_t>(result.new_object_numbers.begin(),
                                            result.new_object_numbers.end()))
            return "scavenge-minus-strict set is not exactly the injected numbers at file " +
                   std::to_string(i);
        ++checked;
    }
    EXPECT(checked == 200, "short of 200 files");
    return "";
}

std::string criterion_census() {
    KeywordCensus census = keyword_scan(strict(fixtures::launch_action_doc()));
    EXPECT(census.count("Launch") == 1, "Launch != 1");
    EXPECT(census.count("Action") == 1, "Action != 1");
    EXPECT(census.count("Win") == 1, "Win != 1");
    EXPECT(census.count("F") == 1, "F != 1");
    EXPECT(census.count("P") == 1, "P != 1");

    std::string obfuscated = fixtures::build_raw_pdf({
        {1, fixtures::obfuscate_names("<< /Type /Catalog /OpenAction 2 0 R >>")},
        {2, fixtures::obfuscate_names(
                "<< /Type /Action /S /Launch /Win << /F (cmd.exe) "
                "/P (/c echo Dim BinaryStream > vbs1.vbs && echo Set BinaryStream = "
                "CreateObject(\"ADODB.Stream\") >> vbs1.vbs) >> >>")},
    });
    EXPECT(obfuscated.find('#') != std::string::npos, "obfuscation produced no escapes");
    KeywordCensus escaped = keyword_scan(strict(obfuscated));
    EXPECT(census.counts == escaped.counts, "escaped census differs");
    return "";
}

std::string criterion_technique_invariants(const Shared& shared) {
    FeatureSpec spec = default_spec();
    for (int i = 0; i < 50; ++i) {
        const std::string& host = shared.benign[std::size_t(i)].bytes;
        Document before = strict(host);

        // (a) after-xref: revisions and Strict features untouched.
        Payload a_payload = i % 2 == 0 ? Payload::benign_names({{"Widget", 2}})
                                       : Payload::js(attack_js_code());
        auto a = inject_after_xref(host, a_payload);
        Document a_doc = strict(a.bytes);
        if (a_doc.revisions.size() != before.revisions.size())
            return "(a) revision count changed at file " + std::to_string(i);
        if (vectorize(before, spec).values != vectorize(a_doc, spec).values)
            return "(a) strict feature vector changed at file " + std::to_string(i);

        // (b) incremental: exactly one extra revision, trigger resolves.
        Payload b_payload = i % 3 == 2 ? Payload::exe("MZ" + std::to_string(i))
                                       : Payload::js(attack_js_code());
        auto b = inject_incremental(host, b_payload);
        Document b_doc = strict(b.bytes);
        if (b_doc.revisions.size() != before.revisions.size() + 1)
            return "(b) revision delta != +1 at file " + std::to_string(i);
        if (!trigger_chain_resolves(b_doc, b_payload))
            return "(b) trigger chain broken at file " + std::to_string(i);

        // (c) graph-merge: single revision, no /Prev, trigger resolves.
        Payload c_payload = i % 3 == 1 ? Payload::exe("MZ" + std::to_string(i))
                                       : Payload::js(attack_js_code());
        auto c = inject_graph_merge(host, c_payload);
        Document c_doc = strict(c.bytes);
        if (c_doc.revisions.size() != 1)
            return "(c) revision count != 1 at file " + std::to_string(i);
        if (c_doc.revisions[0].trailer.dict.contains("Prev"))
            return "(c) /Prev present at file " + std::to_string(i);
        if (!trigger_chain_resolves(c_doc, c_payload))
            return "(c) trigger chain broken at file " + std::to_string(i);
    }
    return "";
}

std::string criterion_adaboost(const Shared& shared) {
    // Loss monotonicity and per-round errors on the synthetic corpus.
    Model model = train_adaboost(shared.content_dataset, 50, 7);
    const auto& boosted = std::get<BoostedModel>(model.impl);
    EXPECT(!boosted.stumps.empty(), "no stumps accepted on the corpus");
    for (std::size_t t = 0; t < boosted.round_errors.size(); ++t)
        if (!(boosted.round_errors[t] < 0.5))
            return "round " + std::to_string(t) + " error not < 0.5";
    for (std::size_t t = 1; t < boosted.loss_curve.size(); ++t)
        if (boosted.loss_curve[t] > boosted.loss_curve[t - 1] + 1e-9)
            return "exponential loss increased at round " + std::to_string(t);

    // Constructed separable 100-point set: zero training error.
    Dataset separable;
    separable.spec_id = "acceptance-1d";
    separable.X.resize(100, 1);
    separable.y.resize(100);
    for (int i = 0; i < 100; ++i) {
        separable.X(i, 0) = double(i);
        separable.y[i] = i < 50 ? -1 : +1;
    }
    Model sep_model = train_adaboost(separable, 50, 0);
    Metrics sep_metrics = evaluate(sep_model, separable);
    EXPECT(sep_metrics.tp + sep_metrics.tn == 100, "separable set not fit exactly");

    // Permutation invariance on the corpus dataset.
    const Dataset& data = shared.content_dataset;
    std::vector<Eigen::Index> order(std::size_t(data.size()));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(123);
    std::shuffle(order.begin(), order.end(), rng);
    Dataset shuffled;
    shuffled.spec_id = data.spec_id;
    shuffled.X.resize(data.size(), data.dim());
    shuffled.y.resize(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        shuffled.X.row(i) = data.X.row(order[std::size_t(i)]);
        shuffled.y[i] = data.y[order[std::size_t(i)]];
    }
    Model shuffled_model = train_adaboost(shuffled, 50, 7);
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        if (predict_label(model, data.X.row(i).transpose()) !=
            predict_label(shuffled_model, data.X.row(i).transpose()))
            return "row permutation changed a prediction (row " + std::to_string(i) + ")";
    }
    return "";
}

std::string criterion_bayes_oracle() {
    // Every ordered 4-point dataset over 2 binary features, both classes
    // present: predict must equal the argmax of hand-multiplied posteriors.
    struct Point {
        int x0, x1, y;
    };
    std::vector<Point> alphabet;
    for (int x0 : {0, 1})
        for (int x1 : {0, 1})
            for (int y : {-1, +1}) alphabet.push_back({x0, x1, y});

    int checked = 0;
    for (std::size_t a = 0; a < alphabet.size(); ++a)
        for (std::size_t b = 0; b < alphabet.size(); ++b)
            for (std::size_t c = 0; c < alphabet.size(); ++c)
                for (std::size_t d = 0; d < alphabet.size(); ++d) {
                    Point pts[4] = {alphabet[a], alphabet[b], alphabet[c], alphabet[d]};
                    int n_pos = 0;
                    for (const Point& p : pts) n_pos += p.y == +1;
                    if (n_pos == 0 || n_pos == 4) continue;

                    Dataset data;
                    data.spec_id = "bayes-oracle";
                    data.X.resize(4, 2);
                    data.y.resize(4);
                    for (int i = 0; i < 4; ++i) {
                        data.X(i, 0) = pts[i].x0;
                        data.X(i, 1) = pts[i].x1;
                        data.y[i] = pts[i].y;
                    }
                    Model model = train_naive_bayes(data, 1.0);

                    int n_neg = 4 - n_pos;
                    for (int q0 : {0, 1})
                        for (int q1 : {0, 1}) {
                            // Oracle: plain products with additive smoothing 1.
                            auto rate = [&](int feature, int label) {
                                int present = 0, count = 0;
                                for (const Point& p : pts) {
                                    if (p.y != label) continue;
                                    ++count;
                                    present += feature == 0 ? p.x0 : p.x1;
                                }
                                return (double(present) + 1.0) / (double(count) + 2.0);
                            };
                            auto likelihood = [&](int label) {
                                double prior =
                                    double(label == +1 ? n_pos : n_neg) / 4.0;
                                double l0 = rate(0, label);
                                double l1 = rate(1, label);
                                return prior * (q0 ? l0 : 1.0 - l0) * (q1 ? l1 : 1.0 - l1);
                            };
                            int oracle =
                                likelihood(+1) >= likelihood(-1) ? +1 : -1;  // tie -> +1
                            Eigen::VectorXd v(2);
                            v << q0, q1;
                            if (predict_label(model, v) != oracle)
                                return "disagreement on dataset (" + std::to_string(a) + "," +
                                       std::to_string(b) + "," + std::to_string(c) + "," +
                                       std::to_string(d) + ") input " + std::to_string(q0) +
                                       std::to_string(q1);
                            ++checked;
                        }
                }
    EXPECT(checked > 0, "no datasets enumerated");
    return "";
}

std::string criterion_experiment(double* runtime_out) {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentReport report = run_experiment(default_experiment_config());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (runtime_out) *runtime_out = secs;

    // (i) every detector is solid on native malware with a low FPR.
    for (const auto& [id, families] : report.cells) {
        double native = families.at("native-malicious").rate();
        double fpr = families.at("benign").rate();
        if (native < 0.9)
            return id + " native detection " + std::to_string(native) + " < 0.9";
        if (fpr > 0.1) return id + " FPR " + std::to_string(fpr) + " > 0.1";
    }

    double structural_js = report.cells.at("structural_adaboost").at("js-embedding").rate();
    double structural_native =
        report.cells.at("structural_adaboost").at("native-malicious").rate();
    double content_js = report.cells.at("content_adaboost").at("js-embedding").rate();
    double deep_pdf = report.cells.at("deep_content_adaboost").at("pdf-embedding").rate();

    // (ii) structure-only detection degrades on reverse-mimicry JS.
    if (!(structural_js < structural_native))
        return "structural js rate " + std::to_string(structural_js) +
               " not below native rate " + std::to_string(structural_native);
    // (iii) JS-indicator features recover it.
    if (!(content_js > structural_js))
        return "content js rate " + std::to_string(content_js) + " not above structural " +
               std::to_string(structural_js);
    // (iv) recursive embedded-file analysis catches PDF embedding.
    if (deep_pdf < 0.9)
        return "deep detector pdf-embedding rate " + std::to_string(deep_pdf) + " < 0.9";

    EXPECT(secs < 300.0, "experiment exceeded 5 minutes");
    return "";
}

std::string criterion_filter_round_trips() {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        std::string data(rng() % 2048, '\0');
        for (char& c : data) c = char(rng() & 0xff);
        if (flate_decode(flate_encode(data)) != data)
            return "flate mismatch at iteration " + std::to_string(i);
    }
    for (int i = 0; i < 1000; ++i) {
        std::string data(rng() % 2048, '\0');
        for (char& c : data) c = char(rng() & 0xff);
        if (ascii_hex_decode(ascii_hex_encode(data)) != data)
            return "ascii-hex mismatch at iteration " + std::to_string(i);
    }
    return "";
}

std::string criterion_persistence(const Shared& shared) {
    Model boosted = train_adaboost(shared.content_dataset, 25, 7);
    Model bayes = train_naive_bayes(shared.content_dataset, 1.0);

    std::mt19937_64 rng(31337);
    for (const Model* model : {&boosted, &bayes}) {
        std::string path = "acceptance_model_tmp.json";
        save_model(*model, path);
        Model back = load_model(path);
        std::remove(path.c_str());
        for (int i = 0; i < 100; ++i) {
            Eigen::VectorXd v(shared.content_dataset.dim());
            for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = double(rng() % 64);
            double a = score(*model, v);
            double b = score(back, v);
            if (std::fabs(a - b) > 1e-12)
                return "score drift " + std::to_string(std::fabs(a - b)) + " at input " +
                       std::to_string(i);
        }
    }
    return "";
}

}  // namespace

int main() {
    std::cout << "acceptance suite\n";
    Checker checker;

    Shared shared = Shared::make();

    checker.run("C1", "parser round trip over 500+ seed-generated documents",
                [&] { return criterion_round_trip(shared); });
    checker.run("C2", "strict/scavenge dominance and after-xref differential on 200 files",
                [&] { return criterion_differential(shared); });
    checker.run("C3", "launch-excerpt keyword census, plain and escape-obfuscated",
                [&] { return criterion_census(); });
    checker.run("C4", "injection technique invariants over 50 files per technique",
                [&] { return criterion_technique_invariants(shared); });
    checker.run("C5", "adaboost loss/error/permutation properties",
                [&] { return criterion_adaboost(shared); });
    checker.run("C6", "naive Bayes equals brute-force posterior oracle on all 4-point sets",
                [&] { return criterion_bayes_oracle(); });
    checker.run("C7", "directional detection-rate reproduction on the pinned experiment",
                [&] { return criterion_experiment(nullptr); });
    checker.run("C8", "FlateDecode and ASCIIHexDecode round trips on 1000 random strings",
                [&] { return criterion_filter_round_trips(); });
    checker.run("C9", "model persistence reproduces scores to 1e-12",
                [&] { return criterion_persistence(shared); });

    std::cout << (checker.all_passed ? "all criteria passed\n" : "FAILURES present\n");
    return checker.all_passed ? 0 : 1;
}
