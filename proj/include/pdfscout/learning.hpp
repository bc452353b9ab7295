#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "pdfscout/features.hpp"

namespace pdfscout {

// Labeled sample matrix: one row per file, labels in {-1, +1}.
struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXi y;
    std::string spec_id;

    Eigen::Index size() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
};

Dataset make_dataset(const std::vector<FeatureVector>& vectors, const std::vector<int>& labels);

// Reads the write_features_csv format; the header must match the spec's slot
// names exactly and every row must carry a label.
Dataset load_dataset_csv(std::istream& in, const FeatureSpec& spec);

// Depth-1 threshold learner: predicts polarity * sign(x[feature] - threshold),
// sign(0) = +1.
struct Stump {
    int feature = 0;
    double threshold = 0.0;
    int polarity = +1;
    double alpha = 0.0;

    int predict(const Eigen::VectorXd& x) const {
        int s = x[feature] - threshold >= 0.0 ? +1 : -1;
        return polarity * s;
    }
};

// Bernoulli naive Bayes over presence/absence (x > 0), log-space parameters.
struct NaiveBayesModel {
    double smoothing = 1.0;
    double log_prior_pos = 0.0;
    double log_prior_neg = 0.0;
    Eigen::VectorXd log_rate_pos, log_comp_pos;  // log r, log (1 - r) per feature
    Eigen::VectorXd log_rate_neg, log_comp_neg;
};

struct BoostedModel {
    std::vector<Stump> stumps;
    int fallback_label = +1;  // used when no stump beat chance
    // Training diagnostics: weighted error and exponential loss per round.
    std::vector<double> round_errors;
    std::vector<double> loss_curve;
};

struct TrainingMeta {
    std::uint64_t seed = 0;
    int rounds = 0;
    std::string timestamp;
};

struct Model {
    std::variant<NaiveBayesModel, BoostedModel> impl;
    std::string spec_id;
    TrainingMeta meta;

    bool is_boosted() const { return std::holds_alternative<BoostedModel>(impl); }
};

// Presence rates with additive smoothing, priors from class frequencies.
// Throws SingleClass when a label is missing, SpecMismatch never (dataset
// already carries one spec).
Model train_naive_bayes(const Dataset& data, double smoothing = 1.0);

// Standard AdaBoost with exhaustive stump search (thresholds at midpoints of
// consecutive distinct values plus one below-min candidate). Deterministic:
// ties break on lowest feature, then lowest threshold, then polarity +1, and
// rows are canonically ordered internally so training is invariant under row
// permutation. Early exit on a perfect stump (alpha capped) or when no stump
// beats chance.
Model train_adaboost(const Dataset& data, int rounds = 50, std::uint64_t seed = 0);

// Real-valued margin: log-posterior difference or weighted stump vote.
double score(const Model& model, const Eigen::VectorXd& x);

// Sign of the score with ties to +1 (triage prefers false alarms to misses).
int predict_label(const Model& model, const Eigen::VectorXd& x);

// Spec-checked variant. Throws SpecMismatch.
int predict(const Model& model, const FeatureVector& x);

struct Metrics {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    double detection_rate = 0.0;  // TPR
    double false_positive_rate = 0.0;
    double accuracy = 0.0;
};

Metrics evaluate(const Model& model, const Dataset& data);

// Versioned JSON persistence; floats survive exactly (shortest round-trip
// serialization). load(save(m)) scores identically.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);
std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

}  // namespace pdfscout
