#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdfscout/injection.hpp"
#include "pdfscout/learning.hpp"

namespace pdfscout {

struct BenignProfile {
    int min_pages = 1;
    int max_pages = 4;
    int min_words_per_page = 60;
    int max_words_per_page = 220;
    double js_probability = 0.3;          // harmless viewer script
    double attachment_probability = 0.02; // harmless text attachment
};

struct MaliciousProfile {
    // Mix over the attack templates; normalized internally.
    double launch_weight = 1.0;
    double js_weight = 1.0;
    double embedded_weight = 1.0;
    // Malware dressed up with a font and a text page, like a real document.
    double doc_looking_probability = 0.2;
    // JS payload stored in a compressed stream instead of an inline string.
    double js_stream_probability = 0.4;
    // Malware carrying document metadata. Keeps any single structural
    // feature from separating the classes on its own.
    double info_probability = 0.3;
};

struct CorpusConfig {
    std::uint64_t seed = 7;
    int n_benign = 200;
    int n_malicious = 200;
    BenignProfile benign;
    MaliciousProfile malicious;
};

struct GeneratedFile {
    std::string name;
    std::string bytes;
    int label = -1;             // -1 benign, +1 malicious
    std::string family;         // benign | launch-exe | js-eval-unescape | embedded-file
};

// Deterministic: identical config and seed give byte-identical files.
std::pair<std::vector<GeneratedFile>, std::vector<GeneratedFile>> generate_corpus(
    const CorpusConfig& config);

// The single JS routine every js-embedding attack carries.
std::string attack_js_code();

struct DetectorConfig {
    std::string id;
    std::string family = "adaboost";    // adaboost | naive_bayes
    std::string features = "content";   // content | structural
    bool deep_extraction = false;       // classify embedded files separately
    int rounds = 50;
    double smoothing = 1.0;
};

struct AttackConfig {
    std::string family;  // js-embedding | pdf-embedding | exe-embedding
    InjectionTechnique technique = InjectionTechnique::IncrementalUpdate;
    int count = 50;
};

struct ExperimentConfig {
    CorpusConfig corpus;
    double train_fraction = 0.5;
    std::uint64_t split_seed = 99;
    std::vector<DetectorConfig> detectors;
    std::vector<AttackConfig> attacks;
};

ExperimentConfig default_experiment_config();
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct CellMetrics {
    int total = 0;
    int flagged = 0;  // classified malicious
    double rate() const { return total ? double(flagged) / double(total) : 0.0; }
};

struct ExperimentReport {
    std::uint64_t corpus_seed = 0;
    std::uint64_t split_seed = 0;
    int n_benign = 0, n_malicious = 0;
    int train_benign = 0, train_malicious = 0;
    int holdout_benign = 0, holdout_malicious = 0;
    // detector id -> sample family -> metrics. Families: benign (rate = FPR),
    // native-malicious and the attack families (rate = detection).
    std::map<std::string, std::map<std::string, CellMetrics>> cells;
    double runtime_seconds = 0.0;

    nlohmann::json to_json() const;
    std::string text_table() const;
};

// Deterministic split, per-detector training, attack generation from
// held-out benign hosts only, then per-family evaluation.
ExperimentReport run_experiment(const ExperimentConfig& config);

// One detector applied to raw bytes; deep detectors also classify embedded
// PDFs and flag the container when any attachment is flagged.
int classify_bytes(const Model& model, const FeatureSpec& spec, bool deep_extraction,
                   std::string_view bytes);

}  // namespace pdfscout
