#include <doctest.h>

#include "pdfscout/corpus.hpp"
#include "pdfscout/forensics.hpp"
#include "pdfscout/parser.hpp"
#include "pdfscout/writer.hpp"

using namespace pdfscout;

namespace {

CorpusConfig small_config() {
    CorpusConfig config;
    config.seed = 7;
    config.n_benign = 12;
    config.n_malicious = 12;
    return config;
}

}  // namespace

TEST_CASE("same seed, same bytes") {
    auto [b1, m1] = generate_corpus(small_config());
    auto [b2, m2] = generate_corpus(small_config());
    REQUIRE(b1.size() == b2.size());
    REQUIRE(m1.size() == m2.size());
    for (std::size_t i = 0; i < b1.size(); ++i) CHECK(b1[i].bytes == b2[i].bytes);
    for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m1[i].bytes == m2[i].bytes);

    CorpusConfig other = small_config();
    other.seed = 8;
    auto [b3, m3] = generate_corpus(other);
    CHECK(b1[0].bytes != b3[0].bytes);
}

TEST_CASE("every generated file parses strict and round-trips") {
    auto [benign, malicious] = generate_corpus(small_config());
    for (const auto* side : {&benign, &malicious}) {
        for (const GeneratedFile& f : *side) {
            Document doc = parse_document(f.bytes, ParseMode::Strict);
            Document back = parse_document(serialize(doc), ParseMode::Strict);
            CHECK(effective_graph_equal(doc, back));
        }
    }
}

TEST_CASE("launch-family files carry the launch keywords") {
    CorpusConfig config = small_config();
    config.malicious.launch_weight = 1.0;
    config.malicious.js_weight = 0.0;
    config.malicious.embedded_weight = 0.0;
    auto [benign, malicious] = generate_corpus(config);
    for (const GeneratedFile& f : malicious) {
        CHECK(f.family == "launch-exe");
        KeywordCensus census = keyword_scan(parse_document(f.bytes, ParseMode::Strict));
        CHECK(census.count("Launch") >= 1);
        CHECK(census.count("Win") >= 1);
    }
}

TEST_CASE("script-free benign profile yields no suspicious nodes") {
    CorpusConfig config = small_config();
    config.benign.js_probability = 0.0;
    config.benign.attachment_probability = 0.0;
    auto [benign, malicious] = generate_corpus(config);
    for (const GeneratedFile& f : benign) {
        Document doc = parse_document(f.bytes, ParseMode::Strict);
        ObjectTree tree = build_tree(doc);
        CHECK(tree.suspicious_nodes.empty());
        CHECK(extract_javascript(doc).empty());
    }
}

TEST_CASE("malicious families are all structurally suspicious") {
    auto [benign, malicious] = generate_corpus(small_config());
    for (const GeneratedFile& f : malicious) {
        ObjectTree tree = build_tree(parse_document(f.bytes, ParseMode::Strict));
        CHECK(!tree.suspicious_nodes.empty());
    }
}

TEST_CASE("experiment report covers every detector x family cell") {
    ExperimentConfig config = default_experiment_config();
    config.corpus.n_benign = 24;
    config.corpus.n_malicious = 24;
    for (auto& d : config.detectors) d.rounds = 15;
    for (auto& a : config.attacks) a.count = 6;

    ExperimentReport report = run_experiment(config);
    REQUIRE(report.cells.size() == config.detectors.size());
    for (const auto& [id, families] : report.cells) {
        CHECK(families.count("benign") == 1);
        CHECK(families.count("native-malicious") == 1);
        CHECK(families.count("js-embedding") == 1);
        CHECK(families.count("pdf-embedding") == 1);
        CHECK(families.count("exe-embedding") == 1);
        for (const auto& [family, cell] : families) {
            CHECK(cell.total > 0);
            CHECK(cell.flagged >= 0);
            CHECK(cell.flagged <= cell.total);
        }
    }
    CHECK(report.train_benign + report.holdout_benign == 24);
    CHECK(report.train_malicious + report.holdout_malicious == 24);

    // Same config, same report (runtime aside).
    ExperimentReport again = run_experiment(config);
    nlohmann::json a = report.to_json();
    nlohmann::json b = again.to_json();
    a.erase("runtime_seconds");
    b.erase("runtime_seconds");
    CHECK(a == b);

    std::string table = report.text_table();
    CHECK(table.find("native-malicious") != std::string::npos);
    CHECK(table.find("benign (FPR)") != std::string::npos);
}

TEST_CASE("experiment config json round trip with partial overrides") {
    nlohmann::json j = {
        {"corpus", {{"seed", 123}, {"n_benign", 30}}},
        {"train_fraction", 0.6},
        {"attacks", {{{"family", "js-embedding"}, {"technique", "graph-merge"}, {"count", 5}}}},
    };
    ExperimentConfig config = experiment_config_from_json(j);
    CHECK(config.corpus.seed == 123);
    CHECK(config.corpus.n_benign == 30);
    CHECK(config.corpus.n_malicious == 200);  // default retained
    CHECK(config.train_fraction == 0.6);
    REQUIRE(config.attacks.size() == 1);
    CHECK(config.attacks[0].technique == InjectionTechnique::GraphMerge);
    CHECK(config.detectors.size() == 4);  // defaults retained

    nlohmann::json bad = {{"train_fraction", 1.5}};
    CHECK_THROWS_AS((void)experiment_config_from_json(bad), Error);
}

TEST_CASE("attack payload code trips the content indicators") {
    auto hits = scan_js_indicators(attack_js_code());
    bool has_eval = false, has_sled = false;
    for (const auto& h : hits) {
        if (h.indicator == "eval") has_eval = true;
        if (h.indicator == "unicode-nop-sled") has_sled = true;
    }
    CHECK(has_eval);
    CHECK(has_sled);
}
