#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdfscout/corpus.hpp"
#include "pdfscout/features.hpp"
#include "pdfscout/filters.hpp"
#include "pdfscout/forensics.hpp"
#include "pdfscout/injection.hpp"
#include "pdfscout/learning.hpp"
#include "pdfscout/parser.hpp"
#include "pdfscout/writer.hpp"

namespace fs = std::filesystem;
using namespace pdfscout;

namespace {

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::stringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path);
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

std::string dump_json(const nlohmann::json& j) {
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

ParseMode mode_from_string(const std::string& mode) {
    if (mode == "strict") return ParseMode::Strict;
    if (mode == "scavenge") return ParseMode::Scavenge;
    throw Error(Errc::BadConfig, "mode must be strict or scavenge");
}

FeatureSpec spec_from_string(const std::string& name) {
    if (name == "content") return default_spec();
    if (name == "structural") return structural_spec();
    throw Error(Errc::BadConfig, "spec must be content or structural");
}

struct ScanArgs {
    std::string file;
    std::string mode = "strict";
    bool json = false;
    std::string out;
};

int cmd_scan(const ScanArgs& args) {
    Document doc = parse_document(read_file(args.file), mode_from_string(args.mode));
    nlohmann::json report = risk_report(doc, args.file);
    if (args.json) {
        emit(dump_json(report), args.out);
        return 0;
    }
    std::ostringstream text;
    text << args.file << " (" << report["parse_mode"].get<std::string>() << ", v"
         << report["header_version"].get<std::string>() << ")\n";
    text << "  sha256: " << report["sha256"].get<std::string>() << "\n";
    text << "  objects reachable from /Root: " << report["tree"]["node_count"] << ", orphans: "
         << report["tree"]["orphans"].size() << "\n";
    if (!report["tree"]["suspicious"].empty()) {
        text << "  suspicious objects:\n";
        for (const auto& node : report["tree"]["suspicious"])
            text << "    obj " << node["obj"] << ": " << node["reason"].get<std::string>()
                 << "\n";
    }
    if (!report["javascript"].empty()) {
        text << "  javascript:\n";
        for (const auto& js : report["javascript"])
            text << "    obj " << js["obj"] << ": " << js["indicator_hits"].size()
                 << " indicator hit(s)\n";
    }
    const auto& scavenge_only = report["differential"]["scavenge_only"];
    if (!scavenge_only.empty())
        text << "  objects invisible to the reader (scavenge-only): " << scavenge_only.dump()
             << "\n";
    if (!report["diagnostics"].empty())
        text << "  diagnostics: " << report["diagnostics"].size() << "\n";
    emit(text.str(), args.out);
    return 0;
}

struct TreeArgs {
    std::string file;
    std::string mode = "strict";
    bool json = false;
    std::string out;
};

int cmd_tree(const TreeArgs& args) {
    Document doc = parse_document(read_file(args.file), mode_from_string(args.mode));
    ObjectTree tree = build_tree(doc);
    if (args.json) {
        nlohmann::json j;
        j["root"] = tree.root;
        nlohmann::json edges = nlohmann::json::array();
        for (const TreeEdge& e : tree.edges)
            edges.push_back({{"parent", e.parent}, {"child", e.child}, {"via", e.via}});
        j["edges"] = std::move(edges);
        j["orphans"] = tree.orphans;
        nlohmann::json suspicious = nlohmann::json::array();
        for (const SuspiciousNode& node : tree.suspicious_nodes)
            suspicious.push_back({{"obj", node.object}, {"reason", node.reason}});
        j["suspicious"] = std::move(suspicious);
        emit(dump_json(j), args.out);
        return 0;
    }
    std::ostringstream text;
    text << "root: obj " << tree.root << "\n";
    for (const TreeEdge& e : tree.edges)
        text << "  obj " << e.parent << " -" << e.via << "-> obj " << e.child << "\n";
    if (!tree.orphans.empty()) {
        text << "orphans:";
        for (std::int64_t n : tree.orphans) text << " " << n;
        text << "\n";
    }
    for (const SuspiciousNode& node : tree.suspicious_nodes)
        text << "suspicious: obj " << node.object << " (" << node.reason << ")\n";
    emit(text.str(), args.out);
    return 0;
}

struct ExtractJsArgs {
    std::string file;
    std::string mode = "strict";
    bool json = false;
    std::string out;
};

int cmd_extract_js(const ExtractJsArgs& args) {
    Document doc = parse_document(read_file(args.file), mode_from_string(args.mode));
    auto scripts = extract_javascript(doc);
    if (args.json) {
        nlohmann::json j = nlohmann::json::array();
        for (const ExtractedScript& s : scripts) {
            nlohmann::json hits = nlohmann::json::array();
            for (const JsIndicatorHit& h : scan_js_indicators(s.code))
                hits.push_back({{"indicator", h.indicator}, {"start", h.begin}, {"end", h.end}});
            j.push_back({{"obj", s.object}, {"code", s.code}, {"indicator_hits", std::move(hits)}});
        }
        emit(dump_json(j), args.out);
        return 0;
    }
    std::ostringstream text;
    for (const ExtractedScript& s : scripts) {
        text << "--- obj " << s.object << " ---\n" << s.code;
        if (!s.code.empty() && s.code.back() != '\n') text << "\n";
    }
    if (scripts.empty()) text << "no JavaScript found\n";
    emit(text.str(), args.out);
    return 0;
}

struct FeaturesArgs {
    std::vector<std::string> files;
    std::string mode = "strict";
    std::string spec = "content";
    int label = 0;
    bool has_label = false;
    std::string out;
};

int cmd_features(const FeaturesArgs& args) {
    FeatureSpec spec = spec_from_string(args.spec);
    std::vector<FeatureVector> vectors;
    std::vector<std::optional<int>> labels;
    for (const std::string& file : args.files) {
        Document doc = parse_document(read_file(file), mode_from_string(args.mode));
        vectors.push_back(vectorize(doc, spec));
        labels.push_back(args.has_label ? std::optional<int>(args.label) : std::nullopt);
    }
    std::ostringstream csv;
    write_features_csv(csv, spec, vectors, labels);
    emit(csv.str(), args.out);
    return 0;
}

struct TrainArgs {
    std::vector<std::string> csvs;
    std::string family = "adaboost";
    std::string spec = "content";
    std::string out = "model.json";
    int rounds = 50;
    double smoothing = 1.0;
    std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& args) {
    FeatureSpec spec = spec_from_string(args.spec);
    std::vector<FeatureVector> vectors;
    std::vector<int> labels;
    for (const std::string& path : args.csvs) {
        std::ifstream in(path);
        if (!in) throw Error(Errc::IoError, "cannot read " + path);
        Dataset part = load_dataset_csv(in, spec);
        for (Eigen::Index i = 0; i < part.size(); ++i) {
            vectors.push_back({part.X.row(i).transpose(), part.spec_id});
            labels.push_back(part.y[i]);
        }
    }
    Dataset data = make_dataset(vectors, labels);
    Model model = args.family == "naive-bayes" || args.family == "naive_bayes"
                      ? train_naive_bayes(data, args.smoothing)
                      : train_adaboost(data, args.rounds, args.seed);
    {
        std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        model.meta.timestamp = stamp;
    }
    save_model(model, args.out);
    std::cout << "trained " << args.family << " on " << data.size() << " rows -> " << args.out
              << "\n";
    if (model.is_boosted()) {
        const auto& boosted = std::get<BoostedModel>(model.impl);
        std::cout << "rounds accepted: " << boosted.stumps.size() << "\n";
        if (boosted.stumps.empty())
            std::cout << "warning: no stump beat chance; constant fallback model\n";
    }
    return 0;
}

struct ClassifyArgs {
    std::string file;
    std::string model_path;
    std::string mode = "strict";
    std::string spec = "content";
    bool deep = false;
};

int cmd_classify(const ClassifyArgs& args) {
    Model model = load_model(args.model_path);
    FeatureSpec spec = spec_from_string(args.spec);
    if (spec.id() != model.spec_id)
        throw Error(Errc::SpecMismatch,
                    "model was trained under a different feature spec; pass the matching --spec");
    std::string bytes = read_file(args.file);
    Document doc = parse_document(bytes, mode_from_string(args.mode));
    FeatureVector fv = vectorize(doc, spec);
    int label = predict(model, fv);
    double margin = score(model, fv.values);
    if (args.deep && label == -1)
        label = classify_bytes(model, spec, true, bytes);
    std::cout << (label == +1 ? "malicious" : "benign") << " score=" << margin << "\n";
    return 0;
}

struct InjectArgs {
    std::string technique;
    std::string payload_kind;
    std::string payload_path;
    std::string trigger;
    std::string in_path;
    std::string out_path;
};

Payload load_payload(const InjectArgs& args) {
    if (args.payload_kind == "names") {
        std::ifstream in(args.payload_path);
        if (!in) throw Error(Errc::IoError, "cannot read " + args.payload_path);
        std::vector<std::pair<std::string, int>> names;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string name;
            int count = 1;
            ls >> name;
            if (name.empty()) continue;
            if (name.front() == '/') name.erase(name.begin());
            ls >> count;
            names.emplace_back(name, count);
        }
        return Payload::benign_names(std::move(names));
    }

    std::string data = read_file(args.payload_path);
    Payload payload;
    if (args.payload_kind == "js")
        payload = Payload::js(std::move(data));
    else if (args.payload_kind == "pdf")
        payload = Payload::pdf_file(std::move(data));
    else if (args.payload_kind == "exe")
        payload = Payload::exe(std::move(data));
    else
        throw Error(Errc::BadConfig, "payload kind must be js, pdf, exe or names");

    if (args.trigger == "open-action")
        payload.trigger = PayloadTrigger::OpenAction;
    else if (args.trigger == "names-js")
        payload.trigger = PayloadTrigger::NamesJavaScript;
    else if (args.trigger == "embedded-only")
        payload.trigger = PayloadTrigger::EmbeddedFileOnly;
    else if (!args.trigger.empty())
        throw Error(Errc::BadConfig, "trigger must be open-action, names-js or embedded-only");
    return payload;
}

int cmd_inject(const InjectArgs& args) {
    Payload payload = load_payload(args);
    std::string target = read_file(args.in_path);
    InjectionResult result;
    if (args.technique == "after-xref")
        result = inject_after_xref(target, payload);
    else if (args.technique == "incremental")
        result = inject_incremental(target, payload);
    else if (args.technique == "graph-merge")
        result = inject_graph_merge(target, payload);
    else
        throw Error(Errc::BadConfig, "technique must be after-xref, incremental or graph-merge");
    write_file(args.out_path, result.bytes);
    std::cout << "injected " << result.new_object_numbers.size() << " object(s):";
    for (std::int64_t n : result.new_object_numbers) std::cout << " " << n;
    std::cout << "\n";
    return 0;
}

struct GenCorpusArgs {
    std::string out_dir = "corpus";
    std::uint64_t seed = 7;
    int n_benign = 200;
    int n_malicious = 200;
    std::string config_path;
};

int cmd_gen_corpus(const GenCorpusArgs& args) {
    CorpusConfig config;
    if (!args.config_path.empty()) {
        nlohmann::json j = nlohmann::json::parse(read_file(args.config_path));
        nlohmann::json wrapper;
        wrapper["corpus"] = j;
        config = experiment_config_from_json(wrapper).corpus;
    } else {
        config.seed = args.seed;
        config.n_benign = args.n_benign;
        config.n_malicious = args.n_malicious;
    }
    auto [benign, malicious] = generate_corpus(config);

    fs::create_directories(fs::path(args.out_dir) / "benign");
    fs::create_directories(fs::path(args.out_dir) / "malicious");
    nlohmann::json manifest;
    manifest["seed"] = config.seed;
    manifest["files"] = nlohmann::json::array();
    auto dump = [&](const std::vector<GeneratedFile>& files, const char* sub) {
        for (const GeneratedFile& f : files) {
            fs::path path = fs::path(args.out_dir) / sub / f.name;
            write_file(path.string(), f.bytes);
            manifest["files"].push_back({{"path", (fs::path(sub) / f.name).string()},
                                         {"label", f.label},
                                         {"family", f.family}});
        }
    };
    dump(benign, "benign");
    dump(malicious, "malicious");
    write_file((fs::path(args.out_dir) / "manifest.json").string(), dump_json(manifest));
    std::cout << "wrote " << benign.size() << " benign + " << malicious.size()
              << " malicious files under " << args.out_dir << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string config_path;
    std::string out;
    bool quiet = false;
};

int cmd_evaluate(const EvaluateArgs& args) {
    ExperimentConfig config = args.config_path.empty()
                                  ? default_experiment_config()
                                  : experiment_config_from_json(
                                        nlohmann::json::parse(read_file(args.config_path)));
    ExperimentReport report = run_experiment(config);
    if (!args.out.empty()) write_file(args.out, dump_json(report.to_json()));
    if (!args.quiet) {
        std::cout << report.text_table();
        if (args.out.empty()) std::cout << dump_json(report.to_json());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdfscout - PDF forensic analysis, feature extraction and evasion testbed"};
    app.require_subcommand(1);

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "keyword/tree/code risk report for one file");
    scan->add_option("file", scan_args.file)->required();
    scan->add_option("--mode", scan_args.mode)->check(CLI::IsMember({"strict", "scavenge"}));
    scan->add_flag("--json", scan_args.json);
    scan->add_option("--out", scan_args.out);

    TreeArgs tree_args;
    auto* tree = app.add_subcommand("tree", "object tree with orphans and suspicious marks");
    tree->add_option("file", tree_args.file)->required();
    tree->add_option("--mode", tree_args.mode)->check(CLI::IsMember({"strict", "scavenge"}));
    tree->add_flag("--json", tree_args.json);
    tree->add_option("--out", tree_args.out);

    ExtractJsArgs js_args;
    auto* extract = app.add_subcommand("extract-js", "pull embedded JavaScript");
    extract->add_option("file", js_args.file)->required();
    extract->add_option("--mode", js_args.mode)->check(CLI::IsMember({"strict", "scavenge"}));
    extract->add_flag("--json", js_args.json);
    extract->add_option("--out", js_args.out);

    FeaturesArgs feature_args;
    auto* features = app.add_subcommand("features", "dump feature vectors as CSV");
    features->add_option("files", feature_args.files)->required();
    features->add_option("--mode", feature_args.mode)
        ->check(CLI::IsMember({"strict", "scavenge"}));
    features->add_option("--spec", feature_args.spec)
        ->check(CLI::IsMember({"content", "structural"}));
    auto* label_opt = features->add_option("--label", feature_args.label,
                                           "label for every listed file (-1 or 1)");
    features->add_option("--out", feature_args.out);

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "fit a classifier from feature CSVs");
    train->add_option("--csv", train_args.csvs)->required();
    train->add_option("--family", train_args.family)
        ->check(CLI::IsMember({"adaboost", "naive-bayes", "naive_bayes"}));
    train->add_option("--spec", train_args.spec)->check(CLI::IsMember({"content", "structural"}));
    train->add_option("--out", train_args.out);
    train->add_option("--rounds", train_args.rounds);
    train->add_option("--smoothing", train_args.smoothing);
    train->add_option("--seed", train_args.seed);

    ClassifyArgs classify_args;
    auto* classify = app.add_subcommand("classify", "label one file with a trained model");
    classify->add_option("file", classify_args.file)->required();
    classify->add_option("--model", classify_args.model_path)->required();
    classify->add_option("--mode", classify_args.mode)
        ->check(CLI::IsMember({"strict", "scavenge"}));
    classify->add_option("--spec", classify_args.spec)
        ->check(CLI::IsMember({"content", "structural"}));
    classify->add_flag("--deep", classify_args.deep, "also classify embedded PDFs");

    InjectArgs inject_args;
    auto* inject = app.add_subcommand("inject", "content injection (mimicry testbed)");
    inject->add_option("--technique", inject_args.technique)
        ->required()
        ->check(CLI::IsMember({"after-xref", "incremental", "graph-merge"}));
    inject->add_option("--payload-kind", inject_args.payload_kind)
        ->required()
        ->check(CLI::IsMember({"js", "pdf", "exe", "names"}));
    inject->add_option("--payload", inject_args.payload_path)->required();
    inject->add_option("--trigger", inject_args.trigger)
        ->check(CLI::IsMember({"open-action", "names-js", "embedded-only"}));
    inject->add_option("in", inject_args.in_path)->required();
    inject->add_option("out", inject_args.out_path)->required();

    GenCorpusArgs corpus_args;
    auto* gen = app.add_subcommand("gen-corpus", "deterministic synthetic corpus");
    gen->add_option("--out", corpus_args.out_dir);
    gen->add_option("--seed", corpus_args.seed);
    gen->add_option("--n-benign", corpus_args.n_benign);
    gen->add_option("--n-malicious", corpus_args.n_malicious);
    gen->add_option("--config", corpus_args.config_path);

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "train/attack/evaluate experiment");
    evaluate->add_option("--config", eval_args.config_path);
    evaluate->add_option("--out", eval_args.out);
    evaluate->add_flag("--quiet", eval_args.quiet);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    feature_args.has_label = label_opt->count() > 0;

    try {
        if (scan->parsed()) return cmd_scan(scan_args);
        if (tree->parsed()) return cmd_tree(tree_args);
        if (extract->parsed()) return cmd_extract_js(js_args);
        if (features->parsed()) return cmd_features(feature_args);
        if (train->parsed()) return cmd_train(train_args);
        if (classify->parsed()) return cmd_classify(classify_args);
        if (inject->parsed()) return cmd_inject(inject_args);
        if (gen->parsed()) return cmd_gen_corpus(corpus_args);
        if (evaluate->parsed()) return cmd_evaluate(eval_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
