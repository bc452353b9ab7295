#include "pdfscout/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "pdfscout/filters.hpp"
#include "pdfscout/parser.hpp"
#include "pdfscout/writer.hpp"

namespace pdfscout {

namespace {

// Raw-draw helpers over mt19937_64 keep the byte streams identical across
// standard library implementations (distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {  // inclusive
        if (hi <= lo) return lo;
        return lo + std::int64_t(next() % std::uint64_t(hi - lo + 1));
    }

    double unit() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }

    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[std::size_t(uniform(0, std::int64_t(items.size()) - 1))];
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t file_seed(std::uint64_t corpus_seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t x = corpus_seed * 6364136223846793005ULL + stream * 1442695040888963407ULL +
                      index * 2862933555777941757ULL + 3037000493ULL;
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
}

const std::vector<std::string>& word_bank() {
    static const std::vector<std::string> words = {
        "annual",   "report",   "section",  "budget",   "review",   "market",  "notes",
        "policy",   "update",   "draft",    "final",    "meeting",  "agenda",  "summary",
        "table",    "figure",   "appendix", "revenue",  "forecast", "client",  "invoice",
        "contract", "delivery", "schedule", "project",  "status",   "quarter", "margin",
        "analysis", "overview", "outline",  "proposal", "chapter",  "results", "methods"};
    return words;
}

std::string make_text(Rng& rng, int words) {
    std::string out;
    for (int i = 0; i < words; ++i) {
        if (i) out.push_back(' ');
        out += rng.pick(word_bank());
    }
    return out;
}

std::string make_content_stream_text(Rng& rng, int words) {
    std::string text;
    text += "BT\n/F1 11 Tf\n72 720 Td\n";
    int remaining = words;
    while (remaining > 0) {
        int line = int(std::min<std::int64_t>(remaining, rng.uniform(6, 12)));
        text += "(" + make_text(rng, line) + ") Tj\n0 -14 Td\n";
        remaining -= line;
    }
    text += "ET\n";
    return text;
}

// Assembles a single-revision document; numbers are handed out sequentially.
struct DocBuilder {
    Document doc;
    Revision rev;

    explicit DocBuilder(std::string version) { doc.header_version = std::move(version); }

    std::int64_t add(PdfValue value) {
        IndirectObject obj;
        obj.number = std::int64_t(rev.objects.size()) + 1;
        obj.value = std::move(value);
        rev.objects.push_back(std::move(obj));
        return rev.objects.back().number;
    }

    PdfValue& at(std::int64_t number) { return rev.objects[std::size_t(number - 1)].value; }

    std::string finish(PdfDict trailer_extras = {}) {
        rev.trailer.dict.set("Root", PdfValue::ref(1));
        for (auto& [k, v] : trailer_extras.entries) rev.trailer.dict.set(k, std::move(v));
        doc.revisions.push_back(std::move(rev));
        return serialize(doc);
    }
};

std::int64_t add_flate_text_stream(DocBuilder& b, const std::string& text) {
    PdfStream stream;
    std::string packed = flate_encode(text);
    stream.dict.set("Length", PdfValue::integer(std::int64_t(packed.size())));
    stream.dict.set("Filter", PdfValue::name("FlateDecode"));
    stream.raw = std::move(packed);
    return b.add(PdfValue::stream(std::move(stream)));
}

PdfValue make_js_action(const std::string& code) {
    PdfDict action;
    action.set("Type", PdfValue::name("Action"));
    action.set("S", PdfValue::name("JavaScript"));
    action.set("JS", PdfValue::string(code));
    return PdfValue::dict(std::move(action));
}

PdfValue make_embedded_names(const std::string& entry, std::int64_t filespec) {
    PdfDict limb;
    limb.set("Names", PdfValue::array({PdfValue::string(entry), PdfValue::ref(filespec)}));
    PdfDict names;
    names.set("EmbeddedFiles", PdfValue::dict(std::move(limb)));
    return PdfValue::dict(std::move(names));
}

const std::vector<std::string>& benign_js_bank() {
    static const std::vector<std::string> snippets = {
        "this.print({bUI: false, bSilent: true});",
        "app.alert(\"Thank you for reading this document.\");",
        "var page = this.pageNum; this.zoom = 100;",
        "this.gotoNamedDest(\"summary\");"};
    return snippets;
}

std::string malicious_js_code(Rng& rng) {
    int groups = int(rng.uniform(11, 20));  // 66..120 chars of %u escapes
    std::string sled;
    for (int i = 0; i < groups; ++i) sled += "%u9090";
    std::string code = "var s = unescape('" + sled + "');\n";
    code += "var b = '';\nwhile (b.length < 0x40000) { b = b + s; }\n";
    code += "eval(s);\n";
    return code;
}

std::string make_exe_bytes(Rng& rng) {
    std::string bytes = "MZ";
    int len = int(rng.uniform(256, 1024));
    for (int i = 0; i < len; ++i) bytes.push_back(char(rng.uniform(0, 255)));
    return bytes;
}

GeneratedFile build_benign(std::uint64_t seed, std::size_t index, const BenignProfile& profile) {
    Rng rng(file_seed(seed, 1, index));
    static const std::vector<std::string> versions = {"1.4", "1.5", "1.6", "1.7"};
    DocBuilder b(rng.pick(versions));

    int pages = int(rng.uniform(profile.min_pages, profile.max_pages));

    std::int64_t catalog = b.add(PdfValue::dict({}));  // filled below
    PdfDict pages_dict;
    pages_dict.set("Type", PdfValue::name("Pages"));
    std::int64_t pages_obj = b.add(PdfValue::dict(std::move(pages_dict)));

    PdfDict font;
    font.set("Type", PdfValue::name("Font"));
    font.set("Subtype", PdfValue::name("Type1"));
    font.set("BaseFont", PdfValue::name("Helvetica"));
    std::int64_t font_obj = b.add(PdfValue::dict(std::move(font)));

    PdfDict info;
    info.set("Producer", PdfValue::string("ReportWriter 2.1"));
    info.set("Title", PdfValue::string(make_text(rng, int(rng.uniform(2, 5)))));
    std::int64_t info_obj = b.add(PdfValue::dict(std::move(info)));

    PdfArray kids;
    for (int p = 0; p < pages; ++p) {
        int words = int(rng.uniform(profile.min_words_per_page, profile.max_words_per_page));
        std::int64_t content = add_flate_text_stream(b, make_content_stream_text(rng, words));

        PdfDict fonts;
        fonts.set("F1", PdfValue::ref(font_obj));
        PdfDict resources;
        resources.set("Font", PdfValue::dict(std::move(fonts)));
        PdfDict page;
        page.set("Type", PdfValue::name("Page"));
        page.set("Parent", PdfValue::ref(pages_obj));
        page.set("MediaBox", PdfValue::array({PdfValue::integer(0), PdfValue::integer(0),
                                              PdfValue::integer(612), PdfValue::integer(792)}));
        page.set("Resources", PdfValue::dict(std::move(resources)));
        page.set("Contents", PdfValue::ref(content));
        kids.push_back(PdfValue::ref(b.add(PdfValue::dict(std::move(page)))));
    }

    PdfDict catalog_dict;
    catalog_dict.set("Type", PdfValue::name("Catalog"));
    catalog_dict.set("Pages", PdfValue::ref(pages_obj));

    if (rng.chance(profile.js_probability)) {
        std::int64_t action = b.add(make_js_action(rng.pick(benign_js_bank())));
        catalog_dict.set("OpenAction", PdfValue::ref(action));
    }
    if (rng.chance(profile.attachment_probability)) {
        std::string note = "Readme\n" + make_text(rng, 40) + "\n";
        std::string packed = flate_encode(note);
        PdfStream stream;
        stream.dict.set("Type", PdfValue::name("EmbeddedFile"));
        stream.dict.set("Filter", PdfValue::name("FlateDecode"));
        stream.dict.set("Length", PdfValue::integer(std::int64_t(packed.size())));
        stream.raw = std::move(packed);
        std::int64_t file_obj = b.add(PdfValue::stream(std::move(stream)));
        PdfDict ef;
        ef.set("F", PdfValue::ref(file_obj));
        PdfDict filespec;
        filespec.set("Type", PdfValue::name("Filespec"));
        filespec.set("F", PdfValue::string("readme.txt"));
        filespec.set("EF", PdfValue::dict(std::move(ef)));
        std::int64_t spec_obj = b.add(PdfValue::dict(std::move(filespec)));
        catalog_dict.set("Names", make_embedded_names("readme.txt", spec_obj));
    }

    PdfDict& pages_ref = *b.at(pages_obj).as_dict();
    pages_ref.set("Kids", PdfValue::array(std::move(kids)));
    pages_ref.set("Count", PdfValue::integer(pages));
    b.at(catalog) = PdfValue::dict(std::move(catalog_dict));

    PdfDict trailer_extras;
    trailer_extras.set("Info", PdfValue::ref(info_obj));

    GeneratedFile out;
    out.name = "benign_" + std::to_string(index) + ".pdf";
    out.bytes = b.finish(std::move(trailer_extras));
    out.label = -1;
    out.family = "benign";
    return out;
}

enum class MaliciousFamily { LaunchExe, JsEvalUnescape, EmbeddedFile };

MaliciousFamily pick_family(Rng& rng, const MaliciousProfile& profile) {
    double total = profile.launch_weight + profile.js_weight + profile.embedded_weight;
    double roll = rng.unit() * (total > 0 ? total : 1.0);
    if (roll < profile.launch_weight) return MaliciousFamily::LaunchExe;
    if (roll < profile.launch_weight + profile.js_weight) return MaliciousFamily::JsEvalUnescape;
    return MaliciousFamily::EmbeddedFile;
}

// The launch action shape seen in the wild: cmd.exe driving an inert
// script-drop one-liner.
PdfValue make_launch_action() {
    PdfDict win;
    win.set("F", PdfValue::string("cmd.exe"));
    win.set("P", PdfValue::string(
                     "/c echo Dim BinaryStream > demo.vbs && echo Set BinaryStream = "
                     "CreateObject(\"Demo.Stream\") >> demo.vbs"));
    PdfDict action;
    action.set("Type", PdfValue::name("Action"));
    action.set("S", PdfValue::name("Launch"));
    action.set("Win", PdfValue::dict(std::move(win)));
    return PdfValue::dict(std::move(action));
}

GeneratedFile build_malicious(std::uint64_t seed, std::size_t index,
                              const MaliciousProfile& profile) {
    Rng rng(file_seed(seed, 2, index));
    DocBuilder b("1.4");

    MaliciousFamily family = pick_family(rng, profile);
    bool doc_looking = rng.chance(profile.doc_looking_probability);
    bool with_info = rng.chance(profile.info_probability);

    std::int64_t catalog = b.add(PdfValue::dict({}));
    PdfDict pages_dict;
    pages_dict.set("Type", PdfValue::name("Pages"));
    std::int64_t pages_obj = b.add(PdfValue::dict(std::move(pages_dict)));

    PdfDict page;
    page.set("Type", PdfValue::name("Page"));
    page.set("Parent", PdfValue::ref(pages_obj));
    page.set("MediaBox", PdfValue::array({PdfValue::integer(0), PdfValue::integer(0),
                                          PdfValue::integer(612), PdfValue::integer(792)}));
    if (doc_looking) {
        PdfDict font;
        font.set("Type", PdfValue::name("Font"));
        font.set("Subtype", PdfValue::name("Type1"));
        font.set("BaseFont", PdfValue::name("Helvetica"));
        std::int64_t font_obj = b.add(PdfValue::dict(std::move(font)));
        std::int64_t content =
            add_flate_text_stream(b, make_content_stream_text(rng, int(rng.uniform(8, 30))));
        PdfDict fonts;
        fonts.set("F1", PdfValue::ref(font_obj));
        PdfDict resources;
        resources.set("Font", PdfValue::dict(std::move(fonts)));
        page.set("Resources", PdfValue::dict(std::move(resources)));
        page.set("Contents", PdfValue::ref(content));
    }
    std::int64_t page_obj = b.add(PdfValue::dict(std::move(page)));

    PdfDict& pages_ref = *b.at(pages_obj).as_dict();
    pages_ref.set("Kids", PdfValue::array({PdfValue::ref(page_obj)}));
    pages_ref.set("Count", PdfValue::integer(1));

    PdfDict catalog_dict;
    catalog_dict.set("Type", PdfValue::name("Catalog"));
    catalog_dict.set("Pages", PdfValue::ref(pages_obj));

    std::string family_name;
    switch (family) {
        case MaliciousFamily::LaunchExe: {
            std::int64_t action = b.add(make_launch_action());
            catalog_dict.set("OpenAction", PdfValue::ref(action));
            family_name = "launch-exe";
            break;
        }
        case MaliciousFamily::JsEvalUnescape: {
            std::string code = malicious_js_code(rng);
            std::int64_t action;
            if (rng.chance(profile.js_stream_probability)) {
                std::int64_t code_obj = add_flate_text_stream(b, code);
                PdfDict dict;
                dict.set("Type", PdfValue::name("Action"));
                dict.set("S", PdfValue::name("JavaScript"));
                dict.set("JS", PdfValue::ref(code_obj));
                action = b.add(PdfValue::dict(std::move(dict)));
            } else {
                action = b.add(make_js_action(code));
            }
            catalog_dict.set("OpenAction", PdfValue::ref(action));
            family_name = "js-eval-unescape";
            break;
        }
        case MaliciousFamily::EmbeddedFile: {
            std::string exe = make_exe_bytes(rng);
            std::string packed = flate_encode(exe);
            PdfStream stream;
            stream.dict.set("Type", PdfValue::name("EmbeddedFile"));
            stream.dict.set("Filter", PdfValue::name("FlateDecode"));
            stream.dict.set("Length", PdfValue::integer(std::int64_t(packed.size())));
            stream.raw = std::move(packed);
            std::int64_t file_obj = b.add(PdfValue::stream(std::move(stream)));
            PdfDict ef;
            ef.set("F", PdfValue::ref(file_obj));
            PdfDict filespec;
            filespec.set("Type", PdfValue::name("Filespec"));
            filespec.set("F", PdfValue::string("update.exe"));
            filespec.set("EF", PdfValue::dict(std::move(ef)));
            std::int64_t spec_obj = b.add(PdfValue::dict(std::move(filespec)));
            catalog_dict.set("Names", make_embedded_names("update.exe", spec_obj));
            family_name = "embedded-file";
            break;
        }
    }

    b.at(catalog) = PdfValue::dict(std::move(catalog_dict));

    PdfDict trailer_extras;
    if (with_info) {
        PdfDict info;
        info.set("Producer", PdfValue::string("ReportWriter 2.1"));
        info.set("Title", PdfValue::string(make_text(rng, int(rng.uniform(2, 4)))));
        trailer_extras.set("Info", PdfValue::ref(b.add(PdfValue::dict(std::move(info)))));
    }

    GeneratedFile out;
    out.name = "malicious_" + std::to_string(index) + ".pdf";
    out.bytes = b.finish(std::move(trailer_extras));
    out.label = +1;
    out.family = family_name;
    return out;
}

}  // namespace

std::pair<std::vector<GeneratedFile>, std::vector<GeneratedFile>> generate_corpus(
    const CorpusConfig& config) {
    if (config.n_benign < 1 || config.n_malicious < 1)
        throw Error(Errc::BadConfig, "corpus counts must be >= 1");
    std::vector<GeneratedFile> benign;
    benign.reserve(std::size_t(config.n_benign));
    for (int i = 0; i < config.n_benign; ++i)
        benign.push_back(build_benign(config.seed, std::size_t(i), config.benign));
    std::vector<GeneratedFile> malicious;
    malicious.reserve(std::size_t(config.n_malicious));
    for (int i = 0; i < config.n_malicious; ++i)
        malicious.push_back(build_malicious(config.seed, std::size_t(i), config.malicious));
    return {std::move(benign), std::move(malicious)};
}

std::string attack_js_code() {
    // One routine reused across every js-embedding attack file.
    std::string sled;
    for (int i = 0; i < 16; ++i) sled += "%u9090";
    return "var s = unescape('" + sled +
           "');\nvar b = '';\nwhile (b.length < 0x40000) { b = b + s; }\neval(s);\n";
}

ExperimentConfig default_experiment_config() {
    ExperimentConfig config;
    config.corpus = CorpusConfig{};
    config.train_fraction = 0.5;
    config.split_seed = 99;
    config.detectors = {
        {"structural_adaboost", "adaboost", "structural", false, 50, 1.0},
        {"content_adaboost", "adaboost", "content", false, 50, 1.0},
        {"content_bayes", "naive_bayes", "content", false, 50, 1.0},
        {"deep_content_adaboost", "adaboost", "content", true, 50, 1.0},
    };
    config.attacks = {
        {"js-embedding", InjectionTechnique::IncrementalUpdate, 50},
        {"pdf-embedding", InjectionTechnique::GraphMerge, 50},
        {"exe-embedding", InjectionTechnique::GraphMerge, 50},
    };
    return config;
}

namespace {

InjectionTechnique technique_from_string(const std::string& s) {
    if (s == "after-xref") return InjectionTechnique::AfterXref;
    if (s == "incremental") return InjectionTechnique::IncrementalUpdate;
    if (s == "graph-merge") return InjectionTechnique::GraphMerge;
    throw Error(Errc::BadConfig, "unknown technique " + s);
}

}  // namespace

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig config = default_experiment_config();
    if (j.contains("corpus")) {
        const auto& c = j.at("corpus");
        config.corpus.seed = c.value("seed", config.corpus.seed);
        config.corpus.n_benign = c.value("n_benign", config.corpus.n_benign);
        config.corpus.n_malicious = c.value("n_malicious", config.corpus.n_malicious);
        if (c.contains("benign_profile")) {
            const auto& p = c.at("benign_profile");
            BenignProfile& b = config.corpus.benign;
            b.min_pages = p.value("min_pages", b.min_pages);
            b.max_pages = p.value("max_pages", b.max_pages);
            b.min_words_per_page = p.value("min_words_per_page", b.min_words_per_page);
            b.max_words_per_page = p.value("max_words_per_page", b.max_words_per_page);
            b.js_probability = p.value("js_probability", b.js_probability);
            b.attachment_probability = p.value("attachment_probability", b.attachment_probability);
        }
        if (c.contains("malicious_profile")) {
            const auto& p = c.at("malicious_profile");
            MaliciousProfile& m = config.corpus.malicious;
            m.launch_weight = p.value("launch_weight", m.launch_weight);
            m.js_weight = p.value("js_weight", m.js_weight);
            m.embedded_weight = p.value("embedded_weight", m.embedded_weight);
            m.doc_looking_probability = p.value("doc_looking_probability", m.doc_looking_probability);
            m.js_stream_probability = p.value("js_stream_probability", m.js_stream_probability);
            m.info_probability = p.value("info_probability", m.info_probability);
        }
    }
    config.train_fraction = j.value("train_fraction", config.train_fraction);
    config.split_seed = j.value("split_seed", config.split_seed);
    if (j.contains("detectors")) {
        config.detectors.clear();
        for (const auto& d : j.at("detectors")) {
            DetectorConfig dc;
            dc.id = d.at("id").get<std::string>();
            dc.family = d.value("family", dc.family);
            dc.features = d.value("features", dc.features);
            dc.deep_extraction = d.value("deep_extraction", dc.deep_extraction);
            dc.rounds = d.value("rounds", dc.rounds);
            dc.smoothing = d.value("smoothing", dc.smoothing);
            config.detectors.push_back(std::move(dc));
        }
    }
    if (j.contains("attacks")) {
        config.attacks.clear();
        for (const auto& a : j.at("attacks")) {
            AttackConfig ac;
            ac.family = a.at("family").get<std::string>();
            ac.technique = technique_from_string(a.value("technique", std::string("incremental")));
            ac.count = a.value("count", ac.count);
            config.attacks.push_back(std::move(ac));
        }
    }
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw Error(Errc::BadConfig, "train_fraction must lie in (0,1)");
    return config;
}

int classify_bytes(const Model& model, const FeatureSpec& spec, bool deep_extraction,
                   std::string_view bytes) {
    Document doc;
    try {
        doc = parse_document(bytes, ParseMode::Strict);
    } catch (const Error&) {
        return +1;  // unparseable files go to the analyst, not past them
    }
    if (predict(model, vectorize(doc, spec)) == +1) return +1;
    if (!deep_extraction) return -1;

    for (const EmbeddedFile& attachment : extract_embedded_files(doc)) {
        bool looks_pdf = attachment.bytes.size() >= 5 &&
                         attachment.bytes.substr(0, std::min<std::size_t>(
                                                        attachment.bytes.size(), kHeaderWindow))
                                 .find("%PDF-") != std::string::npos;
        if (!looks_pdf) continue;
        try {
            Document inner = parse_document(attachment.bytes, ParseMode::Strict,
                                            ParseOptions{.scavenge_fallback = true});
            if (predict(model, vectorize(inner, spec)) == +1) return +1;
        } catch (const Error&) {
            return +1;  // attachment claims to be a PDF but will not parse
        }
    }
    return -1;
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[std::size_t(rng.uniform(0, std::int64_t(i) - 1))]);
    return order;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    auto [benign, malicious] = generate_corpus(config.corpus);

    ExperimentReport report;
    report.corpus_seed = config.corpus.seed;
    report.split_seed = config.split_seed;
    report.n_benign = config.corpus.n_benign;
    report.n_malicious = config.corpus.n_malicious;

    Rng split_rng(config.split_seed);
    auto benign_order = shuffled_indices(benign.size(), split_rng);
    auto malicious_order = shuffled_indices(malicious.size(), split_rng);
    std::size_t train_b = std::size_t(config.train_fraction * double(benign.size()));
    std::size_t train_m = std::size_t(config.train_fraction * double(malicious.size()));
    train_b = std::clamp<std::size_t>(train_b, 1, benign.size() - 1);
    train_m = std::clamp<std::size_t>(train_m, 1, malicious.size() - 1);

    std::vector<const GeneratedFile*> train_files, holdout_benign, holdout_malicious;
    for (std::size_t i = 0; i < benign_order.size(); ++i)
        (i < train_b ? train_files : holdout_benign).push_back(&benign[benign_order[i]]);
    std::vector<const GeneratedFile*> train_malicious_files;
    for (std::size_t i = 0; i < malicious_order.size(); ++i)
        (i < train_m ? train_malicious_files : holdout_malicious)
            .push_back(&malicious[malicious_order[i]]);

    report.train_benign = int(train_b);
    report.train_malicious = int(train_m);
    report.holdout_benign = int(holdout_benign.size());
    report.holdout_malicious = int(holdout_malicious.size());

    // Attack files, built from held-out benign hosts only.
    std::map<std::string, std::vector<std::string>> attack_files;
    for (const AttackConfig& attack : config.attacks) {
        if (holdout_benign.empty()) break;
        std::vector<std::string>& files = attack_files[attack.family];
        for (int k = 0; k < attack.count; ++k) {
            const GeneratedFile* host = holdout_benign[std::size_t(k) % holdout_benign.size()];
            Payload payload;
            if (attack.family == "js-embedding") {
                payload = Payload::js(attack_js_code());
            } else if (attack.family == "pdf-embedding") {
                GeneratedFile inner = build_malicious(config.corpus.seed ^ 0x9e3779b97f4a7c15ULL,
                                                      std::size_t(k), config.corpus.malicious);
                payload = Payload::pdf_file(inner.bytes);
            } else if (attack.family == "exe-embedding") {
                Rng rng(file_seed(config.corpus.seed, 3, std::size_t(k)));
                payload = Payload::exe(make_exe_bytes(rng));
            } else {
                throw Error(Errc::BadConfig, "unknown attack family " + attack.family);
            }
            files.push_back(make_reverse_mimicry(host->bytes, payload, attack.technique).bytes);
        }
    }

    // Shared per-file parses and per-layout feature vectors.
    FeatureSpec content = default_spec();
    FeatureSpec structural = structural_spec();
    auto featurize = [&](const std::vector<const GeneratedFile*>& files, const FeatureSpec& spec) {
        std::vector<FeatureVector> out;
        out.reserve(files.size());
        for (const GeneratedFile* f : files)
            out.push_back(vectorize(parse_document(f->bytes, ParseMode::Strict), spec));
        return out;
    };

    for (const DetectorConfig& detector : config.detectors) {
        const FeatureSpec& spec = detector.features == "structural" ? structural : content;

        std::vector<const GeneratedFile*> train_all = train_files;
        train_all.insert(train_all.end(), train_malicious_files.begin(),
                         train_malicious_files.end());
        std::vector<FeatureVector> vectors = featurize(train_all, spec);
        std::vector<int> labels;
        labels.reserve(train_all.size());
        for (const GeneratedFile* f : train_all) labels.push_back(f->label);
        Dataset train = make_dataset(vectors, labels);

        Model model = detector.family == "naive_bayes"
                          ? train_naive_bayes(train, detector.smoothing)
                          : train_adaboost(train, detector.rounds, config.corpus.seed);

        auto run_cell = [&](const std::string& family, const std::vector<std::string>& files) {
            CellMetrics cell;
            cell.total = int(files.size());
            for (const std::string& bytes : files)
                if (classify_bytes(model, spec, detector.deep_extraction, bytes) == +1)
                    ++cell.flagged;
            report.cells[detector.id][family] = cell;
        };

        std::vector<std::string> benign_bytes, native_bytes;
        for (const GeneratedFile* f : holdout_benign) benign_bytes.push_back(f->bytes);
        for (const GeneratedFile* f : holdout_malicious) native_bytes.push_back(f->bytes);
        run_cell("benign", benign_bytes);
        run_cell("native-malicious", native_bytes);
        for (const auto& [family, files] : attack_files) run_cell(family, files);
    }

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["corpus_seed"] = corpus_seed;
    j["split_seed"] = split_seed;
    j["n_benign"] = n_benign;
    j["n_malicious"] = n_malicious;
    j["train_benign"] = train_benign;
    j["train_malicious"] = train_malicious;
    j["holdout_benign"] = holdout_benign;
    j["holdout_malicious"] = holdout_malicious;
    nlohmann::json detectors = nlohmann::json::object();
    for (const auto& [id, families] : cells) {
        nlohmann::json rows = nlohmann::json::object();
        for (const auto& [family, cell] : families)
            rows[family] = {{"total", cell.total}, {"flagged", cell.flagged},
                            {"rate", cell.rate()}};
        detectors[id] = std::move(rows);
    }
    j["detectors"] = std::move(detectors);
    j["runtime_seconds"] = runtime_seconds;
    return j;
}

std::string ExperimentReport::text_table() const {
    std::vector<std::string> detector_ids;
    std::set<std::string> family_set;
    for (const auto& [id, families] : cells) {
        detector_ids.push_back(id);
        for (const auto& [family, cell] : families) family_set.insert(family);
    }
    // Fixed row order: benign first, native second, attacks after.
    std::vector<std::string> families;
    if (family_set.count("benign")) families.push_back("benign");
    if (family_set.count("native-malicious")) families.push_back("native-malicious");
    for (const std::string& f : family_set)
        if (f != "benign" && f != "native-malicious") families.push_back(f);

    std::size_t label_width = 24;
    std::ostringstream out;
    out << std::string(label_width, ' ');
    for (const std::string& id : detector_ids) out << " | " << id;
    out << "\n";
    out << std::string(label_width, '-');
    for (const std::string& id : detector_ids) out << "-+-" << std::string(id.size(), '-');
    out << "\n";
    for (const std::string& family : families) {
        std::string label = family == "benign" ? "benign (FPR)" : family;
        label.resize(label_width, ' ');
        out << label;
        for (const std::string& id : detector_ids) {
            char cell[32];
            auto it = cells.at(id).find(family);
            if (it == cells.at(id).end())
                std::snprintf(cell, sizeof(cell), "%*s", int(id.size()), "-");
            else
                std::snprintf(cell, sizeof(cell), "%*.3f", int(id.size()), it->second.rate());
            out << " | " << cell;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace pdfscout
