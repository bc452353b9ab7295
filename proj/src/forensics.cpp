#include "pdfscout/forensics.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "pdfscout/lexer.hpp"
#include "pdfscout/parser.hpp"
#include "pdfscout/sha256.hpp"

namespace pdfscout {

namespace {

void census_value(const PdfValue& value, KeywordCensus& census) {
    if (const auto* name = value.as_name()) {
        ++census.counts[name->text];
    } else if (const auto* arr = value.as_array()) {
        for (const auto& item : *arr) census_value(item, census);
    } else if (const auto* dict = value.as_dict()) {
        for (const auto& [key, v] : dict->entries) {
            ++census.counts[key];
            census_value(v, census);
        }
    } else if (const auto* stream = value.as_stream()) {
        for (const auto& [key, v] : stream->dict.entries) {
            ++census.counts[key];
            census_value(v, census);
        }
    }
}

void census_stream_content(const PdfStream& stream, KeywordCensus& census) {
    if (!stream.decoded) return;
    for (const Token& t : tokenize(*stream.decoded)) {
        if (t.kind == Token::Kind::Name) ++census.counts[normalize_name(t.text).text];
    }
}

// Names appearing anywhere inside one object's own value (references not
// followed), used for the suspicious-keyword marks.
void collect_names(const PdfValue& value, std::set<std::string>& out) {
    if (const auto* name = value.as_name()) {
        out.insert(name->text);
    } else if (const auto* arr = value.as_array()) {
        for (const auto& item : *arr) collect_names(item, out);
    } else if (const auto* dict = value.as_dict()) {
        for (const auto& [key, v] : dict->entries) {
            out.insert(key);
            collect_names(v, out);
        }
    } else if (const auto* stream = value.as_stream()) {
        for (const auto& [key, v] : stream->dict.entries) {
            out.insert(key);
            collect_names(v, out);
        }
    }
}

void collect_edges(std::int64_t parent, const PdfValue& value, const std::string& path,
                   std::vector<TreeEdge>& edges, std::deque<PdfRef>& frontier) {
    if (const auto* ref = value.as_ref()) {
        edges.push_back({parent, ref->number, path});
        frontier.push_back(*ref);
    } else if (const auto* arr = value.as_array()) {
        for (std::size_t i = 0; i < arr->size(); ++i)
            collect_edges(parent, (*arr)[i], path + "[" + std::to_string(i) + "]", edges,
                          frontier);
    } else if (const auto* dict = value.as_dict()) {
        for (const auto& [key, v] : dict->entries)
            collect_edges(parent, v, path + "/" + key, edges, frontier);
    } else if (const auto* stream = value.as_stream()) {
        for (const auto& [key, v] : stream->dict.entries)
            collect_edges(parent, v, path + "/" + key, edges, frontier);
    }
}

bool is_identifier_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '$';
}

bool is_hex_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

constexpr std::size_t kEscapeRunThreshold = 64;

void scan_identifier(std::string_view code, const std::string& id,
                     std::vector<JsIndicatorHit>& hits) {
    std::size_t at = 0;
    while ((at = code.find(id, at)) != std::string_view::npos) {
        bool left_ok = at == 0 || !is_identifier_char(code[at - 1]);
        std::size_t end = at + id.size();
        bool right_ok = end >= code.size() || !is_identifier_char(code[end]);
        if (left_ok && right_ok) hits.push_back({0, id, at, end});
        at = end;
    }
}

void scan_string_concat(std::string_view code, std::vector<JsIndicatorHit>& hits) {
    auto quote_nearby = [&](std::size_t from, int step) {
        int considered = 0;
        std::size_t i = from;
        while (i < code.size() && considered < 2) {
            char c = code[i];
            if (c == ' ' || c == '\t') {
                if (step < 0 && i == 0) break;
                i += step;
                continue;
            }
            if (c == '\'' || c == '"') return true;
            ++considered;
            if (step < 0 && i == 0) break;
            i += step;
        }
        return false;
    };
    for (std::size_t i = 0; i < code.size(); ++i) {
        if (code[i] != '+') continue;
        bool left = i > 0 && quote_nearby(i - 1, -1);
        bool right = i + 1 < code.size() && quote_nearby(i + 1, +1);
        if (left || right) hits.push_back({0, "string-concat", i, i + 1});
    }
}

void scan_escape_runs(std::string_view code, std::vector<JsIndicatorHit>& hits) {
    // Maximal pure hex-digit runs.
    std::size_t i = 0;
    while (i < code.size()) {
        if (!is_hex_char(code[i])) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < code.size() && is_hex_char(code[i])) ++i;
        if (i - begin >= kEscapeRunThreshold)
            hits.push_back({0, "long-hex-string", begin, i});
    }

    // Runs of repeated escape groups.
    auto scan_groups = [&](std::string_view intro, std::size_t digits, const char* indicator) {
        std::size_t at = 0;
        while (at < code.size()) {
            std::size_t begin = code.find(intro, at);
            if (begin == std::string_view::npos) break;
            std::size_t p = begin;
            while (p + intro.size() + digits <= code.size() &&
                   code.compare(p, intro.size(), intro) == 0) {
                bool ok = true;
                for (std::size_t d = 0; d < digits; ++d)
                    if (!is_hex_char(code[p + intro.size() + d])) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
                p += intro.size() + digits;
            }
            if (p > begin && p - begin >= kEscapeRunThreshold)
                hits.push_back({0, indicator, begin, p});
            at = std::max(p, begin + 1);
        }
    };
    scan_groups("\\x", 2, "long-hex-string");
    scan_groups("%u", 4, "unicode-nop-sled");
    scan_groups("\\u", 4, "unicode-nop-sled");
}

}  // namespace

const std::vector<std::string>& js_identifier_indicators() {
    static const std::vector<std::string> ids = {
        "eval",       "unescape",    "replace",     "fromCharCode",
        "setTimeout", "getAnnots",   "util.printf", "this.exportDataObject"};
    return ids;
}

KeywordCensus keyword_scan(const Document& doc, ScanScope scope) {
    KeywordCensus census;
    census.scope = scope;

    for (const Revision& rev : doc.revisions)
        census_value(PdfValue::dict(rev.trailer.dict), census);

    if (doc.parse_mode == ParseMode::Scavenge) {
        // Shadowed duplicates stay visible: hidden copies are themselves a tell.
        for (const Revision& rev : doc.revisions) {
            for (const IndirectObject& obj : rev.objects) {
                census_value(obj.value, census);
                if (scope == ScanScope::IncludeDecodedStreams)
                    if (const auto* s = obj.value.as_stream()) census_stream_content(*s, census);
            }
        }
    } else {
        for (const auto& [number, obj] : effective_objects(doc)) {
            census_value(obj->value, census);
            if (scope == ScanScope::IncludeDecodedStreams)
                if (const auto* s = obj->value.as_stream()) census_stream_content(*s, census);
        }
    }
    return census;
}

ObjectTree build_tree(const Document& doc, const ForensicsConfig& config) {
    const PdfValue* root = find_root_ref(doc);
    if (!root || !root->is_ref())
        throw Error(Errc::NoRoot, "no trailer carries a /Root reference");

    ObjectTree tree;
    tree.root = root->as_ref()->number;

    std::deque<PdfRef> frontier{*root->as_ref()};
    while (!frontier.empty()) {
        PdfRef ref = frontier.front();
        frontier.pop_front();
        if (!tree.reachable.insert(ref.number).second) continue;
        const PdfValue* value = try_resolve(doc, ref);
        if (!value) continue;
        std::deque<PdfRef> found;
        collect_edges(ref.number, *value, "", tree.edges, found);
        for (const PdfRef& r : found)
            if (!tree.reachable.count(r.number)) frontier.push_back(r);
    }

    auto effective = effective_objects(doc);
    for (const auto& [number, obj] : effective) {
        if (!tree.reachable.count(number)) tree.orphans.insert(number);
        std::set<std::string> names;
        collect_names(obj->value, names);
        std::string reason;
        for (const std::string& kw : config.suspicious_keywords) {
            if (names.count(kw)) {
                if (!reason.empty()) reason += ", ";
                reason += "/" + kw;
            }
        }
        if (!reason.empty()) tree.suspicious_nodes.push_back({number, "contains " + reason});
    }
    return tree;
}

namespace {

// First /JS or /JavaScript key holding extractable code inside one value.
const PdfValue* find_script_value(const PdfValue& value) {
    const PdfDict* dict = value.dict_of();
    if (dict) {
        if (const PdfValue* js = dict->find("JS")) return js;
        if (const PdfValue* js = dict->find("JavaScript")) return js;
        for (const auto& [key, v] : dict->entries)
            if (const PdfValue* nested = find_script_value(v)) return nested;
    } else if (const auto* arr = value.as_array()) {
        for (const auto& item : *arr)
            if (const PdfValue* nested = find_script_value(item)) return nested;
    }
    return nullptr;
}

}  // namespace

std::vector<ExtractedScript> extract_javascript(const Document& doc, Diagnostics* diags) {
    std::vector<ExtractedScript> out;
    for (const auto& [number, obj] : effective_objects(doc)) {
        const PdfValue* holder = find_script_value(obj->value);
        if (!holder) continue;
        const PdfValue* code = holder->is_ref() ? resolve_deep(doc, *holder) : holder;
        if (!code) {
            if (diags)
                diag(*diags, obj->byte_offset,
                     "object " + std::to_string(number) + ": script reference does not resolve");
            continue;
        }
        if (const auto* str = code->as_string()) {
            out.push_back({number, str->bytes});
        } else if (const auto* stream = code->as_stream()) {
            if (stream->decoded) {
                out.push_back({number, *stream->decoded});
            } else if (diags) {
                diag(*diags, obj->byte_offset,
                     "object " + std::to_string(number) + ": script stream not decodable");
            }
        }
    }
    return out;
}

std::vector<JsIndicatorHit> scan_js_indicators(std::string_view code,
                                               const ForensicsConfig& config) {
    std::vector<JsIndicatorHit> hits;
    for (const std::string& id : js_identifier_indicators()) scan_identifier(code, id, hits);
    for (const std::string& id : config.extra_js_identifiers) scan_identifier(code, id, hits);
    scan_string_concat(code, hits);
    scan_escape_runs(code, hits);
    std::sort(hits.begin(), hits.end(), [](const JsIndicatorHit& a, const JsIndicatorHit& b) {
        return a.begin != b.begin ? a.begin < b.begin : a.indicator < b.indicator;
    });
    return hits;
}

std::vector<EmbeddedFile> extract_embedded_files(const Document& doc) {
    std::vector<EmbeddedFile> out;
    std::set<std::int64_t> seen;

    auto add_stream = [&](std::int64_t number, const PdfStream& stream, std::string name) {
        if (!seen.insert(number).second) return;
        if (stream.decoded)
            out.push_back({number, std::move(name), *stream.decoded});
        else
            out.push_back({number, std::move(name), stream.raw});
    };

    auto effective = effective_objects(doc);
    for (const auto& [number, obj] : effective) {
        // Filespec route: /EF /F -> file stream, name from /F.
        if (const PdfDict* dict = obj->value.as_dict()) {
            const PdfValue* ef = dict->find("EF");
            if (!ef) continue;
            const PdfValue* ef_dict = resolve_deep(doc, *ef);
            if (!ef_dict || !ef_dict->is_dict()) continue;
            std::string name;
            if (const PdfValue* f = dict->find("F"); f && f->is_string())
                name = f->as_string()->bytes;
            for (const auto& [key, v] : ef_dict->as_dict()->entries) {
                const PdfValue* stream = resolve_deep(doc, v);
                if (stream && stream->is_stream()) {
                    std::int64_t target = v.is_ref() ? v.as_ref()->number : number;
                    add_stream(target, *stream->as_stream(), name);
                }
            }
        }
    }
    for (const auto& [number, obj] : effective) {
        const PdfStream* stream = obj->value.as_stream();
        if (!stream) continue;
        const PdfValue* type = stream->dict.find("Type");
        if (type && type->is_name() && type->as_name()->text == "EmbeddedFile")
            add_stream(number, *stream, "");
    }
    std::sort(out.begin(), out.end(),
              [](const EmbeddedFile& a, const EmbeddedFile& b) { return a.object < b.object; });
    return out;
}

nlohmann::json risk_report(const Document& doc, const std::string& file_name,
                           const ForensicsConfig& config) {
    nlohmann::json report;
    report["file"] = file_name;
    report["sha256"] = sha256_hex(doc.source_bytes);
    report["parse_mode"] = parse_mode_name(doc.parse_mode);
    report["header_version"] = doc.header_version;

    KeywordCensus census = keyword_scan(doc);
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [name, n] : census.counts) counts[name] = n;
    report["keyword_counts"] = std::move(counts);

    Diagnostics extra;
    nlohmann::json tree_json;
    try {
        ObjectTree tree = build_tree(doc, config);
        tree_json["root"] = tree.root;
        tree_json["node_count"] = tree.reachable.size();
        tree_json["orphans"] = tree.orphans;
        nlohmann::json suspicious = nlohmann::json::array();
        for (const SuspiciousNode& node : tree.suspicious_nodes)
            suspicious.push_back({{"obj", node.object}, {"reason", node.reason}});
        tree_json["suspicious"] = std::move(suspicious);
    } catch (const Error& e) {
        tree_json["root"] = nullptr;
        tree_json["node_count"] = 0;
        nlohmann::json orphans = nlohmann::json::array();
        for (const auto& [number, obj] : effective_objects(doc)) orphans.push_back(number);
        tree_json["orphans"] = std::move(orphans);
        tree_json["suspicious"] = nlohmann::json::array();
        diag(extra, 0, e.what());
    }
    report["tree"] = std::move(tree_json);

    nlohmann::json scripts = nlohmann::json::array();
    for (const ExtractedScript& script : extract_javascript(doc, &extra)) {
        nlohmann::json hits = nlohmann::json::array();
        for (const JsIndicatorHit& hit : scan_js_indicators(script.code, config))
            hits.push_back(
                {{"indicator", hit.indicator}, {"start", hit.begin}, {"end", hit.end}});
        scripts.push_back({{"obj", script.object}, {"indicator_hits", std::move(hits)}});
    }
    report["javascript"] = std::move(scripts);

    // Objects the reader would see vs objects a byte-scanner would see.
    nlohmann::json differential;
    differential["strict_only"] = nlohmann::json::array();
    differential["scavenge_only"] = nlohmann::json::array();
    try {
        ParseOptions quiet;
        quiet.eager_decode = false;
        Document strict = doc.parse_mode == ParseMode::Strict
                              ? Document{}
                              : parse_document(doc.source_bytes, ParseMode::Strict, quiet);
        const Document& strict_doc = doc.parse_mode == ParseMode::Strict ? doc : strict;
        Document scavenge = doc.parse_mode == ParseMode::Scavenge
                                ? Document{}
                                : parse_document(doc.source_bytes, ParseMode::Scavenge, quiet);
        const Document& scavenge_doc = doc.parse_mode == ParseMode::Scavenge ? doc : scavenge;
        auto strict_objects = effective_objects(strict_doc);
        auto scavenge_objects = effective_objects(scavenge_doc);
        for (const auto& [number, obj] : strict_objects)
            if (!scavenge_objects.count(number)) differential["strict_only"].push_back(number);
        for (const auto& [number, obj] : scavenge_objects)
            if (!strict_objects.count(number)) differential["scavenge_only"].push_back(number);
    } catch (const Error& e) {
        diag(extra, 0, std::string("differential unavailable: ") + e.what());
    }
    report["differential"] = std::move(differential);

    nlohmann::json diagnostics = nlohmann::json::array();
    for (const Diagnostic& d : doc.diagnostics)
        diagnostics.push_back({{"offset", d.offset}, {"message", d.message}});
    for (const Diagnostic& d : extra)
        diagnostics.push_back({{"offset", d.offset}, {"message", d.message}});
    report["diagnostics"] = std::move(diagnostics);
    return report;
}

}  // namespace pdfscout
