#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdfscout/names.hpp"
#include "pdfscout/pdf_model.hpp"

namespace pdfscout {

enum class ScanScope { DictionariesOnly, IncludeDecodedStreams };

struct KeywordCensus {
    std::map<std::string, std::int64_t> counts;  // normalized name -> occurrences
    ScanScope scope = ScanScope::DictionariesOnly;

    std::int64_t count(const std::string& name) const {
        auto it = counts.find(name);
        return it == counts.end() ? 0 : it->second;
    }
};

struct TreeEdge {
    std::int64_t parent = 0;
    std::int64_t child = 0;
    std::string via;  // key path inside the parent, e.g. "/Kids[0]"
};

struct SuspiciousNode {
    std::int64_t object = 0;
    std::string reason;
};

struct ObjectTree {
    std::int64_t root = 0;
    std::vector<TreeEdge> edges;
    std::set<std::int64_t> reachable;
    std::set<std::int64_t> orphans;
    std::vector<SuspiciousNode> suspicious_nodes;
};

struct JsIndicatorHit {
    std::int64_t object = 0;
    std::string indicator;
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct ExtractedScript {
    std::int64_t object = 0;
    std::string code;  // byte-transparent Latin-1
};

struct ForensicsConfig {
    // Action/code keywords that mark a node suspicious. Overridable.
    std::set<std::string> suspicious_keywords = {"JavaScript", "JS",        "OpenAction",
                                                 "AA",         "Launch",    "EmbeddedFile",
                                                 "RichMedia",  "AcroForm",  "XFA"};
    // Extra identifier-style JS indicators on top of the built-in lexicon.
    std::vector<std::string> extra_js_identifiers;
};

// Built-in identifier indicators, in vector-slot order.
const std::vector<std::string>& js_identifier_indicators();

// Occurrences of every normalized name used as a dictionary key or name
// value, across trailers and objects. Strict documents cover the effective
// set; Scavenge documents cover every scavenged object, shadowed duplicates
// included. IncludeDecodedStreams additionally lexes decoded stream content.
KeywordCensus keyword_scan(const Document& doc, ScanScope scope = ScanScope::DictionariesOnly);

// Breadth-first object tree from /Root with per-edge key paths, orphan set,
// and suspicious-keyword marks. Throws NoRoot.
ObjectTree build_tree(const Document& doc, const ForensicsConfig& config = {});

// Code carried by /JS or /JavaScript keys: inline strings directly, streams
// decoded. One entry per carrying object, ordered by object number.
std::vector<ExtractedScript> extract_javascript(const Document& doc, Diagnostics* diags = nullptr);

// Lexical scan for the indicator lexicon: suspicious identifiers, '+' next
// to string literals, long hex runs, and %u escape sleds. `object` fields
// are left 0 for the caller to fill.
std::vector<JsIndicatorHit> scan_js_indicators(std::string_view code,
                                               const ForensicsConfig& config = {});

struct EmbeddedFile {
    std::int64_t object = 0;
    std::string name;   // filespec /F when known
    std::string bytes;  // decoded content
};

// Attachment payloads: /EF file streams reached through filespecs plus any
// stream typed /EmbeddedFile. Containers are analyzed separately from their
// attachments, so detectors can recurse.
std::vector<EmbeddedFile> extract_embedded_files(const Document& doc);

// Full machine-readable report over one file: census, tree, scripts with
// indicator hits, Strict/Scavenge differential, diagnostics.
nlohmann::json risk_report(const Document& doc, const std::string& file_name,
                           const ForensicsConfig& config = {});

}  // namespace pdfscout
