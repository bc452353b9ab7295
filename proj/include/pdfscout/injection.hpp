#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdfscout/pdf_model.hpp"

namespace pdfscout {

enum class PayloadKind { JsCode, PdfFile, ExeBytes, BenignNames };
enum class PayloadTrigger { OpenAction, NamesJavaScript, EmbeddedFileOnly, None };
enum class InjectionTechnique { AfterXref, IncrementalUpdate, GraphMerge };

const char* technique_name(InjectionTechnique technique);

struct Payload {
    PayloadKind kind = PayloadKind::JsCode;
    PayloadTrigger trigger = PayloadTrigger::OpenAction;
    std::string data;                                       // code / file bytes
    std::vector<std::pair<std::string, int>> names;         // BenignNames only
    std::string attachment_name = "attachment.bin";

    static Payload js(std::string code, PayloadTrigger trigger = PayloadTrigger::OpenAction);
    static Payload pdf_file(std::string bytes);
    static Payload exe(std::string bytes);
    static Payload benign_names(std::vector<std::pair<std::string, int>> names);
};

struct InjectionResult {
    std::string bytes;
    std::vector<std::int64_t> new_object_numbers;
};

// Technique (a): payload objects appended after the final x-ref/%%EOF region
// with fresh numbers, referenced by nothing. A reader-faithful parse of the
// output is unchanged; a byte-scanning parse additionally sees the payload.
InjectionResult inject_after_xref(std::string_view target, const Payload& payload);

// Technique (b): a full incremental update -- new body, x-ref and trailer
// with /Prev -- that re-emits the catalog with the trigger wired in. Output
// gains exactly one revision and the payload is reachable from /Root.
InjectionResult inject_incremental(std::string_view target, const Payload& payload);

// Technique (c): the whole document rewritten as a single revision with the
// payload woven into the existing graph; no /Prev, no injection orphans.
InjectionResult inject_graph_merge(std::string_view target, const Payload& payload);

// Malicious content into a benign host; technique (a) is refused because an
// unreferenced payload would never run.
InjectionResult make_reverse_mimicry(std::string_view benign, const Payload& payload,
                                     InjectionTechnique technique);

// Benign names into a malicious file via technique (a): reader-visible
// content (and Strict features) stay put, byte-scan censuses drift benign.
InjectionResult make_mimicry(std::string_view malicious,
                             const std::vector<std::pair<std::string, int>>& donor_names);

// True when the wired trigger chain resolves end to end in a parsed output:
// /Root -> /OpenAction -> JS action with code, /Root -> /Names/JavaScript ->
// action, or /Root -> /Names/EmbeddedFiles -> filespec -> /EF stream.
bool trigger_chain_resolves(const Document& doc, const Payload& payload);

}  // namespace pdfscout
