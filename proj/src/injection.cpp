#include "pdfscout/injection.hpp"

#include <algorithm>
#include <cstdio>

#include "pdfscout/filters.hpp"
#include "pdfscout/parser.hpp"
#include "pdfscout/writer.hpp"

namespace pdfscout {

const char* technique_name(InjectionTechnique technique) {
    switch (technique) {
        case InjectionTechnique::AfterXref: return "after-xref";
        case InjectionTechnique::IncrementalUpdate: return "incremental";
        case InjectionTechnique::GraphMerge: return "graph-merge";
    }
    return "?";
}

Payload Payload::js(std::string code, PayloadTrigger trigger) {
    Payload p;
    p.kind = PayloadKind::JsCode;
    p.trigger = trigger;
    p.data = std::move(code);
    return p;
}

Payload Payload::pdf_file(std::string bytes) {
    Payload p;
    p.kind = PayloadKind::PdfFile;
    p.trigger = PayloadTrigger::EmbeddedFileOnly;
    p.data = std::move(bytes);
    p.attachment_name = "attachment.pdf";
    return p;
}

Payload Payload::exe(std::string bytes) {
    Payload p;
    p.kind = PayloadKind::ExeBytes;
    p.trigger = PayloadTrigger::EmbeddedFileOnly;
    p.data = std::move(bytes);
    p.attachment_name = "attachment.exe";
    return p;
}

Payload Payload::benign_names(std::vector<std::pair<std::string, int>> names) {
    Payload p;
    p.kind = PayloadKind::BenignNames;
    p.trigger = PayloadTrigger::None;
    p.names = std::move(names);
    return p;
}

namespace {

void validate_payload(const Payload& payload) {
    switch (payload.kind) {
        case PayloadKind::JsCode:
            if (payload.data.empty())
                throw Error(Errc::InvalidPayload, "JS payload code is empty");
            break;
        case PayloadKind::ExeBytes:
            if (payload.data.empty())
                throw Error(Errc::InvalidPayload, "EXE payload is empty");
            break;
        case PayloadKind::PdfFile:
            try {
                ParseOptions quiet;
                quiet.eager_decode = false;
                parse_document(payload.data, ParseMode::Scavenge, quiet);
            } catch (const Error& e) {
                throw Error(Errc::InvalidPayload,
                            std::string("PDF payload does not scavenge-parse: ") + e.what());
            }
            break;
        case PayloadKind::BenignNames:
            for (const auto& [name, count] : payload.names)
                if (name.empty() || count < 0)
                    throw Error(Errc::InvalidPayload, "bad benign-name entry");
            break;
    }
}

Document parse_target(std::string_view target) {
    try {
        return parse_document(target, ParseMode::Strict);
    } catch (const Error& e) {
        throw Error(Errc::TargetUnparseable, e.what());
    }
}

std::int64_t max_object_number(std::string_view bytes, const Document& strict_doc) {
    std::int64_t max_number = 0;
    if (!strict_doc.object_index.empty())
        max_number = strict_doc.object_index.rbegin()->first;
    // Numbers hidden from the x-ref still collide in scavenging parsers;
    // skip past those too.
    try {
        ParseOptions quiet;
        quiet.eager_decode = false;
        Document scavenged = parse_document(bytes, ParseMode::Scavenge, quiet);
        if (!scavenged.object_index.empty())
            max_number = std::max(max_number, scavenged.object_index.rbegin()->first);
    } catch (const Error&) {
    }
    return max_number;
}

// What gets appended to the catalog to make the payload reachable.
struct CatalogPatch {
    enum Kind { None, OpenAction, NamesJavaScript, NamesEmbeddedFile, PieceInfo } kind = None;
    PdfRef target;
    std::string entry_name;  // names-tree key for the payload entry
};

struct BuiltPayload {
    std::vector<IndirectObject> objects;
    CatalogPatch patch;
};

BuiltPayload build_payload_objects(const Payload& payload, std::int64_t first_number) {
    BuiltPayload built;
    std::int64_t next = first_number;

    switch (payload.kind) {
        case PayloadKind::JsCode: {
            PdfDict action;
            action.set("Type", PdfValue::name("Action"));
            action.set("S", PdfValue::name("JavaScript"));
            action.set("JS", PdfValue::string(payload.data));
            IndirectObject obj;
            obj.number = next++;
            obj.value = PdfValue::dict(std::move(action));
            built.objects.push_back(std::move(obj));
            if (payload.trigger == PayloadTrigger::NamesJavaScript) {
                built.patch.kind = CatalogPatch::NamesJavaScript;
                built.patch.entry_name = "njs0";
            } else if (payload.trigger == PayloadTrigger::OpenAction) {
                built.patch.kind = CatalogPatch::OpenAction;
            }
            built.patch.target = {built.objects.front().number, 0};
            break;
        }
        case PayloadKind::PdfFile:
        case PayloadKind::ExeBytes: {
            std::string packed = flate_encode(payload.data);
            PdfStream stream;
            stream.dict.set("Type", PdfValue::name("EmbeddedFile"));
            stream.dict.set("Filter", PdfValue::name("FlateDecode"));
            stream.dict.set("Length", PdfValue::integer(std::int64_t(packed.size())));
            stream.raw = std::move(packed);
            IndirectObject file_obj;
            file_obj.number = next++;
            file_obj.value = PdfValue::stream(std::move(stream));

            PdfDict ef;
            ef.set("F", PdfValue::ref(file_obj.number));
            PdfDict filespec;
            filespec.set("Type", PdfValue::name("Filespec"));
            filespec.set("F", PdfValue::string(payload.attachment_name));
            filespec.set("EF", PdfValue::dict(std::move(ef)));
            IndirectObject spec_obj;
            spec_obj.number = next++;
            spec_obj.value = PdfValue::dict(std::move(filespec));

            built.patch.kind = CatalogPatch::NamesEmbeddedFile;
            built.patch.target = {spec_obj.number, 0};
            built.patch.entry_name = payload.attachment_name;
            built.objects.push_back(std::move(file_obj));
            built.objects.push_back(std::move(spec_obj));
            break;
        }
        case PayloadKind::BenignNames: {
            PdfArray names;
            for (const auto& [name, count] : payload.names)
                for (int i = 0; i < count; ++i) names.push_back(PdfValue::name(name));
            IndirectObject obj;
            obj.number = next++;
            obj.value = PdfValue::array(std::move(names));
            built.patch.kind = CatalogPatch::PieceInfo;
            built.patch.target = {obj.number, 0};
            built.objects.push_back(std::move(obj));
            break;
        }
    }
    return built;
}

// A names-tree limb << /Names [ (entry) target R ] >>, merged into whatever
// subtree the catalog already carries.
PdfValue make_names_limb(const Document& doc, const PdfValue* existing,
                         const std::string& entry, PdfRef target) {
    PdfDict limb;
    PdfArray pairs;
    if (existing) {
        const PdfValue* resolved = resolve_deep(doc, *existing);
        if (resolved && resolved->is_dict()) {
            limb = *resolved->as_dict();
            if (const PdfValue* held = limb.find("Names"); held && held->is_array())
                pairs = *held->as_array();
        }
    }
    pairs.push_back(PdfValue::string(entry));
    pairs.push_back(PdfValue::ref(target.number, target.generation));
    limb.set("Names", PdfValue::array(std::move(pairs)));
    return PdfValue::dict(std::move(limb));
}

PdfDict patch_catalog(const Document& doc, const PdfDict& catalog, const CatalogPatch& patch) {
    PdfDict out = catalog;
    switch (patch.kind) {
        case CatalogPatch::None:
            break;
        case CatalogPatch::OpenAction:
            out.set("OpenAction", PdfValue::ref(patch.target.number, patch.target.generation));
            break;
        case CatalogPatch::PieceInfo:
            out.set("PieceInfo", PdfValue::ref(patch.target.number, patch.target.generation));
            break;
        case CatalogPatch::NamesJavaScript:
        case CatalogPatch::NamesEmbeddedFile: {
            const char* key =
                patch.kind == CatalogPatch::NamesJavaScript ? "JavaScript" : "EmbeddedFiles";
            PdfDict names;
            if (const PdfValue* held = out.find("Names")) {
                const PdfValue* resolved = resolve_deep(doc, *held);
                if (resolved && resolved->is_dict()) names = *resolved->as_dict();
            }
            names.set(key, make_names_limb(doc, names.find(key), patch.entry_name, patch.target));
            out.set("Names", PdfValue::dict(std::move(names)));
            break;
        }
    }
    return out;
}

struct CatalogInfo {
    std::int64_t number = 0;
    std::int64_t generation = 0;
    PdfDict dict;
};

CatalogInfo find_catalog(const Document& doc) {
    const PdfValue* root = find_root_ref(doc);
    if (!root || !root->is_ref())
        throw Error(Errc::NoCatalog, "trailer carries no /Root reference");
    const PdfValue* catalog = try_resolve(doc, *root->as_ref());
    if (!catalog || !catalog->is_dict())
        throw Error(Errc::NoCatalog, "/Root does not resolve to a dictionary");
    CatalogInfo info;
    info.number = root->as_ref()->number;
    info.generation = root->as_ref()->generation;
    info.dict = *catalog->as_dict();
    return info;
}

std::vector<std::int64_t> numbers_of(const std::vector<IndirectObject>& objects) {
    std::vector<std::int64_t> out;
    out.reserve(objects.size());
    for (const IndirectObject& obj : objects) out.push_back(obj.number);
    return out;
}

}  // namespace

InjectionResult inject_after_xref(std::string_view target, const Payload& payload) {
    validate_payload(payload);
    Document doc = parse_target(target);

    if (payload.kind == PayloadKind::BenignNames && payload.names.empty())
        return {std::string(target), {}};

    BuiltPayload built = build_payload_objects(payload, max_object_number(target, doc) + 1);

    std::string out(target);
    if (out.empty() || out.back() != '\n') out.push_back('\n');
    for (const IndirectObject& obj : built.objects) out += write_indirect(obj);
    // Repeat the original startxref line so readers that only scan the tail
    // still find the untouched table.
    out += "startxref\n" + std::to_string(doc.revisions.back().xref_offset) + "\n%%EOF\n";
    return {std::move(out), numbers_of(built.objects)};
}

InjectionResult inject_incremental(std::string_view target, const Payload& payload) {
    validate_payload(payload);
    Document doc = parse_target(target);
    CatalogInfo catalog = find_catalog(doc);

    BuiltPayload built = build_payload_objects(payload, max_object_number(target, doc) + 1);

    std::string out(target);
    if (out.empty() || out.back() != '\n') out.push_back('\n');

    IndirectObject new_catalog;
    new_catalog.number = catalog.number;
    new_catalog.generation = catalog.generation;
    new_catalog.value = PdfValue::dict(patch_catalog(doc, catalog.dict, built.patch));

    std::vector<std::pair<std::int64_t, std::uint64_t>> offsets;  // number -> offset
    offsets.emplace_back(new_catalog.number, out.size());
    out += write_indirect(new_catalog);
    for (const IndirectObject& obj : built.objects) {
        offsets.emplace_back(obj.number, out.size());
        out += write_indirect(obj);
    }
    std::sort(offsets.begin(), offsets.end());

    std::int64_t max_number = std::max(max_object_number(target, doc),
                                       offsets.back().first);

    std::size_t xref_offset = out.size();
    out += "xref\n";
    std::size_t i = 0;
    while (i < offsets.size()) {
        std::size_t run = i + 1;
        while (run < offsets.size() && offsets[run].first == offsets[run - 1].first + 1) ++run;
        out += std::to_string(offsets[i].first) + " " + std::to_string(run - i) + "\n";
        for (; i < run; ++i) {
            char buf[24];
            std::snprintf(buf, sizeof(buf), "%010llu %05d n\r\n",
                          static_cast<unsigned long long>(offsets[i].second), 0);
            out += buf;
        }
    }

    PdfDict trailer = doc.revisions.back().trailer.dict;
    trailer.set("Prev", PdfValue::integer(std::int64_t(doc.revisions.back().xref_offset)));
    trailer.set("Size", PdfValue::integer(max_number + 1));
    out += "trailer\n" + write_value(PdfValue::dict(std::move(trailer)));
    out += "\nstartxref\n" + std::to_string(xref_offset) + "\n%%EOF\n";
    return {std::move(out), numbers_of(built.objects)};
}

InjectionResult inject_graph_merge(std::string_view target, const Payload& payload) {
    validate_payload(payload);
    Document doc = parse_target(target);
    CatalogInfo catalog = find_catalog(doc);

    std::int64_t first_free = max_object_number(target, doc) + 1;
    if (first_free > std::int64_t(kMaxObjectCount))
        throw Error(Errc::ObjectNumberOverflow, "object numbers exhausted");
    BuiltPayload built = build_payload_objects(payload, first_free);

    Document merged;
    merged.header_version = doc.header_version;
    Revision rev;
    for (const auto& [number, obj] : effective_objects(doc)) {
        IndirectObject copy = *obj;
        if (number == catalog.number)
            copy.value = PdfValue::dict(patch_catalog(doc, catalog.dict, built.patch));
        rev.objects.push_back(std::move(copy));
    }
    for (const IndirectObject& obj : built.objects) rev.objects.push_back(obj);

    rev.trailer.dict = doc.revisions.back().trailer.dict;
    rev.trailer.dict.erase("Prev");
    merged.revisions.push_back(std::move(rev));
    return {serialize(merged), numbers_of(built.objects)};
}

InjectionResult make_reverse_mimicry(std::string_view benign, const Payload& payload,
                                     InjectionTechnique technique) {
    switch (technique) {
        case InjectionTechnique::AfterXref:
            throw Error(Errc::TechniqueNotAllowed,
                        "after-xref payloads are never parsed by the reader; use "
                        "incremental or graph-merge");
        case InjectionTechnique::IncrementalUpdate:
            return inject_incremental(benign, payload);
        case InjectionTechnique::GraphMerge:
            return inject_graph_merge(benign, payload);
    }
    throw Error(Errc::BadConfig, "unknown technique");
}

InjectionResult make_mimicry(std::string_view malicious,
                             const std::vector<std::pair<std::string, int>>& donor_names) {
    return inject_after_xref(malicious, Payload::benign_names(donor_names));
}

bool trigger_chain_resolves(const Document& doc, const Payload& payload) {
    const PdfValue* root = find_root_ref(doc);
    if (!root || !root->is_ref()) return false;
    const PdfValue* catalog = try_resolve(doc, *root->as_ref());
    if (!catalog || !catalog->is_dict()) return false;
    const PdfDict& cat = *catalog->as_dict();

    auto names_limb = [&](const char* key) -> const PdfValue* {
        const PdfValue* names = cat.find("Names");
        if (!names) return nullptr;
        const PdfValue* resolved = resolve_deep(doc, *names);
        if (!resolved || !resolved->is_dict()) return nullptr;
        const PdfValue* limb = resolved->as_dict()->find(key);
        return limb ? resolve_deep(doc, *limb) : nullptr;
    };

    auto js_action_ok = [&](const PdfValue* action) {
        if (!action) return false;
        const PdfDict* dict = action->dict_of();
        if (!dict) return false;
        const PdfValue* s = dict->find("S");
        if (!s || !s->is_name() || s->as_name()->text != "JavaScript") return false;
        const PdfValue* js = dict->find("JS");
        if (!js) return false;
        const PdfValue* code = resolve_deep(doc, *js);
        if (!code) return false;
        if (const auto* str = code->as_string()) return !str->bytes.empty();
        if (const auto* stream = code->as_stream())
            return stream->decoded ? !stream->decoded->empty() : !stream->raw.empty();
        return false;
    };

    switch (payload.kind) {
        case PayloadKind::JsCode: {
            if (payload.trigger == PayloadTrigger::OpenAction) {
                const PdfValue* action = cat.find("OpenAction");
                return action && js_action_ok(resolve_deep(doc, *action));
            }
            const PdfValue* limb = names_limb("JavaScript");
            if (!limb || !limb->is_dict()) return false;
            const PdfValue* pairs = limb->as_dict()->find("Names");
            if (!pairs || !pairs->is_array()) return false;
            const PdfArray& arr = *pairs->as_array();
            for (std::size_t i = 1; i < arr.size(); i += 2)
                if (js_action_ok(resolve_deep(doc, arr[i]))) return true;
            return false;
        }
        case PayloadKind::PdfFile:
        case PayloadKind::ExeBytes: {
            const PdfValue* limb = names_limb("EmbeddedFiles");
            if (!limb || !limb->is_dict()) return false;
            const PdfValue* pairs = limb->as_dict()->find("Names");
            if (!pairs || !pairs->is_array()) return false;
            const PdfArray& arr = *pairs->as_array();
            for (std::size_t i = 1; i < arr.size(); i += 2) {
                const PdfValue* filespec = resolve_deep(doc, arr[i]);
                if (!filespec || !filespec->is_dict()) continue;
                const PdfValue* ef = filespec->as_dict()->find("EF");
                if (!ef) continue;
                const PdfValue* ef_dict = resolve_deep(doc, *ef);
                if (!ef_dict || !ef_dict->is_dict()) continue;
                const PdfValue* file = ef_dict->as_dict()->find("F");
                if (!file) continue;
                const PdfValue* stream = resolve_deep(doc, *file);
                if (!stream || !stream->is_stream()) continue;
                const PdfStream& s = *stream->as_stream();
                if (!payload.data.empty() && s.decoded && *s.decoded != payload.data) continue;
                return true;
            }
            return false;
        }
        case PayloadKind::BenignNames: {
            const PdfValue* piece = cat.find("PieceInfo");
            if (!piece) return false;
            const PdfValue* arr = resolve_deep(doc, *piece);
            return arr && arr->is_array();
        }
    }
    return false;
}

}  // namespace pdfscout
