#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pdfscout/errors.hpp"

namespace pdfscout {

struct PdfValue;

struct PdfNull {};

// String objects keep their raw bytes; `hex` records whether the source used
// the <...> form so re-serialization can preserve it.
struct PdfString {
    std::string bytes;
    bool hex = false;
};

// Name objects are stored normalized (#xx escapes already decoded).
struct PdfName {
    std::string text;
};

struct PdfRef {
    std::int64_t number = 0;
    std::int64_t generation = 0;
};

using PdfArray = std::vector<PdfValue>;

// Insertion-ordered dictionary. Keys are normalized names without the
// leading slash. Duplicate raw keys collapse to the last occurrence.
struct PdfDict {
    std::vector<std::pair<std::string, PdfValue>> entries;

    const PdfValue* find(std::string_view key) const;
    PdfValue* find(std::string_view key);
    bool contains(std::string_view key) const { return find(key) != nullptr; }
    // Replaces the existing entry in place or appends a new one.
    void set(std::string key, PdfValue value);
    void erase(std::string_view key);
    std::size_t size() const { return entries.size(); }
};

struct PdfStream {
    PdfDict dict;
    std::string raw;
    // Filled by the parser when every declared filter is supported;
    // empty with a diagnostic otherwise.
    std::optional<std::string> decoded;
};

struct PdfValue {
    using Variant = std::variant<PdfNull, bool, std::int64_t, double, PdfString, PdfName,
                                 PdfArray, PdfDict, PdfStream, PdfRef>;
    Variant v;

    PdfValue() : v(PdfNull{}) {}
    PdfValue(Variant value) : v(std::move(value)) {}

    bool is_null() const { return std::holds_alternative<PdfNull>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_real() const { return std::holds_alternative<double>(v); }
    bool is_number() const { return is_int() || is_real(); }
    bool is_string() const { return std::holds_alternative<PdfString>(v); }
    bool is_name() const { return std::holds_alternative<PdfName>(v); }
    bool is_array() const { return std::holds_alternative<PdfArray>(v); }
    bool is_dict() const { return std::holds_alternative<PdfDict>(v); }
    bool is_stream() const { return std::holds_alternative<PdfStream>(v); }
    bool is_ref() const { return std::holds_alternative<PdfRef>(v); }

    const PdfDict* as_dict() const { return std::get_if<PdfDict>(&v); }
    PdfDict* as_dict() { return std::get_if<PdfDict>(&v); }
    const PdfArray* as_array() const { return std::get_if<PdfArray>(&v); }
    const PdfStream* as_stream() const { return std::get_if<PdfStream>(&v); }
    PdfStream* as_stream() { return std::get_if<PdfStream>(&v); }
    const PdfString* as_string() const { return std::get_if<PdfString>(&v); }
    const PdfName* as_name() const { return std::get_if<PdfName>(&v); }
    const PdfRef* as_ref() const { return std::get_if<PdfRef>(&v); }

    std::optional<std::int64_t> int_value() const;
    double number_value() const;  // 0.0 when not numeric

    // The stream's dictionary when this is a stream, the dictionary itself
    // when this is one, nullptr otherwise.
    const PdfDict* dict_of() const;

    // Convenience constructors used by builders.
    static PdfValue null() { return PdfValue(); }
    static PdfValue boolean(bool b) { return PdfValue(Variant(b)); }
    static PdfValue integer(std::int64_t i) { return PdfValue(Variant(i)); }
    static PdfValue real(double d) { return PdfValue(Variant(d)); }
    static PdfValue string(std::string bytes, bool hex = false) {
        return PdfValue(Variant(PdfString{std::move(bytes), hex}));
    }
    static PdfValue name(std::string text) { return PdfValue(Variant(PdfName{std::move(text)})); }
    static PdfValue array(PdfArray items) { return PdfValue(Variant(std::move(items))); }
    static PdfValue dict(PdfDict d) { return PdfValue(Variant(std::move(d))); }
    static PdfValue stream(PdfStream s) { return PdfValue(Variant(std::move(s))); }
    static PdfValue ref(std::int64_t number, std::int64_t generation = 0) {
        return PdfValue(Variant(PdfRef{number, generation}));
    }
};

struct IndirectObject {
    std::int64_t number = 0;
    std::int64_t generation = 0;
    PdfValue value;
    std::size_t byte_offset = 0;
};

struct XrefEntry {
    std::int64_t number = 0;
    std::uint64_t offset = 0;
    std::int64_t generation = 0;
    bool in_use = false;
};

struct Trailer {
    PdfDict dict;
};

struct Revision {
    std::vector<IndirectObject> objects;
    std::vector<XrefEntry> xref;
    Trailer trailer;
    std::size_t begin_offset = 0;
    std::size_t end_offset = 0;
    // Offset of the "xref" keyword for this revision; used when a later
    // incremental update needs a /Prev target. 0 for synthetic revisions.
    std::size_t xref_offset = 0;
};

enum class ParseMode { Strict, Scavenge };

const char* parse_mode_name(ParseMode mode);

struct Document {
    std::string header_version;
    std::vector<Revision> revisions;  // oldest first
    std::string source_bytes;
    ParseMode parse_mode = ParseMode::Strict;
    Diagnostics diagnostics;

    // Latest-wins resolution index, built once by the parser.
    struct Slot {
        std::size_t revision = 0;
        std::size_t object = 0;
        bool in_use = false;
    };
    std::map<std::int64_t, Slot> object_index;

    const IndirectObject* slot_object(const Slot& slot) const {
        return &revisions[slot.revision].objects[slot.object];
    }
};

// Latest-wins lookup of an indirect reference. Throws UnknownReference when
// no revision defines the number, FreeObject when the newest x-ref entry
// frees it. Generation numbers do not participate in resolution.
const PdfValue& resolve(const Document& doc, PdfRef ref);

// Lenient variant: nullptr instead of throwing.
const PdfValue* try_resolve(const Document& doc, PdfRef ref) noexcept;

// Follows Reference->Reference chains up to `max_depth` hops, then returns
// the first non-reference value (nullptr on a broken or too-deep chain).
const PdfValue* resolve_deep(const Document& doc, const PdfValue& value, int max_depth = 32);

// Object numbers reachable from the trailer /Root by transitive traversal
// through arrays, dictionaries and stream dictionaries. Cycles are fine.
std::set<std::int64_t> reachable_set(const Document& doc);

// The effective object per number: newest in-use x-ref entry wins in Strict
// documents, highest byte offset wins in Scavenge documents.
std::map<std::int64_t, const IndirectObject*> effective_objects(const Document& doc);

// Newest revision whose trailer carries /Root; nullptr when none does.
const PdfValue* find_root_ref(const Document& doc);

// Deep structural equality (stream comparison uses dict + raw bytes).
bool value_equal(const PdfValue& a, const PdfValue& b);

// Value-isomorphism of the effective object graphs: same numbers, equal
// values per number. Byte offsets and generations are ignored.
bool effective_graph_equal(const Document& a, const Document& b);

}  // namespace pdfscout
