#include "pdfscout/pdf_model.hpp"

#include <algorithm>
#include <deque>

namespace pdfscout {

const PdfValue* PdfDict::find(std::string_view key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

PdfValue* PdfDict::find(std::string_view key) {
    for (auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

void PdfDict::set(std::string key, PdfValue value) {
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries.emplace_back(std::move(key), std::move(value));
}

void PdfDict::erase(std::string_view key) {
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [&](const auto& e) { return e.first == key; }),
                  entries.end());
}

std::optional<std::int64_t> PdfValue::int_value() const {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    return std::nullopt;
}

double PdfValue::number_value() const {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return double(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return 0.0;
}

const PdfDict* PdfValue::dict_of() const {
    if (const auto* d = as_dict()) return d;
    if (const auto* s = as_stream()) return &s->dict;
    return nullptr;
}

const char* parse_mode_name(ParseMode mode) {
    return mode == ParseMode::Strict ? "strict" : "scavenge";
}

const PdfValue& resolve(const Document& doc, PdfRef ref) {
    auto it = doc.object_index.find(ref.number);
    if (it == doc.object_index.end())
        throw Error(Errc::UnknownReference,
                    "no object numbered " + std::to_string(ref.number));
    if (!it->second.in_use)
        throw Error(Errc::FreeObject,
                    "object " + std::to_string(ref.number) + " is marked free");
    return doc.slot_object(it->second)->value;
}

const PdfValue* try_resolve(const Document& doc, PdfRef ref) noexcept {
    auto it = doc.object_index.find(ref.number);
    if (it == doc.object_index.end() || !it->second.in_use) return nullptr;
    return &doc.slot_object(it->second)->value;
}

const PdfValue* resolve_deep(const Document& doc, const PdfValue& value, int max_depth) {
    const PdfValue* cur = &value;
    for (int depth = 0; depth < max_depth; ++depth) {
        const auto* ref = cur->as_ref();
        if (!ref) return cur;
        cur = try_resolve(doc, *ref);
        if (!cur) return nullptr;
    }
    return cur->is_ref() ? nullptr : cur;
}

const PdfValue* find_root_ref(const Document& doc) {
    for (auto it = doc.revisions.rbegin(); it != doc.revisions.rend(); ++it) {
        if (const PdfValue* root = it->trailer.dict.find("Root")) return root;
    }
    return nullptr;
}

namespace {

void collect_refs(const PdfValue& value, std::vector<PdfRef>& out) {
    if (const auto* ref = value.as_ref()) {
        out.push_back(*ref);
    } else if (const auto* arr = value.as_array()) {
        for (const auto& item : *arr) collect_refs(item, out);
    } else if (const auto* dict = value.as_dict()) {
        for (const auto& [k, v] : dict->entries) collect_refs(v, out);
    } else if (const auto* stream = value.as_stream()) {
        for (const auto& [k, v] : stream->dict.entries) collect_refs(v, out);
    }
}

}  // namespace

std::set<std::int64_t> reachable_set(const Document& doc) {
    const PdfValue* root = find_root_ref(doc);
    if (!root || !root->is_ref())
        throw Error(Errc::NoRoot, "no trailer carries a /Root reference");

    std::set<std::int64_t> visited;
    std::deque<PdfRef> frontier{*root->as_ref()};
    while (!frontier.empty()) {
        PdfRef ref = frontier.front();
        frontier.pop_front();
        if (!visited.insert(ref.number).second) continue;
        const PdfValue* value = try_resolve(doc, ref);
        if (!value) continue;  // dangling reference, already diagnosed at parse
        std::vector<PdfRef> refs;
        collect_refs(*value, refs);
        for (PdfRef r : refs)
            if (!visited.count(r.number)) frontier.push_back(r);
    }
    return visited;
}

std::map<std::int64_t, const IndirectObject*> effective_objects(const Document& doc) {
    std::map<std::int64_t, const IndirectObject*> out;
    for (const auto& [number, slot] : doc.object_index)
        if (slot.in_use) out.emplace(number, doc.slot_object(slot));
    return out;
}

bool value_equal(const PdfValue& a, const PdfValue& b) {
    if (a.v.index() != b.v.index()) return false;
    struct Cmp {
        const PdfValue& rhs;
        bool operator()(const PdfNull&) const { return true; }
        bool operator()(bool x) const { return x == std::get<bool>(rhs.v); }
        bool operator()(std::int64_t x) const { return x == std::get<std::int64_t>(rhs.v); }
        bool operator()(double x) const { return x == std::get<double>(rhs.v); }
        bool operator()(const PdfString& x) const {
            const auto& y = std::get<PdfString>(rhs.v);
            return x.bytes == y.bytes && x.hex == y.hex;
        }
        bool operator()(const PdfName& x) const { return x.text == std::get<PdfName>(rhs.v).text; }
        bool operator()(const PdfArray& x) const {
            const auto& y = std::get<PdfArray>(rhs.v);
            if (x.size() != y.size()) return false;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (!value_equal(x[i], y[i])) return false;
            return true;
        }
        bool operator()(const PdfDict& x) const {
            const auto& y = std::get<PdfDict>(rhs.v);
            if (x.entries.size() != y.entries.size()) return false;
            for (std::size_t i = 0; i < x.entries.size(); ++i) {
                if (x.entries[i].first != y.entries[i].first) return false;
                if (!value_equal(x.entries[i].second, y.entries[i].second)) return false;
            }
            return true;
        }
        bool operator()(const PdfStream& x) const {
            const auto& y = std::get<PdfStream>(rhs.v);
            if (x.raw != y.raw) return false;
            return value_equal(PdfValue::dict(x.dict), PdfValue::dict(y.dict));
        }
        bool operator()(const PdfRef& x) const {
            const auto& y = std::get<PdfRef>(rhs.v);
            return x.number == y.number && x.generation == y.generation;
        }
    };
    return std::visit(Cmp{b}, a.v);
}

bool effective_graph_equal(const Document& a, const Document& b) {
    auto ea = effective_objects(a);
    auto eb = effective_objects(b);
    if (ea.size() != eb.size()) return false;
    auto ib = eb.begin();
    for (auto ia = ea.begin(); ia != ea.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!value_equal(ia->second->value, ib->second->value)) return false;
    }
    return true;
}

}  // namespace pdfscout
