#include "pdfscout/writer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "pdfscout/names.hpp"

namespace pdfscout {

namespace {

std::string format_int(std::int64_t v) {
    char buf[24];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string format_real(double v) {
    if (!std::isfinite(v)) return "0";
    // PDF real syntax has no exponent form; fixed notation with the shortest
    // digit count that round-trips.
    char buf[352];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    if (ec != std::errc()) return "0";
    return std::string(buf, p);
}

void write_literal_string(const std::string& bytes, std::string& out) {
    out.push_back('(');
    for (char c : bytes) {
        switch (c) {
            case '(': out += "\\("; break;
            case ')': out += "\\)"; break;
            case '\\': out += "\\\\"; break;
            case '\r': out += "\\r"; break;
            case '\n': out += "\\n"; break;
            default: out.push_back(c);
        }
    }
    out.push_back(')');
}

void write_hex_string(const std::string& bytes, std::string& out) {
    static const char* hex = "0123456789ABCDEF";
    out.push_back('<');
    for (unsigned char c : bytes) {
        out.push_back(hex[c >> 4]);
        out.push_back(hex[c & 0xf]);
    }
    out.push_back('>');
}

void write_value_impl(const PdfValue& value, std::string& out);

void write_dict_impl(const PdfDict& dict, std::string& out) {
    out += "<<";
    for (const auto& [key, v] : dict.entries) {
        out += " /";
        out += escape_name(key);
        out.push_back(' ');
        write_value_impl(v, out);
    }
    out += " >>";
}

void write_value_impl(const PdfValue& value, std::string& out) {
    struct Writer {
        std::string& out;
        void operator()(const PdfNull&) { out += "null"; }
        void operator()(bool b) { out += b ? "true" : "false"; }
        void operator()(std::int64_t i) { out += format_int(i); }
        void operator()(double d) { out += format_real(d); }
        void operator()(const PdfString& s) {
            s.hex ? write_hex_string(s.bytes, out) : write_literal_string(s.bytes, out);
        }
        void operator()(const PdfName& n) {
            out.push_back('/');
            out += escape_name(n.text);
        }
        void operator()(const PdfArray& a) {
            out.push_back('[');
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (i) out.push_back(' ');
                write_value_impl(a[i], out);
            }
            out.push_back(']');
        }
        void operator()(const PdfDict& d) { write_dict_impl(d, out); }
        void operator()(const PdfStream& s) {
            write_dict_impl(s.dict, out);
            out += "\nstream\n";
            out += s.raw;
            out += "\nendstream";
        }
        void operator()(const PdfRef& r) {
            out += format_int(r.number);
            out.push_back(' ');
            out += format_int(r.generation);
            out += " R";
        }
    };
    std::visit(Writer{out}, value.v);
}

void append_xref_entry(std::string& out, std::uint64_t offset, std::int64_t generation,
                       bool in_use) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%010llu %05lld %c\r\n",
                  static_cast<unsigned long long>(offset),
                  static_cast<long long>(std::clamp<std::int64_t>(generation, 0, 99999)),
                  in_use ? 'n' : 'f');
    out += buf;
}

}  // namespace

std::string write_value(const PdfValue& value) {
    std::string out;
    write_value_impl(value, out);
    return out;
}

std::string write_indirect(const IndirectObject& object) {
    std::string out = format_int(object.number) + " " + format_int(object.generation) + " obj\n";
    write_value_impl(object.value, out);
    out += "\nendobj\n";
    return out;
}

std::string serialize(const Document& doc) {
    std::string out = "%PDF-" + (doc.header_version.empty() ? "1.7" : doc.header_version) + "\n";
    out += "%\xE2\xE3\xCF\xD3\n";

    std::size_t prev_xref = 0;
    bool have_prev = false;
    std::int64_t max_number = 0;

    for (std::size_t r = 0; r < doc.revisions.size(); ++r) {
        const Revision& rev = doc.revisions[r];

        // Objects to write: one per number, shadowed duplicates dropped
        // (scavenged collisions), source order preserved otherwise.
        std::map<std::int64_t, const IndirectObject*> chosen;
        for (const IndirectObject& obj : rev.objects) {
            auto it = chosen.find(obj.number);
            if (it == chosen.end() || it->second->byte_offset <= obj.byte_offset)
                chosen[obj.number] = &obj;
        }
        std::vector<const IndirectObject*> order;
        order.reserve(chosen.size());
        for (const IndirectObject& obj : rev.objects)
            if (chosen[obj.number] == &obj) order.push_back(&obj);

        std::map<std::int64_t, std::uint64_t> offsets;
        for (const IndirectObject* obj : order) {
            offsets[obj->number] = out.size();
            out += write_indirect(*obj);
        }

        // Entry list: parsed entries win; synthesized from objects otherwise.
        std::map<std::int64_t, XrefEntry> entries;
        if (!rev.xref.empty()) {
            for (const XrefEntry& e : rev.xref) entries[e.number] = e;
        } else {
            for (const IndirectObject* obj : order)
                entries[obj->number] = {obj->number, 0, obj->generation, true};
        }
        if (r == 0 && !entries.count(0)) entries[0] = {0, 0, 65535, false};
        for (auto& [number, entry] : entries) {
            if (!entry.in_use) continue;
            auto it = offsets.find(number);
            if (it != offsets.end())
                entry.offset = it->second;
            else
                entry.offset = 0;  // dangling in the source, dangling in the output
            max_number = std::max(max_number, number);
        }
        if (!entries.empty()) max_number = std::max(max_number, entries.rbegin()->first);

        std::size_t xref_offset = out.size();
        out += "xref\n";
        auto it = entries.begin();
        while (it != entries.end()) {
            std::int64_t start = it->first;
            auto run_end = it;
            std::int64_t expect = start;
            while (run_end != entries.end() && run_end->first == expect) {
                ++run_end;
                ++expect;
            }
            out += format_int(start) + " " + format_int(expect - start) + "\n";
            for (; it != run_end; ++it)
                append_xref_entry(out, it->second.offset, it->second.generation,
                                  it->second.in_use);
        }

        PdfDict trailer = rev.trailer.dict;
        trailer.erase("Prev");
        if (have_prev) trailer.set("Prev", PdfValue::integer(std::int64_t(prev_xref)));
        trailer.set("Size", PdfValue::integer(max_number + 1));
        out += "trailer\n";
        write_dict_impl(trailer, out);
        out += "\nstartxref\n" + format_int(std::int64_t(xref_offset)) + "\n%%EOF\n";

        prev_xref = xref_offset;
        have_prev = true;
    }
    return out;
}

}  // namespace pdfscout
