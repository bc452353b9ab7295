#include "pdfscout/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "pdfscout/filters.hpp"
#include "pdfscout/lexer.hpp"
#include "pdfscout/names.hpp"

namespace pdfscout {

namespace {

constexpr int kMaxValueDepth = 256;

struct ObjectParser {
    Lexer lexer;
    Diagnostics& diags;

    ObjectParser(std::string_view bytes, Diagnostics& sink) : lexer(bytes), diags(sink) {}

    PdfValue parse_value(int depth);
    PdfDict parse_dict_body(int depth);

    // Parses "N G obj ... endobj" at `offset`. Returns false when no object
    // header is there.
    bool parse_indirect(std::size_t offset, IndirectObject& out);

private:
    void read_stream_payload(PdfStream& stream, std::size_t keyword_end);
};

PdfValue ObjectParser::parse_value(int depth) {
    if (depth > kMaxValueDepth) {
        diag(diags, lexer.pos(), "value nesting exceeds depth cap");
        return PdfValue::null();
    }
    Token t = lexer.next();
    switch (t.kind) {
        case Token::Kind::Integer: {
            // "N G R" forms a reference. peek2() may grow the lookahead
            // buffer, so take copies, not references.
            Token b = lexer.peek2();
            Token a = lexer.peek();
            if (a.kind == Token::Kind::Integer && b.is_keyword("R") && t.int_value >= 1 &&
                a.int_value >= 0) {
                std::int64_t gen = a.int_value;
                lexer.next();
                lexer.next();
                return PdfValue::ref(t.int_value, gen);
            }
            return PdfValue::integer(t.int_value);
        }
        case Token::Kind::Real:
            return PdfValue::real(t.real_value);
        case Token::Kind::LiteralString:
            return PdfValue::string(std::move(t.text), false);
        case Token::Kind::HexString:
            return PdfValue::string(std::move(t.text), true);
        case Token::Kind::Name: {
            NormalizedName n = normalize_name(t.text);
            if (n.malformed_escape)
                diag(diags, t.begin, "malformed #-escape in name /" + t.text);
            return PdfValue::name(std::move(n.text));
        }
        case Token::Kind::ArrayOpen: {
            PdfArray items;
            for (;;) {
                const Token& p = lexer.peek();
                if (p.kind == Token::Kind::ArrayClose) {
                    lexer.next();
                    break;
                }
                if (p.kind == Token::Kind::End || p.is_keyword("endobj") ||
                    p.is_keyword("endstream")) {
                    diag(diags, p.begin, "unterminated array");
                    break;
                }
                items.push_back(parse_value(depth + 1));
            }
            return PdfValue::array(std::move(items));
        }
        case Token::Kind::DictOpen:
            return PdfValue::dict(parse_dict_body(depth + 1));
        case Token::Kind::Keyword:
            if (t.text == "true") return PdfValue::boolean(true);
            if (t.text == "false") return PdfValue::boolean(false);
            if (t.text == "null") return PdfValue::null();
            diag(diags, t.begin, "unexpected keyword '" + t.text + "' in value position");
            return PdfValue::null();
        default:
            diag(diags, t.begin, "unexpected token in value position");
            return PdfValue::null();
    }
}

PdfDict ObjectParser::parse_dict_body(int depth) {
    PdfDict dict;
    for (;;) {
        Token t = lexer.next();
        if (t.kind == Token::Kind::DictClose) break;
        if (t.kind == Token::Kind::End || t.is_keyword("endobj")) {
            diag(diags, t.begin, "unterminated dictionary");
            break;
        }
        if (t.kind != Token::Kind::Name) {
            diag(diags, t.begin, "dictionary key is not a name; skipping");
            continue;
        }
        NormalizedName key = normalize_name(t.text);
        if (key.malformed_escape)
            diag(diags, t.begin, "malformed #-escape in name /" + t.text);
        PdfValue value = parse_value(depth + 1);
        if (dict.contains(key.text))
            diag(diags, t.begin, "duplicate dictionary key /" + key.text + "; last wins");
        dict.set(std::move(key.text), std::move(value));
    }
    return dict;
}

void ObjectParser::read_stream_payload(PdfStream& stream, std::size_t keyword_end) {
    std::string_view bytes = lexer.bytes();
    std::size_t start = keyword_end;
    if (start < bytes.size() && bytes[start] == '\r') ++start;
    if (start < bytes.size() && bytes[start] == '\n') ++start;

    std::optional<std::int64_t> declared;
    if (const PdfValue* len = stream.dict.find("Length"); len && len->is_int())
        declared = len->int_value();

    // A consistent direct /Length wins, so stream data may itself contain the
    // word "endstream". Otherwise the scanned delimiter is trusted; /Length
    // lies are a known hiding trick.
    if (declared && *declared >= 0 && start + std::size_t(*declared) <= bytes.size()) {
        std::size_t end = start + std::size_t(*declared);
        std::size_t probe = end;
        while (probe < bytes.size() && is_pdf_whitespace(bytes[probe])) ++probe;
        if (bytes.compare(probe, 9, "endstream") == 0) {
            stream.raw.assign(bytes.substr(start, end - start));
            lexer.seek(probe + 9);
            return;
        }
    }

    std::size_t found = bytes.find("endstream", start);
    if (found == std::string_view::npos) {
        diag(diags, start, "unterminated stream; consuming to end of file");
        stream.raw.assign(bytes.substr(start));
        lexer.seek(bytes.size());
        return;
    }
    std::size_t end = found;
    if (end > start && bytes[end - 1] == '\n') --end;
    if (end > start && bytes[end - 1] == '\r') --end;
    stream.raw.assign(bytes.substr(start, end - start));
    if (declared && std::size_t(std::max<std::int64_t>(*declared, 0)) != stream.raw.size())
        diag(diags, start,
             "/Length " + std::to_string(*declared) + " disagrees with endstream at " +
                 std::to_string(found));
    lexer.seek(found + 9);
}

bool ObjectParser::parse_indirect(std::size_t offset, IndirectObject& out) {
    if (offset >= lexer.bytes().size()) return false;
    lexer.seek(offset);
    Token num = lexer.next();
    Token gen = lexer.next();
    Token kw = lexer.next();
    if (num.kind != Token::Kind::Integer || gen.kind != Token::Kind::Integer ||
        !kw.is_keyword("obj") || num.int_value < 1 || gen.int_value < 0)
        return false;

    out.number = num.int_value;
    out.generation = gen.int_value;
    out.byte_offset = offset;
    out.value = parse_value(0);

    const Token& after = lexer.peek();
    if (after.is_keyword("stream")) {
        if (const PdfDict* d = out.value.as_dict()) {
            PdfStream stream;
            stream.dict = *d;
            Token skw = lexer.next();
            read_stream_payload(stream, skw.end);
            out.value = PdfValue::stream(std::move(stream));
        } else {
            diag(diags, after.begin, "stream keyword without a leading dictionary");
            lexer.next();
        }
    }
    const Token& closing = lexer.peek();
    if (closing.is_keyword("endobj")) {
        lexer.next();
    } else {
        diag(diags, closing.begin,
             "missing endobj for object " + std::to_string(out.number));
    }
    return true;
}

struct XrefSection {
    std::vector<XrefEntry> entries;
    Trailer trailer;
    bool has_trailer = false;
    std::optional<std::int64_t> prev;
    std::size_t xref_offset = 0;
    std::size_t end_offset = 0;  // past the %%EOF (or last parsed token)
};

bool parse_xref_section(std::string_view bytes, std::size_t offset, Diagnostics& diags,
                        XrefSection& out) {
    ObjectParser parser(bytes, diags);
    parser.lexer.seek(offset);
    Token kw = parser.lexer.next();
    if (!kw.is_keyword("xref")) return false;

    std::size_t total = 0;
    for (;;) {
        const Token& p = parser.lexer.peek();
        if (p.kind != Token::Kind::Integer) break;
        Token start = parser.lexer.next();
        Token count = parser.lexer.next();
        if (count.kind != Token::Kind::Integer || start.int_value < 0 || count.int_value < 0) {
            diag(diags, start.begin, "malformed x-ref subsection header");
            return false;
        }
        total += std::size_t(count.int_value);
        if (total > kMaxObjectCount) {
            diag(diags, start.begin, "x-ref entry count exceeds object cap");
            return false;
        }
        for (std::int64_t i = 0; i < count.int_value; ++i) {
            Token off = parser.lexer.next();
            Token gen = parser.lexer.next();
            Token flag = parser.lexer.next();
            if (off.kind != Token::Kind::Integer || gen.kind != Token::Kind::Integer ||
                flag.kind != Token::Kind::Keyword || (flag.text != "n" && flag.text != "f")) {
                diag(diags, off.begin, "malformed x-ref entry; section abandoned");
                return !out.entries.empty();
            }
            XrefEntry e;
            e.number = start.int_value + i;
            e.offset = std::uint64_t(off.int_value);
            e.generation = gen.int_value;
            e.in_use = flag.text == "n";
            out.entries.push_back(e);
        }
    }

    const Token& t = parser.lexer.peek();
    if (t.is_keyword("trailer")) {
        parser.lexer.next();
        Token open = parser.lexer.next();
        if (open.kind == Token::Kind::DictOpen) {
            out.trailer.dict = parser.parse_dict_body(0);
            out.has_trailer = true;
            if (const PdfValue* prev = out.trailer.dict.find("Prev"); prev && prev->is_int())
                out.prev = prev->int_value();
        } else {
            diag(diags, open.begin, "trailer keyword without a dictionary");
        }
    } else {
        diag(diags, t.begin, "x-ref table without trailer");
    }

    // Consume startxref NNN %%EOF when present so the revision extent is known.
    out.end_offset = parser.lexer.pos();
    if (parser.lexer.peek().is_keyword("startxref")) {
        parser.lexer.next();
        Token n = parser.lexer.next();
        out.end_offset = n.end;
        if (parser.lexer.peek().kind == Token::Kind::EofMarker)
            out.end_offset = parser.lexer.next().end;
    }
    return true;
}

std::optional<std::size_t> find_last_startxref(std::string_view bytes, Diagnostics& diags) {
    std::size_t window_begin = bytes.size() > kStartxrefWindow ? bytes.size() - kStartxrefWindow : 0;
    std::size_t at = bytes.rfind("startxref");
    if (at == std::string_view::npos || at < window_begin) return std::nullopt;
    Lexer lexer(bytes, at);
    Token kw = lexer.next();
    Token n = lexer.next();
    if (!kw.is_keyword("startxref") || n.kind != Token::Kind::Integer || n.int_value < 0) {
        diag(diags, at, "startxref without a valid offset");
        return std::nullopt;
    }
    return std::size_t(n.int_value);
}

void index_strict(Document& doc) {
    for (std::size_t r = 0; r < doc.revisions.size(); ++r) {
        const Revision& rev = doc.revisions[r];
        for (const XrefEntry& e : rev.xref) {
            if (!e.in_use) {
                doc.object_index[e.number] = {0, 0, false};
                continue;
            }
            bool found = false;
            for (std::size_t i = 0; i < rev.objects.size(); ++i) {
                if (rev.objects[i].number == e.number && rev.objects[i].byte_offset == e.offset) {
                    doc.object_index[e.number] = {r, i, true};
                    found = true;
                    break;
                }
            }
            if (!found)
                diag(doc.diagnostics, std::size_t(e.offset),
                     "dangling x-ref entry for object " + std::to_string(e.number));
        }
    }
}

void index_scavenge(Document& doc) {
    // Latest byte offset wins on duplicate numbers.
    for (std::size_t r = 0; r < doc.revisions.size(); ++r) {
        const Revision& rev = doc.revisions[r];
        for (std::size_t i = 0; i < rev.objects.size(); ++i) {
            const IndirectObject& obj = rev.objects[i];
            auto it = doc.object_index.find(obj.number);
            if (it != doc.object_index.end()) {
                const IndirectObject* held = doc.slot_object(it->second);
                if (held->byte_offset >= obj.byte_offset) continue;
            }
            doc.object_index[obj.number] = {r, i, true};
        }
    }
}

void decode_streams(Document& doc) {
    for (auto& rev : doc.revisions) {
        for (auto& obj : rev.objects) {
            PdfStream* stream = obj.value.as_stream();
            if (!stream) continue;
            try {
                stream->decoded = decode_stream(*stream, &doc, &doc.diagnostics);
            } catch (const Error& e) {
                diag(doc.diagnostics, obj.byte_offset,
                     "object " + std::to_string(obj.number) + " stream not decoded: " + e.what());
            }
        }
    }
}

Document parse_scavenge(std::string_view bytes, const ParseOptions& options) {
    Document doc;
    doc.parse_mode = ParseMode::Scavenge;
    doc.source_bytes.assign(bytes);
    doc.header_version = parse_header(bytes);

    Revision rev;
    rev.begin_offset = 0;
    std::size_t content_end = 0;

    // Every delimiter-bounded "N G obj" header becomes an object, including
    // headers buried inside other objects' spans. A reader can be pointed at
    // such offsets through the x-ref, so the strict view must always be a
    // subset of this one; over-reporting is the nature of byte scanning.
    std::size_t search = 0;
    while (rev.objects.size() < kMaxObjectCount) {
        std::size_t at = bytes.find("obj", search);
        if (at == std::string_view::npos) break;
        search = at + 1;
        if (at + 3 < bytes.size()) {
            unsigned char boundary = bytes[at + 3];
            if (!is_pdf_whitespace(boundary) && !is_pdf_delimiter(boundary)) continue;
        }
        // Backtrack over "N G" immediately before the keyword. "G" may abut
        // "obj" directly: the lexer splits digits from letters either way.
        auto skip_ws_back = [&](std::size_t from) {
            std::size_t j = from;
            while (j > 0 && is_pdf_whitespace(bytes[j - 1])) --j;
            return j;
        };
        std::size_t gen_end = skip_ws_back(at);
        std::size_t gen_begin = gen_end;
        while (gen_begin > 0 && std::isdigit(static_cast<unsigned char>(bytes[gen_begin - 1])))
            --gen_begin;
        if (gen_begin == gen_end) continue;
        std::size_t num_end = skip_ws_back(gen_begin);
        if (num_end == gen_begin) continue;
        std::size_t num_begin = num_end;
        while (num_begin > 0 && std::isdigit(static_cast<unsigned char>(bytes[num_begin - 1])))
            --num_begin;
        if (num_begin == num_end) continue;
        // No left-boundary demand: a reader pointed just past leading junk
        // still parses the header, so the scan must accept it too.

        ObjectParser parser(bytes, doc.diagnostics);
        IndirectObject obj;
        if (!parser.parse_indirect(num_begin, obj)) continue;
        content_end = std::max(content_end, parser.lexer.pos());
        rev.objects.push_back(std::move(obj));
    }
    if (rev.objects.size() >= kMaxObjectCount)
        diag(doc.diagnostics, 0, "object cap reached; scan stopped");

    // Synthesize x-ref entries so downstream code sees a uniform Revision.
    for (const IndirectObject& obj : rev.objects)
        rev.xref.push_back({obj.number, obj.byte_offset, obj.generation, true});

    // Attach the last parsable trailer, if any.
    std::size_t tpos = bytes.rfind("trailer");
    while (tpos != std::string_view::npos) {
        ObjectParser parser(bytes, doc.diagnostics);
        parser.lexer.seek(tpos + 7);
        Token open = parser.lexer.next();
        if (open.kind == Token::Kind::DictOpen) {
            rev.trailer.dict = parser.parse_dict_body(0);
            content_end = std::max(content_end, parser.lexer.pos());
            break;
        }
        if (tpos == 0) break;
        tpos = bytes.rfind("trailer", tpos - 1);
    }
    if (rev.trailer.dict.entries.empty())
        diag(doc.diagnostics, 0, "no trailer recovered in scavenge mode");

    std::size_t eof = bytes.rfind("%%EOF");
    if (eof != std::string_view::npos) content_end = std::max(content_end, eof + 5);
    rev.end_offset = content_end;

    doc.revisions.push_back(std::move(rev));
    index_scavenge(doc);
    if (options.eager_decode) decode_streams(doc);
    return doc;
}

Document parse_strict(std::string_view bytes, const ParseOptions& options) {
    Document doc;
    doc.parse_mode = ParseMode::Strict;
    doc.source_bytes.assign(bytes);
    doc.header_version = parse_header(bytes);

    auto startxref = find_last_startxref(bytes, doc.diagnostics);
    if (!startxref) {
        if (options.scavenge_fallback) return parse_scavenge(bytes, options);
        throw Error(Errc::NoTrailer, "no startxref found in the final " +
                                         std::to_string(kStartxrefWindow) + " bytes");
    }
    if (*startxref >= bytes.size())
        throw Error(Errc::TruncatedFile, "startxref points past end of file");

    // Follow the /Prev chain newest-first; each offset may be visited once.
    std::vector<XrefSection> sections;
    std::set<std::size_t> visited;
    std::optional<std::size_t> cursor = *startxref;
    while (cursor) {
        if (!visited.insert(*cursor).second) {
            diag(doc.diagnostics, *cursor, "/Prev loop detected; chain terminated");
            break;
        }
        XrefSection section;
        if (!parse_xref_section(bytes, *cursor, doc.diagnostics, section)) {
            if (sections.empty()) {
                if (options.scavenge_fallback) return parse_scavenge(bytes, options);
                throw Error(Errc::NoTrailer,
                            "no x-ref table at offset " + std::to_string(*cursor));
            }
            diag(doc.diagnostics, *cursor, "broken /Prev target; chain terminated");
            break;
        }
        section.xref_offset = *cursor;
        cursor.reset();
        if (section.prev && *section.prev >= 0 && std::size_t(*section.prev) < bytes.size())
            cursor = std::size_t(*section.prev);
        else if (section.prev)
            diag(doc.diagnostics, section.xref_offset, "/Prev offset out of bounds");
        sections.push_back(std::move(section));
    }

    // Oldest revision first.
    std::reverse(sections.begin(), sections.end());
    for (XrefSection& section : sections) {
        Revision rev;
        rev.trailer = std::move(section.trailer);
        rev.xref = std::move(section.entries);
        rev.xref_offset = section.xref_offset;
        rev.end_offset = section.end_offset;

        std::size_t begin = rev.xref_offset;
        ObjectParser parser(bytes, doc.diagnostics);
        for (const XrefEntry& e : rev.xref) {
            if (!e.in_use) continue;
            if (e.offset >= bytes.size()) {
                diag(doc.diagnostics, std::size_t(e.offset),
                     "x-ref offset for object " + std::to_string(e.number) +
                         " is past end of file");
                continue;
            }
            IndirectObject obj;
            if (!parser.parse_indirect(std::size_t(e.offset), obj)) {
                diag(doc.diagnostics, std::size_t(e.offset),
                     "no object header at x-ref offset for object " + std::to_string(e.number));
                continue;
            }
            if (obj.number != e.number)
                diag(doc.diagnostics, std::size_t(e.offset),
                     "x-ref names object " + std::to_string(e.number) + " but bytes hold " +
                         std::to_string(obj.number));
            begin = std::min(begin, obj.byte_offset);
            rev.objects.push_back(std::move(obj));
        }
        rev.begin_offset = doc.revisions.empty() ? 0 : begin;
        doc.revisions.push_back(std::move(rev));
    }

    if (doc.revisions.empty()) {
        if (options.scavenge_fallback) return parse_scavenge(bytes, options);
        throw Error(Errc::NoTrailer, "no revision recovered");
    }

    index_strict(doc);
    if (options.eager_decode) decode_streams(doc);
    return doc;
}

}  // namespace

std::string parse_header(std::string_view bytes) {
    std::string_view window = bytes.substr(0, std::min(bytes.size(), kHeaderWindow));
    std::size_t at = 0;
    while ((at = window.find("%PDF-", at)) != std::string_view::npos) {
        std::size_t p = at + 5;
        std::size_t major_begin = p;
        while (p < window.size() && std::isdigit(static_cast<unsigned char>(window[p]))) ++p;
        if (p > major_begin && p < window.size() && window[p] == '.') {
            std::size_t minor_begin = ++p;
            while (p < window.size() && std::isdigit(static_cast<unsigned char>(window[p]))) ++p;
            if (p > minor_begin)
                return std::string(window.substr(major_begin, p - major_begin));
        }
        at += 5;
    }
    throw Error(Errc::NotAPdf, "no %PDF-X.Y marker in the first " +
                                   std::to_string(kHeaderWindow) + " bytes");
}

Document parse_document(std::string_view bytes, ParseMode mode, const ParseOptions& options) {
    if (bytes.empty()) throw Error(Errc::NotAPdf, "empty input");
    if (bytes.size() > kMaxFileBytes)
        throw Error(Errc::FileTooLarge, "input exceeds the 64 MiB cap");
    return mode == ParseMode::Strict ? parse_strict(bytes, options)
                                     : parse_scavenge(bytes, options);
}

}  // namespace pdfscout
