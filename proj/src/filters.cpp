#include "pdfscout/filters.hpp"

#include <zlib.h>

#include <vector>

namespace pdfscout {

namespace {

constexpr std::size_t kMaxDecodedBytes = 16ull << 20;

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

bool is_ws(char c) {
    return c == '\0' || c == '\t' || c == '\n' || c == '\f' || c == '\r' || c == ' ';
}

}  // namespace

FilterKind classify_filter(std::string_view name) {
    if (name == "FlateDecode" || name == "Fl") return {FilterKind::FlateDecode, std::string(name)};
    if (name == "ASCIIHexDecode" || name == "AHx")
        return {FilterKind::AsciiHexDecode, std::string(name)};
    return {FilterKind::Unsupported, std::string(name)};
}

std::string flate_decode(std::string_view data) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw Error(Errc::CorruptStream, "inflateInit failed");

    std::string out;
    std::vector<unsigned char> chunk(64 * 1024);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    int rc = Z_OK;
    do {
        zs.next_out = chunk.data();
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw Error(Errc::CorruptStream, "inflate failed (zlib rc " + std::to_string(rc) + ")");
        }
        out.append(reinterpret_cast<char*>(chunk.data()), chunk.size() - zs.avail_out);
        if (out.size() > kMaxDecodedBytes) {
            inflateEnd(&zs);
            throw Error(Errc::CorruptStream, "decoded stream exceeds 16 MiB cap");
        }
    } while (rc != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error(Errc::CorruptStream, "truncated deflate stream");
    return out;
}

std::string flate_encode(std::string_view data) {
    uLongf bound = compressBound(static_cast<uLong>(data.size()));
    std::string out(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                  reinterpret_cast<const Bytef*>(data.data()), static_cast<uLong>(data.size()),
                  Z_DEFAULT_COMPRESSION) != Z_OK)
        throw Error(Errc::CorruptStream, "deflate failed");
    out.resize(bound);
    return out;
}

std::string ascii_hex_decode(std::string_view data) {
    std::string out;
    out.reserve(data.size() / 2);
    int hi = -1;
    for (char c : data) {
        if (c == '>') break;
        if (is_ws(c)) continue;
        int d = hex_digit(c);
        if (d < 0) throw Error(Errc::CorruptStream, "non-hex byte in ASCIIHexDecode data");
        if (hi < 0) {
            hi = d;
        } else {
            out.push_back(char(hi * 16 + d));
            hi = -1;
        }
    }
    if (hi >= 0) out.push_back(char(hi * 16));
    return out;
}

std::string ascii_hex_encode(std::string_view data) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(data.size() * 2 + 1);
    for (unsigned char c : data) {
        out.push_back(hex[c >> 4]);
        out.push_back(hex[c & 0xf]);
    }
    out.push_back('>');
    return out;
}

std::string decode_stream(const PdfStream& stream, const Document* doc, Diagnostics* diags) {
    Diagnostics local;
    Diagnostics& sink = diags ? *diags : local;

    auto resolved = [&](const PdfValue* v) -> const PdfValue* {
        if (!v) return nullptr;
        if (!v->is_ref()) return v;
        if (!doc) return nullptr;
        return resolve_deep(*doc, *v, 32);
    };

    const PdfValue* filter = resolved(stream.dict.find("Filter"));
    if (!filter || filter->is_null()) {
        // No filter: honor /Length when it disagrees with the scanned extent.
        std::string out = stream.raw;
        const PdfValue* length = resolved(stream.dict.find("Length"));
        if (length && length->is_int()) {
            auto want = *length->int_value();
            if (want >= 0 && std::size_t(want) != out.size()) {
                diag(sink, 0,
                     "/Length " + std::to_string(want) + " disagrees with scanned extent " +
                         std::to_string(out.size()));
                out.resize(std::size_t(want), '\0');
            }
        }
        return out;
    }

    std::vector<std::string> chain;
    if (const auto* name = filter->as_name()) {
        chain.push_back(name->text);
    } else if (const auto* arr = filter->as_array()) {
        for (const auto& item : *arr) {
            const PdfValue* f = resolved(&item);
            if (f && f->as_name()) {
                chain.push_back(f->as_name()->text);
            } else {
                throw Error(Errc::UnsupportedFilter, "non-name entry in /Filter array");
            }
        }
    } else {
        throw Error(Errc::UnsupportedFilter, "/Filter is neither a name nor an array");
    }

    std::string data = stream.raw;
    for (const std::string& name : chain) {
        FilterKind kind = classify_filter(name);
        switch (kind.kind) {
            case FilterKind::FlateDecode:
                data = flate_decode(data);
                break;
            case FilterKind::AsciiHexDecode:
                data = ascii_hex_decode(data);
                break;
            case FilterKind::Unsupported:
                throw Error(Errc::UnsupportedFilter, name);
        }
    }
    return data;
}

}  // namespace pdfscout
