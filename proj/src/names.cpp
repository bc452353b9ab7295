#include "pdfscout/names.hpp"

namespace pdfscout {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

bool is_delimiter(unsigned char c) {
    switch (c) {
        case '(': case ')': case '<': case '>': case '[': case ']':
        case '{': case '}': case '/': case '%':
            return true;
        default:
            return false;
    }
}

}  // namespace

NormalizedName normalize_name(std::string_view raw) {
    NormalizedName out;
    out.text.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c != '#') {
            out.text.push_back(c);
            continue;
        }
        int hi = (i + 1 < raw.size()) ? hex_digit(raw[i + 1]) : -1;
        int lo = (i + 2 < raw.size()) ? hex_digit(raw[i + 2]) : -1;
        if (hi >= 0 && lo >= 0) {
            out.text.push_back(char(hi * 16 + lo));
            i += 2;
        } else {
            out.text.push_back('#');
            out.malformed_escape = true;
        }
    }
    return out;
}

std::string escape_name(std::string_view normalized) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(normalized.size());
    for (unsigned char c : normalized) {
        bool regular = c > 0x20 && c < 0x7f && c != '#' && !is_delimiter(c);
        if (regular) {
            out.push_back(char(c));
        } else {
            out.push_back('#');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

}  // namespace pdfscout
