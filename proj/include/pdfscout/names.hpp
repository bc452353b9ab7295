#pragma once

#include <string>
#include <string_view>

namespace pdfscout {

struct NormalizedName {
    std::string text;
    // Set when a '#' was not followed by two hex digits; the offending
    // characters are kept literally.
    bool malformed_escape = false;
};

// Decodes #xx hex escapes in a raw name-token body (the bytes after '/').
// Obfuscated files hide keywords behind escapes, so every comparison in the
// toolkit happens on this normalized form.
NormalizedName normalize_name(std::string_view raw);

// Re-encodes a normalized name for serialization: delimiters, whitespace,
// '#', and bytes outside 0x21..0x7e become #xx escapes.
std::string escape_name(std::string_view normalized);

}  // namespace pdfscout
