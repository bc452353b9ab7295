#pragma once

#include <string>
#include <string_view>

#include "pdfscout/errors.hpp"
#include "pdfscout/pdf_model.hpp"

namespace pdfscout {

struct FilterKind {
    enum Kind { FlateDecode, AsciiHexDecode, Unsupported };
    Kind kind = Unsupported;
    std::string name;  // original filter name, kept for diagnostics
};

FilterKind classify_filter(std::string_view name);

// DEFLATE with zlib framing, as used by /FlateDecode. Output is capped at
// 16 MiB; blowing the cap reads as a corrupt (bomb) stream.
std::string flate_decode(std::string_view data);
std::string flate_encode(std::string_view data);

// Hex pairs, whitespace ignored, terminated by '>'; an odd trailing digit is
// padded with zero.
std::string ascii_hex_decode(std::string_view data);
std::string ascii_hex_encode(std::string_view data);

// Applies the stream's declared filter chain in order. `doc` resolves
// indirect /Length and /Filter values and may be null for standalone
// streams. With no filter, the raw bytes are truncated or zero-extended to
// /Length (mismatch diagnosed).
std::string decode_stream(const PdfStream& stream, const Document* doc,
                          Diagnostics* diags = nullptr);

}  // namespace pdfscout
