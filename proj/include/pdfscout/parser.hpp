#pragma once

#include <string>
#include <string_view>

#include "pdfscout/pdf_model.hpp"

namespace pdfscout {

struct ParseOptions {
    // When a Strict parse cannot recover a startxref/trailer, retry in
    // Scavenge mode instead of throwing NoTrailer.
    bool scavenge_fallback = false;
    // Decode supported stream filters during parsing so Stream::decoded is
    // ready for the analyses.
    bool eager_decode = true;
};

// "X.Y" from the first %PDF-X.Y marker within the first 1024 bytes.
// Throws NotAPdf when the window holds no marker.
std::string parse_header(std::string_view bytes);

// Strict follows startxref -> x-ref -> /Prev chain and consumes exactly the
// in-use offsets, the way a rendering reader would. Scavenge byte-scans for
// "N G obj" headers regardless of the x-ref, the way custom pre-processors
// do. Recoverable malformations become diagnostics, not failures.
Document parse_document(std::string_view bytes, ParseMode mode, const ParseOptions& options = {});

// Scan limits, shared with the injectors.
inline constexpr std::size_t kMaxFileBytes = 64ull << 20;
inline constexpr std::size_t kMaxObjectCount = 1'000'000;
inline constexpr std::size_t kStartxrefWindow = 2048;
inline constexpr std::size_t kHeaderWindow = 1024;

}  // namespace pdfscout
