#pragma once

#include <string>

#include "pdfscout/pdf_model.hpp"

namespace pdfscout {

// One direct value in PDF syntax (no surrounding whitespace).
std::string write_value(const PdfValue& value);

// "N G obj ... endobj\n".
std::string write_indirect(const IndirectObject& object);

// Re-emits the document with fresh offsets and rebuilt classic x-ref tables
// (20-byte entries), one table per revision, /Prev-linked. Object numbers are
// never changed, so a Strict re-parse yields a value-equal effective graph.
std::string serialize(const Document& doc);

}  // namespace pdfscout
