#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pdfscout/errors.hpp"

namespace pdfscout {

struct Token {
    enum class Kind {
        Keyword,        // obj/endobj/stream/endstream/xref/trailer/startxref/R/true/false/null/...
        Integer,
        Real,
        LiteralString,  // decoded bytes
        HexString,      // decoded bytes
        Name,           // raw body after '/', escapes not yet applied
        ArrayOpen,
        ArrayClose,
        DictOpen,
        DictClose,
        EofMarker,      // %%EOF comment
        End,            // end of input
    };

    Kind kind = Kind::End;
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::int64_t int_value = 0;
    double real_value = 0.0;

    bool is_keyword(std::string_view kw) const { return kind == Kind::Keyword && text == kw; }
};

// Total lexer over untrusted bytes: unexpected input is diagnosed and skipped,
// never fatal. Byte spans of emitted tokens are non-overlapping and ordered.
class Lexer {
public:
    explicit Lexer(std::string_view bytes, std::size_t start = 0)
        : bytes_(bytes), pos_(start) {}

    Token next();
    const Token& peek();
    const Token& peek2();

    std::size_t pos() const;
    void seek(std::size_t pos);

    std::string_view bytes() const { return bytes_; }
    Diagnostics& diagnostics() { return diags_; }

private:
    Token lex();
    Token lex_number();
    Token lex_literal_string();
    Token lex_hex_string();
    Token lex_name();
    Token lex_keyword();

    std::string_view bytes_;
    std::size_t pos_ = 0;
    Diagnostics diags_;
    std::vector<Token> lookahead_;
};

// Convenience for tests and stream-content scanning: the full token list
// (End token excluded).
std::vector<Token> tokenize(std::string_view bytes, Diagnostics* diags = nullptr);

bool is_pdf_whitespace(unsigned char c);
bool is_pdf_delimiter(unsigned char c);

}  // namespace pdfscout
