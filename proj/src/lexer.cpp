#include "pdfscout/lexer.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace pdfscout {

bool is_pdf_whitespace(unsigned char c) {
    return c == '\0' || c == '\t' || c == '\n' || c == '\f' || c == '\r' || c == ' ';
}

bool is_pdf_delimiter(unsigned char c) {
    switch (c) {
        case '(': case ')': case '<': case '>': case '[': case ']':
        case '{': case '}': case '/': case '%':
            return true;
        default:
            return false;
    }
}

namespace {

bool is_regular(unsigned char c) { return !is_pdf_whitespace(c) && !is_pdf_delimiter(c); }

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

const Token& Lexer::peek() {
    if (lookahead_.empty()) lookahead_.push_back(lex());
    return lookahead_.front();
}

const Token& Lexer::peek2() {
    while (lookahead_.size() < 2) lookahead_.push_back(lex());
    return lookahead_[1];
}

Token Lexer::next() {
    if (!lookahead_.empty()) {
        Token t = lookahead_.front();
        lookahead_.erase(lookahead_.begin());
        return t;
    }
    return lex();
}

std::size_t Lexer::pos() const {
    return lookahead_.empty() ? pos_ : lookahead_.front().begin;
}

void Lexer::seek(std::size_t pos) {
    lookahead_.clear();
    pos_ = pos > bytes_.size() ? bytes_.size() : pos;
}

Token Lexer::lex() {
    // Skip whitespace and comments; %%EOF is surfaced as a token.
    while (pos_ < bytes_.size()) {
        unsigned char c = bytes_[pos_];
        if (is_pdf_whitespace(c)) {
            ++pos_;
            continue;
        }
        if (c == '%') {
            std::size_t start = pos_;
            std::size_t eol = pos_;
            while (eol < bytes_.size() && bytes_[eol] != '\n' && bytes_[eol] != '\r') ++eol;
            bool is_eof_marker = bytes_.compare(start, 5, "%%EOF") == 0;
            pos_ = eol;
            if (is_eof_marker) {
                Token t;
                t.kind = Token::Kind::EofMarker;
                t.text = "%%EOF";
                t.begin = start;
                t.end = start + 5;
                return t;
            }
            continue;
        }
        break;
    }

    Token t;
    t.begin = pos_;
    if (pos_ >= bytes_.size()) {
        t.kind = Token::Kind::End;
        t.end = pos_;
        return t;
    }

    unsigned char c = bytes_[pos_];
    switch (c) {
        case '[':
            ++pos_;
            t.kind = Token::Kind::ArrayOpen;
            t.end = pos_;
            return t;
        case ']':
            ++pos_;
            t.kind = Token::Kind::ArrayClose;
            t.end = pos_;
            return t;
        case '<':
            if (pos_ + 1 < bytes_.size() && bytes_[pos_ + 1] == '<') {
                pos_ += 2;
                t.kind = Token::Kind::DictOpen;
                t.end = pos_;
                return t;
            }
            return lex_hex_string();
        case '>':
            if (pos_ + 1 < bytes_.size() && bytes_[pos_ + 1] == '>') {
                pos_ += 2;
                t.kind = Token::Kind::DictClose;
                t.end = pos_;
                return t;
            }
            diag(diags_, pos_, "stray '>'");
            ++pos_;
            return lex();
        case '(':
            return lex_literal_string();
        case ')':
            diag(diags_, pos_, "stray ')'");
            ++pos_;
            return lex();
        case '/':
            return lex_name();
        case '{':
        case '}':
            diag(diags_, pos_, "postscript brace outside content stream");
            ++pos_;
            return lex();
        default:
            break;
    }

    if (c == '+' || c == '-' || c == '.' || (c >= '0' && c <= '9')) return lex_number();
    if (is_regular(c)) return lex_keyword();

    diag(diags_, pos_, "unexpected byte 0x" + std::to_string(int(c)));
    ++pos_;
    return lex();
}

Token Lexer::lex_number() {
    Token t;
    t.begin = pos_;
    std::size_t p = pos_;
    bool seen_dot = false;
    bool seen_digit = false;
    if (bytes_[p] == '+' || bytes_[p] == '-') ++p;
    while (p < bytes_.size()) {
        char c = bytes_[p];
        if (c >= '0' && c <= '9') {
            seen_digit = true;
            ++p;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
            ++p;
        } else {
            break;
        }
    }
    t.text.assign(bytes_.substr(t.begin, p - t.begin));
    t.end = p;
    pos_ = p;
    if (!seen_digit) {
        // A lone sign or dot; treat as junk.
        diag(diags_, t.begin, "malformed number '" + t.text + "'");
        return lex();
    }
    if (!seen_dot) {
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec == std::errc() && ptr == t.text.data() + t.text.size()) {
            t.kind = Token::Kind::Integer;
            t.int_value = value;
            t.real_value = double(value);
            return t;
        }
        // from_chars rejects a leading '+'; fall back for that and overflow.
        if (!t.text.empty() && t.text[0] == '+') {
            auto [p2, ec2] = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), value);
            if (ec2 == std::errc() && p2 == t.text.data() + t.text.size()) {
                t.kind = Token::Kind::Integer;
                t.int_value = value;
                t.real_value = double(value);
                return t;
            }
        }
        diag(diags_, t.begin, "integer overflow, parsed as real: " + t.text);
    }
    t.kind = Token::Kind::Real;
    t.real_value = std::strtod(t.text.c_str(), nullptr);
    return t;
}

Token Lexer::lex_literal_string() {
    Token t;
    t.kind = Token::Kind::LiteralString;
    t.begin = pos_;
    ++pos_;  // '('
    int depth = 1;
    std::string out;
    while (pos_ < bytes_.size()) {
        char c = bytes_[pos_++];
        if (c == '\\') {
            if (pos_ >= bytes_.size()) break;
            char e = bytes_[pos_++];
            switch (e) {
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 't': out.push_back('\t'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                case '(': out.push_back('('); break;
                case ')': out.push_back(')'); break;
                case '\\': out.push_back('\\'); break;
                case '\r':
                    if (pos_ < bytes_.size() && bytes_[pos_] == '\n') ++pos_;
                    break;  // line continuation
                case '\n':
                    break;  // line continuation
                default:
                    if (e >= '0' && e <= '7') {
                        int value = e - '0';
                        for (int i = 0; i < 2 && pos_ < bytes_.size(); ++i) {
                            char d = bytes_[pos_];
                            if (d < '0' || d > '7') break;
                            value = value * 8 + (d - '0');
                            ++pos_;
                        }
                        out.push_back(char(value & 0xff));
                    } else {
                        out.push_back(e);  // unknown escape: keep the char
                    }
            }
        } else if (c == '(') {
            ++depth;
            out.push_back(c);
        } else if (c == ')') {
            if (--depth == 0) {
                t.text = std::move(out);
                t.end = pos_;
                return t;
            }
            out.push_back(c);
        } else if (c == '\r') {
            // EOL inside a literal reads as a single \n.
            if (pos_ < bytes_.size() && bytes_[pos_] == '\n') ++pos_;
            out.push_back('\n');
        } else {
            out.push_back(c);
        }
    }
    diag(diags_, t.begin, "unterminated literal string");
    t.text = std::move(out);
    t.end = pos_;
    return t;
}

Token Lexer::lex_hex_string() {
    Token t;
    t.kind = Token::Kind::HexString;
    t.begin = pos_;
    ++pos_;  // '<'
    std::string out;
    int hi = -1;
    bool closed = false;
    while (pos_ < bytes_.size()) {
        char c = bytes_[pos_++];
        if (c == '>') {
            closed = true;
            break;
        }
        if (is_pdf_whitespace(c)) continue;
        int d = hex_digit(c);
        if (d < 0) {
            diag(diags_, pos_ - 1, "non-hex byte in hex string");
            continue;
        }
        if (hi < 0) {
            hi = d;
        } else {
            out.push_back(char(hi * 16 + d));
            hi = -1;
        }
    }
    if (hi >= 0) out.push_back(char(hi * 16));  // odd digit count: pad with 0
    if (!closed) diag(diags_, t.begin, "unterminated hex string");
    t.text = std::move(out);
    t.end = pos_;
    return t;
}

Token Lexer::lex_name() {
    Token t;
    t.kind = Token::Kind::Name;
    t.begin = pos_;
    ++pos_;  // '/'
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && is_regular(bytes_[pos_])) ++pos_;
    t.text.assign(bytes_.substr(start, pos_ - start));
    t.end = pos_;
    return t;
}

Token Lexer::lex_keyword() {
    Token t;
    t.kind = Token::Kind::Keyword;
    t.begin = pos_;
    while (pos_ < bytes_.size() && is_regular(bytes_[pos_])) ++pos_;
    t.text.assign(bytes_.substr(t.begin, pos_ - t.begin));
    t.end = pos_;
    return t;
}

std::vector<Token> tokenize(std::string_view bytes, Diagnostics* diags) {
    Lexer lexer(bytes);
    std::vector<Token> out;
    for (;;) {
        Token t = lexer.next();
        if (t.kind == Token::Kind::End) break;
        out.push_back(std::move(t));
    }
    if (diags) *diags = std::move(lexer.diagnostics());
    return out;
}

}  // namespace pdfscout
