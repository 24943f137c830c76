#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pyfluency {

/// Raised internally by the lexer and parser; converted to a ParseFailure value
/// at the parse_source boundary.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(int line, int col, std::string_view message)
        : std::runtime_error(std::string(message) + " (line " + std::to_string(line) + ")"),
          line_(line),
          col_(col),
          message_(message) {}
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    int col_;
    std::string message_;
};

enum class TokenType : std::uint8_t {
    Name,
    Keyword,
    Number,
    Str,
    Op,
    Newline,
    Indent,
    Dedent,
    EndOfFile,
};

struct Token {
    TokenType type = TokenType::EndOfFile;
    std::string text;   // raw source text of the token
    std::string value;  // identifier text, or decoded string contents
    int line = 1;       // 1-based
    int col = 0;        // 0-based byte offset within the line
    int end_line = 1;
    int end_col = 0;    // offset one past the last byte, on end_line
    bool is_raw = false;
    bool is_bytes = false;
    bool is_fstring = false;

    bool is_op(std::string_view s) const { return type == TokenType::Op && text == s; }
    bool is_keyword(std::string_view s) const { return type == TokenType::Keyword && text == s; }
};

inline bool is_python_keyword(std::string_view word) {
    static const std::unordered_set<std::string_view> keywords = {
        "False",  "None",   "True",    "and",      "as",       "assert", "async",
        "await",  "break",  "class",   "continue", "def",      "del",    "elif",
        "else",   "except", "finally", "for",      "from",     "global", "if",
        "import", "in",     "is",      "lambda",   "nonlocal", "not",    "or",
        "pass",   "raise",  "return",  "try",      "while",    "with",   "yield"};
    return keywords.count(word) > 0;
}

/// Validates that `text` is well-formed UTF-8. Returns the 1-based line of the
/// first bad byte, or 0 when the text is clean.
inline int utf8_error_line(std::string_view text) {
    int line = 1;
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '\n') ++line;
        size_t extra;
        if (c < 0x80) extra = 0;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2) extra = 1;
        else if ((c & 0xF0) == 0xE0) extra = 2;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4) extra = 3;
        else return line;
        for (size_t k = 1; k <= extra; ++k) {
            if (i + k >= text.size()) return line;
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return line;
        }
        i += extra + 1;
    }
    return 0;
}

/// Python 3 tokenizer: emits logical-line NEWLINE, INDENT/DEDENT pairs, names,
/// keywords, numbers, strings (prefix-aware) and operators. Comments and blank
/// lines disappear; lines are joined inside brackets and after a backslash.
class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {
        if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    }

    std::vector<Token> tokenize() {
        std::vector<Token> tokens;
        bool at_line_start = true;
        bool line_has_tokens = false;

        while (true) {
            if (at_line_start && paren_depth_ == 0) {
                int indent = measure_indent();
                skip_inline_trivia();
                if (pos_ >= src_.size()) break;
                if (int n = newline_width(pos_)) {
                    advance_newline(n);
                    continue;  // blank or comment-only line
                }
                apply_indent(indent, tokens);
                at_line_start = false;
            }

            skip_inline_trivia();
            if (pos_ >= src_.size()) break;

            char c = src_[pos_];
            if (int n = newline_width(pos_)) {
                if (paren_depth_ > 0) {
                    advance_newline(n);
                    continue;
                }
                Token tok = make_token(TokenType::Newline, pos_, pos_ + n);
                advance_newline(n);
                tokens.push_back(std::move(tok));
                at_line_start = true;
                line_has_tokens = false;
                continue;
            }
            if (c == '\\') {
                if (int n = newline_width(pos_ + 1)) {
                    ++pos_;
                    advance_newline(n);
                    continue;
                }
                throw SyntaxError(line_, col(), "unexpected character after line continuation");
            }

            if (is_ident_start(c)) {
                tokens.push_back(lex_name_or_prefixed_string());
            } else if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
                tokens.push_back(lex_number());
            } else if (c == '\'' || c == '"') {
                tokens.push_back(lex_string(pos_, /*raw=*/false, /*bytes=*/false, /*f=*/false));
            } else {
                tokens.push_back(lex_operator());
            }
            line_has_tokens = true;
        }

        if (paren_depth_ > 0)
            throw SyntaxError(line_, col(), "unexpected end of file: unclosed bracket");
        if (line_has_tokens) {
            Token tok = make_token(TokenType::Newline, pos_, pos_);
            tokens.push_back(std::move(tok));
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            tokens.push_back(make_token(TokenType::Dedent, pos_, pos_));
        }
        tokens.push_back(make_token(TokenType::EndOfFile, pos_, pos_));
        return tokens;
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_hex(char c) {
        return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    }
    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
               static_cast<unsigned char>(c) >= 0x80;
    }
    static bool is_ident_cont(char c) { return is_ident_start(c) || is_digit(c); }

    char peek(size_t off = 0) const {
        return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
    }
    int col() const { return static_cast<int>(pos_ - line_start_); }

    int newline_width(size_t at) const {
        if (at >= src_.size()) return 0;
        if (src_[at] == '\n') return 1;
        if (src_[at] == '\r') return (at + 1 < src_.size() && src_[at + 1] == '\n') ? 2 : 1;
        return 0;
    }

    void advance_newline(int width) {
        pos_ += width;
        ++line_;
        line_start_ = pos_;
    }

    void skip_inline_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\f') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && newline_width(pos_) == 0) ++pos_;
            } else {
                break;
            }
        }
    }

    int measure_indent() {
        int width = 0;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ') ++width;
            else if (c == '\t') width = (width / 8 + 1) * 8;
            else if (c == '\f') width = 0;
            else break;
            ++pos_;
        }
        return width;
    }

    void apply_indent(int indent, std::vector<Token>& tokens) {
        if (indent > indents_.back()) {
            indents_.push_back(indent);
            tokens.push_back(make_token(TokenType::Indent, line_start_, pos_));
            return;
        }
        while (indent < indents_.back()) {
            indents_.pop_back();
            tokens.push_back(make_token(TokenType::Dedent, pos_, pos_));
        }
        if (indent != indents_.back())
            throw SyntaxError(line_, col(), "unindent does not match any outer indentation level");
    }

    Token make_token(TokenType type, size_t begin, size_t end) {
        Token tok;
        tok.type = type;
        tok.text.assign(src_.substr(begin, end - begin));
        tok.line = line_;
        tok.col = static_cast<int>(begin - line_start_);
        tok.end_line = line_;
        tok.end_col = static_cast<int>(end - line_start_);
        return tok;
    }

    Token lex_name_or_prefixed_string() {
        size_t begin = pos_;
        while (pos_ < src_.size() && is_ident_cont(src_[pos_])) ++pos_;
        std::string_view word = src_.substr(begin, pos_ - begin);

        if (word.size() <= 2 && pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"')) {
            bool raw = false, bytes = false, fstr = false, unicode = false, valid = true;
            for (char c : word) {
                switch (c) {
                case 'r': case 'R':
                    if (raw) valid = false;
                    raw = true;
                    break;
                case 'b': case 'B':
                    if (bytes) valid = false;
                    bytes = true;
                    break;
                case 'f': case 'F':
                    if (fstr) valid = false;
                    fstr = true;
                    break;
                case 'u': case 'U':
                    if (unicode) valid = false;
                    unicode = true;
                    break;
                default:
                    valid = false;
                }
            }
            if (valid && (bytes && fstr)) valid = false;
            if (valid && unicode && (raw || bytes || fstr)) valid = false;
            if (!valid)
                throw SyntaxError(line_, static_cast<int>(begin - line_start_),
                                  "invalid string prefix '" + std::string(word) + "'");
            return lex_string(begin, raw, bytes, fstr);
        }

        Token tok;
        tok.type = is_python_keyword(word) ? TokenType::Keyword : TokenType::Name;
        tok.text.assign(word);
        tok.value.assign(word);
        tok.line = line_;
        tok.col = static_cast<int>(begin - line_start_);
        tok.end_line = line_;
        tok.end_col = static_cast<int>(pos_ - line_start_);
        return tok;
    }

    Token lex_string(size_t begin, bool raw, bool bytes, bool fstr) {
        Token tok;
        tok.type = TokenType::Str;
        tok.line = line_;
        tok.col = static_cast<int>(begin - line_start_);
        tok.is_raw = raw;
        tok.is_bytes = bytes;
        tok.is_fstring = fstr;

        char quote = src_[pos_];
        bool triple = peek(1) == quote && peek(2) == quote;
        pos_ += triple ? 3 : 1;

        std::string value;
        while (true) {
            if (pos_ >= src_.size())
                throw SyntaxError(tok.line, tok.col, "unterminated string literal");
            char c = src_[pos_];
            if (c == '\\') {
                if (pos_ + 1 >= src_.size())
                    throw SyntaxError(tok.line, tok.col, "unterminated string literal");
                if (int n = newline_width(pos_ + 1)) {
                    if (raw) value += '\\', value += '\n';
                    ++pos_;
                    advance_newline(n);
                    continue;
                }
                char esc = src_[pos_ + 1];
                if (raw) {
                    value += '\\';
                    value += esc;
                } else {
                    append_escape(value, esc);
                }
                pos_ += 2;
                continue;
            }
            if (c == quote) {
                if (!triple) {
                    ++pos_;
                    break;
                }
                if (peek(1) == quote && peek(2) == quote) {
                    pos_ += 3;
                    break;
                }
                value += c;
                ++pos_;
                continue;
            }
            if (int n = newline_width(pos_)) {
                if (!triple)
                    throw SyntaxError(line_, col(), "EOL while scanning string literal");
                value += '\n';
                advance_newline(n);
                continue;
            }
            value += c;
            ++pos_;
        }

        tok.text.assign(src_.substr(begin, pos_ - begin));
        tok.value = std::move(value);
        tok.end_line = line_;
        tok.end_col = static_cast<int>(pos_ - line_start_);
        return tok;
    }

    void append_escape(std::string& out, char esc) {
        switch (esc) {
        case 'n': out += '\n'; return;
        case 't': out += '\t'; return;
        case 'r': out += '\r'; return;
        case 'a': out += '\a'; return;
        case 'b': out += '\b'; return;
        case 'f': out += '\f'; return;
        case 'v': out += '\v'; return;
        case '\\': out += '\\'; return;
        case '\'': out += '\''; return;
        case '"': out += '"'; return;
        case '0': case '1': case '2': case '3':
        case '4': case '5': case '6': case '7': {
            int v = esc - '0';
            for (int k = 0; k < 2; ++k) {
                char digit = peek(2);  // pos_ advances as digits are consumed
                if (digit < '0' || digit > '7') break;
                v = v * 8 + (digit - '0');
                ++pos_;
            }
            out += static_cast<char>(v & 0xFF);
            return;
        }
        case 'x': {
            if (is_hex(peek(2)) && is_hex(peek(3))) {
                int v = std::stoi(std::string(src_.substr(pos_ + 2, 2)), nullptr, 16);
                out += static_cast<char>(v);
                pos_ += 2;
                return;
            }
            throw SyntaxError(line_, col(), "invalid \\x escape");
        }
        default:
            // \N{...}, \u, \U and unknown escapes: keep the raw spelling, the
            // decoded value only has to be faithful for plain ASCII content.
            out += '\\';
            out += esc;
            return;
        }
    }

    Token lex_number() {
        size_t begin = pos_;
        bool is_int_like = true;

        if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            pos_ += 2;
            if (!is_hex(peek()) && peek() != '_')
                throw SyntaxError(line_, col(), "invalid hexadecimal literal");
            while (is_hex(peek()) || peek() == '_') ++pos_;
        } else if (src_[pos_] == '0' && (peek(1) == 'o' || peek(1) == 'O')) {
            pos_ += 2;
            while ((peek() >= '0' && peek() <= '7') || peek() == '_') ++pos_;
        } else if (src_[pos_] == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
            pos_ += 2;
            while (peek() == '0' || peek() == '1' || peek() == '_') ++pos_;
        } else {
            bool saw_dot = false, saw_exp = false, leading_zero = src_[pos_] == '0';
            bool nonzero_digit = false;
            while (true) {
                char c = peek();
                if (is_digit(c) || c == '_') {
                    if (c > '0' && c <= '9') nonzero_digit = true;
                    ++pos_;
                } else if (c == '.' && !saw_dot && !saw_exp) {
                    saw_dot = true;
                    is_int_like = false;
                    ++pos_;
                } else if ((c == 'e' || c == 'E') && !saw_exp && is_digit_or_sign_follows()) {
                    saw_exp = true;
                    is_int_like = false;
                    ++pos_;
                    if (peek() == '+' || peek() == '-') ++pos_;
                } else {
                    break;
                }
            }
            if (is_int_like && leading_zero && nonzero_digit)
                throw SyntaxError(line_, static_cast<int>(begin - line_start_),
                                  "leading zeros in decimal integer literals are not permitted");
        }
        if (peek() == 'j' || peek() == 'J') ++pos_;

        Token tok = make_token(TokenType::Number, begin, pos_);
        tok.value = tok.text;
        return tok;
    }

    bool is_digit_or_sign_follows() const {
        char next = peek(1);
        if (is_digit(next)) return true;
        return (next == '+' || next == '-') && is_digit(peek(2));
    }

    Token lex_operator() {
        static const std::vector<std::string_view> ops = {
            "**=", "//=", ">>=", "<<=", "...",
            "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", "+=", "-=",
            "*=", "/=", "%=", "&=", "|=", "^=", "@=", ":=",
            "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">",
            "(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "="};
        for (std::string_view op : ops) {
            if (src_.substr(pos_, op.size()) == op) {
                if (op == "(" || op == "[" || op == "{") ++paren_depth_;
                if (op == ")" || op == "]" || op == "}") {
                    if (paren_depth_ == 0)
                        throw SyntaxError(line_, col(), "unmatched '" + std::string(op) + "'");
                    --paren_depth_;
                }
                Token tok = make_token(TokenType::Op, pos_, pos_ + op.size());
                pos_ += op.size();
                return tok;
            }
        }
        throw SyntaxError(line_, col(),
                          "invalid character '" + std::string(1, src_[pos_]) + "'");
    }

    std::string_view src_;
    size_t pos_ = 0;
    size_t line_start_ = 0;
    int line_ = 1;
    int paren_depth_ = 0;
    std::vector<int> indents_ = {0};
};

}  // namespace pyfluency
