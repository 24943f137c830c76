#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pyfluency/ast.hpp"
#include "pyfluency/lexer.hpp"
#include "pyfluency/source.hpp"

namespace pyfluency {

namespace fstring_detail {
inline std::vector<Node> parse_fields(const Token& token);
}

/// Recursive-descent parser for Python 3.8 surface syntax. Produces the
/// generic Node tree; anything outside the grammar raises SyntaxError.
class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Node parse_module() {
        Node module;
        module.kind = NodeKind::Module;
        while (!at(TokenType::EndOfFile)) {
            if (at(TokenType::Newline)) {
                advance();
                continue;
            }
            parse_statement_into(module.children);
        }
        if (module.children.empty()) {
            module.line = 1;
            module.end_line = 1;
        } else {
            span_over_children(module);
        }
        return module;
    }

private:
    struct Pos {
        int line;
        int col;
    };

    // ---- token plumbing -------------------------------------------------

    const Token& cur() const { return tokens_[pos_]; }
    const Token& prev() const { return tokens_[pos_ - 1]; }
    const Token& ahead(size_t off) const {
        size_t i = pos_ + off;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at(TokenType t) const { return cur().type == t; }
    bool at_op(std::string_view s) const { return cur().is_op(s); }
    bool at_keyword(std::string_view s) const { return cur().is_keyword(s); }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }
    bool eat_op(std::string_view s) {
        if (!at_op(s)) return false;
        advance();
        return true;
    }
    bool eat_keyword(std::string_view s) {
        if (!at_keyword(s)) return false;
        advance();
        return true;
    }
    void expect_op(std::string_view s) {
        if (!eat_op(s)) fail("expected '" + std::string(s) + "'");
    }
    void expect_keyword(std::string_view s) {
        if (!eat_keyword(s)) fail("expected '" + std::string(s) + "'");
    }
    std::string expect_name() {
        if (!at(TokenType::Name)) fail("expected identifier");
        std::string name = cur().value;
        advance();
        return name;
    }
    void expect_newline() {
        if (!at(TokenType::Newline)) fail("invalid syntax");
        advance();
    }
    [[noreturn]] void fail(std::string_view message) const {
        throw SyntaxError(cur().line, cur().col, message);
    }

    // ---- span plumbing ---------------------------------------------------

    Pos here() const { return {cur().line, cur().col}; }

    Node make(NodeKind kind) const {
        Node n;
        n.kind = kind;
        return n;
    }

    /// Span from an explicit start position to the last consumed token.
    void close(Node& n, Pos start) {
        n.line = start.line;
        n.col = start.col;
        n.end_line = prev().end_line;
        n.end_col = prev().end_col;
    }

    /// Span from the start of an already-built child to the last consumed token.
    void close_from(Node& n, const Node& first) { close(n, {first.line, first.col}); }

    static void span_over_children(Node& n) {
        n.line = n.children.front().line;
        n.col = n.children.front().col;
        n.end_line = n.children.back().end_line;
        n.end_col = n.children.back().end_col;
    }

    struct DepthGuard {
        explicit DepthGuard(const Parser* p) : parser(p) {
            if (++p->depth_ > kMaxDepth)
                throw SyntaxError(p->cur().line, p->cur().col, "source is too deeply nested");
        }
        ~DepthGuard() { --parser->depth_; }
        const Parser* parser;
        static constexpr int kMaxDepth = 400;
    };

    // ---- statements -------------------------------------------------------

    void parse_statement_into(std::vector<Node>& out) {
        DepthGuard guard(this);
        if (at(TokenType::Keyword)) {
            std::string_view kw = cur().text;
            if (kw == "if") return out.push_back(parse_if("if"));
            if (kw == "while") return out.push_back(parse_while());
            if (kw == "for") return out.push_back(parse_for(false, here()));
            if (kw == "try") return out.push_back(parse_try());
            if (kw == "with") return out.push_back(parse_with(false, here()));
            if (kw == "def") return out.push_back(parse_funcdef(false, here()));
            if (kw == "class") return out.push_back(parse_classdef());
            if (kw == "async") return out.push_back(parse_async_stmt());
        }
        if (at_op("@")) return out.push_back(parse_decorated());
        if (looks_like_match_statement()) return out.push_back(parse_match());
        parse_simple_stmt_line(out);
    }

    /// 'match' is a soft keyword: treat it as a statement only when followed
    /// by something that can start an expression and the line ends in ':'.
    bool looks_like_match_statement() const {
        if (!(at(TokenType::Name) && cur().text == "match")) return false;
        const Token& next = ahead(1);
        bool expr_start = next.type == TokenType::Name || next.type == TokenType::Number ||
                          next.type == TokenType::Str || keyword_starts_expression(next) ||
                          next.is_op("(") || next.is_op("[") || next.is_op("{") ||
                          next.is_op("-") || next.is_op("+") || next.is_op("~") ||
                          next.is_op("*");
        if (!expr_start) return false;
        for (size_t off = 1;; ++off) {
            const Token& token = ahead(off);
            if (token.type == TokenType::Newline || token.type == TokenType::EndOfFile)
                return off >= 2 && ahead(off - 1).is_op(":");
        }
    }

    /// Match statement with patterns parsed as expressions; case bodies use
    /// the regular suite machinery.
    Node parse_match() {
        Pos start = here();
        advance();  // 'match'
        Node n = make(NodeKind::Match);
        n.children.push_back(parse_expr_sequence(/*allow_star=*/true));
        expect_op(":");
        expect_newline();
        if (!at(TokenType::Indent)) fail("expected an indented block after 'match'");
        advance();
        bool saw_case = false;
        while (at(TokenType::Name) && cur().text == "case") {
            saw_case = true;
            n.children.push_back(parse_match_case());
        }
        if (!saw_case) fail("expected 'case' block inside 'match'");
        if (!at(TokenType::Dedent)) fail("expected 'case' block inside 'match'");
        advance();
        close_clause(n, start);
        return n;
    }

    Node parse_match_case() {
        Pos start = here();
        advance();  // 'case'
        Node n = make(NodeKind::MatchCase);
        n.children.push_back(parse_case_pattern());
        if (eat_keyword("as")) {
            Node binding = make(NodeKind::AsTarget);
            binding.text = expect_name();
            Node pattern = std::move(n.children.back());
            n.children.pop_back();
            binding.line = pattern.line;
            binding.col = pattern.col;
            binding.end_line = prev().end_line;
            binding.end_col = prev().end_col;
            binding.children.push_back(std::move(pattern));
            n.children.push_back(std::move(binding));
        }
        if (at_keyword("if")) {
            Pos guard_start = here();
            advance();
            Node guard = make(NodeKind::CompIf);
            guard.children.push_back(parse_namedexpr_test());
            close(guard, guard_start);
            n.children.push_back(std::move(guard));
        }
        n.children.push_back(parse_suite());
        close_clause(n, start);
        return n;
    }

    /// Patterns are expression-shaped (literals, names, class calls, displays,
    /// '|' alternation); ternaries never appear, so stop at bitwise-or level.
    Node parse_case_pattern() {
        Pos start = here();
        Node first = parse_expr_or_star();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (sequence_ended()) break;
            tuple.children.push_back(parse_expr_or_star());
        }
        close(tuple, start);
        return tuple;
    }

    Node parse_async_stmt() {
        Pos start = here();
        expect_keyword("async");
        if (at_keyword("def")) return parse_funcdef(true, start);
        if (at_keyword("for")) return parse_for(true, start);
        if (at_keyword("with")) return parse_with(true, start);
        fail("expected 'def', 'for' or 'with' after 'async'");
    }

    void parse_simple_stmt_line(std::vector<Node>& out) {
        out.push_back(parse_small_stmt());
        while (eat_op(";")) {
            if (at(TokenType::Newline)) break;
            out.push_back(parse_small_stmt());
        }
        expect_newline();
    }

    Node parse_small_stmt() {
        Pos start = here();
        if (at(TokenType::Keyword)) {
            std::string_view kw = cur().text;
            if (kw == "pass" || kw == "break" || kw == "continue") {
                Node n = make(kw == "pass" ? NodeKind::Pass
                              : kw == "break" ? NodeKind::Break
                                              : NodeKind::Continue);
                advance();
                close(n, start);
                return n;
            }
            if (kw == "del") {
                advance();
                Node n = make(NodeKind::Delete);
                n.children.push_back(parse_expr_or_star());
                while (eat_op(",")) {
                    if (end_of_expression()) break;
                    n.children.push_back(parse_expr_or_star());
                }
                close(n, start);
                return n;
            }
            if (kw == "return") {
                advance();
                Node n = make(NodeKind::Return);
                if (!end_of_expression()) n.children.push_back(parse_testlist_star_expr());
                close(n, start);
                return n;
            }
            if (kw == "raise") {
                advance();
                Node n = make(NodeKind::Raise);
                if (!end_of_expression()) {
                    n.children.push_back(parse_test());
                    if (eat_keyword("from")) {
                        Node cause = make(NodeKind::FromCause);
                        Pos cause_start = {prev().line, prev().col};
                        cause.children.push_back(parse_test());
                        close(cause, cause_start);
                        n.children.push_back(std::move(cause));
                    }
                }
                close(n, start);
                return n;
            }
            if (kw == "global" || kw == "nonlocal") {
                Node n = make(kw == "global" ? NodeKind::Global : NodeKind::Nonlocal);
                advance();
                n.text = expect_name();
                while (eat_op(",")) n.text += " " + expect_name();
                close(n, start);
                return n;
            }
            if (kw == "assert") {
                advance();
                Node n = make(NodeKind::Assert);
                n.children.push_back(parse_test());
                if (eat_op(",")) n.children.push_back(parse_test());
                close(n, start);
                return n;
            }
            if (kw == "import" || kw == "from") return parse_import();
            if (kw == "yield") {
                Node n = make(NodeKind::ExprStmt);
                n.children.push_back(parse_yield_expr());
                span_over_children(n);
                return n;
            }
        }
        return parse_expr_stmt();
    }

    bool end_of_expression() const {
        return at(TokenType::Newline) || at_op(";") || at(TokenType::EndOfFile);
    }

    Node parse_import() {
        Pos start = here();
        if (eat_keyword("import")) {
            Node n = make(NodeKind::Import);
            n.children.push_back(parse_import_alias(/*dotted=*/true));
            while (eat_op(",")) n.children.push_back(parse_import_alias(true));
            close(n, start);
            return n;
        }
        expect_keyword("from");
        Node n = make(NodeKind::ImportFrom);
        std::string module;
        while (at_op(".") || at_op("...")) {
            module += cur().text;
            advance();
        }
        if (at(TokenType::Name)) module += parse_dotted_name();
        if (module.empty()) fail("expected module name after 'from'");
        n.text = std::move(module);
        expect_keyword("import");
        if (at_op("*")) {
            Node star = make(NodeKind::ImportStar);
            Pos star_start = here();
            advance();
            close(star, star_start);
            n.children.push_back(std::move(star));
        } else if (eat_op("(")) {
            n.children.push_back(parse_import_alias(false));
            while (eat_op(",")) {
                if (at_op(")")) break;
                n.children.push_back(parse_import_alias(false));
            }
            expect_op(")");
        } else {
            n.children.push_back(parse_import_alias(false));
            while (eat_op(",")) n.children.push_back(parse_import_alias(false));
        }
        close(n, start);
        return n;
    }

    Node parse_import_alias(bool dotted) {
        Pos start = here();
        Node alias = make(NodeKind::Alias);
        alias.text = dotted ? parse_dotted_name() : expect_name();
        if (eat_keyword("as")) expect_name();
        close(alias, start);
        return alias;
    }

    std::string parse_dotted_name() {
        std::string name = expect_name();
        while (at_op(".") && ahead(1).type == TokenType::Name) {
            advance();
            name += "." + expect_name();
        }
        return name;
    }

    Node parse_expr_stmt() {
        Pos start = here();
        Node first = parse_testlist_star_expr();

        if (at_op(":")) {
            advance();
            Node n = make(NodeKind::AnnAssign);
            n.children.push_back(std::move(first));
            n.children.push_back(parse_test());
            if (eat_op("=")) n.children.push_back(parse_value_expr());
            close(n, start);
            return n;
        }

        static constexpr std::string_view aug_ops[] = {"+=", "-=", "*=", "@=", "/=",  "%=",
                                                       "&=", "|=", "^=", "<<=", ">>=", "**=",
                                                       "//="};
        for (std::string_view op : aug_ops) {
            if (at_op(op)) {
                Node n = make(NodeKind::AugAssign);
                n.text = std::string(op);
                advance();
                n.children.push_back(std::move(first));
                n.children.push_back(parse_value_expr());
                close(n, start);
                return n;
            }
        }

        if (at_op("=")) {
            Node targets = make(NodeKind::Targets);
            targets.children.push_back(std::move(first));
            Node value;
            while (eat_op("=")) {
                value = parse_value_expr();
                if (at_op("=")) targets.children.push_back(std::move(value));
            }
            span_over_children(targets);
            Node n = make(NodeKind::Assign);
            n.children.push_back(std::move(targets));
            n.children.push_back(std::move(value));
            close(n, start);
            return n;
        }

        Node n = make(NodeKind::ExprStmt);
        n.children.push_back(std::move(first));
        span_over_children(n);
        return n;
    }

    /// Right-hand side of an assignment: a yield expression or a testlist.
    Node parse_value_expr() {
        if (at_keyword("yield")) return parse_yield_expr();
        return parse_testlist_star_expr();
    }

    Node parse_yield_expr() {
        Pos start = here();
        expect_keyword("yield");
        if (eat_keyword("from")) {
            Node n = make(NodeKind::YieldFrom);
            n.children.push_back(parse_test());
            close(n, start);
            return n;
        }
        Node n = make(NodeKind::Yield);
        if (!end_of_expression() && !at_op(")") && !at_op("]") && !at_op("}") && !at_op(",") &&
            !at_op(":"))
            n.children.push_back(parse_testlist_star_expr());
        close(n, start);
        return n;
    }

    // ---- compound statements ----------------------------------------------

    Node parse_if(std::string_view introducer) {
        Pos start = here();
        expect_keyword(introducer);
        Node n = make(NodeKind::If);
        n.children.push_back(parse_namedexpr_test());
        n.children.push_back(parse_suite());
        if (at_keyword("elif")) {
            Node orelse = make(NodeKind::OrElse);
            Node nested = parse_if("elif");
            orelse.line = nested.line;
            orelse.col = nested.col;
            orelse.end_line = nested.end_line;
            orelse.end_col = nested.end_col;
            orelse.children.push_back(std::move(nested));
            n.children.push_back(std::move(orelse));
        } else if (eat_keyword("else")) {
            n.children.push_back(parse_else_clause());
        }
        close_clause(n, start);
        return n;
    }

    Node parse_else_clause() {
        Node orelse = make(NodeKind::OrElse);
        Node body = parse_suite();
        orelse.line = body.line;
        orelse.col = body.col;
        orelse.end_line = body.end_line;
        orelse.end_col = body.end_col;
        orelse.children = std::move(body.children);
        return orelse;
    }

    Node parse_while() {
        Pos start = here();
        expect_keyword("while");
        Node n = make(NodeKind::While);
        n.children.push_back(parse_namedexpr_test());
        n.children.push_back(parse_suite());
        if (eat_keyword("else")) n.children.push_back(parse_else_clause());
        close_clause(n, start);
        return n;
    }

    Node parse_for(bool is_async, Pos start) {
        expect_keyword("for");
        Node n = make(NodeKind::For);
        n.is_async = is_async;
        n.children.push_back(parse_target_list());
        expect_keyword("in");
        n.children.push_back(parse_testlist());
        n.children.push_back(parse_suite());
        if (eat_keyword("else")) n.children.push_back(parse_else_clause());
        close_clause(n, start);
        return n;
    }

    Node parse_with(bool is_async, Pos start) {
        expect_keyword("with");
        Node n = make(NodeKind::With);
        n.is_async = is_async;
        // 3.9-style parenthesised item lists: committed only when the closing
        // ')' is directly followed by ':', otherwise '(' starts an expression.
        bool parsed_items = false;
        if (at_op("(")) {
            size_t saved = pos_;
            try {
                advance();
                std::vector<Node> items;
                items.push_back(parse_with_item());
                while (eat_op(",")) {
                    if (at_op(")")) break;
                    items.push_back(parse_with_item());
                }
                if (at_op(")") && ahead(1).is_op(":")) {
                    advance();
                    for (Node& item : items) n.children.push_back(std::move(item));
                    parsed_items = true;
                } else {
                    pos_ = saved;
                }
            } catch (const SyntaxError&) {
                pos_ = saved;
            }
        }
        if (!parsed_items) {
            n.children.push_back(parse_with_item());
            while (eat_op(",")) n.children.push_back(parse_with_item());
        }
        n.children.push_back(parse_suite());
        close_clause(n, start);
        return n;
    }

    Node parse_with_item() {
        Node item = make(NodeKind::WithItem);
        item.children.push_back(parse_test());
        if (eat_keyword("as")) {
            Node target = make(NodeKind::AsTarget);
            Pos target_start = here();
            target.children.push_back(parse_primary_target());
            close(target, target_start);
            item.children.push_back(std::move(target));
        }
        span_over_children(item);
        return item;
    }

    Node parse_try() {
        Pos start = here();
        expect_keyword("try");
        Node n = make(NodeKind::Try);
        n.children.push_back(parse_suite());
        bool saw_except = false;
        while (at_keyword("except")) {
            saw_except = true;
            Pos handler_start = here();
            advance();
            Node handler = make(NodeKind::ExceptHandler);
            if (!at_op(":")) {
                handler.children.push_back(parse_test());
                if (eat_keyword("as")) handler.text = expect_name();
            }
            handler.children.push_back(parse_suite());
            close_clause(handler, handler_start);
            n.children.push_back(std::move(handler));
        }
        if (eat_keyword("else")) {
            if (!saw_except) fail("'else' clause requires at least one 'except'");
            n.children.push_back(parse_else_clause());
        }
        if (eat_keyword("finally")) {
            Node fin = make(NodeKind::FinallyBody);
            Node body = parse_suite();
            fin.line = body.line;
            fin.col = body.col;
            fin.end_line = body.end_line;
            fin.end_col = body.end_col;
            fin.children = std::move(body.children);
            n.children.push_back(std::move(fin));
        } else if (!saw_except) {
            fail("expected 'except' or 'finally' block");
        }
        close_clause(n, start);
        return n;
    }

    Node parse_funcdef(bool is_async, Pos start) {
        expect_keyword("def");
        Node n = make(NodeKind::FunctionDef);
        n.is_async = is_async;
        n.text = expect_name();
        n.children.push_back(parse_parameters());
        if (eat_op("->")) {
            Node ann = make(NodeKind::Annotation);
            Pos ann_start = here();
            ann.children.push_back(parse_test());
            close(ann, ann_start);
            n.children.push_back(std::move(ann));
        }
        n.children.push_back(parse_suite());
        close_clause(n, start);
        return n;
    }

    Node parse_classdef() {
        Pos start = here();
        expect_keyword("class");
        Node n = make(NodeKind::ClassDef);
        n.text = expect_name();
        if (at_op("(")) n.children.push_back(parse_call_arguments());
        n.children.push_back(parse_suite());
        close_clause(n, start);
        return n;
    }

    Node parse_decorated() {
        Pos start = here();
        Node n = make(NodeKind::Decorated);
        while (at_op("@")) {
            Pos deco_start = here();
            advance();
            Node deco = make(NodeKind::Decorator);
            deco.children.push_back(parse_namedexpr_test());
            close(deco, deco_start);
            n.children.push_back(std::move(deco));
            expect_newline();
        }
        if (at_keyword("def")) {
            n.children.push_back(parse_funcdef(false, here()));
        } else if (at_keyword("class")) {
            n.children.push_back(parse_classdef());
        } else if (at_keyword("async")) {
            Pos async_start = here();
            advance();
            if (!at_keyword("def")) fail("expected 'def' after 'async'");
            n.children.push_back(parse_funcdef(true, async_start));
        } else {
            fail("expected function or class definition after decorators");
        }
        close_clause(n, start);
        return n;
    }

    Node parse_parameters() {
        Pos start = here();
        expect_op("(");
        Node params = make(NodeKind::Params);
        bool first = true;
        while (!at_op(")")) {
            if (!first) {
                expect_op(",");
                if (at_op(")")) break;
            }
            first = false;
            if (eat_op("/")) continue;  // positional-only marker
            if (at_op("*")) {
                Pos p = here();
                advance();
                if (at_op(",") || at_op(")")) continue;  // bare '*' keyword-only marker
                Node vararg = make(NodeKind::VarArgsParam);
                vararg.text = expect_name();
                maybe_annotation(vararg);
                close(vararg, p);
                params.children.push_back(std::move(vararg));
                continue;
            }
            if (at_op("**")) {
                Pos p = here();
                advance();
                Node kwarg = make(NodeKind::KwArgsParam);
                kwarg.text = expect_name();
                maybe_annotation(kwarg);
                close(kwarg, p);
                params.children.push_back(std::move(kwarg));
                continue;
            }
            Pos p = here();
            Node param = make(NodeKind::Param);
            param.text = expect_name();
            maybe_annotation(param);
            if (eat_op("=")) {
                Node dflt = make(NodeKind::Default);
                Pos d = here();
                dflt.children.push_back(parse_test());
                close(dflt, d);
                param.children.push_back(std::move(dflt));
            }
            close(param, p);
            params.children.push_back(std::move(param));
        }
        expect_op(")");
        close(params, start);
        return params;
    }

    void maybe_annotation(Node& param) {
        if (!eat_op(":")) return;
        Node ann = make(NodeKind::Annotation);
        Pos start = here();
        ann.children.push_back(parse_test());
        close(ann, start);
        param.children.push_back(std::move(ann));
    }

    Node parse_suite() {
        expect_op(":");
        Node body = make(NodeKind::Body);
        if (at(TokenType::Newline)) {
            advance();
            if (!at(TokenType::Indent)) fail("expected an indented block");
            advance();
            while (!at(TokenType::Dedent)) {
                if (at(TokenType::EndOfFile)) fail("unexpected end of file");
                parse_statement_into(body.children);
            }
            advance();  // Dedent
        } else {
            parse_simple_stmt_line(body.children);
        }
        if (body.children.empty()) fail("expected statement");
        span_over_children(body);
        return body;
    }

    /// Compound statements end where their last clause ends, not at the
    /// Dedent token the suite consumed.
    void close_clause(Node& n, Pos start) {
        n.line = start.line;
        n.col = start.col;
        const Node& last = n.children.back();
        n.end_line = last.end_line;
        n.end_col = last.end_col;
    }

    // ---- expressions -------------------------------------------------------

    Node parse_testlist_star_expr() { return parse_expr_sequence(/*allow_star=*/true); }

    Node parse_testlist() { return parse_expr_sequence(/*allow_star=*/false); }

    Node parse_expr_sequence(bool allow_star) {
        Pos start = here();  // covers a parenthesised first element
        Node first = allow_star ? parse_test_or_star() : parse_test();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (sequence_ended()) break;
            tuple.children.push_back(allow_star ? parse_test_or_star() : parse_test());
        }
        close(tuple, start);
        return tuple;
    }

    /// For-loop and similar assignment targets: commas build a bare tuple.
    Node parse_target_list() {
        Pos start = here();
        Node first = parse_expr_or_star();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (sequence_ended() || at_keyword("in")) break;
            tuple.children.push_back(parse_expr_or_star());
        }
        close(tuple, start);
        return tuple;
    }

    static bool keyword_starts_expression(const Token& token) {
        if (token.type != TokenType::Keyword) return false;
        return token.text == "None" || token.text == "True" || token.text == "False" ||
               token.text == "not" || token.text == "lambda" || token.text == "await";
    }

    bool sequence_ended() const {
        if (end_of_expression() || at_op(")") || at_op("]") || at_op("}") || at_op(":") ||
            at_op("="))
            return true;
        return at(TokenType::Keyword) && !keyword_starts_expression(cur());
    }

    Node parse_test_or_star() {
        if (at_op("*")) return parse_starred();
        return parse_test();
    }

    Node parse_expr_or_star() {
        if (at_op("*")) return parse_starred();
        return parse_bitor();
    }

    Node parse_starred() {
        Pos start = here();
        expect_op("*");
        Node n = make(NodeKind::Starred);
        n.children.push_back(parse_bitor());
        close(n, start);
        return n;
    }

    Node parse_namedexpr_test() {
        Pos start = here();
        Node n = parse_test();
        if (at_op(":=")) {
            advance();
            Node named = make(NodeKind::NamedExpr);
            named.children.push_back(std::move(n));
            named.children.push_back(parse_test());
            close(named, start);
            return named;
        }
        return n;
    }

    Node parse_test() {
        DepthGuard guard(this);
        if (at_keyword("lambda")) return parse_lambda(/*allow_cond=*/true);
        Pos start = here();
        Node body = parse_or_test();
        if (at_keyword("if")) {
            advance();
            Node n = make(NodeKind::IfExp);
            n.children.push_back(std::move(body));
            n.children.push_back(parse_or_test());
            expect_keyword("else");
            n.children.push_back(parse_test());
            close(n, start);
            return n;
        }
        return body;
    }

    Node parse_test_nocond() {
        if (at_keyword("lambda")) return parse_lambda(/*allow_cond=*/false);
        return parse_or_test();
    }

    Node parse_lambda(bool allow_cond) {
        Pos start = here();
        expect_keyword("lambda");
        Node n = make(NodeKind::Lambda);
        Node params = make(NodeKind::Params);
        Pos params_start = here();
        bool first = true;
        while (!at_op(":")) {
            if (!first) {
                expect_op(",");
                if (at_op(":")) break;
            }
            first = false;
            if (at_op("*")) {
                Pos p = here();
                advance();
                if (at_op(",") || at_op(":")) continue;
                Node vararg = make(NodeKind::VarArgsParam);
                vararg.text = expect_name();
                close(vararg, p);
                params.children.push_back(std::move(vararg));
                continue;
            }
            if (at_op("**")) {
                Pos p = here();
                advance();
                Node kwarg = make(NodeKind::KwArgsParam);
                kwarg.text = expect_name();
                close(kwarg, p);
                params.children.push_back(std::move(kwarg));
                continue;
            }
            Pos p = here();
            Node param = make(NodeKind::Param);
            param.text = expect_name();
            if (eat_op("=")) {
                Node dflt = make(NodeKind::Default);
                Pos d = here();
                dflt.children.push_back(parse_test());
                close(dflt, d);
                param.children.push_back(std::move(dflt));
            }
            close(param, p);
            params.children.push_back(std::move(param));
        }
        close(params, params_start);
        expect_op(":");
        n.children.push_back(std::move(params));
        n.children.push_back(allow_cond ? parse_test() : parse_test_nocond());
        close(n, start);
        return n;
    }

    Node parse_or_test() { return parse_bool_op("or", &Parser::parse_and_test); }
    Node parse_and_test() { return parse_bool_op("and", &Parser::parse_not_test); }

    Node parse_bool_op(std::string_view op, Node (Parser::*next)()) {
        Pos start = here();
        Node first = (this->*next)();
        if (!at_keyword(op)) return first;
        Node n = make(NodeKind::BoolOp);
        n.text = std::string(op);
        n.children.push_back(std::move(first));
        while (eat_keyword(op)) n.children.push_back((this->*next)());
        close(n, start);
        return n;
    }

    Node parse_not_test() {
        if (at_keyword("not")) {
            Pos start = here();
            advance();
            Node n = make(NodeKind::UnaryOp);
            n.text = "not";
            n.children.push_back(parse_not_test());
            close(n, start);
            return n;
        }
        return parse_comparison();
    }

    Node parse_comparison() {
        Pos start = here();
        Node first = parse_bitor();
        if (!at_comparison_op()) return first;
        Node n = make(NodeKind::Compare);
        n.children.push_back(std::move(first));
        while (at_comparison_op()) {
            Node op = make(NodeKind::CompareOp);
            Pos op_start = here();
            op.text = consume_comparison_op();
            close(op, op_start);
            n.children.push_back(std::move(op));
            n.children.push_back(parse_bitor());
        }
        close(n, start);
        return n;
    }

    bool at_comparison_op() const {
        if (cur().type == TokenType::Op) {
            std::string_view t = cur().text;
            return t == "<" || t == ">" || t == "==" || t == ">=" || t == "<=" || t == "!=";
        }
        if (at_keyword("in") || at_keyword("is")) return true;
        if (at_keyword("not") && ahead(1).is_keyword("in")) return true;
        return false;
    }

    std::string consume_comparison_op() {
        if (at_keyword("not")) {
            advance();
            expect_keyword("in");
            return "not in";
        }
        if (at_keyword("is")) {
            advance();
            if (eat_keyword("not")) return "is not";
            return "is";
        }
        std::string op(cur().text);
        advance();
        return op;
    }

    Node parse_bitor() { return parse_binary({"|"}, &Parser::parse_bitxor); }
    Node parse_bitxor() { return parse_binary({"^"}, &Parser::parse_bitand); }
    Node parse_bitand() { return parse_binary({"&"}, &Parser::parse_shift); }
    Node parse_shift() { return parse_binary({"<<", ">>"}, &Parser::parse_arith); }
    Node parse_arith() { return parse_binary({"+", "-"}, &Parser::parse_term); }
    Node parse_term() { return parse_binary({"*", "@", "/", "%", "//"}, &Parser::parse_factor); }

    Node parse_binary(std::initializer_list<std::string_view> ops, Node (Parser::*next)()) {
        Pos start = here();
        Node left = (this->*next)();
        while (true) {
            std::string_view matched;
            for (std::string_view op : ops)
                if (at_op(op)) {
                    matched = op;
                    break;
                }
            if (matched.empty()) return left;
            advance();
            Node n = make(NodeKind::BinOp);
            n.text = std::string(matched);
            n.children.push_back(std::move(left));
            n.children.push_back((this->*next)());
            close(n, start);
            left = std::move(n);
        }
    }

    Node parse_factor() {
        if (at_op("+") || at_op("-") || at_op("~")) {
            Pos start = here();
            Node n = make(NodeKind::UnaryOp);
            n.text = std::string(cur().text);
            advance();
            n.children.push_back(parse_factor());
            close(n, start);
            return n;
        }
        return parse_power();
    }

    Node parse_power() {
        Pos start = here();
        Node base = parse_await_primary();
        if (at_op("**")) {
            advance();
            Node n = make(NodeKind::BinOp);
            n.text = "**";
            n.children.push_back(std::move(base));
            n.children.push_back(parse_factor());
            close(n, start);
            return n;
        }
        return base;
    }

    Node parse_await_primary() {
        if (at_keyword("await")) {
            Pos start = here();
            advance();
            Node n = make(NodeKind::Await);
            n.children.push_back(parse_primary());
            close(n, start);
            return n;
        }
        return parse_primary();
    }

    Node parse_primary() {
        // Trailer nodes span from the start of the whole primary, including
        // any parentheses around the atom.
        Pos extent = here();
        Node value = parse_atom();
        while (true) {
            if (at_op("(")) {
                Node call = make(NodeKind::Call);
                call.children.push_back(std::move(value));
                call.children.push_back(parse_call_arguments());
                close(call, extent);
                value = std::move(call);
            } else if (at_op("[")) {
                advance();
                Node sub = make(NodeKind::Subscript);
                sub.children.push_back(std::move(value));
                sub.children.push_back(parse_subscript_list());
                expect_op("]");
                close(sub, extent);
                value = std::move(sub);
            } else if (at_op(".") && ahead(1).type == TokenType::Name) {
                advance();
                Node attr = make(NodeKind::Attribute);
                attr.text = expect_name();
                attr.children.push_back(std::move(value));
                close(attr, extent);
                value = std::move(attr);
            } else {
                return value;
            }
        }
    }

    Node parse_call_arguments() {
        Pos start = here();
        expect_op("(");
        Node args = make(NodeKind::Arguments);
        bool first = true;
        while (!at_op(")")) {
            if (!first) {
                expect_op(",");
                if (at_op(")")) break;
            }
            first = false;
            if (at_op("*")) {
                Pos p = here();
                advance();
                Node star = make(NodeKind::Starred);
                star.children.push_back(parse_test());
                close(star, p);
                args.children.push_back(std::move(star));
                continue;
            }
            if (at_op("**")) {
                Pos p = here();
                advance();
                Node dstar = make(NodeKind::DoubleStarArg);
                dstar.children.push_back(parse_test());
                close(dstar, p);
                args.children.push_back(std::move(dstar));
                continue;
            }
            Node arg = parse_test();
            if (at_op("=")) {
                advance();
                Node kw = make(NodeKind::KeywordArg);
                if (arg.kind != NodeKind::Name) fail("keyword argument must be a name");
                kw.text = arg.text;
                Pos p = {arg.line, arg.col};
                kw.children.push_back(parse_test());
                close(kw, p);
                args.children.push_back(std::move(kw));
                continue;
            }
            if (at_op(":=")) {
                advance();
                Node named = make(NodeKind::NamedExpr);
                Pos p = {arg.line, arg.col};
                named.children.push_back(std::move(arg));
                named.children.push_back(parse_test());
                close(named, p);
                args.children.push_back(std::move(named));
                continue;
            }
            if (at_keyword("for") || (at_keyword("async") && ahead(1).is_keyword("for"))) {
                // An unparenthesised generator expression must be the sole
                // argument; it takes the span of the call's parentheses.
                Node gen = make(NodeKind::GeneratorExp);
                gen.children.push_back(std::move(arg));
                parse_comp_clauses(gen);
                expect_op(")");
                close(gen, start);
                args.children.push_back(std::move(gen));
                close(args, start);
                return args;
            }
            args.children.push_back(std::move(arg));
        }
        expect_op(")");
        close(args, start);
        return args;
    }

    Node parse_subscript_list() {
        Pos start = here();
        Node first = parse_subscript_item();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_op("]")) break;
            tuple.children.push_back(parse_subscript_item());
        }
        close(tuple, start);
        return tuple;
    }

    Node parse_subscript_item() {
        Pos start = here();
        Node lower = make(NodeKind::Empty);
        bool have_lower = false;
        if (!at_op(":")) {
            lower = parse_test();
            have_lower = true;
        }
        if (!at_op(":")) {
            if (!have_lower) fail("invalid subscript");
            return lower;
        }
        advance();
        Node slice = make(NodeKind::Slice);
        if (!have_lower) close(lower, start);
        slice.children.push_back(std::move(lower));
        Node upper = make(NodeKind::Empty);
        if (!at_op(":") && !at_op("]") && !at_op(",")) {
            upper = parse_test();
        } else {
            close(upper, here());
        }
        slice.children.push_back(std::move(upper));
        Node step = make(NodeKind::Empty);
        if (eat_op(":")) {
            if (!at_op("]") && !at_op(",")) step = parse_test();
            else close(step, here());
        } else {
            close(step, here());
        }
        slice.children.push_back(std::move(step));
        close(slice, start);
        return slice;
    }

    void parse_comp_clauses(Node& comp) {
        while (true) {
            if (at_keyword("async") && ahead(1).is_keyword("for")) {
                Pos start = here();
                advance();
                comp.children.push_back(parse_comp_for(true, start));
            } else if (at_keyword("for")) {
                comp.children.push_back(parse_comp_for(false, here()));
            } else {
                break;
            }
        }
        if (comp.children.size() < 2) fail("expected 'for' in comprehension");
    }

    Node parse_comp_for(bool is_async, Pos start) {
        expect_keyword("for");
        Node n = make(NodeKind::CompFor);
        n.is_async = is_async;
        n.children.push_back(parse_target_list());
        expect_keyword("in");
        n.children.push_back(parse_or_test());
        while (at_keyword("if")) {
            Pos if_start = here();
            advance();
            Node cond = make(NodeKind::CompIf);
            cond.children.push_back(parse_test_nocond());
            close(cond, if_start);
            n.children.push_back(std::move(cond));
        }
        close(n, start);
        return n;
    }

    /// Restricted target used after 'as': NAME with optional trailers, or a
    /// parenthesised/bracketed target list.
    Node parse_primary_target() {
        if (at_op("(") || at_op("[")) return parse_atom();
        return parse_primary();
    }

    Node parse_atom() {
        DepthGuard guard(this);
        Pos start = here();

        if (at(TokenType::Name)) {
            Node n = make(NodeKind::Name);
            n.text = cur().value;
            advance();
            close(n, start);
            return n;
        }
        if (at(TokenType::Number)) {
            Node n = make(NodeKind::Number);
            n.text = cur().text;
            advance();
            close(n, start);
            return n;
        }
        if (at(TokenType::Str)) return parse_string_group();
        if (at_keyword("True") || at_keyword("False") || at_keyword("None")) {
            Node n = make(NodeKind::Constant);
            n.text = std::string(cur().text);
            advance();
            close(n, start);
            return n;
        }
        if (at_op("...")) {
            Node n = make(NodeKind::Constant);
            n.text = "...";
            advance();
            close(n, start);
            return n;
        }
        if (at_keyword("lambda")) return parse_lambda(true);
        if (at_op("(")) return parse_paren_atom();
        if (at_op("[")) return parse_list_atom();
        if (at_op("{")) return parse_brace_atom();
        fail("invalid syntax");
    }

    Node parse_string_group() {
        Pos start = here();
        Node n = make(NodeKind::Str);
        bool saw_bytes = false, saw_str = false;
        while (at(TokenType::Str)) {
            n.text += cur().value;
            n.is_fstring = n.is_fstring || cur().is_fstring;
            n.is_bytes = n.is_bytes || cur().is_bytes;
            if (cur().is_bytes) saw_bytes = true;
            else saw_str = true;
            if (cur().is_fstring) {
                // replacement-field expressions become children of the string
                for (Node& field : fstring_detail::parse_fields(cur()))
                    n.children.push_back(std::move(field));
            }
            advance();
        }
        if (saw_bytes && saw_str) fail("cannot mix bytes and nonbytes literals");
        close(n, start);
        return n;
    }

    Node parse_paren_atom() {
        Pos start = here();
        expect_op("(");
        if (at_op(")")) {
            advance();
            Node tuple = make(NodeKind::Tuple);
            close(tuple, start);
            return tuple;
        }
        if (at_keyword("yield")) {
            Node y = parse_yield_expr();
            expect_op(")");
            return y;
        }
        Node first = at_op("*") ? parse_starred() : parse_namedexpr_test();
        if (at_keyword("for") || (at_keyword("async") && ahead(1).is_keyword("for"))) {
            Node gen = make(NodeKind::GeneratorExp);
            gen.children.push_back(std::move(first));
            parse_comp_clauses(gen);
            expect_op(")");
            close(gen, start);
            return gen;
        }
        if (at_op(",")) {
            Node tuple = make(NodeKind::Tuple);
            tuple.children.push_back(std::move(first));
            while (eat_op(",")) {
                if (at_op(")")) break;
                tuple.children.push_back(at_op("*") ? parse_starred() : parse_namedexpr_test());
            }
            expect_op(")");
            close(tuple, start);
            return tuple;
        }
        expect_op(")");
        return first;  // plain parenthesised expression keeps its own span
    }

    Node parse_list_atom() {
        Pos start = here();
        expect_op("[");
        Node list = make(NodeKind::List);
        if (at_op("]")) {
            advance();
            close(list, start);
            return list;
        }
        Node first = at_op("*") ? parse_starred() : parse_namedexpr_test();
        if (at_keyword("for") || (at_keyword("async") && ahead(1).is_keyword("for"))) {
            Node comp = make(NodeKind::ListComp);
            comp.children.push_back(std::move(first));
            parse_comp_clauses(comp);
            expect_op("]");
            close(comp, start);
            return comp;
        }
        list.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_op("]")) break;
            list.children.push_back(at_op("*") ? parse_starred() : parse_namedexpr_test());
        }
        expect_op("]");
        close(list, start);
        return list;
    }

    Node parse_brace_atom() {
        Pos start = here();
        expect_op("{");
        if (at_op("}")) {
            advance();
            Node dict = make(NodeKind::Dict);
            close(dict, start);
            return dict;
        }
        if (at_op("**")) {
            Node dict = make(NodeKind::Dict);
            dict.children.push_back(parse_dict_unpack());
            parse_dict_rest(dict);
            expect_op("}");
            close(dict, start);
            return dict;
        }

        Node first = at_op("*") ? parse_starred() : parse_namedexpr_test();
        if (at_op(":")) {
            advance();
            Node item = make(NodeKind::DictItem);
            Pos item_start = {first.line, first.col};
            item.children.push_back(std::move(first));
            item.children.push_back(parse_test());
            close(item, item_start);

            if (at_keyword("for") || (at_keyword("async") && ahead(1).is_keyword("for"))) {
                Node comp = make(NodeKind::DictComp);
                comp.children.push_back(std::move(item));
                parse_comp_clauses(comp);
                expect_op("}");
                close(comp, start);
                return comp;
            }
            Node dict = make(NodeKind::Dict);
            dict.children.push_back(std::move(item));
            parse_dict_rest(dict);
            expect_op("}");
            close(dict, start);
            return dict;
        }

        if (at_keyword("for") || (at_keyword("async") && ahead(1).is_keyword("for"))) {
            Node comp = make(NodeKind::SetComp);
            comp.children.push_back(std::move(first));
            parse_comp_clauses(comp);
            expect_op("}");
            close(comp, start);
            return comp;
        }
        Node set = make(NodeKind::Set);
        set.children.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_op("}")) break;
            set.children.push_back(at_op("*") ? parse_starred() : parse_namedexpr_test());
        }
        expect_op("}");
        close(set, start);
        return set;
    }

    Node parse_dict_unpack() {
        Pos start = here();
        expect_op("**");
        Node unpack = make(NodeKind::DictUnpack);
        unpack.children.push_back(parse_bitor());
        close(unpack, start);
        return unpack;
    }

    void parse_dict_rest(Node& dict) {
        while (eat_op(",")) {
            if (at_op("}")) break;
            if (at_op("**")) {
                dict.children.push_back(parse_dict_unpack());
                continue;
            }
            Node key = parse_test();
            expect_op(":");
            Node item = make(NodeKind::DictItem);
            Pos item_start = {key.line, key.col};
            item.children.push_back(std::move(key));
            item.children.push_back(parse_test());
            close(item, item_start);
            dict.children.push_back(std::move(item));
        }
    }

    std::vector<Token> tokens_;
    size_t pos_ = 0;
    mutable int depth_ = 0;
};

/// Parses one file; failures come back as values so a bad file never aborts a
/// multi-file run.
inline ParseOutcome parse_source(const SourceFile& file) {
    if (int bad_line = utf8_error_line(file.content); bad_line != 0) {
        return ParseFailure{file.rel_path.empty() ? file.path : file.rel_path, 0,
                            "file is not valid UTF-8"};
    }
    try {
        Lexer lexer(file.content);
        Parser parser(lexer.tokenize());
        return SyntaxTree{parser.parse_module()};
    } catch (const SyntaxError& err) {
        return ParseFailure{file.rel_path.empty() ? file.path : file.rel_path, err.line(),
                            err.message()};
    }
}

inline ParseOutcome parse_text(std::string_view text) {
    SourceFile file;
    file.path = "<string>";
    file.rel_path = "<string>";
    file.content = std::string(text);
    return parse_source(file);
}

namespace fstring_detail {

struct Cursor {
    std::string_view text;
    size_t i = 0;
    int line = 1;
    int col = 0;

    bool done() const { return i >= text.size(); }
    char peek(size_t off = 0) const { return i + off < text.size() ? text[i + off] : '\0'; }
    void advance() {
        if (text[i] == '\n') {
            ++line;
            col = 0;
        } else {
            ++col;
        }
        ++i;
    }
    void advance(int n) {
        for (int k = 0; k < n && !done(); ++k) advance();
    }
};

inline void skip_string_literal(Cursor& c) {
    char quote = c.peek();
    bool triple = c.peek(1) == quote && c.peek(2) == quote;
    c.advance(triple ? 3 : 1);
    while (!c.done()) {
        char ch = c.peek();
        if (ch == '\\') {
            c.advance(2);
            continue;
        }
        if (ch == quote) {
            if (!triple) {
                c.advance();
                return;
            }
            if (c.peek(1) == quote && c.peek(2) == quote) {
                c.advance(3);
                return;
            }
        }
        c.advance();
    }
}

/// Parses one replacement-field expression by wrapping it in parentheses.
/// Positions are rebased so the nodes carry real file coordinates, matching
/// how the expression would have been parsed in place.
inline void emit_field_expression(std::string_view expr_text, int line, int col,
                                  std::vector<Node>& out) {
    bool blank = true;
    for (char ch : expr_text)
        if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') {
            blank = false;
            break;
        }
    if (blank) return;

    ParseOutcome outcome = parse_text("(" + std::string(expr_text) + ")");
    auto* tree = std::get_if<SyntaxTree>(&outcome);
    if (tree == nullptr) return;  // not expression-shaped; leave the field opaque
    Node& module = tree->root;
    if (module.children.size() != 1 || module.children[0].kind != NodeKind::ExprStmt ||
        module.children[0].children.size() != 1)
        return;

    struct Rebase {
        int base_line;
        int base_col;
        void operator()(Node& n) const {
            if (n.line == 1) n.col += base_col - 1;  // -1 for the added '('
            n.line += base_line - 1;
            if (n.end_line == 1) n.end_col += base_col - 1;
            n.end_line += base_line - 1;
            for (Node& child : n.children) (*this)(child);
        }
    } rebase{line, col};

    Node expr = std::move(module.children[0].children[0]);
    rebase(expr);
    out.push_back(std::move(expr));
}

/// Cursor sits just past a field's '{'. Consumes through the matching '}',
/// emitting the expression and any nested format-spec fields.
inline void parse_one_field(Cursor& c, std::vector<Node>& out) {
    int expr_line = c.line;
    int expr_col = c.col;
    size_t expr_begin = c.i;
    int depth = 0;
    while (!c.done()) {
        char ch = c.peek();
        if (ch == '\'' || ch == '"') {
            skip_string_literal(c);
            continue;
        }
        if (ch == '(' || ch == '[' || ch == '{') {
            ++depth;
            c.advance();
            continue;
        }
        if (ch == ')' || ch == ']') {
            --depth;
            c.advance();
            continue;
        }
        if (ch == '}') {
            if (depth == 0) break;
            --depth;
            c.advance();
            continue;
        }
        if (depth == 0) {
            if (ch == ':') break;
            if (ch == '!') {
                if (c.peek(1) == '=') {
                    c.advance(2);
                    continue;
                }
                break;  // conversion marker
            }
            if (ch == '=') {
                if (c.peek(1) == '=') {
                    c.advance(2);
                    continue;
                }
                break;  // self-documenting '='
            }
            if ((ch == '<' || ch == '>') && c.peek(1) == '=') {
                c.advance(2);
                continue;
            }
        }
        c.advance();
    }
    emit_field_expression(c.text.substr(expr_begin, c.i - expr_begin), expr_line, expr_col, out);

    if (c.peek() == '=') c.advance();      // self-documenting form
    if (c.peek() == '!') c.advance(2);     // conversion char
    if (c.peek() == ':') {                 // format spec, may nest fields
        c.advance();
        while (!c.done()) {
            char ch = c.peek();
            if (ch == '{') {
                if (c.peek(1) == '{') {
                    c.advance(2);
                    continue;
                }
                c.advance();
                parse_one_field(c, out);
                continue;
            }
            if (ch == '}') break;
            c.advance();
        }
    }
    if (c.peek() == '}') c.advance();
}

/// Extracts and parses every replacement field of one f-string token; node
/// positions refer to the original file.
inline std::vector<Node> parse_fields(const Token& token) {
    std::vector<Node> out;
    Cursor c{token.text, 0, token.line, token.col};
    while (!c.done() && c.peek() != '\'' && c.peek() != '"') c.advance();  // prefix
    if (c.done()) return out;
    char quote = c.peek();
    bool triple = c.peek(1) == quote && c.peek(2) == quote;
    c.advance(triple ? 3 : 1);

    while (!c.done()) {
        char ch = c.peek();
        if (ch == '\\') {
            c.advance(2);
            continue;
        }
        if (ch == quote) {
            if (!triple) break;
            if (c.peek(1) == quote && c.peek(2) == quote) break;
            c.advance();
            continue;
        }
        if (ch == '{') {
            if (c.peek(1) == '{') {
                c.advance(2);
                continue;
            }
            c.advance();
            parse_one_field(c, out);
            continue;
        }
        if (ch == '}') {
            c.advance(c.peek(1) == '}' ? 2 : 1);
            continue;
        }
        c.advance();
    }
    return out;
}

}  // namespace fstring_detail

}  // namespace pyfluency
