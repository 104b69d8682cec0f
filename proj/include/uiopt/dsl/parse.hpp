#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "uiopt/dsl/ast.hpp"
#include "uiopt/errors.hpp"

namespace uiopt {

struct ParseOptions {
    int max_predicate_depth = 4;
};

namespace detail {

struct Token {
    enum class Kind { ident, integer, string, regex, punct, cmp, end };
    Kind kind = Kind::end;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> tokenize() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            Token t;
            t.line = line_;
            t.col = col_;
            if (eof()) {
                out.push_back(t);
                return out;
            }
            char c = peek();
            if (std::isalpha(uint8_t(c)) || c == '_') {
                t.kind = Token::Kind::ident;
                while (!eof()
                       && (std::isalnum(uint8_t(peek())) || peek() == '_' || peek() == '-')) {
                    t.text.push_back(advance());
                }
            } else if (std::isdigit(uint8_t(c))) {
                t.kind = Token::Kind::integer;
                while (!eof() && std::isdigit(uint8_t(peek()))) t.text.push_back(advance());
            } else if (c == '"') {
                t.kind = Token::Kind::string;
                advance();
                while (!eof() && peek() != '"') {
                    char ch = advance();
                    if (ch == '\\' && !eof()) ch = advance();
                    t.text.push_back(ch);
                }
                if (eof()) throw Error(Errc::syntax_error, "unterminated string", t.line, t.col);
                advance();
            } else if (c == '/') {
                t.kind = Token::Kind::regex;
                advance();
                while (!eof() && peek() != '/') {
                    char ch = advance();
                    if (ch == '\\' && !eof() && peek() == '/') ch = advance();
                    t.text.push_back(ch);
                }
                if (eof()) throw Error(Errc::syntax_error, "unterminated pattern", t.line, t.col);
                advance();
            } else if (c == '<' || c == '>') {
                t.kind = Token::Kind::cmp;
                t.text.push_back(advance());
                if (!eof() && peek() == '=') t.text.push_back(advance());
            } else if (c == '=') {
                t.kind = Token::Kind::cmp;
                t.text.push_back(advance());
            } else if (std::string_view("{}[]():;,").find(c) != std::string_view::npos) {
                t.kind = Token::Kind::punct;
                t.text.push_back(advance());
            } else {
                throw Error(Errc::syntax_error, std::string("unexpected character '") + c + "'",
                            line_, col_);
            }
            out.push_back(std::move(t));
        }
    }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {  // line comment
                while (!eof() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

inline int node_pred_depth(const NodePredPtr& p) {
    using K = NodePred::Kind;
    switch (p->kind) {
        case K::not_op: return 1 + node_pred_depth(p->a);
        case K::and_op:
        case K::or_op: return 1 + std::max(node_pred_depth(p->a), node_pred_depth(p->b));
        default: return 1;
    }
}

inline int view_pred_depth(const ViewPredPtr& p) {
    using K = ViewPred::Kind;
    switch (p->kind) {
        case K::not_op: return 1 + view_pred_depth(p->a);
        case K::and_op:
        case K::or_op: return 1 + std::max(view_pred_depth(p->a), view_pred_depth(p->b));
        default: return 1;
    }
}

class ProgramParser {
public:
    ProgramParser(std::string_view src, ParseOptions opts)
        : tokens_(Lexer(src).tokenize()), opts_(opts) {}

    bool at_end() const { return cur().kind == Token::Kind::end; }

    TransformProgram parse_program() {
        expect_ident("program");
        TransformProgram p;
        p.program_id = expect(Token::Kind::ident, "program id").text;
        p.leaf_props.clear();
        expect_punct("{");

        expect_ident("leaf-filter");
        expect_punct(":");
        p.leaf_filter = parse_node_pred_checked();
        expect_punct(";");

        if (peek_ident("leaf-props")) {
            next();
            expect_punct(":");
            expect_punct("[");
            while (!peek_punct("]")) {
                p.leaf_props.push_back(expect(Token::Kind::ident, "property key").text);
                if (peek_punct(",")) next();
            }
            expect_punct("]");
            expect_punct(";");
        }

        expect_ident("node-filter");
        expect_punct(":");
        p.node_filter = parse_node_pred_checked();
        expect_punct(";");

        expect_ident("merge-when");
        expect_punct(":");
        p.merge_when = parse_merge_pred();
        expect_punct(";");

        if (peek_ident("merge-props")) {
            next();
            expect_punct("{");
            expect_ident("text");
            expect_punct(":");
            std::string tr = expect(Token::Kind::ident, "text rule").text;
            if (tr == "concat")
                p.merge_props.text = TextRule::concat;
            else if (tr == "first")
                p.merge_props.text = TextRule::first;
            else if (tr == "parent")
                p.merge_props.text = TextRule::parent;
            else
                fail("unknown text rule '" + tr + "'");
            expect_punct(";");
            expect_ident("type");
            expect_punct(":");
            std::string yr = expect(Token::Kind::ident, "type rule").text;
            if (yr == "parent")
                p.merge_props.type = TypeRule::parent;
            else if (yr == "dominant-child")
                p.merge_props.type = TypeRule::dominant_child;
            else
                fail("unknown type rule '" + yr + "'");
            expect_punct("}");
            expect_punct(";");
        }

        expect_punct("}");
        return p;
    }

private:
    const Token& cur() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::syntax_error, msg, cur().line, cur().col);
    }

    const Token& expect(Token::Kind kind, const char* what) {
        if (cur().kind != kind) fail(std::string("expected ") + what);
        return next();
    }
    void expect_ident(const char* word) {
        if (cur().kind != Token::Kind::ident || cur().text != word) {
            fail(std::string("expected '") + word + "'");
        }
        next();
    }
    void expect_punct(const char* p) {
        if (cur().kind != Token::Kind::punct || cur().text != p) {
            fail(std::string("expected '") + p + "'");
        }
        next();
    }
    bool peek_ident(const char* word) const {
        return cur().kind == Token::Kind::ident && cur().text == word;
    }
    bool peek_punct(const char* p) const {
        return cur().kind == Token::Kind::punct && cur().text == p;
    }

    Cmp parse_cmp() {
        if (cur().kind != Token::Kind::cmp) fail("expected comparison operator");
        std::string t = next().text;
        if (t == "=") return Cmp::eq;
        if (t == "<") return Cmp::lt;
        if (t == "<=") return Cmp::le;
        if (t == ">") return Cmp::gt;
        if (t == ">=") return Cmp::ge;
        fail("unknown comparison '" + t + "'");
    }

    int parse_int() {
        const Token& t = expect(Token::Kind::integer, "integer");
        try {
            return std::stoi(t.text);
        } catch (const std::exception&) {
            throw Error(Errc::syntax_error, "integer out of range", t.line, t.col);
        }
    }

    std::string parse_string() { return expect(Token::Kind::string, "string literal").text; }

    NodePredPtr parse_node_pred_checked() {
        NodePredPtr p = parse_node_or();
        if (node_pred_depth(p) > opts_.max_predicate_depth) {
            throw Error(Errc::depth_exceeded,
                        "predicate exceeds depth " + std::to_string(opts_.max_predicate_depth),
                        cur().line, cur().col);
        }
        return p;
    }

    NodePredPtr parse_node_or() {
        NodePredPtr lhs = parse_node_and();
        while (peek_ident("or")) {
            next();
            lhs = np::or_(lhs, parse_node_and());
        }
        return lhs;
    }
    NodePredPtr parse_node_and() {
        NodePredPtr lhs = parse_node_unary();
        while (peek_ident("and")) {
            next();
            lhs = np::and_(lhs, parse_node_unary());
        }
        return lhs;
    }
    NodePredPtr parse_node_unary() {
        if (peek_ident("not")) {
            next();
            return np::not_(parse_node_unary());
        }
        return parse_node_atom();
    }

    NodePredPtr parse_node_atom() {
        if (peek_punct("(")) {
            next();
            NodePredPtr p = parse_node_or();
            expect_punct(")");
            return p;
        }
        if (cur().kind != Token::Kind::ident) fail("expected predicate");
        std::string word = next().text;
        if (word == "true") return np::true_();
        if (word == "false") return np::false_();
        if (word == "tag") {
            if (peek_ident("in")) {
                next();
                expect_punct("(");
                std::vector<std::string> tags;
                while (!peek_punct(")")) {
                    tags.push_back(parse_string());
                    if (peek_punct(",")) next();
                }
                expect_punct(")");
                return np::tag_in(std::move(tags));
            }
            if (cur().kind == Token::Kind::cmp && cur().text == "=") {
                next();
                return np::tag_equals(parse_string());
            }
            fail("expected '=' or 'in' after 'tag'");
        }
        if (word == "attr") {
            expect_punct("(");
            std::string key = parse_string();
            expect_punct(")");
            if (peek_ident("exists")) {
                next();
                return np::attr_exists(key);
            }
            if (peek_ident("matches")) {
                next();
                return np::attr_matches(key, expect(Token::Kind::regex, "pattern").text);
            }
            if (cur().kind == Token::Kind::cmp && cur().text == "=") {
                next();
                return np::attr_equals(key, parse_string());
            }
            fail("expected 'exists', 'matches' or '=' after attr(...)");
        }
        if (word == "text") {
            if (peek_ident("empty")) {
                next();
                return np::text_empty();
            }
            if (peek_ident("nonempty")) {
                next();
                return np::text_nonempty();
            }
            if (cur().kind == Token::Kind::cmp && cur().text == "=") {
                next();
                return np::text_equals(parse_string());
            }
            fail("expected 'empty', 'nonempty' or '=' after 'text'");
        }
        if (word == "flag") {
            expect_punct("(");
            std::string name = expect(Token::Kind::ident, "flag name").text;
            expect_punct(")");
            return np::flag(name);
        }
        if (word == "child-count") {
            Cmp c = parse_cmp();
            return np::child_count(c, parse_int());
        }
        if (word == "depth") {
            Cmp c = parse_cmp();
            return np::depth(c, parse_int());
        }
        fail("unknown predicate '" + word + "'");
    }

    ViewPredPtr parse_view_or() {
        ViewPredPtr lhs = parse_view_and();
        while (peek_ident("or")) {
            next();
            lhs = vp::or_(lhs, parse_view_and());
        }
        return lhs;
    }
    ViewPredPtr parse_view_and() {
        ViewPredPtr lhs = parse_view_unary();
        while (peek_ident("and")) {
            next();
            lhs = vp::and_(lhs, parse_view_unary());
        }
        return lhs;
    }
    ViewPredPtr parse_view_unary() {
        if (peek_ident("not")) {
            next();
            return vp::not_(parse_view_unary());
        }
        if (peek_punct("(")) {
            next();
            ViewPredPtr p = parse_view_or();
            expect_punct(")");
            return p;
        }
        if (cur().kind != Token::Kind::ident) fail("expected view predicate");
        std::string word = next().text;
        if (word == "text") {
            if (peek_ident("empty")) {
                next();
                return vp::text_empty();
            }
            if (peek_ident("nonempty")) {
                next();
                return vp::text_nonempty();
            }
            fail("expected 'empty' or 'nonempty' after 'text'");
        }
        if (word == "interactive") return vp::interactive();
        if (word == "type") {
            if (cur().kind == Token::Kind::cmp && cur().text == "=") {
                next();
                return vp::type_equals(parse_string());
            }
            fail("expected '=' after 'type'");
        }
        fail("unknown view predicate '" + word + "'");
    }

    ViewPredPtr parse_view_pred_checked() {
        ViewPredPtr p = parse_view_or();
        if (view_pred_depth(p) > opts_.max_predicate_depth) {
            throw Error(Errc::depth_exceeded,
                        "view predicate exceeds depth "
                            + std::to_string(opts_.max_predicate_depth),
                        cur().line, cur().col);
        }
        return p;
    }

    MergePredPtr parse_merge_pred() {
        MergePredPtr lhs = parse_merge_and();
        while (peek_ident("or")) {
            next();
            lhs = mp::or_(lhs, parse_merge_and());
        }
        return lhs;
    }
    MergePredPtr parse_merge_and() {
        MergePredPtr lhs = parse_merge_term();
        while (peek_ident("and")) {
            next();
            lhs = mp::and_(lhs, parse_merge_term());
        }
        return lhs;
    }
    MergePredPtr parse_merge_term() {
        if (peek_punct("(")) {
            next();
            MergePredPtr p = parse_merge_pred();
            expect_punct(")");
            return p;
        }
        if (cur().kind != Token::Kind::ident) fail("expected merge condition term");
        std::string word = next().text;
        if (word == "true") return mp::true_();
        if (word == "false") return mp::false_();
        if (word == "all-views") {
            expect_punct("(");
            ViewPredPtr v = parse_view_pred_checked();
            expect_punct(")");
            return mp::all_views(std::move(v));
        }
        if (word == "any-view") {
            expect_punct("(");
            ViewPredPtr v = parse_view_pred_checked();
            expect_punct(")");
            return mp::any_view(std::move(v));
        }
        if (word == "view-count") {
            Cmp c = parse_cmp();
            return mp::view_count(c, parse_int());
        }
        if (word == "node") {
            expect_punct("(");
            NodePredPtr g = parse_node_pred_checked();
            expect_punct(")");
            return mp::node_guard(std::move(g));
        }
        fail("unknown merge condition term '" + word + "'");
    }

    std::vector<Token> tokens_;
    size_t pos_ = 0;
    ParseOptions opts_;
};

}  // namespace detail

inline TransformProgram parse_program(const std::string& text, ParseOptions opts = {}) {
    detail::ProgramParser parser(text, opts);
    TransformProgram p = parser.parse_program();
    if (!parser.at_end()) {
        throw Error(Errc::syntax_error, "trailing input after program block");
    }
    return p;
}

// Library files are a sequence of program blocks; application order is file
// order.
inline std::vector<TransformProgram> parse_program_sequence(const std::string& text,
                                                            ParseOptions opts = {}) {
    detail::ProgramParser parser(text, opts);
    std::vector<TransformProgram> out;
    while (!parser.at_end()) out.push_back(parser.parse_program());
    return out;
}

}  // namespace uiopt
