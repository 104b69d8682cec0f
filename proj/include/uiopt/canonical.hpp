#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "uiopt/errors.hpp"
#include "uiopt/text_util.hpp"
#include "uiopt/tree.hpp"

namespace uiopt {

// Canonical tree interchange format, UTF-8:
//
//   uitree v1 <source>
//   <tag> [text="..."] [flags=[a,b]] [bounds=[x1,y1][x2,y2]] [attrs{k="v",...}]
//     <child line at one more indent level>
//
// Indentation is two spaces per depth level, nodes in pre-order. Quoted
// values escape `"` and `\` with a backslash.

namespace detail {

struct LineCursor {
    std::string_view s;
    size_t pos = 0;
    int line_no = 0;

    bool eof() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }

    void expect(char c, const char* what) {
        if (eof() || s[pos] != c) {
            throw Error(Errc::schema_violation,
                        std::string("expected ") + what + " in node line", line_no,
                        int(pos) + 1);
        }
        ++pos;
    }

    std::string quoted() {
        expect('"', "opening quote");
        std::string out;
        while (!eof() && s[pos] != '"') {
            char c = s[pos++];
            if (c == '\\') {
                if (eof()) break;
                out.push_back(s[pos++]);
            } else {
                out.push_back(c);
            }
        }
        expect('"', "closing quote");
        return out;
    }

    int integer() {
        bool neg = false;
        if (!eof() && (s[pos] == '-' || s[pos] == '+')) {
            neg = s[pos] == '-';
            ++pos;
        }
        if (eof() || !std::isdigit(uint8_t(s[pos]))) {
            throw Error(Errc::schema_violation, "expected integer", line_no, int(pos) + 1);
        }
        long v = 0;
        while (!eof() && std::isdigit(uint8_t(s[pos]))) v = v * 10 + (s[pos++] - '0');
        return int(neg ? -v : v);
    }

    std::string word() {
        size_t start = pos;
        while (!eof() && !is_space(s[pos]) && s[pos] != '=' && s[pos] != '{' && s[pos] != ','
               && s[pos] != '}' && s[pos] != ']') {
            ++pos;
        }
        return std::string(s.substr(start, pos - start));
    }

    void skip_spaces() {
        while (!eof() && s[pos] == ' ') ++pos;
    }
};

inline void parse_node_line(std::string_view body, int line_no, UINode& node) {
    LineCursor cur{body, 0, line_no};
    node.tag = cur.word();
    if (node.tag.empty()) {
        throw Error(Errc::schema_violation, "tag: missing element tag", line_no, 1);
    }
    cur.skip_spaces();
    bool seen_text = false, seen_flags = false, seen_bounds = false, seen_attrs = false;
    while (!cur.eof()) {
        std::string field = cur.word();
        if (field == "text") {
            if (seen_text) throw Error(Errc::schema_violation, "text: duplicate field", line_no, 1);
            seen_text = true;
            cur.expect('=', "'=' after text");
            node.text = normalize_text(cur.quoted());
        } else if (field == "flags") {
            if (seen_flags)
                throw Error(Errc::schema_violation, "flags: duplicate field", line_no, 1);
            seen_flags = true;
            cur.expect('=', "'=' after flags");
            cur.expect('[', "'[' opening flag list");
            while (!cur.eof() && cur.peek() != ']') {
                std::string name = cur.word();
                auto flag = flag_from_name(name);
                if (!flag) {
                    throw Error(Errc::schema_violation, "flags: unknown flag '" + name + "'",
                                line_no, 1);
                }
                node.flags.set(*flag);
                if (!cur.eof() && cur.peek() == ',') ++cur.pos;
            }
            cur.expect(']', "']' closing flag list");
        } else if (field == "bounds") {
            if (seen_bounds)
                throw Error(Errc::schema_violation, "bounds: duplicate field", line_no, 1);
            seen_bounds = true;
            cur.expect('=', "'=' after bounds");
            cur.expect('[', "'['");
            int x1 = cur.integer();
            cur.expect(',', "','");
            int y1 = cur.integer();
            cur.expect(']', "']'");
            cur.expect('[', "'['");
            int x2 = cur.integer();
            cur.expect(',', "','");
            int y2 = cur.integer();
            cur.expect(']', "']'");
            node.bounds = Bounds(x1, y1, x2, y2);
        } else if (field == "attrs") {
            if (seen_attrs)
                throw Error(Errc::schema_violation, "attrs: duplicate field", line_no, 1);
            seen_attrs = true;
            cur.expect('{', "'{' opening attrs");
            while (!cur.eof() && cur.peek() != '}') {
                std::string key = cur.word();
                if (key.empty()) {
                    throw Error(Errc::schema_violation, "attrs: empty key", line_no, 1);
                }
                cur.expect('=', "'=' after attr key");
                node.attributes.emplace_back(key, cur.quoted());
                if (!cur.eof() && cur.peek() == ',') ++cur.pos;
            }
            cur.expect('}', "'}' closing attrs");
        } else if (field.empty()) {
            throw Error(Errc::schema_violation, "unexpected character in node line", line_no,
                        int(cur.pos) + 1);
        } else {
            throw Error(Errc::schema_violation, "unknown field '" + field + "'", line_no, 1);
        }
        cur.skip_spaces();
    }
}

inline void write_node_line(std::string& out, const UINode& node, int depth) {
    out.append(size_t(depth) * 2, ' ');
    out += node.tag;
    if (!node.text.empty()) {
        out += " text=\"";
        out += escape_quoted(node.text);
        out += '"';
    }
    if (node.flags.any()) {
        out += " flags=[";
        bool first = true;
        node.flags.for_each([&](Flag f) {
            if (!first) out += ',';
            first = false;
            out += kFlagNames[size_t(f)];
        });
        out += ']';
    }
    if (node.bounds) {
        out += " bounds=[" + std::to_string(node.bounds->x1) + ','
            + std::to_string(node.bounds->y1) + "][" + std::to_string(node.bounds->x2) + ','
            + std::to_string(node.bounds->y2) + ']';
    }
    if (!node.attributes.empty()) {
        out += " attrs{";
        bool first = true;
        for (const auto& [k, v] : node.attributes) {
            if (!first) out += ',';
            first = false;
            out += k;
            out += "=\"";
            out += escape_quoted(v);
            out += '"';
        }
        out += '}';
    }
    out += '\n';
}

}  // namespace detail

// Parses node records until end of input or a line that is not indented node
// content (used by the example-set reader which appends a targets section).
// `stop_line` receives the first unconsumed line when non-null.
inline UITree parse_canonical_stream(std::istream& in, std::string* stop_line = nullptr,
                                     int* stop_line_no = nullptr) {
    std::string header;
    int line_no = 0;
    if (!std::getline(in, header)) {
        throw Error(Errc::malformed_document, "empty document", 1, 1);
    }
    ++line_no;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::istringstream hs(header);
    std::string magic, version, source_name;
    hs >> magic >> version >> source_name;
    if (magic != "uitree" || version != "v1") {
        throw Error(Errc::malformed_document, "bad header, expected 'uitree v1 <source>'", 1, 1);
    }
    auto source = tree_source_from_name(source_name);
    if (!source) {
        throw Error(Errc::schema_violation, "source: unknown source '" + source_name + "'", 1, 1);
    }

    UITree tree;
    tree.source = *source;
    bool have_root = false;
    std::vector<UINode*> stack;  // stack[d] = last node seen at depth d

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        if (indent == line.size()) continue;
        if (stop_line && indent == 0 && have_root && line == "targets") {
            *stop_line = line;
            if (stop_line_no) *stop_line_no = line_no;
            break;
        }
        if (indent % 2 != 0) {
            throw Error(Errc::malformed_document, "indentation is not a multiple of two spaces",
                        line_no, int(indent) + 1);
        }
        int depth = int(indent / 2);
        UINode node;
        detail::parse_node_line(std::string_view(line).substr(indent), line_no, node);
        if (depth == 0) {
            if (have_root) {
                throw Error(Errc::malformed_document, "multiple root nodes", line_no, 1);
            }
            tree.root = std::move(node);
            have_root = true;
            stack.assign(1, &tree.root);
        } else {
            if (!have_root || depth > int(stack.size())) {
                throw Error(Errc::malformed_document,
                            "node at depth " + std::to_string(depth) + " has no parent", line_no,
                            1);
            }
            UINode* parent = stack[size_t(depth) - 1];
            parent->children.push_back(std::move(node));
            stack.resize(size_t(depth));
            stack.push_back(&parent->children.back());
        }
    }
    if (!have_root) {
        throw Error(Errc::empty_tree, "document contains no nodes", line_no, 1);
    }
    finalize_tree(tree);
    return tree;
}

inline UITree parse_canonical(const std::string& document) {
    std::istringstream in(document);
    return parse_canonical_stream(in);
}

inline std::string serialize_canonical(const UITree& tree) {
    std::string out = "uitree v1 ";
    out += tree_source_name(tree.source);
    out += '\n';
    visit_preorder(tree.root,
                   [&](const UINode& node) { detail::write_node_line(out, node, node.depth); });
    return out;
}

}  // namespace uiopt
