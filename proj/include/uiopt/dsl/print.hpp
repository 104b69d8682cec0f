#pragma once

#include <string>

#include "uiopt/dsl/ast.hpp"
#include "uiopt/text_util.hpp"

namespace uiopt {

namespace detail {

// Precedence: or < and < not < atom. Right operands of binary ops print at
// one level higher so that parse(print(p)) rebuilds the same shape.
inline void print_node_pred(std::string& out, const NodePredPtr& p, int min_prec);

inline void print_quoted(std::string& out, const std::string& s) {
    out += '"';
    out += escape_quoted(s);
    out += '"';
}

inline void print_node_atom(std::string& out, const NodePred& p) {
    using K = NodePred::Kind;
    switch (p.kind) {
        case K::always_true: out += "true"; break;
        case K::always_false: out += "false"; break;
        case K::tag_equals:
            out += "tag = ";
            print_quoted(out, p.str);
            break;
        case K::tag_in: {
            out += "tag in (";
            bool first = true;
            for (const auto& t : p.tags) {
                if (!first) out += ", ";
                first = false;
                print_quoted(out, t);
            }
            out += ')';
            break;
        }
        case K::attr_exists:
            out += "attr(";
            print_quoted(out, p.str);
            out += ") exists";
            break;
        case K::attr_equals:
            out += "attr(";
            print_quoted(out, p.str);
            out += ") = ";
            print_quoted(out, p.value);
            break;
        case K::attr_matches: {
            out += "attr(";
            print_quoted(out, p.str);
            out += ") matches /";
            for (char c : p.value) {
                if (c == '/') out += '\\';
                out += c;
            }
            out += '/';
            break;
        }
        case K::text_empty: out += "text empty"; break;
        case K::text_nonempty: out += "text nonempty"; break;
        case K::text_equals:
            out += "text = ";
            print_quoted(out, p.str);
            break;
        case K::flag_set:
            out += "flag(";
            out += p.str;
            out += ')';
            break;
        case K::child_count:
            out += "child-count ";
            out += cmp_text(p.cmp);
            out += ' ';
            out += std::to_string(p.num);
            break;
        case K::depth_is:
            out += "depth ";
            out += cmp_text(p.cmp);
            out += ' ';
            out += std::to_string(p.num);
            break;
        default: break;
    }
}

inline void print_node_pred(std::string& out, const NodePredPtr& p, int min_prec) {
    using K = NodePred::Kind;
    switch (p->kind) {
        case K::or_op: {
            bool parens = min_prec > 1;
            if (parens) out += '(';
            print_node_pred(out, p->a, 1);
            out += " or ";
            print_node_pred(out, p->b, 2);
            if (parens) out += ')';
            break;
        }
        case K::and_op: {
            bool parens = min_prec > 2;
            if (parens) out += '(';
            print_node_pred(out, p->a, 2);
            out += " and ";
            print_node_pred(out, p->b, 3);
            if (parens) out += ')';
            break;
        }
        case K::not_op:
            out += "not ";
            print_node_pred(out, p->a, 3);
            break;
        default: print_node_atom(out, *p); break;
    }
}

inline void print_view_pred(std::string& out, const ViewPredPtr& p, int min_prec) {
    using K = ViewPred::Kind;
    switch (p->kind) {
        case K::or_op: {
            bool parens = min_prec > 1;
            if (parens) out += '(';
            print_view_pred(out, p->a, 1);
            out += " or ";
            print_view_pred(out, p->b, 2);
            if (parens) out += ')';
            break;
        }
        case K::and_op: {
            bool parens = min_prec > 2;
            if (parens) out += '(';
            print_view_pred(out, p->a, 2);
            out += " and ";
            print_view_pred(out, p->b, 3);
            if (parens) out += ')';
            break;
        }
        case K::not_op:
            out += "not ";
            print_view_pred(out, p->a, 3);
            break;
        case K::text_empty: out += "text empty"; break;
        case K::text_nonempty: out += "text nonempty"; break;
        case K::interactive: out += "interactive"; break;
        case K::type_equals:
            out += "type = ";
            print_quoted(out, p->type_name);
            break;
    }
}

inline void print_merge_pred(std::string& out, const MergePredPtr& p, int min_prec) {
    using K = MergePred::Kind;
    switch (p->kind) {
        case K::or_op: {
            bool parens = min_prec > 1;
            if (parens) out += '(';
            print_merge_pred(out, p->a, 1);
            out += " or ";
            print_merge_pred(out, p->b, 2);
            if (parens) out += ')';
            break;
        }
        case K::and_op: {
            bool parens = min_prec > 2;
            if (parens) out += '(';
            print_merge_pred(out, p->a, 2);
            out += " and ";
            print_merge_pred(out, p->b, 3);
            if (parens) out += ')';
            break;
        }
        case K::not_op:
            out += "not ";
            print_merge_pred(out, p->a, 3);
            break;
        case K::always_true: out += "true"; break;
        case K::always_false: out += "false"; break;
        case K::all_views:
            out += "all-views(";
            print_view_pred(out, p->view, 1);
            out += ')';
            break;
        case K::any_view:
            out += "any-view(";
            print_view_pred(out, p->view, 1);
            out += ')';
            break;
        case K::view_count:
            out += "view-count ";
            out += cmp_text(p->cmp);
            out += ' ';
            out += std::to_string(p->num);
            break;
        case K::node_guard:
            out += "node(";
            print_node_pred(out, p->guard, 1);
            out += ')';
            break;
    }
}

}  // namespace detail

inline std::string print_node_pred(const NodePredPtr& p) {
    std::string out;
    detail::print_node_pred(out, p, 1);
    return out;
}

inline std::string print_merge_pred(const MergePredPtr& p) {
    std::string out;
    detail::print_merge_pred(out, p, 1);
    return out;
}

// Canonical one-line body, without the program id. Used for printing,
// duplicate detection and enumeration ordering.
inline std::string print_program_body(const TransformProgram& p) {
    std::string out = "{ leaf-filter: ";
    detail::print_node_pred(out, p.leaf_filter, 1);
    out += "; leaf-props: [";
    bool first = true;
    for (const auto& key : p.leaf_props) {
        if (!first) out += ", ";
        first = false;
        out += key;
    }
    out += "]; node-filter: ";
    detail::print_node_pred(out, p.node_filter, 1);
    out += "; merge-when: ";
    detail::print_merge_pred(out, p.merge_when, 1);
    out += "; merge-props { text: ";
    out += text_rule_name(p.merge_props.text);
    out += "; type: ";
    out += type_rule_name(p.merge_props.type);
    out += " }; }";
    return out;
}

inline std::string print_program(const TransformProgram& p) {
    return "program " + p.program_id + " " + print_program_body(p);
}

}  // namespace uiopt
