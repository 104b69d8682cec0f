#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uiopt/canonical.hpp"
#include "uiopt/dsl/ast.hpp"
#include "uiopt/errors.hpp"
#include "uiopt/tree.hpp"

namespace uiopt {

// A consolidated semantic element produced by transformation. source_ids
// lists every node consumed into the view, in ascending (pre-order) order.
struct View {
    int view_id = 0;
    std::string text;
    std::string type_name;
    bool interactive = false;
    FlagSet flags;
    std::optional<Bounds> bounds;
    std::vector<int> source_ids;
    int depth = 0;
    AttrMap props;
};

struct ViewList {
    std::vector<View> views;
    int origin_node_count = 0;
    std::optional<long> token_count;
};

struct ApplyOptions {
    // When set, the pass-through branch wraps child views under a container
    // view for the current node instead of splicing them upward.
    bool retain_containers = false;
};

inline bool eval_node_pred(const NodePredPtr& p, const UINode& node) {
    using K = NodePred::Kind;
    switch (p->kind) {
        case K::always_true: return true;
        case K::always_false: return false;
        case K::tag_equals: return node.tag == p->str;
        case K::tag_in:
            return std::find(p->tags.begin(), p->tags.end(), node.tag) != p->tags.end();
        case K::attr_exists: return attr_find(node.attributes, p->str) != nullptr;
        case K::attr_equals: {
            const std::string* v = attr_find(node.attributes, p->str);
            return v && *v == p->value;
        }
        case K::attr_matches: {
            const std::string* v = attr_find(node.attributes, p->str);
            if (!v) return false;
            if (!p->pattern_re) {
                throw Error(Errc::predicate_evaluation,
                            "pattern /" + p->value + "/ unavailable at node "
                                + std::to_string(node.node_id));
            }
            try {
                return std::regex_match(*v, *p->pattern_re);
            } catch (const std::regex_error& e) {
                throw Error(Errc::predicate_evaluation,
                            std::string(e.what()) + " at node " + std::to_string(node.node_id));
            }
        }
        case K::text_empty: return node.text.empty();
        case K::text_nonempty: return !node.text.empty();
        case K::text_equals: return node.text == p->str;
        case K::flag_set: {
            auto flag = flag_from_name(p->str);
            return flag && node.flags.test(*flag);
        }
        case K::child_count: return cmp_eval(p->cmp, long(node.children.size()), p->num);
        case K::depth_is: return cmp_eval(p->cmp, node.depth, p->num);
        case K::not_op: return !eval_node_pred(p->a, node);
        case K::and_op: return eval_node_pred(p->a, node) && eval_node_pred(p->b, node);
        case K::or_op: return eval_node_pred(p->a, node) || eval_node_pred(p->b, node);
    }
    return false;
}

inline bool eval_view_pred(const ViewPredPtr& p, const View& v) {
    using K = ViewPred::Kind;
    switch (p->kind) {
        case K::text_empty: return v.text.empty();
        case K::text_nonempty: return !v.text.empty();
        case K::interactive: return v.interactive;
        case K::type_equals: return v.type_name == p->type_name;
        case K::not_op: return !eval_view_pred(p->a, v);
        case K::and_op: return eval_view_pred(p->a, v) && eval_view_pred(p->b, v);
        case K::or_op: return eval_view_pred(p->a, v) || eval_view_pred(p->b, v);
    }
    return false;
}

inline bool eval_merge_pred(const MergePredPtr& p, const UINode& node,
                            std::span<const View> children) {
    using K = MergePred::Kind;
    switch (p->kind) {
        case K::always_true: return true;
        case K::always_false: return false;
        case K::all_views:
            return std::all_of(children.begin(), children.end(),
                               [&](const View& v) { return eval_view_pred(p->view, v); });
        case K::any_view:
            return std::any_of(children.begin(), children.end(),
                               [&](const View& v) { return eval_view_pred(p->view, v); });
        case K::view_count: return cmp_eval(p->cmp, long(children.size()), p->num);
        case K::node_guard: return eval_node_pred(p->guard, node);
        case K::not_op: return !eval_merge_pred(p->a, node, children);
        case K::and_op:
            return eval_merge_pred(p->a, node, children)
                && eval_merge_pred(p->b, node, children);
        case K::or_op:
            return eval_merge_pred(p->a, node, children)
                || eval_merge_pred(p->b, node, children);
    }
    return false;
}

namespace detail {

inline void copy_props(const UINode& node, const std::vector<std::string>& keys, AttrMap& props) {
    for (const auto& key : keys) {
        if (key == "text") continue;  // carried by the text field
        if (const std::string* v = attr_find(node.attributes, key)) {
            props.emplace_back(key, *v);
        }
    }
}

inline View make_leaf_view(const UINode& node, const std::vector<std::string>& leaf_props) {
    View v;
    v.text = node.text;
    v.type_name = node.tag;
    v.flags = node.flags;
    v.interactive = node_is_interactive(node.flags);
    v.bounds = node.bounds;
    v.source_ids = {node.node_id};
    v.depth = node.depth;
    copy_props(node, leaf_props, v.props);
    return v;
}

inline View merge_views(const UINode& node, std::vector<View>&& children,
                        const TransformProgram& program) {
    View v;
    v.type_name = node.tag;
    if (program.merge_props.type == TypeRule::dominant_child && !children.empty()) {
        // Most frequent child view type; ties go to the earliest occurrence.
        std::vector<std::pair<std::string, int>> counts;
        for (const View& c : children) {
            auto it = std::find_if(counts.begin(), counts.end(),
                                   [&](const auto& e) { return e.first == c.type_name; });
            if (it == counts.end())
                counts.emplace_back(c.type_name, 1);
            else
                ++it->second;
        }
        int best = 0;
        for (const auto& [name, n] : counts) {
            if (n > best) {
                best = n;
                v.type_name = name;
            }
        }
    }

    switch (program.merge_props.text) {
        case TextRule::concat: {
            // Child texts in document order, single-space joined, empties
            // skipped. The merging node's own text is not included so that
            // merge-only programs conserve the leaf text multiset.
            for (const View& c : children) {
                if (c.text.empty()) continue;
                if (!v.text.empty()) v.text += ' ';
                v.text += c.text;
            }
            break;
        }
        case TextRule::first:
            for (const View& c : children) {
                if (!c.text.empty()) {
                    v.text = c.text;
                    break;
                }
            }
            break;
        case TextRule::parent: v.text = node.text; break;
    }

    v.flags = node.flags;
    v.interactive = node_is_interactive(node.flags);
    v.bounds = node.bounds;
    v.source_ids.push_back(node.node_id);
    for (View& c : children) {
        v.flags |= c.flags;
        v.interactive = v.interactive || c.interactive;
        if (c.bounds) v.bounds = v.bounds ? Bounds::unite(*v.bounds, *c.bounds) : *c.bounds;
        v.source_ids.insert(v.source_ids.end(), c.source_ids.begin(), c.source_ids.end());
    }
    v.depth = node.depth;
    copy_props(node, program.leaf_props, v.props);
    return v;
}

inline std::vector<View> transform_node(const UINode& node, const TransformProgram& program,
                                        const ApplyOptions& opts) {
    if (node.is_leaf()) {
        if (eval_node_pred(program.leaf_filter, node)) return {};
        return {make_leaf_view(node, program.leaf_props)};
    }
    std::vector<View> child_views;
    for (const UINode& child : node.children) {
        auto sub = transform_node(child, program, opts);
        child_views.insert(child_views.end(), std::make_move_iterator(sub.begin()),
                           std::make_move_iterator(sub.end()));
    }
    if (eval_node_pred(program.node_filter, node)) return child_views;
    if (eval_merge_pred(program.merge_when, node, child_views)) {
        std::vector<View> out;
        out.push_back(merge_views(node, std::move(child_views), program));
        return out;
    }
    if (opts.retain_containers) {
        std::vector<View> out;
        out.reserve(child_views.size() + 1);
        out.push_back(make_leaf_view(node, program.leaf_props));
        out.insert(out.end(), std::make_move_iterator(child_views.begin()),
                   std::make_move_iterator(child_views.end()));
        return out;
    }
    return child_views;
}

}  // namespace detail

// Bottom-up application of one transformation program; implements the
// recursive template: leaf creation/filtering, internal-node splice, merge,
// pass-through.
inline ViewList apply(const TransformProgram& program, const UITree& tree,
                      ApplyOptions opts = {}) {
    ViewList out;
    out.origin_node_count = tree.node_count;
    out.views = detail::transform_node(tree.root, program, opts);
    for (size_t i = 0; i < out.views.size(); ++i) out.views[i].view_id = int(i);
    return out;
}

inline TransformProgram identity_program() {
    TransformProgram p;
    p.program_id = "identity";
    p.leaf_filter = np::false_();
    p.node_filter = np::true_();
    p.merge_when = mp::false_();
    return p;
}

// Rebuilds a tree from a view list by depth nesting: each view hangs off the
// nearest preceding view with strictly smaller recorded depth, or off a
// synthetic root. Node ids and depths are reassigned pre-order.
inline UITree lift(const ViewList& views) {
    UITree tree;
    tree.source = TreeSource::canonical;
    tree.root.tag = "root";

    struct Level {
        int view_depth;
        UINode* node;
    };
    std::vector<Level> stack{{-1, &tree.root}};
    for (const View& v : views.views) {
        while (stack.back().view_depth >= v.depth) stack.pop_back();
        UINode* parent = stack.back().node;
        UINode node;
        node.tag = v.type_name;
        node.text = v.text;
        node.flags = v.flags;
        node.bounds = v.bounds;
        node.attributes = v.props;
        parent->children.push_back(std::move(node));
        stack.push_back({v.depth, &parent->children.back()});
    }
    finalize_tree(tree);
    return tree;
}

// Sequentially applies a program library, re-lifting the view list into a
// tree between programs. An empty library degenerates to the identity-style
// application (all leaves kept).
inline ViewList apply_library(std::span<const TransformProgram> library, const UITree& tree,
                              ApplyOptions opts = {}) {
    if (library.empty()) return apply(identity_program(), tree, opts);
    UITree current;
    const UITree* input = &tree;
    ViewList views;
    for (size_t i = 0; i < library.size(); ++i) {
        try {
            views = apply(library[i], *input, opts);
        } catch (const Error& e) {
            throw Error(e.code(), "program #" + std::to_string(i) + " ("
                                      + library[i].program_id + "): " + e.what());
        }
        if (i + 1 < library.size()) {
            current = lift(views);
            input = &current;
        }
    }
    views.origin_node_count = tree.node_count;
    return views;
}

// One view per line, depth-indented, same field syntax as the canonical tree
// format.
inline std::string serialize_views(const ViewList& views) {
    std::string out;
    for (const View& v : views.views) {
        UINode tmp;
        tmp.tag = v.type_name;
        tmp.text = v.text;
        tmp.flags = v.flags;
        tmp.bounds = v.bounds;
        tmp.attributes = v.props;
        detail::write_node_line(out, tmp, v.depth);
    }
    return out;
}

}  // namespace uiopt
