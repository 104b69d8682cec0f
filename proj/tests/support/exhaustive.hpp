#pragma once

// Exhaustive generation of small trees for oracle-equivalence testing:
// every ordered rooted tree shape up to a node budget, labeled by systematic
// schemes over a 3-tag / 2-flag vocabulary. (Exhausting all labelings too is
// combinatorially infeasible; the schemes cycle the vocabulary so every
// atom/shape pairing occurs.)

#include <string>
#include <vector>

#include "uiopt/tree.hpp"

namespace exhaustive {

struct Shape {
    std::vector<Shape> children;
};

inline std::vector<std::vector<Shape>> forests_of(int total);

inline std::vector<Shape> shapes_of(int nodes) {
    std::vector<Shape> out;
    for (auto& forest : forests_of(nodes - 1)) {
        out.push_back(Shape{std::move(forest)});
    }
    return out;
}

inline std::vector<std::vector<Shape>> forests_of(int total) {
    std::vector<std::vector<Shape>> out;
    if (total == 0) {
        out.emplace_back();
        return out;
    }
    for (int first = 1; first <= total; ++first) {
        for (const Shape& head : shapes_of(first)) {
            for (const auto& rest : forests_of(total - first)) {
                std::vector<Shape> forest;
                forest.push_back(head);
                forest.insert(forest.end(), rest.begin(), rest.end());
                out.push_back(std::move(forest));
            }
        }
    }
    return out;
}

inline std::vector<Shape> all_shapes_up_to(int max_nodes) {
    std::vector<Shape> out;
    for (int n = 1; n <= max_nodes; ++n) {
        for (auto& s : shapes_of(n)) out.push_back(std::move(s));
    }
    return out;
}

inline const std::vector<std::string>& label_tags() {
    static const std::vector<std::string> tags = {"A", "B", "C"};
    return tags;
}

// Deterministic labeling: node at pre-order position i under scheme variant
// v. Tags cycle, the two vocabulary flags follow bit patterns, texts mix
// empty and short words, bounds appear on alternating nodes.
inline void label_node(uiopt::UINode& node, int ordinal, int variant) {
    int x = ordinal + variant;
    node.tag = label_tags()[size_t(x % 3)];
    if (x % 2 == 0) node.flags.set(uiopt::Flag::clickable);
    if ((ordinal + 2 * variant) % 3 == 0) node.flags.set(uiopt::Flag::focusable);
    if (x % 3 != 0) node.text = "t" + std::to_string(x % 4);
    if (x % 2 == 1) {
        node.bounds = uiopt::Bounds(ordinal * 7 % 50, ordinal, ordinal * 7 % 50 + 10 + variant,
                                    ordinal + 5);
    }
}

inline uiopt::UITree labeled_tree(const Shape& shape, int variant) {
    uiopt::UITree tree;
    int ordinal = 0;
    auto build = [&](auto&& self, const Shape& s, uiopt::UINode& node) -> void {
        label_node(node, ordinal++, variant);
        node.children.resize(s.children.size());
        for (size_t i = 0; i < s.children.size(); ++i) {
            self(self, s.children[i], node.children[i]);
        }
    };
    build(build, shape, tree.root);
    uiopt::finalize_tree(tree);
    return tree;
}

}  // namespace exhaustive
