#pragma once

#include <random>
#include <string>
#include <vector>

#include "uiopt/tree.hpp"

namespace uiopt {

// Seeded deterministic randomness. Draws go through an explicit modulo so
// generated corpora are byte-identical across standard libraries;
// std::uniform_int_distribution is implementation-defined.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : engine_(seed) {}

    uint64_t raw() { return engine_(); }
    uint32_t below(uint32_t n) { return n == 0 ? 0 : uint32_t(engine_() % n); }
    bool chance(uint32_t numerator, uint32_t denominator) {
        return below(denominator) < numerator;
    }

private:
    std::mt19937_64 engine_;
};

struct TreeGenConfig {
    int min_nodes = 1;
    int max_nodes = 200;
    std::vector<std::string> tags = {"FrameLayout", "LinearLayout", "TextView",
                                     "Button",      "ImageView",    "EditText"};
    // Per-mille probabilities.
    uint32_t text_chance = 500;
    uint32_t flag_chance = 250;
    uint32_t bounds_chance = 300;
    uint32_t attr_chance = 150;
    // When set, generated texts include quotes/backslashes to exercise
    // escaping; otherwise texts are single alphanumeric words.
    bool special_chars = false;
};

inline UITree generate_tree(DetRng& rng, const TreeGenConfig& cfg = {}) {
    int span = cfg.max_nodes - cfg.min_nodes + 1;
    int node_count = cfg.min_nodes + int(rng.below(uint32_t(span)));

    UITree tree;
    tree.source = TreeSource::canonical;

    std::vector<UINode*> nodes;
    auto fill = [&](UINode& n, int ordinal) {
        n.tag = cfg.tags[rng.below(uint32_t(cfg.tags.size()))];
        if (rng.chance(cfg.text_chance, 1000)) {
            n.text = "w" + std::to_string(ordinal % 97);
            if (cfg.special_chars && rng.chance(1, 8)) {
                n.text += rng.chance(1, 2) ? "\"q\"" : "\\esc";
            }
        }
        if (rng.chance(cfg.flag_chance, 1000)) n.flags.set(Flag::visible);
        if (rng.chance(cfg.flag_chance, 1000)) n.flags.set(Flag::clickable);
        if (rng.chance(cfg.flag_chance / 2 + 1, 1000)) n.flags.set(Flag::editable);
        if (rng.chance(cfg.flag_chance / 2 + 1, 1000)) n.flags.set(Flag::focusable);
        if (rng.chance(cfg.bounds_chance, 1000)) {
            int x = int(rng.below(1000));
            int y = int(rng.below(1800));
            n.bounds = Bounds(x, y, x + int(rng.below(200)) + 1, y + int(rng.below(200)) + 1);
        }
        if (rng.chance(cfg.attr_chance, 1000)) {
            n.attributes.emplace_back("resource-id", "id/r" + std::to_string(ordinal % 31));
        }
    };

    fill(tree.root, 0);
    nodes.push_back(&tree.root);
    for (int i = 1; i < node_count; ++i) {
        UINode* parent = nodes[rng.below(uint32_t(nodes.size()))];
        parent->children.emplace_back();
        UINode* child = &parent->children.back();
        fill(*child, i);
        // Pointers into reallocated sibling vectors must be refreshed.
        nodes.clear();
        visit_preorder(tree.root, [&](const UINode& n) {
            nodes.push_back(const_cast<UINode*>(&n));
        });
    }
    finalize_tree(tree);
    return tree;
}

inline std::vector<UITree> generate_corpus(uint64_t seed, int count,
                                           const TreeGenConfig& cfg = {}) {
    DetRng rng(seed);
    std::vector<UITree> out;
    out.reserve(size_t(count));
    for (int i = 0; i < count; ++i) out.push_back(generate_tree(rng, cfg));
    return out;
}

}  // namespace uiopt
