#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uiopt {

// Pixel rectangle in screen coordinates. x1 <= x2 and y1 <= y2 always hold;
// construction normalizes inverted corners.
struct Bounds {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    Bounds() = default;
    Bounds(int ax1, int ay1, int ax2, int ay2)
        : x1(std::min(ax1, ax2)), y1(std::min(ay1, ay2)),
          x2(std::max(ax1, ax2)), y2(std::max(ay1, ay2)) {}

    bool operator==(const Bounds&) const = default;

    static Bounds unite(const Bounds& a, const Bounds& b) {
        return Bounds(std::min(a.x1, b.x1), std::min(a.y1, b.y1),
                      std::max(a.x2, b.x2), std::max(a.y2, b.y2));
    }
};

enum class Flag : uint8_t {
    clickable = 0,
    long_clickable,
    focusable,
    enabled,
    visible,
    scrollable,
    editable,
    checkable,
};

inline constexpr int kFlagCount = 8;

inline constexpr std::array<std::string_view, kFlagCount> kFlagNames = {
    "clickable", "long_clickable", "focusable", "enabled",
    "visible",   "scrollable",     "editable",  "checkable",
};

inline std::optional<Flag> flag_from_name(std::string_view name) {
    for (int i = 0; i < kFlagCount; ++i) {
        if (kFlagNames[size_t(i)] == name) return Flag(i);
    }
    return std::nullopt;
}

// Small value-type flag set; serialization iterates flags in declaration
// order so output is byte-stable.
class FlagSet {
public:
    FlagSet() = default;

    bool test(Flag f) const { return bits_ & (1u << uint8_t(f)); }
    void set(Flag f, bool on = true) {
        if (on)
            bits_ |= (1u << uint8_t(f));
        else
            bits_ &= ~(1u << uint8_t(f));
    }
    bool any() const { return bits_ != 0; }
    uint8_t raw() const { return bits_; }

    FlagSet operator|(const FlagSet& o) const {
        FlagSet r;
        r.bits_ = bits_ | o.bits_;
        return r;
    }
    FlagSet& operator|=(const FlagSet& o) {
        bits_ |= o.bits_;
        return *this;
    }
    bool operator==(const FlagSet&) const = default;

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (int i = 0; i < kFlagCount; ++i) {
            if (bits_ & (1u << i)) fn(Flag(i));
        }
    }

private:
    uint8_t bits_ = 0;
};

// Attribute map preserving document order.
using AttrMap = std::vector<std::pair<std::string, std::string>>;

inline const std::string* attr_find(const AttrMap& attrs, std::string_view key) {
    for (const auto& [k, v] : attrs) {
        if (k == key) return &v;
    }
    return nullptr;
}

struct UINode {
    int node_id = 0;
    std::string tag;
    std::string text;
    AttrMap attributes;
    FlagSet flags;
    std::optional<Bounds> bounds;
    std::vector<UINode> children;
    int depth = 0;

    bool is_leaf() const { return children.empty(); }
};

enum class TreeSource { android_xml, canonical, dom_export };

inline const char* tree_source_name(TreeSource s) {
    switch (s) {
        case TreeSource::android_xml: return "android_xml";
        case TreeSource::canonical: return "canonical";
        case TreeSource::dom_export: return "dom_export";
    }
    return "canonical";
}

inline std::optional<TreeSource> tree_source_from_name(std::string_view s) {
    if (s == "android_xml") return TreeSource::android_xml;
    if (s == "canonical") return TreeSource::canonical;
    if (s == "dom_export") return TreeSource::dom_export;
    return std::nullopt;
}

struct UITree {
    UINode root;
    TreeSource source = TreeSource::canonical;
    int node_count = 0;
};

// Assigns pre-order node ids starting at 0, recomputes depths and the node
// count. Call after building or mutating a tree by hand; parsers call it
// themselves.
inline void finalize_tree(UITree& tree) {
    int next_id = 0;
    auto walk = [&](auto&& self, UINode& node, int depth) -> void {
        node.node_id = next_id++;
        node.depth = depth;
        for (auto& child : node.children) self(self, child, depth + 1);
    };
    walk(walk, tree.root, 0);
    tree.node_count = next_id;
}

template <typename Fn>
void visit_preorder(const UINode& node, Fn&& fn) {
    fn(node);
    for (const auto& child : node.children) visit_preorder(child, fn);
}

inline bool node_is_interactive(const FlagSet& flags) {
    return flags.test(Flag::clickable) || flags.test(Flag::long_clickable)
        || flags.test(Flag::editable) || flags.test(Flag::checkable);
}

inline std::vector<const UINode*> collect_leaves(const UITree& tree) {
    std::vector<const UINode*> leaves;
    visit_preorder(tree.root, [&](const UINode& n) {
        if (n.is_leaf()) leaves.push_back(&n);
    });
    return leaves;
}

inline bool structurally_equal(const UINode& a, const UINode& b) {
    if (a.tag != b.tag || a.text != b.text || !(a.flags == b.flags) || a.bounds != b.bounds
        || a.attributes != b.attributes || a.children.size() != b.children.size()
        || a.depth != b.depth || a.node_id != b.node_id) {
        return false;
    }
    for (size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    }
    return true;
}

inline bool structurally_equal(const UITree& a, const UITree& b) {
    return a.source == b.source && a.node_count == b.node_count
        && structurally_equal(a.root, b.root);
}

}  // namespace uiopt
