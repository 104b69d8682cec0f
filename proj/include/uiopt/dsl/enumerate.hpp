#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "uiopt/dsl/ast.hpp"
#include "uiopt/dsl/print.hpp"
#include "uiopt/tree.hpp"

namespace uiopt {

// Atom vocabulary driving enumeration. Regex atoms are deliberately not
// enumerated; they exist for hand-written programs.
struct EnumVocabulary {
    std::vector<std::string> tags;
    std::vector<std::string> flags;
    std::vector<std::string> attr_keys;
    std::vector<std::pair<std::string, std::string>> attr_values;
    std::vector<std::string> texts;
    std::vector<int> ints{1, 2};
    std::vector<Cmp> cmps{Cmp::eq, Cmp::le, Cmp::ge};
};

inline EnumVocabulary vocabulary_from_trees(std::span<const UITree> trees,
                                            size_t max_attr_keys = 4) {
    std::set<std::string> tags;
    std::set<std::string> flags;
    std::set<std::string> attr_keys;
    for (const UITree& t : trees) {
        visit_preorder(t.root, [&](const UINode& n) {
            tags.insert(n.tag);
            n.flags.for_each([&](Flag f) { flags.emplace(kFlagNames[size_t(f)]); });
            for (const auto& [k, v] : n.attributes) attr_keys.insert(k);
        });
    }
    EnumVocabulary vocab;
    vocab.tags.assign(tags.begin(), tags.end());
    vocab.flags.assign(flags.begin(), flags.end());
    for (const auto& k : attr_keys) {
        if (vocab.attr_keys.size() >= max_attr_keys) break;
        vocab.attr_keys.push_back(k);
    }
    return vocab;
}

namespace detail {

// Program size used for enumeration ordering: constant condition holes are
// free, tag-in costs the set size, every other atom costs one, combinators
// cost one plus their operands, and a non-default merge-props pair costs
// one.
inline int node_pred_size(const NodePredPtr& p) {
    using K = NodePred::Kind;
    switch (p->kind) {
        case K::always_true:
        case K::always_false: return 0;
        case K::tag_in: return int(p->tags.size());
        case K::not_op: return 1 + node_pred_size(p->a);
        case K::and_op:
        case K::or_op: return 1 + node_pred_size(p->a) + node_pred_size(p->b);
        default: return 1;
    }
}

inline int view_pred_size(const ViewPredPtr& p) {
    using K = ViewPred::Kind;
    switch (p->kind) {
        case K::not_op: return 1 + view_pred_size(p->a);
        case K::and_op:
        case K::or_op: return 1 + view_pred_size(p->a) + view_pred_size(p->b);
        default: return 1;
    }
}

inline int merge_pred_size(const MergePredPtr& p) {
    using K = MergePred::Kind;
    switch (p->kind) {
        case K::always_true:
        case K::always_false: return 0;
        case K::view_count: return 1;
        case K::all_views:
        case K::any_view: return 1 + view_pred_size(p->view);
        case K::node_guard: return 1 + node_pred_size(p->guard);
        case K::not_op: return 1 + merge_pred_size(p->a);
        case K::and_op:
        case K::or_op: return 1 + merge_pred_size(p->a) + merge_pred_size(p->b);
    }
    return 0;
}

inline int program_size(const TransformProgram& p) {
    int size = node_pred_size(p.leaf_filter) + node_pred_size(p.node_filter)
        + merge_pred_size(p.merge_when);
    if (!(p.merge_props == MergeProps{})) ++size;
    return size;
}

template <typename Ptr>
struct EnumEntry {
    Ptr pred;
    std::string printed;
};

// Builds and/or chains of k >= 2 operands drawn from per-size levels.
// Operands are strictly increasing by printed form and may not repeat the
// chain's own combinator (chains are kept flat), which makes every chain
// canonical and the output duplicate-free.
template <typename Ptr, typename CombineFn, typename OperandOkFn>
void gen_chains(const std::vector<std::vector<EnumEntry<Ptr>>>& levels, int total_size,
                const CombineFn& combine, const OperandOkFn& operand_ok, const char* op_text,
                std::vector<EnumEntry<Ptr>>& out) {
    std::vector<const EnumEntry<Ptr>*> operands;
    auto rec = [&](auto&& self, int remaining, const std::string* last_printed) -> void {
        for (int so = 1; so <= remaining && so < int(levels.size()); ++so) {
            int cost = operands.empty() ? so : so + 1;
            if (cost > remaining) break;
            for (const auto& entry : levels[size_t(so)]) {
                if (!operand_ok(entry.pred)) continue;
                if (last_printed && entry.printed <= *last_printed) continue;
                operands.push_back(&entry);
                if (operands.size() >= 2 && remaining - cost == 0) {
                    Ptr chained = operands[0]->pred;
                    std::string printed = operands[0]->printed;
                    for (size_t i = 1; i < operands.size(); ++i) {
                        chained = combine(chained, operands[i]->pred);
                        printed += ' ';
                        printed += op_text;
                        printed += ' ';
                        printed += operands[i]->printed;
                    }
                    out.push_back({std::move(chained), std::move(printed)});
                }
                if (remaining - cost > 0) self(self, remaining - cost, &entry.printed);
                operands.pop_back();
            }
        }
    };
    rec(rec, total_size, nullptr);
}

}  // namespace detail

// Deterministic, duplicate-free stream of valid programs in non-decreasing
// size (ties broken by printed body). Constant-hole combinations that can
// never influence the result are canonicalized away: a constant-true node
// filter forces merge-when false, and a constant-false merge-when forces a
// constant-true node filter.
class EnumerationStream {
public:
    EnumerationStream(EnumVocabulary vocab, int max_size)
        : vocab_(std::move(vocab)), max_size_(max_size) {
        node_levels_.resize(1);
        view_levels_.resize(1);
        merge_levels_.resize(1);
    }

    // Atoms blacklisted from leaf filters by synthesis feedback; programs
    // whose leaf filter contains one are skipped.
    void blacklist_leaf_atom(const std::string& printed_atom) {
        blacklist_.insert(printed_atom);
    }

    std::optional<TransformProgram> next() {
        while (true) {
            if (queue_pos_ < queue_.size()) {
                TransformProgram p = queue_[queue_pos_++];
                if (!blacklist_.empty() && leaf_filter_blacklisted(p.leaf_filter)) continue;
                p.program_id = "e" + pad_ordinal(++emitted_);
                p.provenance = Provenance::enumerated;
                return p;
            }
            if (current_size_ > max_size_) return std::nullopt;
            build_level(current_size_++);
        }
    }

private:
    using NodeEntry = detail::EnumEntry<NodePredPtr>;
    using ViewEntry = detail::EnumEntry<ViewPredPtr>;
    using MergeEntry = detail::EnumEntry<MergePredPtr>;

    static std::string pad_ordinal(long n) {
        std::string s = std::to_string(n);
        return std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
    }

    bool leaf_filter_blacklisted(const NodePredPtr& p) const {
        using K = NodePred::Kind;
        switch (p->kind) {
            case K::not_op: return leaf_filter_blacklisted(p->a);
            case K::and_op:
            case K::or_op:
                return leaf_filter_blacklisted(p->a) || leaf_filter_blacklisted(p->b);
            default: return blacklist_.count(print_node_pred(p)) > 0;
        }
    }

    void ensure_node_level(int s) {
        while (int(node_levels_.size()) <= s) {
            int size = int(node_levels_.size());
            std::vector<NodeEntry> level;
            if (size == 1) {
                for (const auto& t : vocab_.tags) add(level, np::tag_equals(t));
                for (const auto& f : vocab_.flags) add(level, np::flag(f));
                add(level, np::text_empty());
                add(level, np::text_nonempty());
                for (const auto& t : vocab_.texts) add(level, np::text_equals(t));
                for (const auto& k : vocab_.attr_keys) add(level, np::attr_exists(k));
                for (const auto& [k, v] : vocab_.attr_values) add(level, np::attr_equals(k, v));
                for (Cmp c : vocab_.cmps) {
                    for (int n : vocab_.ints) add(level, np::child_count(c, n));
                }
                for (Cmp c : vocab_.cmps) {
                    for (int n : vocab_.ints) add(level, np::depth(c, n));
                }
            } else {
                // tag-in over sorted tag subsets of exactly this size
                if (size <= int(vocab_.tags.size())) {
                    std::vector<std::string> sorted_tags = vocab_.tags;
                    std::sort(sorted_tags.begin(), sorted_tags.end());
                    std::vector<std::string> combo;
                    auto rec = [&](auto&& self, size_t start) -> void {
                        if (int(combo.size()) == size) {
                            add(level, np::tag_in(combo));
                            return;
                        }
                        for (size_t i = start; i < sorted_tags.size(); ++i) {
                            combo.push_back(sorted_tags[i]);
                            self(self, i + 1);
                            combo.pop_back();
                        }
                    };
                    rec(rec, 0);
                }
                for (const auto& e : node_levels_[size_t(size) - 1]) {
                    if (e.pred->kind == NodePred::Kind::not_op) continue;
                    add(level, np::not_(e.pred));
                }
                detail::gen_chains<NodePredPtr>(
                    node_levels_, size - 1,
                    [](const NodePredPtr& a, const NodePredPtr& b) { return np::and_(a, b); },
                    [](const NodePredPtr& p) { return p->kind != NodePred::Kind::and_op; },
                    "and", level);
                detail::gen_chains<NodePredPtr>(
                    node_levels_, size - 1,
                    [](const NodePredPtr& a, const NodePredPtr& b) { return np::or_(a, b); },
                    [](const NodePredPtr& p) { return p->kind != NodePred::Kind::or_op; },
                    "or", level);
            }
            sort_level(level);
            node_levels_.push_back(std::move(level));
        }
    }

    void ensure_view_level(int s) {
        while (int(view_levels_.size()) <= s) {
            int size = int(view_levels_.size());
            std::vector<ViewEntry> level;
            if (size == 1) {
                add(level, vp::text_empty());
                add(level, vp::text_nonempty());
                add(level, vp::interactive());
                for (const auto& t : vocab_.tags) add(level, vp::type_equals(t));
            } else {
                for (const auto& e : view_levels_[size_t(size) - 1]) {
                    if (e.pred->kind == ViewPred::Kind::not_op) continue;
                    add(level, vp::not_(e.pred));
                }
                detail::gen_chains<ViewPredPtr>(
                    view_levels_, size - 1,
                    [](const ViewPredPtr& a, const ViewPredPtr& b) { return vp::and_(a, b); },
                    [](const ViewPredPtr& p) { return p->kind != ViewPred::Kind::and_op; },
                    "and", level);
                detail::gen_chains<ViewPredPtr>(
                    view_levels_, size - 1,
                    [](const ViewPredPtr& a, const ViewPredPtr& b) { return vp::or_(a, b); },
                    [](const ViewPredPtr& p) { return p->kind != ViewPred::Kind::or_op; },
                    "or", level);
            }
            sort_level(level);
            view_levels_.push_back(std::move(level));
        }
    }

    void ensure_merge_level(int s) {
        ensure_view_level(s - 1);
        ensure_node_level(s - 1);
        while (int(merge_levels_.size()) <= s) {
            int size = int(merge_levels_.size());
            std::vector<MergeEntry> level;
            if (size == 1) {
                for (Cmp c : vocab_.cmps) {
                    for (int n : vocab_.ints) add(level, mp::view_count(c, n));
                }
            }
            if (size >= 2) {
                for (const auto& e : view_levels_[size_t(size) - 1]) {
                    add(level, mp::all_views(e.pred));
                    add(level, mp::any_view(e.pred));
                }
                for (const auto& e : node_levels_[size_t(size) - 1]) {
                    add(level, mp::node_guard(e.pred));
                }
                detail::gen_chains<MergePredPtr>(
                    merge_levels_, size - 1,
                    [](const MergePredPtr& a, const MergePredPtr& b) { return mp::and_(a, b); },
                    [](const MergePredPtr& p) { return p->kind != MergePred::Kind::and_op; },
                    "and", level);
                detail::gen_chains<MergePredPtr>(
                    merge_levels_, size - 1,
                    [](const MergePredPtr& a, const MergePredPtr& b) { return mp::or_(a, b); },
                    [](const MergePredPtr& p) { return p->kind != MergePred::Kind::or_op; },
                    "or", level);
            }
            sort_level(level);
            merge_levels_.push_back(std::move(level));
        }
    }

    template <typename Entry, typename Ptr>
    static void add_entry(std::vector<Entry>& level, Ptr pred, std::string printed) {
        level.push_back({std::move(pred), std::move(printed)});
    }
    void add(std::vector<NodeEntry>& level, NodePredPtr p) {
        std::string printed = print_node_pred(p);
        add_entry(level, std::move(p), std::move(printed));
    }
    void add(std::vector<ViewEntry>& level, ViewPredPtr p) {
        std::string printed;
        detail::print_view_pred(printed, p, 1);
        add_entry(level, std::move(p), std::move(printed));
    }
    void add(std::vector<MergeEntry>& level, MergePredPtr p) {
        add_entry(level, p, print_merge_pred(p));
    }

    template <typename Entry>
    static void sort_level(std::vector<Entry>& level) {
        std::sort(level.begin(), level.end(),
                  [](const Entry& a, const Entry& b) { return a.printed < b.printed; });
    }

    void build_level(int total) {
        ensure_node_level(total);
        ensure_merge_level(total);

        std::vector<TransformProgram> level;
        auto emit = [&](NodePredPtr leaf, NodePredPtr node, MergePredPtr merge,
                        MergeProps props) {
            TransformProgram p;
            p.leaf_filter = std::move(leaf);
            p.node_filter = std::move(node);
            p.merge_when = std::move(merge);
            p.merge_props = props;
            level.push_back(std::move(p));
        };

        static const std::vector<MergeProps> kPropVariants = {
            {TextRule::concat, TypeRule::dominant_child},
            {TextRule::first, TypeRule::parent},
            {TextRule::first, TypeRule::dominant_child},
            {TextRule::parent, TypeRule::parent},
            {TextRule::parent, TypeRule::dominant_child},
        };

        for (int ls = 0; ls <= total; ++ls) {
            for (int ns = 0; ns + ls <= total; ++ns) {
                for (int ms = 0; ms + ns + ls <= total; ++ms) {
                    int pp = total - ls - ns - ms;
                    if (pp > 1) continue;

                    std::vector<NodePredPtr> leaves;
                    if (ls == 0) {
                        leaves = {np::false_(), np::true_()};
                    } else {
                        for (const auto& e : node_levels_[size_t(ls)]) leaves.push_back(e.pred);
                    }
                    std::vector<NodePredPtr> nodes;
                    if (ns == 0) {
                        nodes = {np::false_(), np::true_()};
                    } else {
                        for (const auto& e : node_levels_[size_t(ns)]) nodes.push_back(e.pred);
                    }
                    std::vector<MergePredPtr> merges;
                    if (ms == 0) {
                        merges = {mp::false_(), mp::true_()};
                    } else {
                        for (const auto& e : merge_levels_[size_t(ms)]) merges.push_back(e.pred);
                    }

                    for (const auto& leaf : leaves) {
                        for (const auto& node : nodes) {
                            bool node_const_true = ns == 0
                                && node->kind == NodePred::Kind::always_true;
                            for (const auto& merge : merges) {
                                bool merge_const_false = ms == 0
                                    && merge->kind == MergePred::Kind::always_false;
                                // Dead-branch canonicalization.
                                if (node_const_true && !merge_const_false) continue;
                                if (merge_const_false && !node_const_true) continue;
                                if (pp == 0) {
                                    emit(leaf, node, merge, MergeProps{});
                                } else {
                                    if (merge_const_false) continue;  // props unreachable
                                    for (const MergeProps& props : kPropVariants) {
                                        emit(leaf, node, merge, props);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }

        std::vector<std::pair<std::string, size_t>> order;
        order.reserve(level.size());
        for (size_t i = 0; i < level.size(); ++i) {
            order.emplace_back(print_program_body(level[i]), i);
        }
        std::sort(order.begin(), order.end());
        queue_.clear();
        queue_.reserve(level.size());
        for (const auto& [body, idx] : order) queue_.push_back(std::move(level[idx]));
        queue_pos_ = 0;
    }

    EnumVocabulary vocab_;
    int max_size_;
    int current_size_ = 0;
    long emitted_ = 0;
    std::vector<std::vector<NodeEntry>> node_levels_;
    std::vector<std::vector<ViewEntry>> view_levels_;
    std::vector<std::vector<MergeEntry>> merge_levels_;
    std::vector<TransformProgram> queue_;
    size_t queue_pos_ = 0;
    std::set<std::string> blacklist_;
};

// Materialized enumeration up to the given size bound.
inline std::vector<TransformProgram> enumerate_grammar(const EnumVocabulary& vocab, int budget) {
    EnumerationStream stream(vocab, budget);
    std::vector<TransformProgram> out;
    while (auto p = stream.next()) out.push_back(std::move(*p));
    return out;
}

}  // namespace uiopt
