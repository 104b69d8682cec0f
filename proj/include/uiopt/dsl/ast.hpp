#pragma once

#include <memory>
#include <regex>
#include <string>
#include <vector>

namespace uiopt {

enum class Cmp { eq, lt, le, gt, ge };

inline const char* cmp_text(Cmp c) {
    switch (c) {
        case Cmp::eq: return "=";
        case Cmp::lt: return "<";
        case Cmp::le: return "<=";
        case Cmp::gt: return ">";
        case Cmp::ge: return ">=";
    }
    return "=";
}

inline bool cmp_eval(Cmp c, long lhs, long rhs) {
    switch (c) {
        case Cmp::eq: return lhs == rhs;
        case Cmp::lt: return lhs < rhs;
        case Cmp::le: return lhs <= rhs;
        case Cmp::gt: return lhs > rhs;
        case Cmp::ge: return lhs >= rhs;
    }
    return false;
}

// Predicates over UI nodes. Immutable once built; share freely.
struct NodePred;
using NodePredPtr = std::shared_ptr<const NodePred>;

struct NodePred {
    enum class Kind {
        always_true,
        always_false,
        tag_equals,    // str
        tag_in,        // tags
        attr_exists,   // str = key
        attr_equals,   // str = key, value
        attr_matches,  // str = key, value = pattern, pattern_re when compilable
        text_empty,
        text_nonempty,
        text_equals,  // str
        flag_set,     // str = flag name (resolved at evaluation)
        child_count,  // cmp, num
        depth_is,     // cmp, num
        not_op,       // a
        and_op,       // a, b
        or_op,        // a, b
    };

    Kind kind = Kind::always_true;
    std::string str;
    std::string value;
    std::vector<std::string> tags;
    Cmp cmp = Cmp::eq;
    int num = 0;
    NodePredPtr a, b;
    // Compiled anchored pattern; null when the pattern does not compile
    // (the validator reports that as a violation).
    std::shared_ptr<const std::regex> pattern_re;
};

namespace np {

inline NodePredPtr make(NodePred p) { return std::make_shared<const NodePred>(std::move(p)); }

inline NodePredPtr true_() {
    static const NodePredPtr p = make(NodePred{});
    return p;
}
inline NodePredPtr false_() {
    static const NodePredPtr p = make(NodePred{.kind = NodePred::Kind::always_false});
    return p;
}
inline NodePredPtr tag_equals(std::string tag) {
    return make(NodePred{.kind = NodePred::Kind::tag_equals, .str = std::move(tag)});
}
inline NodePredPtr tag_in(std::vector<std::string> tags) {
    return make(NodePred{.kind = NodePred::Kind::tag_in, .tags = std::move(tags)});
}
inline NodePredPtr attr_exists(std::string key) {
    return make(NodePred{.kind = NodePred::Kind::attr_exists, .str = std::move(key)});
}
inline NodePredPtr attr_equals(std::string key, std::string value) {
    return make(NodePred{
        .kind = NodePred::Kind::attr_equals, .str = std::move(key), .value = std::move(value)});
}
inline NodePredPtr attr_matches(std::string key, std::string pattern) {
    NodePred p{.kind = NodePred::Kind::attr_matches,
               .str = std::move(key),
               .value = std::move(pattern)};
    try {
        p.pattern_re = std::make_shared<const std::regex>(p.value, std::regex::ECMAScript);
    } catch (const std::regex_error&) {
        p.pattern_re = nullptr;
    }
    return make(std::move(p));
}
inline NodePredPtr text_empty() {
    static const NodePredPtr p = make(NodePred{.kind = NodePred::Kind::text_empty});
    return p;
}
inline NodePredPtr text_nonempty() {
    static const NodePredPtr p = make(NodePred{.kind = NodePred::Kind::text_nonempty});
    return p;
}
inline NodePredPtr text_equals(std::string s) {
    return make(NodePred{.kind = NodePred::Kind::text_equals, .str = std::move(s)});
}
inline NodePredPtr flag(std::string name) {
    return make(NodePred{.kind = NodePred::Kind::flag_set, .str = std::move(name)});
}
inline NodePredPtr child_count(Cmp cmp, int n) {
    return make(NodePred{.kind = NodePred::Kind::child_count, .cmp = cmp, .num = n});
}
inline NodePredPtr depth(Cmp cmp, int n) {
    return make(NodePred{.kind = NodePred::Kind::depth_is, .cmp = cmp, .num = n});
}
inline NodePredPtr not_(NodePredPtr a) {
    return make(NodePred{.kind = NodePred::Kind::not_op, .a = std::move(a)});
}
inline NodePredPtr and_(NodePredPtr a, NodePredPtr b) {
    return make(NodePred{.kind = NodePred::Kind::and_op, .a = std::move(a), .b = std::move(b)});
}
inline NodePredPtr or_(NodePredPtr a, NodePredPtr b) {
    return make(NodePred{.kind = NodePred::Kind::or_op, .a = std::move(a), .b = std::move(b)});
}

}  // namespace np

// Predicates over already-produced child views, used inside merge
// aggregators.
struct ViewPred;
using ViewPredPtr = std::shared_ptr<const ViewPred>;

struct ViewPred {
    enum class Kind {
        text_empty,
        text_nonempty,
        interactive,
        type_equals,  // type_name
        not_op,
        and_op,
        or_op,
    };

    Kind kind = Kind::text_nonempty;
    std::string type_name;
    ViewPredPtr a, b;
};

namespace vp {

inline ViewPredPtr make(ViewPred p) { return std::make_shared<const ViewPred>(std::move(p)); }

inline ViewPredPtr text_empty() {
    static const ViewPredPtr p = make(ViewPred{.kind = ViewPred::Kind::text_empty});
    return p;
}
inline ViewPredPtr text_nonempty() {
    static const ViewPredPtr p = make(ViewPred{.kind = ViewPred::Kind::text_nonempty});
    return p;
}
inline ViewPredPtr interactive() {
    static const ViewPredPtr p = make(ViewPred{.kind = ViewPred::Kind::interactive});
    return p;
}
inline ViewPredPtr type_equals(std::string t) {
    return make(ViewPred{.kind = ViewPred::Kind::type_equals, .type_name = std::move(t)});
}
inline ViewPredPtr not_(ViewPredPtr a) {
    return make(ViewPred{.kind = ViewPred::Kind::not_op, .a = std::move(a)});
}
inline ViewPredPtr and_(ViewPredPtr a, ViewPredPtr b) {
    return make(ViewPred{.kind = ViewPred::Kind::and_op, .a = std::move(a), .b = std::move(b)});
}
inline ViewPredPtr or_(ViewPredPtr a, ViewPredPtr b) {
    return make(ViewPred{.kind = ViewPred::Kind::or_op, .a = std::move(a), .b = std::move(b)});
}

}  // namespace vp

// Merge condition: and/or combinations of aggregator terms over the child
// view list, plus an optional node(<pred>) guard on the merging parent.
// not_op exists so the validator can reject aggregators nested under
// negation; the surface grammar never produces it.
struct MergePred;
using MergePredPtr = std::shared_ptr<const MergePred>;

struct MergePred {
    enum class Kind {
        always_true,
        always_false,
        all_views,   // view
        any_view,    // view
        view_count,  // cmp, num
        node_guard,  // guard
        not_op,      // a
        and_op,      // a, b
        or_op,       // a, b
    };

    Kind kind = Kind::always_false;
    ViewPredPtr view;
    NodePredPtr guard;
    Cmp cmp = Cmp::eq;
    int num = 0;
    MergePredPtr a, b;
};

namespace mp {

inline MergePredPtr make(MergePred p) { return std::make_shared<const MergePred>(std::move(p)); }

inline MergePredPtr true_() {
    static const MergePredPtr p = make(MergePred{.kind = MergePred::Kind::always_true});
    return p;
}
inline MergePredPtr false_() {
    static const MergePredPtr p = make(MergePred{.kind = MergePred::Kind::always_false});
    return p;
}
inline MergePredPtr all_views(ViewPredPtr v) {
    return make(MergePred{.kind = MergePred::Kind::all_views, .view = std::move(v)});
}
inline MergePredPtr any_view(ViewPredPtr v) {
    return make(MergePred{.kind = MergePred::Kind::any_view, .view = std::move(v)});
}
inline MergePredPtr view_count(Cmp cmp, int n) {
    return make(MergePred{.kind = MergePred::Kind::view_count, .cmp = cmp, .num = n});
}
inline MergePredPtr node_guard(NodePredPtr g) {
    return make(MergePred{.kind = MergePred::Kind::node_guard, .guard = std::move(g)});
}
inline MergePredPtr not_(MergePredPtr a) {
    return make(MergePred{.kind = MergePred::Kind::not_op, .a = std::move(a)});
}
inline MergePredPtr and_(MergePredPtr a, MergePredPtr b) {
    return make(MergePred{.kind = MergePred::Kind::and_op, .a = std::move(a), .b = std::move(b)});
}
inline MergePredPtr or_(MergePredPtr a, MergePredPtr b) {
    return make(MergePred{.kind = MergePred::Kind::or_op, .a = std::move(a), .b = std::move(b)});
}

}  // namespace mp

enum class TextRule { concat, first, parent };
enum class TypeRule { parent, dominant_child };

inline const char* text_rule_name(TextRule r) {
    switch (r) {
        case TextRule::concat: return "concat";
        case TextRule::first: return "first";
        case TextRule::parent: return "parent";
    }
    return "concat";
}

inline const char* type_rule_name(TypeRule r) {
    return r == TypeRule::parent ? "parent" : "dominant-child";
}

struct MergeProps {
    TextRule text = TextRule::concat;
    TypeRule type = TypeRule::parent;

    bool operator==(const MergeProps&) const = default;
};

enum class Provenance { hand_written, enumerated, external_generator };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::hand_written: return "hand_written";
        case Provenance::enumerated: return "enumerated";
        case Provenance::external_generator: return "external_generator";
    }
    return "hand_written";
}

struct TransformProgram {
    std::string program_id;
    NodePredPtr leaf_filter;       // leaf dropped when true
    std::vector<std::string> leaf_props{"text"};
    NodePredPtr node_filter;       // internal node spliced when true
    MergePredPtr merge_when;
    MergeProps merge_props;
    Provenance provenance = Provenance::hand_written;
    int iteration = 0;
};

}  // namespace uiopt
