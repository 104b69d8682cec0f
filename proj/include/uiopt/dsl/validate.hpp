#pragma once

#include <string>
#include <vector>

#include "uiopt/dsl/ast.hpp"
#include "uiopt/dsl/parse.hpp"
#include "uiopt/tree.hpp"

namespace uiopt {

struct Violation {
    enum class Kind {
        depth_exceeded,
        aggregator_placement,
        unknown_flag,
        invalid_pattern,
        empty_attr_key,
        invalid_prop_key,
        missing_condition,
    };
    Kind kind;
    std::string detail;
};

inline const char* violation_kind_name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::depth_exceeded: return "DepthExceeded";
        case Violation::Kind::aggregator_placement: return "AggregatorPlacement";
        case Violation::Kind::unknown_flag: return "UnknownFlag";
        case Violation::Kind::invalid_pattern: return "InvalidPattern";
        case Violation::Kind::empty_attr_key: return "EmptyAttrKey";
        case Violation::Kind::invalid_prop_key: return "InvalidPropKey";
        case Violation::Kind::missing_condition: return "MissingCondition";
    }
    return "Violation";
}

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

struct ValidationOptions {
    int max_predicate_depth = 4;
};

namespace detail {

inline void validate_node_pred(const NodePredPtr& p, const char* where,
                               const ValidationOptions& opts, ValidationReport& report) {
    if (!p) {
        report.violations.push_back(
            {Violation::Kind::missing_condition, std::string(where) + " is absent"});
        return;
    }
    if (node_pred_depth(p) > opts.max_predicate_depth) {
        report.violations.push_back(
            {Violation::Kind::depth_exceeded,
             std::string(where) + " nested to depth " + std::to_string(node_pred_depth(p))
                 + ", max " + std::to_string(opts.max_predicate_depth)});
    }
    auto walk = [&](auto&& self, const NodePredPtr& q) -> void {
        using K = NodePred::Kind;
        switch (q->kind) {
            case K::attr_exists:
            case K::attr_equals:
            case K::attr_matches:
                if (q->str.empty()) {
                    report.violations.push_back({Violation::Kind::empty_attr_key,
                                                 std::string(where) + " has an empty attr key"});
                }
                if (q->kind == K::attr_matches && !q->pattern_re) {
                    report.violations.push_back(
                        {Violation::Kind::invalid_pattern,
                         std::string(where) + ": pattern /" + q->value + "/ does not compile"});
                }
                break;
            case K::flag_set:
                if (!flag_from_name(q->str)) {
                    report.violations.push_back(
                        {Violation::Kind::unknown_flag,
                         std::string(where) + ": unknown flag '" + q->str + "'"});
                }
                break;
            case K::not_op: self(self, q->a); break;
            case K::and_op:
            case K::or_op:
                self(self, q->a);
                self(self, q->b);
                break;
            default: break;
        }
    };
    walk(walk, p);
}

inline void validate_view_pred(const ViewPredPtr& p, const char* where,
                               const ValidationOptions& opts, ValidationReport& report) {
    if (view_pred_depth(p) > opts.max_predicate_depth) {
        report.violations.push_back(
            {Violation::Kind::depth_exceeded,
             std::string(where) + " view predicate nested to depth "
                 + std::to_string(view_pred_depth(p)) + ", max "
                 + std::to_string(opts.max_predicate_depth)});
    }
}

inline bool merge_contains_aggregator(const MergePredPtr& p) {
    using K = MergePred::Kind;
    switch (p->kind) {
        case K::all_views:
        case K::any_view:
        case K::view_count: return true;
        case K::not_op: return merge_contains_aggregator(p->a);
        case K::and_op:
        case K::or_op:
            return merge_contains_aggregator(p->a) || merge_contains_aggregator(p->b);
        default: return false;
    }
}

inline void validate_merge_pred(const MergePredPtr& p, const ValidationOptions& opts,
                                ValidationReport& report, bool top_level) {
    using K = MergePred::Kind;
    if (!p) {
        report.violations.push_back({Violation::Kind::missing_condition, "merge-when is absent"});
        return;
    }
    switch (p->kind) {
        case K::and_op:
        case K::or_op:
            validate_merge_pred(p->a, opts, report, top_level);
            validate_merge_pred(p->b, opts, report, top_level);
            break;
        case K::not_op:
            if (merge_contains_aggregator(p->a)) {
                report.violations.push_back(
                    {Violation::Kind::aggregator_placement,
                     "aggregator nested under 'not' in merge condition"});
            }
            validate_merge_pred(p->a, opts, report, false);
            break;
        case K::all_views:
        case K::any_view:
            validate_view_pred(p->view, "merge-when", opts, report);
            break;
        case K::node_guard:
            validate_node_pred(p->guard, "merge-when guard", opts, report);
            break;
        default: break;
    }
}

}  // namespace detail

// Static checks over a parsed or programmatically built program. Violations
// are data, not errors; an empty report means the program is valid.
inline ValidationReport validate_program(const TransformProgram& p, ValidationOptions opts = {}) {
    ValidationReport report;
    detail::validate_node_pred(p.leaf_filter, "leaf-filter", opts, report);
    detail::validate_node_pred(p.node_filter, "node-filter", opts, report);
    detail::validate_merge_pred(p.merge_when, opts, report, true);
    for (const auto& key : p.leaf_props) {
        if (key.empty()) {
            report.violations.push_back(
                {Violation::Kind::invalid_prop_key, "leaf-props contains an empty key"});
        }
    }
    return report;
}

}  // namespace uiopt
