#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "uiopt/dsl/print.hpp"
#include "uiopt/interpreter.hpp"
#include "uiopt/render.hpp"
#include "uiopt/token.hpp"

namespace uiopt {

inline constexpr double kCompletenessPenalty = -10.0;

// A semantic element the transformation must preserve. Targets sharing a
// distinct_group may be merged into one view; targets from different groups
// must not end up in the same view.
struct TargetView {
    std::string text;
    bool interactive = false;
    int distinct_group = 0;
};

struct TrainingExample {
    std::string example_id;
    UITree orig;
    std::vector<TargetView> target;
};

struct ViolationRecord {
    enum class Kind { lost_information, lost_interactivity, over_merge, syntax_error };
    Kind kind;
    std::string example_id;
    std::string detail;
};

inline const char* violation_record_kind_name(ViolationRecord::Kind k) {
    switch (k) {
        case ViolationRecord::Kind::lost_information: return "LostInformation";
        case ViolationRecord::Kind::lost_interactivity: return "LostInteractivity";
        case ViolationRecord::Kind::over_merge: return "OverMerge";
        case ViolationRecord::Kind::syntax_error: return "SyntaxError";
    }
    return "Violation";
}

struct PerExampleReward {
    std::string example_id;
    double completeness = 0.0;  // 0 or -10
    double efficiency = 0.0;    // in [0, 1]
    std::vector<ViolationRecord> violations;

    double reward() const { return completeness + efficiency; }
};

struct RewardReport {
    std::vector<PerExampleReward> per_example;
    double total = 0.0;

    double mean() const {
        return per_example.empty() ? 0.0 : total / double(per_example.size());
    }
    bool violation_free() const {
        return std::all_of(per_example.begin(), per_example.end(),
                           [](const PerExampleReward& r) { return r.violations.empty(); });
    }
};

inline long render_token_count(const ViewList& views, RenderKind kind,
                               const TokenCounter& counter) {
    return render(views, kind, std::nullopt, counter).token_count;
}

// Token-reduction proportion against the leaf-level rendering of the
// original tree, clamped to [0, 1]. Both sides use the same renderer.
inline double efficiency_reward(const UITree& orig, const ViewList& views,
                                const TokenCounter& counter = {},
                                RenderKind renderer = RenderKind::hierarchical) {
    ViewList baseline = apply(identity_program(), orig);
    long tok_orig = render_token_count(baseline, renderer, counter);
    if (tok_orig == 0) return 0.0;
    long tok_views = render_token_count(views, renderer, counter);
    double r = double(tok_orig - tok_views) / double(tok_orig);
    return std::clamp(r, 0.0, 1.0);
}

// -10 when any target text is lost, any interactive target matches only
// non-interactive views, or one view swallows targets from two different
// groups; 0 otherwise. Matching is case-sensitive substring over normalized
// text.
inline std::pair<double, std::vector<ViolationRecord>> completeness_reward(
    const ViewList& views, std::span<const TargetView> targets,
    const std::string& example_id = {}) {
    std::vector<ViolationRecord> violations;

    std::vector<std::vector<size_t>> matches(targets.size());
    for (size_t t = 0; t < targets.size(); ++t) {
        for (size_t v = 0; v < views.views.size(); ++v) {
            if (views.views[v].text.find(targets[t].text) != std::string::npos) {
                matches[t].push_back(v);
            }
        }
        if (matches[t].empty()) {
            violations.push_back({ViolationRecord::Kind::lost_information, example_id,
                                  "target \"" + targets[t].text + "\" missing from all views"});
        } else if (targets[t].interactive) {
            bool any_interactive = std::any_of(
                matches[t].begin(), matches[t].end(),
                [&](size_t v) { return views.views[v].interactive; });
            if (!any_interactive) {
                violations.push_back(
                    {ViolationRecord::Kind::lost_interactivity, example_id,
                     "interactive target \"" + targets[t].text
                         + "\" matches only non-interactive views"});
            }
        }
    }

    for (size_t i = 0; i < targets.size(); ++i) {
        for (size_t j = i + 1; j < targets.size(); ++j) {
            if (targets[i].distinct_group == targets[j].distinct_group) continue;
            for (size_t v : matches[i]) {
                if (std::find(matches[j].begin(), matches[j].end(), v) != matches[j].end()) {
                    violations.push_back(
                        {ViolationRecord::Kind::over_merge, example_id,
                         "view #" + std::to_string(v) + " contains \"" + targets[i].text
                             + "\" and \"" + targets[j].text + "\" from different groups"});
                    break;
                }
            }
        }
    }

    double score = violations.empty() ? 0.0 : kCompletenessPenalty;
    return {score, std::move(violations)};
}

inline RewardReport score_program(const TransformProgram& program,
                                  std::span<const TrainingExample> examples,
                                  const TokenCounter& counter = {},
                                  RenderKind renderer = RenderKind::hierarchical) {
    RewardReport report;
    for (const TrainingExample& ex : examples) {
        PerExampleReward row;
        row.example_id = ex.example_id;
        ViewList views;
        try {
            views = apply(program, ex.orig);
        } catch (const Error& e) {
            throw Error(e.code(), "example " + ex.example_id + ": " + e.what());
        }
        row.efficiency = efficiency_reward(ex.orig, views, counter, renderer);
        auto [completeness, violations] = completeness_reward(views, ex.target, ex.example_id);
        row.completeness = completeness;
        row.violations = std::move(violations);
        report.total += row.reward();
        report.per_example.push_back(std::move(row));
    }
    return report;
}

}  // namespace uiopt
