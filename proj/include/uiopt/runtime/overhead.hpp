#pragma once

#include <algorithm>
#include <chrono>
#include <span>
#include <vector>

#include "uiopt/errors.hpp"
#include "uiopt/interpreter.hpp"

namespace uiopt {

struct LatencyStats {
    size_t trees = 0;
    double min_ms = 0.0;
    double mean_ms = 0.0;
    double max_ms = 0.0;
    double p95_ms = 0.0;
    std::vector<double> per_tree_ms;
};

// Wall-clock of the transform step alone (parsing and rendering excluded):
// trees come in pre-parsed and only apply_library is timed.
inline LatencyStats measure_overhead(std::span<const UITree> trees,
                                     std::span<const TransformProgram> library,
                                     ApplyOptions opts = {}) {
    if (trees.size() < 100) {
        throw Error(Errc::schema_violation,
                    "overhead measurement needs at least 100 trees, got "
                        + std::to_string(trees.size()));
    }
    LatencyStats stats;
    stats.trees = trees.size();
    stats.per_tree_ms.reserve(trees.size());
    double total = 0.0;
    size_t view_sink = 0;
    for (const UITree& tree : trees) {
        auto begin = std::chrono::steady_clock::now();
        ViewList views = apply_library(library, tree, opts);
        auto end = std::chrono::steady_clock::now();
        view_sink += views.views.size();
        double ms = std::chrono::duration<double, std::milli>(end - begin).count();
        stats.per_tree_ms.push_back(ms);
        total += ms;
    }
    (void)view_sink;
    std::vector<double> sorted = stats.per_tree_ms;
    std::sort(sorted.begin(), sorted.end());
    stats.min_ms = sorted.front();
    stats.max_ms = sorted.back();
    stats.mean_ms = total / double(sorted.size());
    size_t p95_index = (sorted.size() * 95 + 99) / 100;
    stats.p95_ms = sorted[std::min(sorted.size() - 1, p95_index == 0 ? 0 : p95_index - 1)];
    return stats;
}

}  // namespace uiopt
