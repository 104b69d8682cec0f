#pragma once

#include <algorithm>
#include <filesystem>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "uiopt/android_xml.hpp"
#include "uiopt/canonical.hpp"
#include "uiopt/errors.hpp"
#include "uiopt/interpreter.hpp"
#include "uiopt/render.hpp"
#include "uiopt/token.hpp"

namespace uiopt {

// One request in a replay trace: arrival offset, token count of the raw
// representation, and an optional tree reference used by transform-on mode.
struct WorkloadRecord {
    double offset_ms = 0.0;
    long tokens_before = 0;
    std::string tree_ref;
};

struct ReplayWorkload {
    std::vector<WorkloadRecord> records;
};

// Simulated backend latency of a request: fixed_ms + per_token_ms * tokens.
struct LatencyModel {
    double fixed_ms = 400.0;
    double per_token_ms = 0.5;
};

struct QoSLevelReport {
    int concurrency = 0;
    long completed = 0;
    double min_latency_ms = 0.0;
    double max_latency_ms = 0.0;
    double mean_latency_ms = 0.0;
    double mean_tokens = 0.0;
    double elapsed_ms = 0.0;
    double qpm = 0.0;  // completed / elapsed minutes
};

// Workload file: one record per line, `offset_ms,tokens[,tree_ref]`.
inline ReplayWorkload parse_workload(const std::string& text) {
    ReplayWorkload workload;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        WorkloadRecord rec;
        char comma;
        if (!(ls >> rec.offset_ms >> comma >> rec.tokens_before) || comma != ',') {
            throw Error(Errc::schema_violation, "workload line must be offset_ms,tokens[,ref]",
                        line_no, 1);
        }
        if (ls.peek() == ',') {
            ls.get();
            std::getline(ls, rec.tree_ref);
        }
        workload.records.push_back(std::move(rec));
    }
    return workload;
}

inline std::string serialize_workload(const ReplayWorkload& workload) {
    std::ostringstream out;
    for (const auto& rec : workload.records) {
        out << rec.offset_ms << ',' << rec.tokens_before;
        if (!rec.tree_ref.empty()) out << ',' << rec.tree_ref;
        out << '\n';
    }
    return out.str();
}

// Post-transform token counts for transform-on replay: applies the library
// to each referenced tree and counts the rendered representation.
inline std::vector<long> transformed_token_counts(
    const ReplayWorkload& workload, std::span<const TransformProgram> library,
    const std::function<UITree(const std::string&)>& tree_loader,
    const TokenCounter& counter = {}, RenderKind renderer = RenderKind::hierarchical) {
    std::vector<long> tokens;
    tokens.reserve(workload.records.size());
    for (const auto& rec : workload.records) {
        if (rec.tree_ref.empty()) {
            throw Error(Errc::schema_violation,
                        "transform-on replay needs a tree reference per record");
        }
        UITree tree = tree_loader(rec.tree_ref);
        ViewList views = apply_library(library, tree);
        tokens.push_back(render(views, renderer, std::nullopt, counter).token_count);
    }
    return tokens;
}

// Single-threaded discrete-event simulation: `concurrency` identical
// workers, FIFO dispatch in arrival order, service time from the linear
// latency model.
inline QoSLevelReport replay(const ReplayWorkload& workload, const LatencyModel& model,
                             int concurrency, const std::vector<long>& tokens) {
    if (concurrency < 1) {
        throw Error(Errc::schema_violation, "concurrency must be at least 1");
    }
    if (tokens.size() != workload.records.size()) {
        throw Error(Errc::schema_violation, "token vector does not match workload size");
    }
    QoSLevelReport report;
    report.concurrency = concurrency;
    if (workload.records.empty()) return report;

    std::vector<size_t> order(workload.records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return workload.records[a].offset_ms < workload.records[b].offset_ms;
    });

    // min-heap of worker free times
    std::priority_queue<double, std::vector<double>, std::greater<double>> workers;
    for (int i = 0; i < concurrency; ++i) workers.push(0.0);

    double total_latency = 0.0;
    double total_tokens = 0.0;
    double first_arrival = workload.records[order.front()].offset_ms;
    double last_completion = 0.0;
    report.min_latency_ms = std::numeric_limits<double>::max();

    for (size_t idx : order) {
        const WorkloadRecord& rec = workload.records[idx];
        double service = model.fixed_ms + model.per_token_ms * double(tokens[idx]);
        double free_at = workers.top();
        workers.pop();
        double start = std::max(rec.offset_ms, free_at);
        double done = start + service;
        workers.push(done);
        double latency = done - rec.offset_ms;
        total_latency += latency;
        total_tokens += double(tokens[idx]);
        report.min_latency_ms = std::min(report.min_latency_ms, latency);
        report.max_latency_ms = std::max(report.max_latency_ms, latency);
        last_completion = std::max(last_completion, done);
    }

    report.completed = long(workload.records.size());
    report.mean_latency_ms = total_latency / double(report.completed);
    report.mean_tokens = total_tokens / double(report.completed);
    report.elapsed_ms = last_completion - first_arrival;
    report.qpm = report.elapsed_ms > 0.0
        ? double(report.completed) / (report.elapsed_ms / 60000.0)
        : 0.0;
    return report;
}

inline std::vector<long> baseline_token_counts(const ReplayWorkload& workload) {
    std::vector<long> tokens;
    tokens.reserve(workload.records.size());
    for (const auto& rec : workload.records) tokens.push_back(rec.tokens_before);
    return tokens;
}

}  // namespace uiopt
