#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uiopt/errors.hpp"
#include "uiopt/render.hpp"
#include "uiopt/token.hpp"

namespace uiopt {

inline constexpr std::array<const char*, 6> kComponentNames = {"system", "action", "task",
                                                               "ui",     "context", "format"};

// One logged LLM invocation. Component counts are normally recomputed by the
// configured counter; a record may instead carry pre-tokenized counts, which
// bypass counting and are flagged in the report.
struct PromptLogRecord {
    std::string record_id;
    std::string model_label;
    std::string benchmark_label;
    std::string agent_label;
    PromptBundle components;
    std::optional<std::array<long, 6>> counts;
};

struct BreakdownRow {
    std::string model_label;
    std::string benchmark_label;
    std::string agent_label;
    std::array<double, 6> mean_components{};
    double mean_total = 0.0;
    double ui_ratio = 0.0;  // mean_ui / mean_total, 0 when mean_total is 0
    long records = 0;
    long pretokenized = 0;

    std::array<long, 6> display_components() const {
        std::array<long, 6> out{};
        for (size_t i = 0; i < 6; ++i) out[i] = std::lround(mean_components[i]);
        return out;
    }
    long display_total() const { return std::lround(mean_total); }
    // one-decimal percent
    double ui_ratio_percent() const { return std::round(ui_ratio * 1000.0) / 10.0; }
};

// Log format: one JSON object per line with fields record_id, model,
// benchmark, agent, components{...} and optional counts{...}.
inline PromptLogRecord parse_log_record(const std::string& line, int line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::malformed_document, e.what(), line_no, 1);
    }
    PromptLogRecord rec;
    try {
        rec.record_id = j.value("record_id", "");
        rec.model_label = j.at("model").get<std::string>();
        rec.benchmark_label = j.at("benchmark").get<std::string>();
        rec.agent_label = j.at("agent").get<std::string>();
        if (j.contains("components")) {
            const auto& c = j.at("components");
            rec.components.system = c.value("system", "");
            rec.components.action_space = c.value("action", "");
            rec.components.task = c.value("task", "");
            rec.components.ui = c.value("ui", "");
            rec.components.context = c.value("context", "");
            rec.components.format = c.value("format", "");
        }
        if (j.contains("counts")) {
            const auto& c = j.at("counts");
            std::array<long, 6> counts{};
            for (size_t i = 0; i < 6; ++i) counts[i] = c.value(kComponentNames[i], 0L);
            rec.counts = counts;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::schema_violation, std::string(e.what()), line_no, 1);
    }
    if (rec.model_label.empty() || rec.benchmark_label.empty() || rec.agent_label.empty()) {
        throw Error(Errc::schema_violation, "model/benchmark/agent labels must be non-empty",
                    line_no, 1);
    }
    return rec;
}

inline std::vector<PromptLogRecord> parse_log(const std::string& text) {
    std::vector<PromptLogRecord> records;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        records.push_back(parse_log_record(line, line_no));
    }
    return records;
}

// Groups records by (model, benchmark, agent) and reports per-component mean
// token counts. Rows are sorted by group key; grouping partitions the
// stream, so the aggregation is order-independent.
inline std::vector<BreakdownRow> profile(const std::vector<PromptLogRecord>& records,
                                         const TokenCounter& counter = {}) {
    if (records.empty()) {
        throw Error(Errc::empty_log, "no prompt records to profile");
    }
    struct Acc {
        std::array<double, 6> sums{};
        long records = 0;
        long pretokenized = 0;
    };
    std::map<std::array<std::string, 3>, Acc> groups;
    for (const PromptLogRecord& rec : records) {
        Acc& acc = groups[{rec.model_label, rec.benchmark_label, rec.agent_label}];
        std::array<long, 6> counts{};
        if (rec.counts) {
            counts = *rec.counts;
            ++acc.pretokenized;
        } else {
            AssembledPrompt assembled = assemble_prompt(rec.components, counter);
            counts = assembled.component_tokens;
        }
        for (size_t i = 0; i < 6; ++i) acc.sums[i] += double(counts[i]);
        ++acc.records;
    }
    std::vector<BreakdownRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        BreakdownRow row;
        row.model_label = key[0];
        row.benchmark_label = key[1];
        row.agent_label = key[2];
        row.records = acc.records;
        row.pretokenized = acc.pretokenized;
        for (size_t i = 0; i < 6; ++i) {
            row.mean_components[i] = acc.sums[i] / double(acc.records);
            row.mean_total += row.mean_components[i];
        }
        row.ui_ratio = row.mean_total > 0.0 ? row.mean_components[3] / row.mean_total : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string format_breakdown(const std::vector<BreakdownRow>& rows, bool csv) {
    std::ostringstream out;
    if (csv) {
        out << "model,benchmark,agent,system,action,task,ui,context,format,total,ui_ratio,"
               "records,pretokenized\n";
    }
    for (const BreakdownRow& row : rows) {
        auto comps = row.display_components();
        char ratio[16];
        std::snprintf(ratio, sizeof ratio, "%.1f%%", row.ui_ratio_percent());
        if (csv) {
            out << row.model_label << ',' << row.benchmark_label << ',' << row.agent_label;
            for (long c : comps) out << ',' << c;
            out << ',' << row.display_total() << ',' << ratio << ',' << row.records << ','
                << row.pretokenized << '\n';
        } else {
            out << "model=" << row.model_label << " benchmark=" << row.benchmark_label
                << " agent=" << row.agent_label;
            for (size_t i = 0; i < 6; ++i) out << ' ' << kComponentNames[i] << '=' << comps[i];
            out << " total=" << row.display_total() << " ui_ratio=" << ratio
                << " records=" << row.records << " pretokenized=" << row.pretokenized << '\n';
        }
    }
    return out.str();
}

}  // namespace uiopt
