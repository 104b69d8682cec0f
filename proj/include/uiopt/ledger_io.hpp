#pragma once

#include <string>

#include <json.hpp>

#include "uiopt/synthesis.hpp"

namespace uiopt {

// Line-oriented ledger: one JSON object per scored candidate.
inline std::string serialize_ledger(const FeedbackLedger& ledger) {
    std::string out;
    for (const FeedbackRecord& rec : ledger.records) {
        nlohmann::json j;
        j["iteration"] = rec.iteration;
        j["label"] = rec.label == FeedbackRecord::Label::positive ? "positive" : "negative";
        j["accepted"] = rec.accepted;
        j["exemplar"] = rec.exemplar;
        j["reward_total"] = rec.reward_total;
        j["mean_reward"] = rec.mean_reward;
        j["mean_efficiency"] = rec.mean_efficiency;
        nlohmann::json violations = nlohmann::json::array();
        for (const ViolationRecord& v : rec.violations) {
            violations.push_back({{"kind", violation_record_kind_name(v.kind)},
                                  {"example", v.example_id},
                                  {"detail", v.detail}});
        }
        j["violations"] = violations;
        j["program"] = rec.program_text;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace uiopt
