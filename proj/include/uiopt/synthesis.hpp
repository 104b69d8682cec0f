#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "uiopt/dsl/enumerate.hpp"
#include "uiopt/dsl/parse.hpp"
#include "uiopt/dsl/print.hpp"
#include "uiopt/dsl/validate.hpp"
#include "uiopt/errors.hpp"
#include "uiopt/reward.hpp"

namespace uiopt {

struct SynthesisConfig {
    double threshold = 0.3;  // acceptance bound on mean per-example reward
    int max_iter = 20;
    int candidates_per_iter = 8;
    int library_cap = 8;
    int convergence_patience = 3;
    enum class Generator { enumerative, external } generator = Generator::enumerative;
    std::string external_endpoint;
    uint64_t seed = 0;
};

// Size cap for the enumerative candidate stream. Runs either converge or hit
// max_iter long before exhausting it for realistic vocabularies.
inline constexpr int kEnumerationSizeCap = 6;

struct FeedbackRecord {
    enum class Label { positive, negative };

    TransformProgram program;
    std::string program_text;
    Label label = Label::positive;
    double reward_total = 0.0;
    double mean_reward = 0.0;
    double mean_efficiency = 0.0;
    bool violation_free = true;
    bool exemplar = false;  // iteration maximizer among violation-free candidates
    bool accepted = false;  // entered the library this iteration
    std::vector<ViolationRecord> violations;
    int iteration = 0;  // 1-based
};

struct FeedbackLedger {
    std::vector<FeedbackRecord> records;
    int iterations_run = 0;
};

struct LibraryEntry {
    TransformProgram program;
    RewardReport report;
};

struct ProgramLibrary {
    std::vector<LibraryEntry> entries;
    std::string generator_name = "enumerative";
    uint64_t seed = 0;
    double threshold = 0.0;

    bool contains_body(const std::string& body) const {
        return std::any_of(entries.begin(), entries.end(), [&](const LibraryEntry& e) {
            return print_program_body(e.program) == body;
        });
    }
};

struct SynthesisResult {
    ProgramLibrary library;
    FeedbackLedger ledger;
    bool converged = false;
};

// Labels a scored candidate: negative exactly when completeness was violated.
// Maximizer marking (`exemplar`) is done by the iteration loop, which sees
// the whole candidate batch.
inline FeedbackRecord generate_feedback(const TransformProgram& program,
                                        const RewardReport& report, int iteration) {
    FeedbackRecord rec;
    rec.program = program;
    rec.program_text = print_program(program);
    rec.reward_total = report.total;
    rec.mean_reward = report.mean();
    rec.violation_free = report.violation_free();
    rec.label = rec.violation_free ? FeedbackRecord::Label::positive
                                   : FeedbackRecord::Label::negative;
    double eff = 0.0;
    for (const auto& row : report.per_example) {
        eff += row.efficiency;
        for (const auto& v : row.violations) rec.violations.push_back(v);
    }
    rec.mean_efficiency = report.per_example.empty() ? 0.0
                                                     : eff / double(report.per_example.size());
    rec.iteration = iteration;
    return rec;
}

// Highest violation-free mean efficiency observed in iterations 1..iteration.
inline double best_so_far(const FeedbackLedger& ledger, int iteration) {
    if (iteration < 1 || iteration > ledger.iterations_run) {
        throw Error(Errc::iteration_out_of_range,
                    "iteration " + std::to_string(iteration) + " outside 1.."
                        + std::to_string(ledger.iterations_run));
    }
    double best = 0.0;
    for (const FeedbackRecord& rec : ledger.records) {
        if (rec.iteration > iteration || !rec.violation_free) continue;
        best = std::max(best, rec.mean_efficiency);
    }
    return best;
}

// Request/response contract for an out-of-process candidate generator. The
// request carries the grammar, example summaries and the feedback history;
// the response is one or more candidate program texts separated by lines
// containing only `---`.
using GeneratorFn = std::function<std::string(const std::string& request)>;

inline const char* dsl_grammar_text() {
    return "program <id> { leaf-filter: <pred>; leaf-props: [<key>,...]; node-filter: <pred>; "
           "merge-when: <mpred>; merge-props { text: concat|first|parent; type: "
           "parent|dominant-child }; }\n"
           "<pred> := true | false | tag = \"<s>\" | tag in (\"<s>\",...) | attr(\"<k>\") exists "
           "| attr(\"<k>\") = \"<v>\" | attr(\"<k>\") matches /<re>/ | text empty | text "
           "nonempty | text = \"<s>\" | flag(<name>) | child-count <cmp> <int> | depth <cmp> "
           "<int> | not <pred> | <pred> and <pred> | <pred> or <pred> | (<pred>)\n"
           "<mpred> := terms all-views(<vpred>) | any-view(<vpred>) | view-count <cmp> <int> | "
           "node(<pred>) | true | false combined with and/or at top level\n"
           "<vpred> := text empty | text nonempty | interactive | type = \"<s>\" with "
           "not/and/or\n";
}

namespace detail {

inline std::string render_generator_request(std::span<const TrainingExample> examples,
                                            const FeedbackLedger& ledger, int candidates) {
    std::string out = "dsl-grammar:\n";
    out += dsl_grammar_text();
    out += "examples:\n";
    for (const auto& ex : examples) {
        out += "- id=" + ex.example_id + " nodes=" + std::to_string(ex.orig.node_count)
            + " leaves=" + std::to_string(collect_leaves(ex.orig).size())
            + " targets=" + std::to_string(ex.target.size()) + "\n";
    }
    std::vector<const FeedbackRecord*> positives, negatives;
    for (const auto& rec : ledger.records) {
        if (rec.exemplar) positives.push_back(&rec);
        if (rec.label == FeedbackRecord::Label::negative) negatives.push_back(&rec);
    }
    auto by_text = [](const FeedbackRecord* a, const FeedbackRecord* b) {
        return a->program_text < b->program_text;
    };
    std::sort(positives.begin(), positives.end(), by_text);
    std::sort(negatives.begin(), negatives.end(), by_text);
    out += "feedback:\n";
    for (const auto* rec : positives) {
        out += "positive reward=" + std::to_string(rec->reward_total) + " " + rec->program_text
            + "\n";
    }
    for (const auto* rec : negatives) {
        out += "negative";
        for (const auto& v : rec->violations) {
            out += ' ';
            out += violation_record_kind_name(v.kind);
            if (!v.example_id.empty()) out += "@" + v.example_id;
        }
        out += " " + rec->program_text + "\n";
    }
    out += "candidates-requested: " + std::to_string(candidates) + "\n";
    return out;
}

inline std::vector<std::string> split_candidate_chunks(const std::string& response) {
    std::vector<std::string> chunks;
    std::string current;
    size_t pos = 0;
    while (pos <= response.size()) {
        size_t eol = response.find('\n', pos);
        std::string line = response.substr(pos, eol == std::string::npos ? eol : eol - pos);
        if (line == "---") {
            chunks.push_back(current);
            current.clear();
        } else {
            current += line;
            current += '\n';
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    chunks.push_back(current);
    // drop chunks that are pure whitespace
    std::vector<std::string> out;
    for (auto& c : chunks) {
        if (c.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(std::move(c));
    }
    return out;
}

inline void collect_leaf_atoms(const NodePredPtr& p, std::vector<std::string>& out) {
    using K = NodePred::Kind;
    switch (p->kind) {
        case K::not_op: collect_leaf_atoms(p->a, out); break;
        case K::and_op:
        case K::or_op:
            collect_leaf_atoms(p->a, out);
            collect_leaf_atoms(p->b, out);
            break;
        default: out.push_back(print_node_pred(p)); break;
    }
}

}  // namespace detail

// Algorithm: per iteration, draw candidates (enumerative stream or external
// generator), score each against the examples, accept programs whose mean
// per-example reward clears the threshold with zero completeness violations,
// and feed everything else back. Stops at max_iter or after
// convergence_patience iterations without library growth.
inline SynthesisResult synthesize(std::span<const TrainingExample> examples,
                                  const SynthesisConfig& config,
                                  const TokenCounter& counter = {},
                                  GeneratorFn external_generator = nullptr,
                                  RenderKind renderer = RenderKind::hierarchical) {
    SynthesisResult result;
    result.library.generator_name =
        config.generator == SynthesisConfig::Generator::enumerative ? "enumerative" : "external";
    result.library.seed = config.seed;
    result.library.threshold = config.threshold;

    std::optional<EnumerationStream> stream;
    if (config.generator == SynthesisConfig::Generator::enumerative) {
        std::vector<UITree> trees;
        trees.reserve(examples.size());
        for (const auto& ex : examples) trees.push_back(ex.orig);
        stream.emplace(vocabulary_from_trees(trees), kEnumerationSizeCap);
    } else if (!external_generator) {
        throw Error(Errc::external_generator_unavailable,
                    "external generator requested but no transport is configured ("
                        + config.external_endpoint + ")");
    }

    int stale = 0;
    long unparseable_counter = 0;
    for (int iteration = 1; iteration <= config.max_iter; ++iteration) {
        if (stale >= config.convergence_patience) {
            result.converged = true;
            break;
        }

        // Generate DSL-constrained candidates.
        std::vector<TransformProgram> candidates;
        std::vector<FeedbackRecord> broken;  // unparseable/invalid external output
        if (stream) {
            for (int i = 0; i < config.candidates_per_iter; ++i) {
                auto p = stream->next();
                if (!p) break;
                candidates.push_back(std::move(*p));
            }
            if (candidates.empty()) {
                result.converged = true;
                result.ledger.iterations_run = iteration;
                break;
            }
        } else {
            std::string request = detail::render_generator_request(
                examples, result.ledger, config.candidates_per_iter);
            std::string response;
            try {
                response = external_generator(request);
            } catch (const std::exception& e) {
                throw Error(Errc::external_generator_unavailable, e.what());
            }
            for (std::string& chunk : detail::split_candidate_chunks(response)) {
                try {
                    TransformProgram p = parse_program(chunk);
                    ValidationReport report = validate_program(p);
                    if (!report.ok()) {
                        throw Error(Errc::syntax_error,
                                    std::string(violation_kind_name(
                                        report.violations[0].kind))
                                        + ": " + report.violations[0].detail);
                    }
                    p.provenance = Provenance::external_generator;
                    p.iteration = iteration;
                    candidates.push_back(std::move(p));
                } catch (const Error& e) {
                    FeedbackRecord rec;
                    rec.program = identity_program();
                    rec.program.program_id = "unparseable-"
                        + std::to_string(++unparseable_counter);
                    rec.program_text = chunk;
                    rec.label = FeedbackRecord::Label::negative;
                    rec.violation_free = false;
                    rec.violations.push_back(
                        {ViolationRecord::Kind::syntax_error, "", e.what()});
                    rec.iteration = iteration;
                    broken.push_back(std::move(rec));
                }
            }
        }

        // Evaluate completeness and efficiency for each candidate.
        std::vector<FeedbackRecord> records;
        bool grew = false;
        for (TransformProgram& candidate : candidates) {
            candidate.iteration = iteration;
            RewardReport report = score_program(candidate, examples, counter, renderer);
            FeedbackRecord rec = generate_feedback(candidate, report, iteration);
            std::string body = print_program_body(candidate);
            if (rec.violation_free && rec.mean_reward >= config.threshold
                && int(result.library.entries.size()) < config.library_cap
                && !result.library.contains_body(body)) {
                rec.accepted = true;
                result.library.entries.push_back({candidate, std::move(report)});
                grew = true;
            }
            records.push_back(std::move(rec));
        }

        // Mark the iteration's maximizers among violation-free candidates as
        // positive exemplars for the next prompt.
        double best = 0.0;
        bool have_best = false;
        for (const auto& rec : records) {
            if (!rec.violation_free) continue;
            if (!have_best || rec.reward_total > best) {
                best = rec.reward_total;
                have_best = true;
            }
        }
        if (have_best) {
            for (auto& rec : records) {
                if (rec.violation_free && rec.reward_total == best) rec.exemplar = true;
            }
        }

        // Feedback pruning: leaf-filter atoms implicated in lost information
        // never reappear in later enumerative candidates. A constant-false
        // leaf filter drops nothing, so the loss is attributed to the merge
        // rules instead and nothing is blacklisted.
        if (stream) {
            for (const auto& rec : records) {
                if (rec.program.leaf_filter->kind == NodePred::Kind::always_false) continue;
                bool lost_information = std::any_of(
                    rec.violations.begin(), rec.violations.end(), [](const ViolationRecord& v) {
                        return v.kind == ViolationRecord::Kind::lost_information;
                    });
                if (!lost_information) continue;
                std::vector<std::string> atoms;
                detail::collect_leaf_atoms(rec.program.leaf_filter, atoms);
                for (const auto& atom : atoms) stream->blacklist_leaf_atom(atom);
            }
        }

        for (auto& rec : records) result.ledger.records.push_back(std::move(rec));
        for (auto& rec : broken) result.ledger.records.push_back(std::move(rec));
        result.ledger.iterations_run = iteration;
        stale = grew ? 0 : stale + 1;
    }
    if (stale >= config.convergence_patience) result.converged = true;
    return result;
}

// Library files are plain program sequences with provenance comments.
inline std::string serialize_library(const ProgramLibrary& library) {
    std::string out = "# generator=" + library.generator_name
        + " seed=" + std::to_string(library.seed)
        + " threshold=" + std::to_string(library.threshold)
        + " programs=" + std::to_string(library.entries.size()) + "\n";
    for (const auto& entry : library.entries) {
        out += print_program(entry.program);
        out += '\n';
    }
    return out;
}

}  // namespace uiopt
