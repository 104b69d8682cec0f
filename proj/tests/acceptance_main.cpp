// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "uiopt/android_xml.hpp"
#include "uiopt/canonical.hpp"
#include "uiopt/config_io.hpp"
#include "uiopt/dsl/enumerate.hpp"
#include "uiopt/dsl/parse.hpp"
#include "uiopt/examples_io.hpp"
#include "uiopt/interpreter.hpp"
#include "uiopt/ledger_io.hpp"
#include "uiopt/profiler.hpp"
#include "uiopt/render.hpp"
#include "uiopt/reward.hpp"
#include "uiopt/runtime/overhead.hpp"
#include "uiopt/runtime/qos_fixture.hpp"
#include "uiopt/runtime/replay.hpp"
#include "uiopt/synthesis.hpp"
#include "uiopt/treegen.hpp"

#include "support/exhaustive.hpp"
#include "support/naive_interpreter.hpp"

namespace fs = std::filesystem;
using namespace uiopt;

static const fs::path kFixtures = UIOPT_FIXTURE_DIR;
static const std::string kCli = UIOPT_CLI_PATH;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

Outcome oracle_equivalence() {
    EnumVocabulary vocab;
    vocab.tags = exhaustive::label_tags();
    vocab.flags = {"clickable", "focusable"};
    vocab.ints = {1, 2};
    vocab.cmps = {Cmp::eq, Cmp::le, Cmp::ge};
    auto programs = enumerate_grammar(vocab, 3);
    auto shapes = exhaustive::all_shapes_up_to(8);

    auto begin = std::chrono::steady_clock::now();
    long pairs = 0, mismatches = 0;
    for (const auto& shape : shapes) {
        for (int variant = 0; variant < 3; ++variant) {
            UITree tree = exhaustive::labeled_tree(shape, variant);
            for (const auto& p : programs) {
                ++pairs;
                if (serialize_views(apply(p, tree))
                    != serialize_views(oracle::apply_naive(p, tree))) {
                    ++mismatches;
                }
            }
        }
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    Outcome out;
    out.pass = mismatches == 0 && seconds < 300.0;
    out.detail = std::to_string(shapes.size()) + " shapes x3 labelings, "
        + std::to_string(programs.size()) + " programs, " + std::to_string(pairs) + " pairs, "
        + std::to_string(mismatches) + " mismatches, " + fmt(seconds, 1) + "s";
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome conservation_suite() {
    const char* program_texts[] = {
        "program m1 { leaf-filter: false; leaf-props: [text]; node-filter: false; "
        "merge-when: view-count >= 2; }",
        "program m2 { leaf-filter: false; leaf-props: [text]; node-filter: false; "
        "merge-when: all-views(text nonempty); }",
        "program m3 { leaf-filter: false; leaf-props: [text]; node-filter: depth >= 2; "
        "merge-when: node(child-count <= 3); }",
        "program m4 { leaf-filter: false; leaf-props: [text]; node-filter: false; "
        "merge-when: any-view(interactive); }",
        "program m5 { leaf-filter: false; leaf-props: [text]; node-filter: not depth <= 1; "
        "merge-when: node(depth >= 1) and view-count <= 4; }",
    };
    std::vector<TransformProgram> programs;
    for (const char* text : program_texts) programs.push_back(parse_program(text));

    DetRng rng(20260811);
    TreeGenConfig cfg;
    cfg.min_nodes = 1;
    cfg.max_nodes = 200;
    long violations = 0;
    const int tree_count = 1000;
    for (int i = 0; i < tree_count; ++i) {
        UITree tree = generate_tree(rng, cfg);
        std::string leaf_join;
        for (const UINode* leaf : collect_leaves(tree)) {
            if (leaf->text.empty()) continue;
            if (!leaf_join.empty()) leaf_join += ' ';
            leaf_join += leaf->text;
        }
        for (const auto& p : programs) {
            ViewList views = apply(p, tree);
            std::string view_join;
            for (const View& v : views.views) {
                if (v.text.empty()) continue;
                if (!view_join.empty()) view_join += ' ';
                view_join += v.text;
            }
            if (view_join != leaf_join) ++violations;

            std::map<int, const View*> owner;
            for (const View& v : views.views) {
                for (int id : v.source_ids) owner[id] = &v;
            }
            visit_preorder(tree.root, [&](const UINode& n) {
                if (!n.is_leaf() || !node_is_interactive(n.flags)) return;
                auto it = owner.find(n.node_id);
                if (it == owner.end() || !it->second->interactive) ++violations;
            });
        }
    }
    Outcome out;
    out.pass = violations == 0;
    out.detail = std::to_string(tree_count) + " trees x " + std::to_string(programs.size())
        + " merge-only programs, " + std::to_string(violations) + " violations";
    return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome reward_arithmetic() {
    // 1206-token leaf baseline against a 596-token view list
    UITree orig;
    orig.root.tag = "screen";
    for (int i = 0; i < 1206; ++i) {
        UINode n;
        n.tag = "n";
        orig.root.children.push_back(std::move(n));
    }
    finalize_tree(orig);
    ViewList views = apply(identity_program(), orig);
    bool sizes_ok = render(views, RenderKind::hierarchical).token_count == 1206;
    views.views.resize(596);
    sizes_ok = sizes_ok && render(views, RenderKind::hierarchical).token_count == 596;
    double eff = efficiency_reward(orig, views);
    bool eff_ok = sizes_ok && std::abs(eff - 0.506) <= 0.001;

    // completeness penalties on the constructed fixtures and their repairs
    UITree bill = parse_canonical(read_file(kFixtures / "trees" / "bill_amount.uitree"));
    std::vector<TargetView> targets = {{"Bill Amount", false, 1},
                                       {"0.00", true, 1},
                                       {"Calculate", true, 2}};

    TransformProgram over_merge = parse_program(
        "program om { leaf-filter: false; leaf-props: [text]; node-filter: false; "
        "merge-when: true; }");
    auto [om_score, om_violations] = completeness_reward(apply(over_merge, bill), targets);
    bool om_ok = om_score == -10.0
        && std::any_of(om_violations.begin(), om_violations.end(), [](const ViolationRecord& v) {
               return v.kind == ViolationRecord::Kind::over_merge;
           });

    TransformProgram om_repaired = parse_program(
        "program omr { leaf-filter: false; leaf-props: [text]; "
        "node-filter: not tag = \"FrameLayout\"; "
        "merge-when: node(tag = \"FrameLayout\"); }");
    bool om_repair_ok = completeness_reward(apply(om_repaired, bill), targets).first == 0.0;

    TransformProgram lost_info = parse_program(
        "program li { leaf-filter: tag = \"TextView\"; leaf-props: [text]; node-filter: true; "
        "merge-when: false; }");
    auto [li_score, li_violations] = completeness_reward(apply(lost_info, bill), targets);
    bool li_ok = li_score == -10.0
        && std::any_of(li_violations.begin(), li_violations.end(), [](const ViolationRecord& v) {
               return v.kind == ViolationRecord::Kind::lost_information;
           });

    TransformProgram li_repaired = parse_program(
        "program lir { leaf-filter: tag = \"TextView\" and text empty; leaf-props: [text]; "
        "node-filter: true; merge-when: false; }");
    bool li_repair_ok = completeness_reward(apply(li_repaired, bill), targets).first == 0.0;

    Outcome out;
    out.pass = eff_ok && om_ok && om_repair_ok && li_ok && li_repair_ok;
    out.detail = "efficiency(1206->596)=" + fmt(eff) + ", over-merge " + fmt(om_score, 0)
        + "/repaired 0, lost-information " + fmt(li_score, 0) + "/repaired 0";
    return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome synthesis_reproducibility() {
    auto examples = load_example_dir(kFixtures / "examples");
    SynthesisConfig config = parse_synthesis_config(read_file(kFixtures / "synthesis.config"));
    SynthesisResult first = synthesize(examples, config);
    SynthesisResult second = synthesize(examples, config);

    bool identical = serialize_library(first.library) == serialize_library(second.library)
        && serialize_ledger(first.ledger) == serialize_ledger(second.ledger);

    bool monotone = true;
    double prev = 0.0;
    for (int i = 1; i <= first.ledger.iterations_run; ++i) {
        double best = best_so_far(first.ledger, i);
        if (best + 1e-12 < prev) monotone = false;
        prev = best;
    }

    std::vector<TransformProgram> library;
    for (const auto& entry : first.library.entries) library.push_back(entry.program);
    double mean_eff = 0.0;
    long violations = 0;
    for (const auto& ex : examples) {
        ViewList views = apply_library(library, ex.orig);
        mean_eff += efficiency_reward(ex.orig, views);
        violations += long(completeness_reward(views, ex.target, ex.example_id).second.size());
    }
    mean_eff /= double(examples.size());

    Outcome out;
    out.pass = identical && monotone && !library.empty() && mean_eff >= 0.40 && violations == 0;
    out.detail = std::string(identical ? "identical runs" : "RUNS DIFFER") + ", "
        + std::to_string(first.library.entries.size()) + " accepted, library efficiency "
        + fmt(mean_eff) + " (>=0.400), " + std::to_string(violations)
        + " violations, best_so_far " + std::string(monotone ? "monotone" : "NON-MONOTONE");
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome profiler_exactness() {
    auto records = parse_log(read_file(kFixtures / "logs" / "token_breakdown.jsonl"));
    auto rows = profile(records);
    const BreakdownRow* react = nullptr;
    for (const auto& row : rows) {
        if (row.model_label == "GPT-4o" && row.benchmark_label == "AndroidControl"
            && row.agent_label == "ReAct") {
            react = &row;
        }
    }
    Outcome out;
    if (!react) {
        out.detail = "GPT-4o/AndroidControl/ReAct row missing";
        return out;
    }
    bool total_ok = react->display_total() == 3220;
    bool ratio_ok = react->ui_ratio_percent() == 86.7;
    out.pass = total_ok && ratio_ok;
    out.detail = "total=" + std::to_string(react->display_total()) + " (expect 3220), ui_ratio="
        + fmt(react->ui_ratio_percent(), 1) + "% (expect 86.7%)";
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome runtime_overhead() {
    TreeGenConfig cfg;
    cfg.min_nodes = 10;
    cfg.max_nodes = 200;
    std::vector<UITree> corpus = generate_corpus(7, 1000, cfg);
    auto library = parse_program_sequence(read_file(kFixtures / "programs" / "settings_pair.dsl"));
    LatencyStats stats = measure_overhead(corpus, library);
    Outcome out;
    out.pass = stats.mean_ms < 10.0 && stats.max_ms < 200.0;
    out.detail = "1000 trees, mean " + fmt(stats.mean_ms) + "ms (<10ms), max "
        + fmt(stats.max_ms) + "ms (<200ms), p95 " + fmt(stats.p95_ms) + "ms";
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome qos_simulation() {
    const int request_count = 600;
    const double spacing_ms = 50.0;
    static const int kScales[3] = {2, 3, 4};

    ReplayWorkload workload;
    for (int i = 0; i < request_count; ++i) {
        WorkloadRecord rec;
        rec.offset_ms = spacing_ms * double(i);
        rec.tokens_before = 2895L * kScales[i % 3];
        rec.tree_ref = std::to_string(i);
        workload.records.push_back(std::move(rec));
    }
    auto library = qos_library();
    // trees are generated on the fly to keep the corpus out of memory
    std::vector<long> tokens_after = transformed_token_counts(
        workload, library,
        [&](const std::string& ref) { return make_qos_tree(kScales[std::stoi(ref) % 3]); });

    double mean_before = 0.0, mean_after = 0.0;
    for (size_t i = 0; i < workload.records.size(); ++i) {
        mean_before += double(workload.records[i].tokens_before);
        mean_after += double(tokens_after[i]);
    }
    mean_before /= double(request_count);
    mean_after /= double(request_count);
    double reduction_pct = 100.0 * (mean_before - mean_after) / mean_before;

    LatencyModel model{400.0, 0.5};
    QoSLevelReport off = replay(workload, model, 50, baseline_token_counts(workload));
    QoSLevelReport on = replay(workload, model, 50, tokens_after);

    double latency_reduction = 100.0 * (off.mean_latency_ms - on.mean_latency_ms)
        / off.mean_latency_ms;
    double qpm_gain = 100.0 * (on.qpm - off.qpm) / off.qpm;

    Outcome out;
    bool tokens_ok = std::abs(reduction_pct - 76.9) <= 0.5;
    out.pass = tokens_ok && latency_reduction >= 20.0 && qpm_gain >= 25.0;
    out.detail = "tokens " + fmt(mean_before, 0) + "->" + fmt(mean_after, 0) + " (-"
        + fmt(reduction_pct, 2) + "%, expect 76.9+-0.5), latency -" + fmt(latency_reduction, 1)
        + "% (>=20%), qpm +" + fmt(qpm_gain, 1) + "% (>=25%)";
    return out;
}

// ---------------------------------------------------------------- criterion 8

struct CliResult {
    int status = -1;
    std::string output;
};

CliResult run_cli(const std::string& args, const fs::path& cwd) {
    std::string cmd = "cd " + cwd.string() + " && " + kCli + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    CliResult result;
    if (!pipe) return result;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
    result.status = ::pclose(pipe);
    return result;
}

std::string strip_timing_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.rfind("latency_", 0) == 0) continue;
        out += line;
        out += '\n';
    }
    return out;
}

std::string read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome roundtrip_and_determinism() {
    std::vector<std::string> failures;

    // canonical round-trip over every bundled fixture tree
    std::vector<fs::path> tree_files;
    for (const auto& entry : fs::directory_iterator(kFixtures / "trees")) {
        tree_files.push_back(entry.path());
    }
    for (const auto& entry : fs::directory_iterator(kFixtures / "examples")) {
        tree_files.push_back(entry.path());
    }
    std::sort(tree_files.begin(), tree_files.end());
    for (const auto& file : tree_files) {
        UITree tree;
        std::string text = read_file(file);
        if (file.extension() == ".xml") {
            tree = parse_android_xml(text);
        } else if (file.extension() == ".uiex") {
            tree = parse_example(text, "x").orig;
        } else {
            tree = parse_canonical(text);
        }
        UITree again = parse_canonical(serialize_canonical(tree));
        if (!structurally_equal(tree, again)) {
            failures.push_back("round-trip " + file.filename().string());
        }
    }

    // CLI bit-stability: run each command twice, byte-compare
    fs::path work = fs::temp_directory_path() / "uiopt_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    run_cli("workload --out " + (work / "qos").string() + " --count 24 --spacing 50", kFixtures);
    run_cli("corpus --out " + (work / "corpus").string() + " --count 120 --seed 7", kFixtures);

    std::vector<std::pair<std::string, std::string>> commands = {
        {"apply", "apply --program programs/identity.dsl --tree trees/bill_amount.uitree"},
        {"apply-library",
         "apply --library programs/settings_pair.dsl --tree trees/settings7.xml "
         "--format canonical"},
        {"score", "score --program programs/identity.dsl --examples examples"},
        {"render-hier", "render --tree trees/settings7.xml --kind hierarchical"},
        {"render-random", "render --tree trees/settings7.xml --kind random --seed 42"},
        {"render-ops", "render --tree trees/settings7.xml --kind ops"},
        {"render-leaf", "render --tree trees/settings7.xml --kind leaf"},
        {"render-flattened", "render --tree trees/settings7.xml --kind flattened"},
        {"profile", "profile --log logs/token_breakdown.jsonl"},
        {"profile-csv", "profile --log logs/token_breakdown.jsonl --csv"},
        {"check", "check --program programs/settings_pair.dsl"},
        {"synthesize",
         "synthesize --examples examples --config synthesis.config --out-library "
             + (work / "lib_a.dsl").string() + " --out-ledger " + (work / "ledger_a.jsonl").string()},
        {"replay-off",
         "replay --workload " + (work / "qos" / "workload.csv").string()
             + " --a 400 --b 0.5 --concurrency 10,50"},
        {"replay-on",
         "replay --workload " + (work / "qos" / "workload.csv").string() + " --a 400 --b 0.5 "
             + "--concurrency 50 --library " + (work / "qos" / "library.dsl").string()},
        {"workload",
         "workload --out " + (work / "qos2").string() + " --count 24 --spacing 50"},
        {"corpus", "corpus --out " + (work / "corpus2").string() + " --count 120 --seed 7"},
        {"overhead",
         "overhead --trees " + (work / "corpus").string() + " --library "
             + (kFixtures / "programs" / "settings_pair.dsl").string()},
    };

    for (const auto& [name, args] : commands) {
        CliResult a = run_cli(args, kFixtures);
        std::string adjusted = args;
        if (name == "synthesize") {
            adjusted = "synthesize --examples examples --config synthesis.config --out-library "
                + (work / "lib_b.dsl").string() + " --out-ledger "
                + (work / "ledger_b.jsonl").string();
        }
        CliResult b = run_cli(adjusted, kFixtures);
        if (a.status != 0 || b.status != 0) {
            failures.push_back(name + " exited nonzero");
            continue;
        }
        std::string out_a = a.output, out_b = b.output;
        if (name == "overhead") {
            out_a = strip_timing_lines(out_a);
            out_b = strip_timing_lines(out_b);
        }
        if (out_a != out_b) failures.push_back(name + " output differs");
    }

    if (read_all(work / "lib_a.dsl") != read_all(work / "lib_b.dsl")) {
        failures.push_back("synthesize library files differ");
    }
    if (read_all(work / "ledger_a.jsonl") != read_all(work / "ledger_b.jsonl")) {
        failures.push_back("synthesize ledger files differ");
    }
    // generated corpora and workloads are byte-identical across runs
    for (const char* pair : {"qos", "corpus"}) {
        fs::path first = work / pair;
        fs::path second = work / (std::string(pair) + "2");
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(first)) {
            if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), first));
        }
        std::sort(files.begin(), files.end());
        for (const auto& rel : files) {
            if (!fs::exists(second / rel) || read_all(first / rel) != read_all(second / rel)) {
                failures.push_back(std::string(pair) + "/" + rel.string() + " not reproducible");
            }
        }
    }

    Outcome out;
    out.pass = failures.empty();
    if (failures.empty()) {
        out.detail = std::to_string(tree_files.size()) + " fixtures round-trip, "
            + std::to_string(commands.size())
            + " CLI commands bit-stable (overhead timing lines exempt)";
    } else {
        out.detail = failures.front() + " (+" + std::to_string(failures.size() - 1) + " more)";
    }
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"oracle equivalence (exhaustive small trees x enumerated programs)", oracle_equivalence},
        {"conservation under merge-only programs", conservation_suite},
        {"reward arithmetic (efficiency ratio and completeness penalties)", reward_arithmetic},
        {"synthesis reproducibility, monotonicity and library efficiency",
         synthesis_reproducibility},
        {"profiler exactness on the pre-tokenized breakdown log", profiler_exactness},
        {"runtime overhead on the 1000-tree corpus", runtime_overhead},
        {"QoS replay simulation on the synthetic serving workload", qos_simulation},
        {"round-trip and CLI determinism", roundtrip_and_determinism},
    };

    int failed = 0;
    int index = 0;
    for (const auto& criterion : criteria) {
        ++index;
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        if (!outcome.pass) ++failed;
        std::printf("[%s] criterion %d: %s -- %s\n", outcome.pass ? "PASS" : "FAIL", index,
                    criterion.name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (failed == 0) {
        std::printf("acceptance: all %d criteria passed\n",
                    int(sizeof criteria / sizeof criteria[0]));
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", failed);
    }
    return failed == 0 ? 0 : 1;
}
