// uiopt: transform, score, synthesize, serve and benchmark UI-tree
// representations.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "uiopt/android_xml.hpp"
#include "uiopt/canonical.hpp"
#include "uiopt/config_io.hpp"
#include "uiopt/dsl/parse.hpp"
#include "uiopt/dsl/print.hpp"
#include "uiopt/dsl/validate.hpp"
#include "uiopt/examples_io.hpp"
#include "uiopt/interpreter.hpp"
#include "uiopt/ledger_io.hpp"
#include "uiopt/profiler.hpp"
#include "uiopt/render.hpp"
#include "uiopt/runtime/external.hpp"
#include "uiopt/runtime/overhead.hpp"
#include "uiopt/runtime/qos_fixture.hpp"
#include "uiopt/runtime/replay.hpp"
#include "uiopt/runtime/service.hpp"
#include "uiopt/synthesis.hpp"
#include "uiopt/treegen.hpp"

namespace fs = std::filesystem;
using namespace uiopt;

namespace {

UITree load_tree(const fs::path& path) {
    std::string text = read_file(path);
    if (text.rfind("<", 0) == 0 || path.extension() == ".xml") {
        return parse_android_xml(text);
    }
    return parse_canonical(text);
}

std::vector<TransformProgram> load_programs(const fs::path& program,
                                            const fs::path& library) {
    if (!program.empty()) return {parse_program(read_file(program))};
    if (!library.empty()) return parse_program_sequence(read_file(library));
    return {};
}

TokenCounter counter_from_spec(const std::string& spec) {
    if (spec.empty() || spec == "default") return {};
    if (spec.rfind("external:", 0) == 0) {
        return external_counter_from_command(spec.substr(9));
    }
    throw Error(Errc::external_counter_failure,
                "counter must be 'default' or 'external:<cmd>', got '" + spec + "'");
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::malformed_document, "cannot write " + path.string());
    out << content;
}

std::string fmt(double value, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

std::vector<UITree> load_tree_dir(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension();
        if (ext == ".uitree" || ext == ".xml") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<UITree> trees;
    trees.reserve(files.size());
    for (const auto& f : files) trees.push_back(load_tree(f));
    return trees;
}

int cmd_apply(const fs::path& program, const fs::path& library, const fs::path& tree_path,
              const std::string& format, bool retain_containers) {
    UITree tree = load_tree(tree_path);
    auto programs = load_programs(program, library);
    ApplyOptions opts;
    opts.retain_containers = retain_containers;
    ViewList views = apply_library(programs, tree, opts);
    if (format == "canonical") {
        std::cout << serialize_canonical(lift(views));
    } else {
        std::cout << serialize_views(views);
    }
    return 0;
}

int cmd_score(const fs::path& program, const fs::path& examples_dir,
              const std::string& counter_spec) {
    TransformProgram p = parse_program(read_file(program));
    auto examples = load_example_dir(examples_dir);
    TokenCounter counter = counter_from_spec(counter_spec);
    RewardReport report = score_program(p, examples, counter);
    for (const auto& row : report.per_example) {
        std::cout << "example=" << row.example_id << " completeness=" << fmt(row.completeness, 1)
                  << " efficiency=" << fmt(row.efficiency) << "\n";
    }
    std::cout << "total=" << fmt(report.total) << "\n";
    return 0;
}

int cmd_synthesize(const fs::path& examples_dir, const fs::path& config_path,
                   const std::string& generator_spec, const fs::path& out_library,
                   const fs::path& out_ledger, const std::string& counter_spec) {
    auto examples = load_example_dir(examples_dir);
    SynthesisConfig config =
        config_path.empty() ? SynthesisConfig{} : parse_synthesis_config(read_file(config_path));
    GeneratorFn generator;
    if (!generator_spec.empty()) {
        if (generator_spec == "enumerative") {
            config.generator = SynthesisConfig::Generator::enumerative;
        } else if (generator_spec.rfind("external:", 0) == 0) {
            config.generator = SynthesisConfig::Generator::external;
            config.external_endpoint = generator_spec.substr(9);
        } else {
            throw Error(Errc::external_generator_unavailable,
                        "generator must be 'enumerative' or 'external:<endpoint>'");
        }
    }
    if (config.generator == SynthesisConfig::Generator::external) {
        generator = generator_from_endpoint(config.external_endpoint);
    }
    TokenCounter counter = counter_from_spec(counter_spec);
    SynthesisResult result = synthesize(examples, config, counter, generator);
    write_file(out_library, serialize_library(result.library));
    write_file(out_ledger, serialize_ledger(result.ledger));
    std::cout << "iterations=" << result.ledger.iterations_run
              << " converged=" << (result.converged ? "true" : "false")
              << " accepted=" << result.library.entries.size()
              << " candidates=" << result.ledger.records.size() << "\n";
    for (int i = 1; i <= result.ledger.iterations_run; ++i) {
        std::cout << "iteration=" << i << " best_efficiency=" << fmt(best_so_far(result.ledger, i))
                  << "\n";
    }
    return 0;
}

int cmd_render(const fs::path& tree_path, const fs::path& program, const fs::path& library,
               const std::string& kind_name, int64_t seed, bool have_seed) {
    UITree tree = load_tree(tree_path);
    auto kind = render_kind_from_name(kind_name);
    if (!kind) throw Error(Errc::schema_violation, "unknown render kind '" + kind_name + "'");

    auto programs = load_programs(program, library);
    RenderedRepresentation rep;
    if (*kind == RenderKind::ops || *kind == RenderKind::leaf || *kind == RenderKind::flattened) {
        UITree input = programs.empty() ? tree : lift(apply_library(programs, tree));
        rep = *kind == RenderKind::ops ? baseline_ops(input)
            : *kind == RenderKind::leaf ? baseline_leaf(input)
                                        : baseline_flattened(input);
    } else {
        ViewList views = apply_library(programs, tree);
        std::optional<uint64_t> seed_opt;
        if (have_seed) seed_opt = uint64_t(seed);
        rep = render(views, *kind, seed_opt);
    }
    std::cout << rep.joined();
    std::cerr << "tokens=" << rep.token_count << "\n";
    return 0;
}

int cmd_profile(const fs::path& log_path, const std::string& counter_spec, bool csv) {
    auto records = parse_log(read_file(log_path));
    TokenCounter counter = counter_from_spec(counter_spec);
    std::cout << format_breakdown(profile(records, counter), csv);
    return 0;
}

int cmd_serve(const fs::path& library, const std::string& bind_addr) {
    size_t colon = bind_addr.rfind(':');
    if (colon == std::string::npos) {
        throw Error(Errc::schema_violation, "--bind expects host:port");
    }
    std::string host = bind_addr.substr(0, colon);
    int port = std::stoi(bind_addr.substr(colon + 1));
    TransformService service(library);
    port = service.bind(host, port);
    std::cout << "listening on " << host << ":" << port << " library=" << service.library_id()
              << std::endl;
    service.listen_after_bind();
    return 0;
}

int cmd_overhead(const fs::path& trees_dir, const fs::path& library_path) {
    std::vector<UITree> trees = load_tree_dir(trees_dir);
    auto library = parse_program_sequence(read_file(library_path));
    LatencyStats stats = measure_overhead(trees, library);
    long total_nodes = 0;
    for (const auto& t : trees) total_nodes += t.node_count;
    std::cout << "trees=" << stats.trees << " programs=" << library.size()
              << " total_nodes=" << total_nodes << "\n";
    std::cout << "latency_min_ms=" << fmt(stats.min_ms, 4) << "\n";
    std::cout << "latency_mean_ms=" << fmt(stats.mean_ms, 4) << "\n";
    std::cout << "latency_max_ms=" << fmt(stats.max_ms, 4) << "\n";
    std::cout << "latency_p95_ms=" << fmt(stats.p95_ms, 4) << "\n";
    return 0;
}

int cmd_replay(const fs::path& workload_path, double a, double b,
               const std::string& concurrency_list, const fs::path& library_path) {
    ReplayWorkload workload = parse_workload(read_file(workload_path));
    LatencyModel model{a, b};

    bool transform_on = !library_path.empty();
    std::vector<long> tokens;
    if (transform_on) {
        auto library = parse_program_sequence(read_file(library_path));
        fs::path base = workload_path.parent_path();
        tokens = transformed_token_counts(workload, library, [&](const std::string& ref) {
            return load_tree(base / ref);
        });
    } else {
        tokens = baseline_token_counts(workload);
    }

    std::vector<int> levels;
    std::stringstream ss(concurrency_list);
    std::string item;
    while (std::getline(ss, item, ',')) levels.push_back(std::stoi(item));
    for (int level : levels) {
        QoSLevelReport report = replay(workload, model, level, tokens);
        std::cout << "concurrency=" << report.concurrency << " transform="
                  << (transform_on ? "on" : "off") << " completed=" << report.completed
                  << " mean_tokens=" << fmt(report.mean_tokens, 1)
                  << " min_ms=" << fmt(report.min_latency_ms, 1)
                  << " mean_ms=" << fmt(report.mean_latency_ms, 1)
                  << " max_ms=" << fmt(report.max_latency_ms, 1)
                  << " elapsed_ms=" << fmt(report.elapsed_ms, 1)
                  << " qpm=" << fmt(report.qpm, 1) << "\n";
    }
    return 0;
}

int cmd_corpus(const fs::path& out_dir, int count, uint64_t seed, int min_nodes, int max_nodes) {
    TreeGenConfig cfg;
    cfg.min_nodes = min_nodes;
    cfg.max_nodes = max_nodes;
    std::vector<UITree> corpus = generate_corpus(seed, count, cfg);
    fs::create_directories(out_dir);
    for (size_t i = 0; i < corpus.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "tree_%05zu.uitree", i);
        write_file(out_dir / name, serialize_canonical(corpus[i]));
    }
    std::cout << "wrote " << corpus.size() << " trees to " << out_dir.string() << "\n";
    return 0;
}

int cmd_workload(const fs::path& out_dir, int count, double spacing_ms) {
    QoSFixture fixture = make_qos_fixture(count, spacing_ms);
    fs::create_directories(out_dir / "trees");
    ReplayWorkload on_disk = fixture.workload;
    for (size_t i = 0; i < fixture.trees.size(); ++i) {
        std::string ref = "trees/" + on_disk.records[i].tree_ref + ".uitree";
        on_disk.records[i].tree_ref = ref;
        write_file(out_dir / ref, serialize_canonical(fixture.trees[i]));
    }
    write_file(out_dir / "workload.csv", serialize_workload(on_disk));
    std::string library_text;
    for (const auto& p : fixture.library) library_text += print_program(p) + "\n";
    write_file(out_dir / "library.dsl", library_text);
    std::cout << "wrote " << on_disk.records.size() << " requests to " << out_dir.string()
              << " (workload.csv, trees/, library.dsl)\n";
    return 0;
}

int cmd_check(const fs::path& program_path) {
    auto programs = parse_program_sequence(read_file(program_path));
    bool all_ok = true;
    for (const auto& p : programs) {
        ValidationReport report = validate_program(p);
        if (report.ok()) {
            std::cout << p.program_id << ": ok\n";
        } else {
            all_ok = false;
            for (const auto& v : report.violations) {
                std::cout << p.program_id << ": " << violation_kind_name(v.kind) << ": "
                          << v.detail << "\n";
            }
        }
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UI-tree representation optimizer"};
    app.require_subcommand(1);

    // apply
    fs::path program, library, tree_path;
    std::string format = "views";
    bool retain_containers = false;
    auto* apply_cmd = app.add_subcommand("apply", "Transform a tree with a program or library");
    apply_cmd->add_option("--program", program, "program file");
    apply_cmd->add_option("--library", library, "library file");
    apply_cmd->add_option("--tree", tree_path, "tree document")->required();
    apply_cmd->add_option("--format", format, "views|canonical");
    apply_cmd->add_flag("--retain-containers", retain_containers,
                        "wrap pass-through children under container views");

    // score
    fs::path score_program_path, examples_dir;
    std::string counter_spec = "default";
    auto* score_cmd = app.add_subcommand("score", "Score a program against an example set");
    score_cmd->add_option("--program", score_program_path, "program file")->required();
    score_cmd->add_option("--examples", examples_dir, "directory of .uiex files")->required();
    score_cmd->add_option("--counter", counter_spec, "default|external:<cmd>");

    // synthesize
    fs::path synth_examples, synth_config, out_library, out_ledger;
    std::string generator_spec;
    std::string synth_counter = "default";
    auto* synth_cmd = app.add_subcommand("synthesize", "Iteratively synthesize a program library");
    synth_cmd->add_option("--examples", synth_examples, "directory of .uiex files")->required();
    synth_cmd->add_option("--config", synth_config, "key=value config file");
    synth_cmd->add_option("--generator", generator_spec, "enumerative|external:<endpoint>");
    synth_cmd->add_option("--out-library", out_library, "library output path")->required();
    synth_cmd->add_option("--out-ledger", out_ledger, "ledger output path")->required();
    synth_cmd->add_option("--counter", synth_counter, "default|external:<cmd>");

    // render
    fs::path render_tree, render_program, render_library;
    std::string kind_name = "hierarchical";
    int64_t seed = 0;
    auto* render_cmd = app.add_subcommand("render", "Render a tree or its transformed views");
    render_cmd->add_option("--tree", render_tree, "tree document")->required();
    render_cmd->add_option("--program", render_program, "program file");
    render_cmd->add_option("--library", render_library, "library file");
    render_cmd->add_option("--kind", kind_name, "hierarchical|dfs|random|ops|leaf|flattened");
    auto* seed_opt = render_cmd->add_option("--seed", seed, "shuffle seed for --kind random");

    // profile
    fs::path log_path;
    std::string profile_counter = "default";
    bool csv = false;
    auto* profile_cmd = app.add_subcommand("profile", "Token breakdown over a prompt log");
    profile_cmd->add_option("--log", log_path, "JSONL prompt log")->required();
    profile_cmd->add_option("--counter", profile_counter, "default|external:<cmd>");
    profile_cmd->add_flag("--csv", csv, "CSV output");

    // serve
    fs::path serve_library;
    std::string bind_addr = "127.0.0.1:8787";
    auto* serve_cmd = app.add_subcommand("serve", "Run the transform interception service");
    serve_cmd->add_option("--library", serve_library, "library file")->required();
    serve_cmd->add_option("--bind", bind_addr, "host:port");

    // overhead
    fs::path trees_dir, overhead_library;
    auto* overhead_cmd =
        app.add_subcommand("overhead", "Measure per-tree transform latency over a corpus");
    overhead_cmd->add_option("--trees", trees_dir, "directory of tree documents")->required();
    overhead_cmd->add_option("--library", overhead_library, "library file")->required();

    // replay
    fs::path workload_path, replay_library;
    double model_a = 400.0, model_b = 0.5;
    std::string concurrency = "50";
    auto* replay_cmd = app.add_subcommand("replay", "Discrete-event QoS replay simulation");
    replay_cmd->add_option("--workload", workload_path, "workload file")->required();
    replay_cmd->add_option("--a", model_a, "fixed latency ms");
    replay_cmd->add_option("--b", model_b, "latency ms per token");
    replay_cmd->add_option("--concurrency", concurrency, "worker count (comma list for curves)");
    replay_cmd->add_option("--library", replay_library,
                           "library file; enables transform-on token counts");

    // corpus
    fs::path corpus_out;
    int corpus_count = 1000;
    uint64_t corpus_seed = 7;
    int corpus_min_nodes = 10, corpus_max_nodes = 200;
    auto* corpus_cmd = app.add_subcommand("corpus", "Generate a deterministic tree corpus");
    corpus_cmd->add_option("--out", corpus_out, "output directory")->required();
    corpus_cmd->add_option("--count", corpus_count, "number of trees");
    corpus_cmd->add_option("--seed", corpus_seed, "generator seed");
    corpus_cmd->add_option("--min-nodes", corpus_min_nodes, "minimum nodes per tree");
    corpus_cmd->add_option("--max-nodes", corpus_max_nodes, "maximum nodes per tree");

    // workload
    fs::path workload_out;
    int workload_count = 600;
    double workload_spacing = 50.0;
    auto* workload_cmd =
        app.add_subcommand("workload", "Generate the synthetic serving-study workload");
    workload_cmd->add_option("--out", workload_out, "output directory")->required();
    workload_cmd->add_option("--count", workload_count, "request count (multiple of 3)");
    workload_cmd->add_option("--spacing", workload_spacing, "arrival spacing ms");

    // check
    fs::path check_program;
    auto* check_cmd = app.add_subcommand("check", "Validate programs and report violations");
    check_cmd->add_option("--program", check_program, "program or library file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (apply_cmd->parsed()) {
            return cmd_apply(program, library, tree_path, format, retain_containers);
        }
        if (score_cmd->parsed()) {
            return cmd_score(score_program_path, examples_dir, counter_spec);
        }
        if (synth_cmd->parsed()) {
            return cmd_synthesize(synth_examples, synth_config, generator_spec, out_library,
                                  out_ledger, synth_counter);
        }
        if (render_cmd->parsed()) {
            return cmd_render(render_tree, render_program, render_library, kind_name, seed,
                              seed_opt->count() > 0);
        }
        if (profile_cmd->parsed()) return cmd_profile(log_path, profile_counter, csv);
        if (serve_cmd->parsed()) return cmd_serve(serve_library, bind_addr);
        if (overhead_cmd->parsed()) return cmd_overhead(trees_dir, overhead_library);
        if (replay_cmd->parsed()) {
            return cmd_replay(workload_path, model_a, model_b, concurrency, replay_library);
        }
        if (corpus_cmd->parsed()) {
            return cmd_corpus(corpus_out, corpus_count, corpus_seed, corpus_min_nodes,
                              corpus_max_nodes);
        }
        if (workload_cmd->parsed()) {
            return cmd_workload(workload_out, workload_count, workload_spacing);
        }
        if (check_cmd->parsed()) return cmd_check(check_program);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
