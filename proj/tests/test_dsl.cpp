#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "uiopt/canonical.hpp"
#include "uiopt/dsl/enumerate.hpp"
#include "uiopt/dsl/parse.hpp"
#include "uiopt/dsl/print.hpp"
#include "uiopt/dsl/validate.hpp"
#include "uiopt/treegen.hpp"

using namespace uiopt;

static const char* kIdentityText =
    "program id { leaf-filter: false; leaf-props: [text]; node-filter: true; "
    "merge-when: false; }";

TEST_CASE("parse: identity-style program") {
    TransformProgram p = parse_program(kIdentityText);
    CHECK(p.program_id == "id");
    CHECK(p.leaf_filter->kind == NodePred::Kind::always_false);
    CHECK(p.node_filter->kind == NodePred::Kind::always_true);
    CHECK(p.merge_when->kind == MergePred::Kind::always_false);
    CHECK(p.leaf_props == std::vector<std::string>{"text"});
    CHECK(p.provenance == Provenance::hand_written);
    CHECK(p.merge_props == MergeProps{});
}

TEST_CASE("parse: aggregator combination keeps and at top level") {
    TransformProgram p = parse_program(
        "program m { leaf-filter: false; leaf-props: [text]; node-filter: false; "
        "merge-when: all-views(text nonempty) and view-count <= 3; }");
    REQUIRE(p.merge_when->kind == MergePred::Kind::and_op);
    CHECK(p.merge_when->a->kind == MergePred::Kind::all_views);
    CHECK(p.merge_when->b->kind == MergePred::Kind::view_count);
    CHECK(p.merge_when->b->cmp == Cmp::le);
    CHECK(p.merge_when->b->num == 3);
}

TEST_CASE("parse: malformed merge condition reports position") {
    try {
        parse_program("program m { leaf-filter: false; leaf-props: [text]; node-filter: false; "
                      "merge-when: and true; }");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::syntax_error);
        CHECK(e.line() >= 1);
        CHECK(e.column() >= 1);
        CHECK(std::string(e.what()).find("merge condition") != std::string::npos);
    }
}

TEST_CASE("parse: node guard and full predicate zoo") {
    TransformProgram p = parse_program(
        "program z {\n"
        "  leaf-filter: (text empty and not flag(clickable)) or tag in (\"View\", \"Spacer\");\n"
        "  leaf-props: [text, resource-id];\n"
        "  node-filter: attr(\"resource-id\") matches /id\\/.*/ and child-count >= 2;\n"
        "  merge-when: node(tag = \"FormRow\" and depth <= 3) and all-views(text nonempty or "
        "interactive);\n"
        "  merge-props { text: concat; type: dominant-child };\n"
        "}");
    CHECK(p.leaf_props == std::vector<std::string>{"text", "resource-id"});
    CHECK(p.merge_props.type == TypeRule::dominant_child);
    CHECK(validate_program(p).ok());
}

TEST_CASE("print-parse-print is a fixpoint") {
    const char* samples[] = {
        kIdentityText,
        "program a { leaf-filter: text empty and not flag(clickable); leaf-props: [text]; "
        "node-filter: not (tag = \"a\" or tag = \"b\"); merge-when: any-view(interactive) or "
        "view-count = 1; merge-props { text: first; type: parent }; }",
        "program b { leaf-filter: attr(\"k\") = \"v\"; leaf-props: [text]; node-filter: "
        "depth > 2; merge-when: node(child-count < 4) and all-views(type = \"T\"); }",
    };
    for (const char* text : samples) {
        TransformProgram p1 = parse_program(text);
        std::string printed = print_program(p1);
        TransformProgram p2 = parse_program(printed);
        CHECK(print_program(p2) == printed);
    }
}

TEST_CASE("parse: depth limit enforced") {
    CHECK_THROWS_MATCHES(
        parse_program("program d { leaf-filter: not not not not not true; leaf-props: [text]; "
                      "node-filter: true; merge-when: false; }"),
        Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
            return e.code() == Errc::depth_exceeded;
        }));
}

TEST_CASE("validate: identity program is clean") {
    CHECK(validate_program(parse_program(kIdentityText)).ok());
}

TEST_CASE("validate: deep predicate reported once") {
    TransformProgram p = parse_program(kIdentityText);
    NodePredPtr deep = np::text_empty();
    for (int i = 0; i < 6; ++i) deep = np::not_(deep);
    p.leaf_filter = deep;  // depth 7
    ValidationReport report = validate_program(p);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == Violation::Kind::depth_exceeded);
}

TEST_CASE("validate: aggregator under not is a placement violation") {
    TransformProgram p = parse_program(kIdentityText);
    p.merge_when = mp::not_(mp::any_view(vp::interactive()));
    ValidationReport report = validate_program(p);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].kind == Violation::Kind::aggregator_placement);
}

TEST_CASE("validate: unknown flag and bad pattern") {
    TransformProgram p = parse_program(kIdentityText);
    p.leaf_filter = np::flag("sparkly");
    CHECK(validate_program(p).violations[0].kind == Violation::Kind::unknown_flag);

    p.leaf_filter = np::attr_matches("k", "([unclosed");
    CHECK(validate_program(p).violations[0].kind == Violation::Kind::invalid_pattern);
}

TEST_CASE("enumerate: stream begins with the four all-constant programs") {
    EnumVocabulary vocab;
    vocab.tags = {"TextView"};
    EnumerationStream stream(vocab, 1);
    std::vector<TransformProgram> first;
    for (int i = 0; i < 4; ++i) {
        auto p = stream.next();
        REQUIRE(p.has_value());
        first.push_back(*p);
    }
    std::set<std::pair<bool, bool>> combos;
    for (const auto& p : first) {
        CHECK((p.leaf_filter->kind == NodePred::Kind::always_true
               || p.leaf_filter->kind == NodePred::Kind::always_false));
        combos.insert({p.leaf_filter->kind == NodePred::Kind::always_true,
                       p.merge_when->kind == MergePred::Kind::always_true});
        CHECK(p.provenance == Provenance::enumerated);
    }
    CHECK(combos.size() == 4);
}

TEST_CASE("enumerate: budget 3 contains a tag node-filter and is deterministic") {
    EnumVocabulary vocab;
    vocab.tags = {"TextView"};
    auto run = enumerate_grammar(vocab, 3);
    bool found = false;
    for (const auto& p : run) {
        if (p.node_filter->kind == NodePred::Kind::tag_equals && p.node_filter->str == "TextView")
            found = true;
    }
    CHECK(found);

    auto run2 = enumerate_grammar(vocab, 3);
    REQUIRE(run.size() == run2.size());
    for (size_t i = 0; i < run.size(); ++i) {
        CHECK(print_program(run[i]) == print_program(run2[i]));
    }
}

TEST_CASE("enumerate: duplicate-free, valid, ordered by size then printed body") {
    EnumVocabulary vocab;
    vocab.tags = {"A", "B"};
    vocab.flags = {"clickable"};
    auto programs = enumerate_grammar(vocab, 3);
    std::set<std::string> bodies;
    int last_size = 0;
    std::string last_body;
    for (const auto& p : programs) {
        std::string body = print_program_body(p);
        CHECK(bodies.insert(body).second);
        CHECK(validate_program(p).ok());
        int size = detail::program_size(p);
        CHECK(size >= last_size);
        if (size == last_size) CHECK(last_body < body);
        last_size = size;
        last_body = body;
    }
    CHECK(programs.size() > 100);
}

TEST_CASE("parse: arbitrary input fails with typed errors only") {
    DetRng rng(313);
    const std::string alphabet =
        "program leaf-filter node merge when text tag attr flag {}()[]<>=;:,\"/\\ \n\t0123789";
    for (int i = 0; i < 2000; ++i) {
        std::string input;
        for (uint32_t n = rng.below(120); n > 0; --n) {
            input.push_back(alphabet[rng.below(uint32_t(alphabet.size()))]);
        }
        try {
            parse_program(input);
        } catch (const Error&) {
            // expected for almost every input
        }
    }
    SUCCEED("no crashes or foreign exceptions");
}

TEST_CASE("enumerate: vocabulary extraction from trees") {
    UITree tree = parse_canonical("uitree v1 canonical\n"
                                  "B text=\"x\"\n"
                                  "  A flags=[clickable] attrs{k=\"v\"}\n");
    EnumVocabulary vocab = vocabulary_from_trees(std::span(&tree, 1));
    CHECK(vocab.tags == std::vector<std::string>{"A", "B"});
    CHECK(vocab.flags == std::vector<std::string>{"clickable"});
    CHECK(vocab.attr_keys == std::vector<std::string>{"k"});
}
