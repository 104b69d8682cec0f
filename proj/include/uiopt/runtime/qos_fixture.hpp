#pragma once

#include <string>
#include <vector>

#include "uiopt/dsl/parse.hpp"
#include "uiopt/runtime/replay.hpp"
#include "uiopt/tree.hpp"

namespace uiopt {

// Synthetic serving-study workload. The trees are shaped so the bundled
// library hits a fixed aggregate: the raw leaf rendering averages 8,685
// tokens and the transformed rendering 2,010 (76.9% reduction).
//
// A scale-m tree renders to 2895*m raw tokens (67*m groups of five one-token
// words at six tokens per leaf line, plus 885*m one-token decorative pads)
// and to 670*m tokens after the library merges each group (ten tokens per
// merged line) and drops the pads. Cycling m through {2,3,4} keeps the means
// exact.

inline UITree make_qos_tree(int scale) {
    UITree tree;
    tree.root.tag = "screen";
    const int groups = 67 * scale;
    const int pads = 885 * scale;
    for (int g = 0; g < groups; ++g) {
        UINode group;
        group.tag = "Group";
        for (int i = 0; i < 5; ++i) {
            UINode leaf;
            leaf.tag = "Text";
            leaf.text = "w";
            group.children.push_back(std::move(leaf));
        }
        tree.root.children.push_back(std::move(group));
    }
    for (int p = 0; p < pads; ++p) {
        UINode pad;
        pad.tag = "Pad";
        tree.root.children.push_back(std::move(pad));
    }
    finalize_tree(tree);
    return tree;
}

inline std::vector<TransformProgram> qos_library() {
    return {parse_program(
        "program consolidate-groups { leaf-filter: text empty; leaf-props: [text]; "
        "node-filter: not tag = \"Group\"; "
        "merge-when: node(tag = \"Group\") and all-views(text nonempty); }")};
}

struct QoSFixture {
    ReplayWorkload workload;
    std::vector<UITree> trees;           // parallel to workload records
    std::vector<TransformProgram> library;
};

// `count` requests arriving every `spacing_ms`, tree scales cycling 2,3,4.
// Use a count divisible by 3 for exact aggregate means.
inline QoSFixture make_qos_fixture(int count = 600, double spacing_ms = 50.0) {
    QoSFixture fixture;
    fixture.library = qos_library();
    static const int kScales[3] = {2, 3, 4};
    for (int i = 0; i < count; ++i) {
        int scale = kScales[i % 3];
        UITree tree = make_qos_tree(scale);
        WorkloadRecord rec;
        rec.offset_ms = spacing_ms * double(i);
        rec.tokens_before = 2895L * scale;
        rec.tree_ref = "qos_tree_" + std::to_string(i);
        fixture.workload.records.push_back(std::move(rec));
        fixture.trees.push_back(std::move(tree));
    }
    return fixture;
}

}  // namespace uiopt
