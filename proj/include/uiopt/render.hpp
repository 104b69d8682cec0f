#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uiopt/errors.hpp"
#include "uiopt/interpreter.hpp"
#include "uiopt/token.hpp"
#include "uiopt/tree.hpp"

namespace uiopt {

enum class RenderKind { hierarchical, dfs_flat, random, ops, leaf, flattened };

inline std::optional<RenderKind> render_kind_from_name(std::string_view s) {
    if (s == "hierarchical") return RenderKind::hierarchical;
    if (s == "dfs" || s == "dfs_flat") return RenderKind::dfs_flat;
    if (s == "random") return RenderKind::random;
    if (s == "ops") return RenderKind::ops;
    if (s == "leaf") return RenderKind::leaf;
    if (s == "flattened") return RenderKind::flattened;
    return std::nullopt;
}

struct RenderedRepresentation {
    RenderKind kind = RenderKind::hierarchical;
    std::vector<std::string> lines;
    long token_count = 0;
    std::optional<uint64_t> seed;

    std::string joined() const {
        std::string out;
        for (const auto& line : lines) {
            out += line;
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline std::string view_line(const View& v) {
    std::string out;
    UINode tmp;
    tmp.tag = v.type_name;
    tmp.text = v.text;
    tmp.flags = v.flags;
    tmp.bounds = v.bounds;
    tmp.attributes = v.props;
    write_node_line(out, tmp, 0);
    out.pop_back();  // newline
    return out;
}

inline void finish(RenderedRepresentation& rep, const TokenCounter& counter) {
    rep.token_count = count_tokens(rep.joined(), counter);
}

}  // namespace detail

// View-list renderers of the node-ordering study: hierarchy-preserving
// indentation, flat DFS order, and a seeded random permutation of the flat
// lines.
inline RenderedRepresentation render(const ViewList& views, RenderKind kind,
                                     std::optional<uint64_t> seed = std::nullopt,
                                     const TokenCounter& counter = {}) {
    RenderedRepresentation rep;
    rep.kind = kind;
    switch (kind) {
        case RenderKind::hierarchical:
            for (const View& v : views.views) {
                rep.lines.push_back(std::string(size_t(v.depth) * 2, ' ')
                                    + detail::view_line(v));
            }
            break;
        case RenderKind::dfs_flat:
            for (const View& v : views.views) rep.lines.push_back(detail::view_line(v));
            break;
        case RenderKind::random: {
            if (!seed) {
                throw Error(Errc::missing_seed, "random rendering requires a seed");
            }
            rep.seed = seed;
            for (const View& v : views.views) rep.lines.push_back(detail::view_line(v));
            // Fisher-Yates with an explicit index draw; std::shuffle output
            // is implementation-defined and would break cross-platform
            // byte stability.
            std::mt19937_64 rng(*seed);
            for (size_t i = rep.lines.size(); i > 1; --i) {
                size_t j = size_t(rng() % i);
                std::swap(rep.lines[i - 1], rep.lines[j]);
            }
            break;
        }
        default:
            throw Error(Errc::schema_violation,
                        "render() handles view kinds; use the baseline_* entry points");
    }
    detail::finish(rep, counter);
    return rep;
}

// Operation-focused baseline: keeps interactive, visible nodes only and
// collapses consecutive duplicates (duplicate = identical line once the node
// id is removed).
inline RenderedRepresentation baseline_ops(const UITree& tree, const TokenCounter& counter = {}) {
    RenderedRepresentation rep;
    rep.kind = RenderKind::ops;
    std::string prev_body;
    visit_preorder(tree.root, [&](const UINode& n) {
        if (!node_is_interactive(n.flags) || !n.flags.test(Flag::visible)) return;
        View v;
        v.type_name = n.tag;
        v.text = n.text;
        v.flags = n.flags;
        v.bounds = n.bounds;
        std::string body = detail::view_line(v);
        if (!rep.lines.empty() && body == prev_body) return;
        rep.lines.push_back("id=" + std::to_string(n.node_id) + ' ' + body);
        prev_body = std::move(body);
    });
    detail::finish(rep, counter);
    return rep;
}

// Leaf-preserving baseline in HTML-like form; five element classes driven by
// flags and tag.
inline RenderedRepresentation baseline_leaf(const UITree& tree, const TokenCounter& counter = {}) {
    RenderedRepresentation rep;
    rep.kind = RenderKind::leaf;
    visit_preorder(tree.root, [&](const UINode& n) {
        if (!n.is_leaf()) return;
        const char* elem = "text";
        std::string lowered;
        lowered.reserve(n.tag.size());
        for (char c : n.tag) lowered.push_back(char(std::tolower(uint8_t(c))));
        if (n.flags.test(Flag::clickable))
            elem = "button";
        else if (n.flags.test(Flag::editable))
            elem = "input";
        else if (n.flags.test(Flag::checkable))
            elem = "checkbox";
        else if (lowered.find("image") != std::string::npos)
            elem = "image";
        rep.lines.push_back('<' + std::string(elem) + " id=" + std::to_string(n.node_id) + '>'
                            + n.text + "</" + elem + '>');
    });
    detail::finish(rep, counter);
    return rep;
}

// Flat categorized baseline: summary header, then sections by interaction
// type with precedence clickable > input > scrollable > static text.
inline RenderedRepresentation baseline_flattened(const UITree& tree,
                                                 const TokenCounter& counter = {}) {
    RenderedRepresentation rep;
    rep.kind = RenderKind::flattened;
    std::array<std::vector<std::string>, 4> sections;
    visit_preorder(tree.root, [&](const UINode& n) {
        int section;
        if (n.flags.test(Flag::clickable))
            section = 0;
        else if (n.flags.test(Flag::editable))
            section = 1;
        else if (n.flags.test(Flag::scrollable))
            section = 2;
        else if (!n.text.empty())
            section = 3;
        else
            return;
        std::string item = "- [" + std::to_string(n.node_id) + "] " + n.tag;
        if (!n.text.empty()) item += " \"" + escape_quoted(n.text) + '"';
        sections[size_t(section)].push_back(std::move(item));
    });
    size_t total = sections[0].size() + sections[1].size() + sections[2].size()
        + sections[3].size();
    rep.lines.push_back("elements: " + std::to_string(total) + " (clickable "
                        + std::to_string(sections[0].size()) + ", inputs "
                        + std::to_string(sections[1].size()) + ", scrollable "
                        + std::to_string(sections[2].size()) + ", static "
                        + std::to_string(sections[3].size()) + ")");
    static constexpr std::array<const char*, 4> kSectionNames = {"clickable:", "inputs:",
                                                                 "scrollable:", "static:"};
    for (size_t s = 0; s < sections.size(); ++s) {
        if (sections[s].empty()) continue;
        rep.lines.push_back(kSectionNames[s]);
        for (auto& item : sections[s]) rep.lines.push_back(std::move(item));
    }
    detail::finish(rep, counter);
    return rep;
}

// The six functional prompt components, assembled in fixed order.
struct PromptBundle {
    std::string system;
    std::string action_space;
    std::string task;
    std::string ui;
    std::string context;
    std::string format;
};

struct AssembledPrompt {
    std::string text;
    std::array<long, 6> component_tokens{};
    long total = 0;
};

inline AssembledPrompt assemble_prompt(const PromptBundle& bundle,
                                       const TokenCounter& counter = {}) {
    AssembledPrompt out;
    const std::array<const std::string*, 6> parts = {&bundle.system, &bundle.action_space,
                                                     &bundle.task,   &bundle.ui,
                                                     &bundle.context, &bundle.format};
    for (size_t i = 0; i < parts.size(); ++i) {
        out.component_tokens[i] = count_tokens(*parts[i], counter);
        out.total += out.component_tokens[i];
        if (parts[i]->empty()) continue;
        if (!out.text.empty()) out.text += "\n\n";
        out.text += *parts[i];
    }
    return out;
}

}  // namespace uiopt
