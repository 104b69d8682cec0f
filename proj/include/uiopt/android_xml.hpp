#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "uiopt/errors.hpp"
#include "uiopt/text_util.hpp"
#include "uiopt/tree.hpp"

namespace uiopt {

namespace detail {

// uiautomator bounds syntax: "[x1,y1][x2,y2]"
inline Bounds parse_bounds_attr(const std::string& raw) {
    int x1, y1, x2, y2;
    char c1, c2, c3, c4, c5, c6;
    std::istringstream in(raw);
    if (!(in >> c1 >> x1 >> c2 >> y1 >> c3 >> c4 >> x2 >> c5 >> y2 >> c6) || c1 != '['
        || c2 != ',' || c3 != ']' || c4 != '[' || c5 != ',' || c6 != ']' || in.peek() != EOF) {
        throw Error(Errc::malformed_bounds, "bounds '" + raw + "' does not match [x1,y1][x2,y2]");
    }
    return Bounds(x1, y1, x2, y2);
}

inline bool attr_is_true(const std::string& v) { return v == "true"; }

// Accessibility-dump attributes that map onto node fields rather than the
// attribute map. visible-to-user maps to the visible flag; everything else
// keeps its name with '-' replaced by '_'.
inline std::optional<Flag> android_flag_attr(std::string_view key) {
    if (key == "clickable") return Flag::clickable;
    if (key == "long-clickable") return Flag::long_clickable;
    if (key == "focusable") return Flag::focusable;
    if (key == "enabled") return Flag::enabled;
    if (key == "visible-to-user") return Flag::visible;
    if (key == "scrollable") return Flag::scrollable;
    if (key == "checkable") return Flag::checkable;
    return std::nullopt;
}

inline void convert_android_node(const boost::property_tree::ptree& elem,
                                 const std::string& name, UINode& node) {
    node.tag = name;
    if (auto attrs = elem.get_child_optional("<xmlattr>")) {
        for (const auto& [key, value] : *attrs) {
            const std::string& raw = value.data();
            if (key == "text") {
                node.text = normalize_text(raw);
            } else if (key == "bounds") {
                node.bounds = parse_bounds_attr(raw);
            } else if (auto flag = android_flag_attr(key)) {
                if (attr_is_true(raw)) node.flags.set(*flag);
            } else {
                node.attributes.emplace_back(key, raw);
            }
        }
    }
    for (const auto& [key, child] : elem) {
        if (key == "<xmlattr>" || key == "<xmlcomment>" || key == "<xmltext>") continue;
        node.children.emplace_back();
        convert_android_node(child, key, node.children.back());
    }
}

}  // namespace detail

// Parses a uiautomator-style accessibility dump. Element names become tags,
// recognized boolean attributes become flags, unknown attributes are kept
// verbatim. Node ids are assigned pre-order regardless of any id carried by
// the document.
inline UITree parse_android_xml(const std::string& document) {
    boost::property_tree::ptree pt;
    try {
        std::istringstream in(document);
        boost::property_tree::read_xml(in, pt);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw Error(Errc::malformed_document, e.message(), int(e.line()), 1);
    }

    const boost::property_tree::ptree* root_elem = nullptr;
    std::string root_name;
    for (const auto& [key, child] : pt) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        root_elem = &child;
        root_name = key;
        break;
    }
    if (!root_elem) {
        throw Error(Errc::empty_tree, "document contains no element nodes");
    }

    UITree tree;
    tree.source = TreeSource::android_xml;
    detail::convert_android_node(*root_elem, root_name, tree.root);
    finalize_tree(tree);
    return tree;
}

}  // namespace uiopt
