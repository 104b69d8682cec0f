#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uiopt/canonical.hpp"
#include "uiopt/reward.hpp"

namespace uiopt {

// Example-set file: a canonical tree document, a line reading `targets`,
// then one target per line:
//
//   group=<int> interactive=<bool> text="..."

inline TrainingExample parse_example(const std::string& document, std::string example_id) {
    TrainingExample ex;
    ex.example_id = std::move(example_id);

    std::istringstream in(document);
    std::string stop_line;
    int stop_line_no = 0;
    ex.orig = parse_canonical_stream(in, &stop_line, &stop_line_no);

    if (stop_line != "targets") {
        throw Error(Errc::schema_violation, "targets: section missing in example file");
    }
    int line_no = stop_line_no;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        detail::LineCursor cur{line, 0, line_no};
        TargetView target;
        bool have_group = false, have_text = false;
        while (!cur.eof()) {
            std::string field = cur.word();
            if (field == "group") {
                cur.expect('=', "'=' after group");
                target.distinct_group = cur.integer();
                have_group = true;
            } else if (field == "interactive") {
                cur.expect('=', "'=' after interactive");
                std::string v = cur.word();
                if (v != "true" && v != "false") {
                    throw Error(Errc::schema_violation, "interactive: expected true or false",
                                line_no, 1);
                }
                target.interactive = v == "true";
            } else if (field == "text") {
                cur.expect('=', "'=' after text");
                target.text = normalize_text(cur.quoted());
                have_text = true;
            } else {
                throw Error(Errc::schema_violation, "unknown target field '" + field + "'",
                            line_no, 1);
            }
            cur.skip_spaces();
        }
        if (!have_group || !have_text || target.text.empty()) {
            throw Error(Errc::schema_violation,
                        "target line needs group=<int> and a non-empty text=\"...\"", line_no, 1);
        }
        ex.target.push_back(std::move(target));
    }
    return ex;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::malformed_document, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline TrainingExample load_example(const std::filesystem::path& path) {
    return parse_example(read_file(path), path.stem().string());
}

// Loads every .uiex file in a directory, ordered by filename.
inline std::vector<TrainingExample> load_example_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".uiex") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<TrainingExample> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(load_example(f));
    return out;
}

inline std::string serialize_example(const TrainingExample& ex) {
    std::string out = serialize_canonical(ex.orig);
    out += "targets\n";
    for (const TargetView& t : ex.target) {
        out += "group=" + std::to_string(t.distinct_group);
        out += t.interactive ? " interactive=true" : " interactive=false";
        out += " text=\"" + escape_quoted(t.text) + "\"\n";
    }
    return out;
}

}  // namespace uiopt
