#pragma once

#include <sstream>
#include <string>

#include "uiopt/errors.hpp"
#include "uiopt/synthesis.hpp"

namespace uiopt {

// Config files are key=value lines matching SynthesisConfig fields; `#`
// starts a comment.
inline SynthesisConfig parse_synthesis_config(const std::string& text) {
    SynthesisConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        size_t end = line.find_last_not_of(" \t");
        line = line.substr(begin, end - begin + 1);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::schema_violation, "expected key=value", line_no, 1);
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        try {
            if (key == "threshold") {
                config.threshold = std::stod(value);
            } else if (key == "max_iter") {
                config.max_iter = std::stoi(value);
            } else if (key == "candidates_per_iter") {
                config.candidates_per_iter = std::stoi(value);
            } else if (key == "library_cap") {
                config.library_cap = std::stoi(value);
            } else if (key == "convergence_patience") {
                config.convergence_patience = std::stoi(value);
            } else if (key == "seed") {
                config.seed = std::stoull(value);
            } else if (key == "generator") {
                if (value == "enumerative") {
                    config.generator = SynthesisConfig::Generator::enumerative;
                } else if (value.rfind("external", 0) == 0) {
                    config.generator = SynthesisConfig::Generator::external;
                    size_t colon = value.find(':');
                    if (colon != std::string::npos) {
                        config.external_endpoint = value.substr(colon + 1);
                    }
                } else {
                    throw Error(Errc::schema_violation, "unknown generator '" + value + "'",
                                line_no, 1);
                }
            } else {
                throw Error(Errc::schema_violation, "unknown config key '" + key + "'", line_no,
                            1);
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error(Errc::schema_violation, "bad value for '" + key + "'", line_no, 1);
        }
        if (config.max_iter < 0 || config.candidates_per_iter < 1 || config.library_cap < 1
            || config.convergence_patience < 1) {
            throw Error(Errc::schema_violation, "config bound out of range at '" + key + "'",
                        line_no, 1);
        }
    }
    return config;
}

}  // namespace uiopt
