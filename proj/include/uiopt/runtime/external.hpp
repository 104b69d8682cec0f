#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <httplib.h>

#include "uiopt/errors.hpp"
#include "uiopt/synthesis.hpp"
#include "uiopt/token.hpp"

namespace uiopt {

namespace detail {

// Runs `command < input` and captures stdout. Input goes through a temp file
// because popen pipes are unidirectional.
inline std::string run_command_with_input(const std::string& command, const std::string& input,
                                          Errc failure_code) {
    std::filesystem::path tmp =
        std::filesystem::temp_directory_path()
        / ("uiopt_io_" + std::to_string(::getpid()) + "_"
           + std::to_string(reinterpret_cast<uintptr_t>(&input)));
    {
        std::ofstream out(tmp, std::ios::binary);
        out << input;
    }
    std::string full = command + " < " + tmp.string();
    FILE* pipe = ::popen(full.c_str(), "r");
    if (!pipe) {
        std::filesystem::remove(tmp);
        throw Error(failure_code, "cannot run '" + command + "'");
    }
    std::string output;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    int rc = ::pclose(pipe);
    std::filesystem::remove(tmp);
    if (rc != 0) {
        throw Error(failure_code,
                    "'" + command + "' exited with status " + std::to_string(rc));
    }
    return output;
}

}  // namespace detail

// `--counter external:<cmd>`: the command reads the text on stdin and prints
// a single non-negative integer.
inline TokenCounter external_counter_from_command(const std::string& command) {
    TokenCounter counter;
    counter.scheme = TokenCounter::Scheme::external;
    counter.external = [command](std::string_view text) -> long {
        std::string output = detail::run_command_with_input(
            command, std::string(text), Errc::external_counter_failure);
        try {
            return std::stol(output);
        } catch (const std::exception&) {
            throw Error(Errc::external_counter_failure,
                        "'" + command + "' printed '" + output + "', expected an integer");
        }
    };
    return counter;
}

// `--generator external:<endpoint>`: http(s) URLs get one POST per
// iteration; anything else runs as a shell command with the request on
// stdin.
inline GeneratorFn generator_from_endpoint(const std::string& endpoint) {
    if (endpoint.rfind("http://", 0) == 0 || endpoint.rfind("https://", 0) == 0) {
        return [endpoint](const std::string& request) -> std::string {
            size_t scheme_end = endpoint.find("://") + 3;
            size_t path_start = endpoint.find('/', scheme_end);
            std::string base = endpoint.substr(0, path_start);
            std::string path =
                path_start == std::string::npos ? "/" : endpoint.substr(path_start);
            httplib::Client client(base);
            auto res = client.Post(path, request, "text/plain");
            if (!res) {
                throw Error(Errc::external_generator_unavailable,
                            endpoint + ": " + httplib::to_string(res.error()));
            }
            if (res->status != 200) {
                throw Error(Errc::external_generator_unavailable,
                            endpoint + " returned status " + std::to_string(res->status));
            }
            return res->body;
        };
    }
    return [endpoint](const std::string& request) -> std::string {
        return detail::run_command_with_input(endpoint, request,
                                              Errc::external_generator_unavailable);
    };
}

}  // namespace uiopt
