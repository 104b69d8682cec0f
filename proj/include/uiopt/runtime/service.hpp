#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "uiopt/android_xml.hpp"
#include "uiopt/canonical.hpp"
#include "uiopt/dsl/parse.hpp"
#include "uiopt/errors.hpp"
#include "uiopt/examples_io.hpp"
#include "uiopt/interpreter.hpp"
#include "uiopt/render.hpp"
#include "uiopt/token.hpp"

namespace uiopt {

inline std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// JSON-over-HTTP interception service:
//   POST /transform  { v, tree, format?, render?, seed?, retain_containers? }
//   GET  /healthz
//   POST /reload     { path? }
// All bodies carry a `v` version field. The loaded library swaps atomically
// under a mutex on reload; request handling has no other shared state.
class TransformService {
public:
    explicit TransformService(std::filesystem::path library_path)
        : library_path_(std::move(library_path)) {
        load_library(library_path_);
        route();
    }

    void load_library(const std::filesystem::path& path) {
        std::string text;
        std::vector<TransformProgram> programs;
        try {
            text = read_file(path);
            programs = parse_program_sequence(text);
        } catch (const Error& e) {
            throw Error(Errc::library_load_failure, path.string() + ": " + e.what());
        }
        auto lib = std::make_shared<const std::vector<TransformProgram>>(std::move(programs));
        std::lock_guard<std::mutex> lock(mutex_);
        library_ = std::move(lib);
        library_id_ = fnv1a_hex(text);
        library_path_ = path;
    }

    // Binds to the given port (0 picks a free one) and serves until stop().
    int bind(const std::string& host, int port) {
        if (port == 0) {
            port = server_.bind_to_any_port(host);
            if (port < 0) throw Error(Errc::library_load_failure, "cannot bind " + host);
            return port;
        }
        if (!server_.bind_to_port(host, port)) {
            throw Error(Errc::library_load_failure,
                        "cannot bind " + host + ":" + std::to_string(port));
        }
        return port;
    }

    bool listen_after_bind() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    bool is_running() const { return server_.is_running(); }

    nlohmann::json handle_transform_body(const std::string& body, int& status) {
        nlohmann::json request;
        try {
            request = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            status = 400;
            return error_json("MalformedDocument", e.what());
        }
        std::string tree_text = request.value("tree", "");
        std::string format = request.value("format", "auto");
        std::string render_name = request.value("render", "hierarchical");
        ApplyOptions opts;
        opts.retain_containers = request.value("retain_containers", false);

        UITree tree;
        try {
            if (format == "android_xml" || (format == "auto" && tree_text.rfind("<", 0) == 0)) {
                tree = parse_android_xml(tree_text);
            } else if (format == "canonical" || format == "auto") {
                tree = parse_canonical(tree_text);
            } else {
                status = 400;
                return error_json("MalformedDocument", "unknown format '" + format + "'");
            }
        } catch (const Error& e) {
            status = 400;
            return error_json(errc_name(e.code()), e.what());
        }

        auto kind = render_kind_from_name(render_name);
        if (!kind) {
            status = 400;
            return error_json("MalformedDocument", "unknown render kind '" + render_name + "'");
        }
        std::optional<uint64_t> seed;
        if (request.contains("seed")) seed = request.at("seed").get<uint64_t>();

        std::shared_ptr<const std::vector<TransformProgram>> lib;
        std::string library_id;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            lib = library_;
            library_id = library_id_;
        }

        long tokens_before =
            render(apply(identity_program(), tree), RenderKind::hierarchical).token_count;

        ViewList views;
        auto begin = std::chrono::steady_clock::now();
        try {
            views = apply_library(*lib, tree, opts);
        } catch (const Error& e) {
            status = 400;
            return error_json(errc_name(e.code()), e.what());
        }
        auto end = std::chrono::steady_clock::now();
        long latency_us =
            std::chrono::duration_cast<std::chrono::microseconds>(end - begin).count();

        RenderedRepresentation rep;
        try {
            if (*kind == RenderKind::ops || *kind == RenderKind::leaf
                || *kind == RenderKind::flattened) {
                UITree lifted = lift(views);
                rep = *kind == RenderKind::ops ? baseline_ops(lifted)
                    : *kind == RenderKind::leaf ? baseline_leaf(lifted)
                                                : baseline_flattened(lifted);
            } else {
                rep = render(views, *kind, seed);
            }
        } catch (const Error& e) {
            status = 400;
            return error_json(errc_name(e.code()), e.what());
        }

        double reduction = tokens_before > 0
            ? double(tokens_before - rep.token_count) / double(tokens_before)
            : 0.0;
        status = 200;
        nlohmann::json response;
        response["v"] = 1;
        response["library_id"] = library_id;
        response["tokens_before"] = tokens_before;
        response["tokens_after"] = rep.token_count;
        response["reduction"] = reduction;
        response["representation"] = rep.joined();
        response["transform_latency_us"] = latency_us;
        return response;
    }

    std::string library_id() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return library_id_;
    }

private:
    static nlohmann::json error_json(const std::string& code, const std::string& detail) {
        return {{"v", 1}, {"error", code}, {"detail", detail}};
    }

    void route() {
        server_.Post("/transform", [this](const httplib::Request& req, httplib::Response& res) {
            int status = 500;
            nlohmann::json body = handle_transform_body(req.body, status);
            res.status = status;
            res.set_content(body.dump(), "application/json");
        });
        server_.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
            size_t programs;
            std::string id;
            {
                std::lock_guard<std::mutex> lock(mutex_);
                programs = library_->size();
                id = library_id_;
            }
            nlohmann::json body{
                {"v", 1}, {"status", "ok"}, {"library_id", id}, {"programs", programs}};
            res.set_content(body.dump(), "application/json");
        });
        server_.Post("/reload", [this](const httplib::Request& req, httplib::Response& res) {
            std::filesystem::path path = library_path_;
            if (!req.body.empty()) {
                try {
                    nlohmann::json body = nlohmann::json::parse(req.body);
                    if (body.contains("path")) {
                        path = body.at("path").get<std::string>();
                    }
                } catch (const nlohmann::json::exception& e) {
                    res.status = 400;
                    res.set_content(error_json("MalformedDocument", e.what()).dump(),
                                    "application/json");
                    return;
                }
            }
            try {
                load_library(path);
            } catch (const Error& e) {
                res.status = 500;
                res.set_content(error_json("LibraryLoadFailure", e.what()).dump(),
                                "application/json");
                return;
            }
            size_t programs;
            std::string id;
            {
                std::lock_guard<std::mutex> lock(mutex_);
                programs = library_->size();
                id = library_id_;
            }
            nlohmann::json body{
                {"v", 1}, {"status", "reloaded"}, {"library_id", id}, {"programs", programs}};
            res.set_content(body.dump(), "application/json");
        });
    }

    httplib::Server server_;
    mutable std::mutex mutex_;
    std::shared_ptr<const std::vector<TransformProgram>> library_;
    std::string library_id_;
    std::filesystem::path library_path_;
};

}  // namespace uiopt
