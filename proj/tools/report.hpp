#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "ognidc/cg.hpp"
#include "ognidc/errors.hpp"

namespace ognidc::tool {

using nlohmann::json;

// FNV-1a over the file bytes; stable input fingerprint for reports.
inline std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for hashing: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a:") + hex;
}

inline json stats_to_json(const SolveStats& stats) {
    return json{{"iterations", stats.iterations},
                {"final_rel_residual", stats.final_rel_residual},
                {"stop_reason", to_string(stats.stop_reason)},
                {"warm_started", stats.warm_started}};
}

// One line-delimited report per command invocation, written to stdout and
// optionally mirrored to a file.
class RunReport {
public:
    explicit RunReport(std::string command) : start_(clock::now()) {
        body_["command"] = std::move(command);
        body_["inputs"] = json::object();
        body_["params"] = json::object();
    }

    void input(const std::string& name, const std::filesystem::path& path) {
        body_["inputs"][name] = file_digest(path);
    }
    template <typename T>
    void param(const std::string& name, const T& value) {
        body_["params"][name] = value;
    }
    void field(const std::string& name, json value) { body_[name] = std::move(value); }

    void emit(const std::filesystem::path& mirror = {}) {
        using std::chrono::duration_cast;
        using std::chrono::microseconds;
        body_["duration_ms"] =
            duration_cast<microseconds>(clock::now() - start_).count() / 1000.0;
        const std::string line = body_.dump();
        std::cout << line << "\n";
        if (!mirror.empty()) {
            std::ofstream out(mirror);
            if (!out) throw IoError("cannot open for writing: " + mirror.string());
            out << line << "\n";
        }
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
    json body_;
};

}  // namespace ognidc::tool
