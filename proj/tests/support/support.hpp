// Shared helpers for the unit and acceptance tests.
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "soarplan/dynamics.hpp"
#include "soarplan/wind.hpp"

namespace soarplan::testing {

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("soarplan-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

/// Minimal XML well-formedness check: one prolog, balanced and properly
/// nested elements, quoted attributes, a single root. Enough for the SVG the
/// library emits; not a general parser.
inline bool well_formed_xml(const std::string& text, std::string* why = nullptr) {
    auto fail = [why](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    std::vector<std::string> stack;
    int roots = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '<') {
            if (stack.empty() && !std::isspace(static_cast<unsigned char>(text[i]))) {
                return fail("text outside root");
            }
            if (text[i] == '&') {
                const auto semi = text.find(';', i);
                if (semi == std::string::npos || semi - i > 6) return fail("bad entity");
            }
            ++i;
            continue;
        }
        if (text.compare(i, 5, "<?xml") == 0) {
            if (i != 0) return fail("prolog not at start");
            const auto end = text.find("?>", i);
            if (end == std::string::npos) return fail("unterminated prolog");
            i = end + 2;
            continue;
        }
        if (text.compare(i, 4, "<!--") == 0) {
            const auto end = text.find("-->", i);
            if (end == std::string::npos) return fail("unterminated comment");
            i = end + 3;
            continue;
        }
        // Find the tag end, skipping '>' inside quoted attribute values.
        std::size_t j = i + 1;
        char quote = 0;
        while (j < text.size() && (quote || text[j] != '>')) {
            if (quote && text[j] == quote) {
                quote = 0;
            } else if (!quote && (text[j] == '"' || text[j] == '\'')) {
                quote = text[j];
            } else if (quote && text[j] == '<') {
                return fail("'<' inside attribute");
            }
            ++j;
        }
        if (j >= text.size()) return fail("unterminated tag");
        std::string tag = text.substr(i + 1, j - i - 1);
        i = j + 1;
        if (tag.empty()) return fail("empty tag");
        if (tag[0] == '/') {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        const auto name_end = tag.find_first_of(" \t\n/");
        const std::string name = tag.substr(0, name_end);
        if (name.empty()) return fail("nameless element");
        if (stack.empty()) ++roots;
        if (!self_closing) stack.push_back(name);
    }
    if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
    if (roots != 1) return fail("expected one root element");
    return true;
}

/// Seeded generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool coin() { return integer(0, 1) == 1; }

    State state(double extent = 1000.0) {
        return {uniform(-extent, extent), uniform(-extent, extent), uniform(-3.14159, 3.14159),
                uniform(50.0, 500.0)};
    }

    ControlInput control() {
        return {uniform(10.0, 20.0), uniform(-1.9, 1.9), uniform(-0.78, 0.78)};
    }

    Thermal thermal(double extent = 1000.0) {
        const double base = uniform(-100.0, 200.0);
        return {uniform(-extent, extent), uniform(-extent, extent), uniform(20.0, 400.0),
                uniform(0.5, 6.0), base, base + uniform(50.0, 1000.0)};
    }

    WindField field(int max_thermals = 3) {
        WindField f;
        f.ambient = {uniform(-5.0, 5.0), uniform(-5.0, 5.0), uniform(-1.0, 1.0)};
        const int n = integer(0, max_thermals);
        for (int i = 0; i < n; ++i) f.thermals.push_back(thermal());
        return f;
    }

    ControlSequence sequence(int steps = 10, double duration = 10.0) {
        std::vector<ControlInput> u;
        for (int i = 0; i < steps; ++i) u.push_back(control());
        return ControlSequence(u, duration);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace soarplan::testing
