#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "pamap/errors.hpp"
#include "pamap/rational.hpp"

namespace pamap {

// key: value report document; rationals printed as p/q so every recorded
// number re-parses to an equal value
class RunReport {
   public:
    void kv(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void kv(const std::string& key, const char* value) { entries_.emplace_back(key, value); }
    void kv(const std::string& key, const Rational& q) { entries_.emplace_back(key, rat_str(q)); }
    void kv(const std::string& key, bool v) { entries_.emplace_back(key, v ? "true" : "false"); }
    void kv(const std::string& key, long v) { entries_.emplace_back(key, std::to_string(v)); }
    void kv(const std::string& key, int v) { entries_.emplace_back(key, std::to_string(v)); }
    void kv(const std::string& key, std::uint64_t v) {
        entries_.emplace_back(key, std::to_string(v));
    }
    void kv(const std::string& key, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.16e", v);
        entries_.emplace_back(key, buf);
    }

    std::string text() const {
        std::string out;
        for (const auto& [k, v] : entries_) out += k + ": " + v + "\n";
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error("cannot open report path " + path);
        os << text();
    }

   private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open output path " + path);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open input path " + path);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace pamap
