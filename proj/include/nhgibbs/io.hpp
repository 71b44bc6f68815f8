#pragma once

#include "config.hpp"
#include "errors.hpp"
#include "geometry.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace nhg {

// Shortest-round-trip-safe rendering of a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(t.c_str(), &end);
    require(!t.empty() && end == t.c_str() + t.size() && errno == 0 && std::isfinite(v), ErrorKind::parse_error,
            "cannot parse '" + t + "' as a number for " + what);
    return v;
}

inline long long parse_integer(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(t.c_str(), &end, 10);
    require(!t.empty() && end == t.c_str() + t.size() && errno == 0, ErrorKind::parse_error,
            "cannot parse '" + t + "' as an integer for " + what);
    return v;
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const std::string& part : split(s, ',')) out.push_back(parse_double(part, what));
    return out;
}

inline std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    return out;
}

// Flat `key = value` text with `#` comments. Keys keep their file order.
class KeyValues {
public:
    static KeyValues parse(const std::string& text, const std::string& source = "input") {
        KeyValues kv;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            require(eq != std::string::npos, ErrorKind::parse_error,
                    source + ":" + std::to_string(lineno) + ": expected 'key = value'");
            std::string key = trim(line.substr(0, eq));
            require(!key.empty(), ErrorKind::parse_error, source + ":" + std::to_string(lineno) + ": empty key");
            require(!kv.has(key), ErrorKind::parse_error, source + ": duplicate key '" + key + "'");
            kv.set(key, trim(line.substr(eq + 1)));
        }
        return kv;
    }

    static KeyValues load(const std::filesystem::path& path) {
        std::ifstream in(path);
        require(static_cast<bool>(in), ErrorKind::io_error, "cannot open " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path.string());
    }

    bool has(const std::string& key) const { return index_.count(key) != 0; }

    const std::string& get(const std::string& key) const {
        auto it = index_.find(key);
        require(it != index_.end(), ErrorKind::parse_error, "missing key '" + key + "'");
        return entries_[it->second].second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? get(key) : fallback;
    }

    double get_double(const std::string& key) const { return parse_double(get(key), key); }
    double get_double_or(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }
    long long get_integer(const std::string& key) const { return parse_integer(get(key), key); }
    long long get_integer_or(const std::string& key, long long fallback) const {
        return has(key) ? get_integer(key) : fallback;
    }
    std::vector<double> get_doubles(const std::string& key) const { return parse_double_list(get(key), key); }

    void set(const std::string& key, const std::string& value) {
        auto it = index_.find(key);
        if (it != index_.end()) {
            entries_[it->second].second = value;
            return;
        }
        index_[key] = entries_.size();
        entries_.push_back({key, value});
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_string() const {
        std::string out;
        for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
        return out;
    }

    void save(const std::filesystem::path& path) const { write_text(path, to_string()); }

    static void write_text(const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        require(static_cast<bool>(out), ErrorKind::io_error, "cannot write " + path.string());
        out << text;
        require(static_cast<bool>(out), ErrorKind::io_error, "write failed for " + path.string());
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, std::size_t> index_;
};

inline std::string pattern_csv(const PointConfiguration& cfg) {
    std::string out = "x,y\n";
    for (Point p : cfg.points()) out += format_double(p.x) + "," + format_double(p.y) + "\n";
    return out;
}

inline std::vector<Point> parse_pattern_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) && trim(line) == "x,y", ErrorKind::parse_error,
            source + ": expected header 'x,y'");
    std::vector<Point> pts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto parts = split(line, ',');
        require(parts.size() == 2, ErrorKind::parse_error, source + ":" + std::to_string(lineno) + ": expected x,y");
        pts.push_back({parse_double(parts[0], source), parse_double(parts[1], source)});
    }
    return pts;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io_error, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path meta_path_for(const std::filesystem::path& csv) {
    std::filesystem::path p = csv;
    p.replace_extension(".meta");
    return p;
}

// Writes pattern.csv and its pattern.meta sidecar.
inline void write_pattern(const PointConfiguration& cfg, const std::filesystem::path& csv) {
    KeyValues::write_text(csv, pattern_csv(cfg));
    KeyValues meta;
    meta.set("L", format_double(cfg.window().side()));
    meta.set("boundary", to_string(cfg.window().boundary()));
    meta.save(meta_path_for(csv));
}

// Reads a pattern; the window comes from the sidecar unless given explicitly.
inline PointConfiguration read_pattern(const std::filesystem::path& csv, std::optional<Window> window = std::nullopt) {
    std::vector<Point> pts = parse_pattern_csv(read_text(csv), csv.string());
    if (!window) {
        KeyValues meta = KeyValues::load(meta_path_for(csv));
        window = Window(meta.get_double("L"), parse_boundary(meta.get_or("boundary", "torus")));
    }
    return PointConfiguration::from_points(*window, pts);
}

}  // namespace nhg
