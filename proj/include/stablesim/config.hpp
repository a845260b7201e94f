#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stablesim {

// key=value run configuration. '#' starts a comment, blank lines are fine,
// whitespace around keys and values is ignored. Every key must be consumed by
// the scenario that runs, so typos surface as errors instead of silent defaults.
class ConfigMap {
  public:
    static ConfigMap parse_text(const std::string& text) {
        ConfigMap cfg;
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            size_t eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": expected key=value");
            std::string key = trim(trimmed.substr(0, eq));
            std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": empty key");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    static ConfigMap parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_[key] = true;
        return it->second;
    }

    double get_double(const std::string& key, double fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_[key] = true;
        return parse_double(key, it->second);
    }

    long get_long(const std::string& key, long fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_[key] = true;
        size_t used = 0;
        long v;
        try {
            v = std::stol(it->second, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': not an integer: " + it->second);
        }
        if (used != it->second.size())
            throw std::invalid_argument("config key '" + key + "': not an integer: " + it->second);
        return v;
    }

    int get_int(const std::string& key, int fallback) {
        return static_cast<int>(get_long(key, fallback));
    }

    bool get_bool(const std::string& key, bool fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_[key] = true;
        const std::string& v = it->second;
        if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
        if (v == "off" || v == "false" || v == "0" || v == "no") return false;
        throw std::invalid_argument("config key '" + key + "': expected on/off: " + v);
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_[key] = true;
        std::vector<double> out;
        std::istringstream in(it->second);
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
        if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
        return out;
    }

    // Call once a scenario has pulled everything it understands.
    void reject_unknown() const {
        for (auto& [key, value] : values_)
            if (!consumed_.count(key))
                throw std::invalid_argument("unknown config key: " + key);
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

  private:
    static std::string trim(const std::string& s) {
        size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    static double parse_double(const std::string& key, const std::string& text) {
        size_t used = 0;
        double v;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': not a number: " + text);
        }
        if (used != text.size())
            throw std::invalid_argument("config key '" + key + "': not a number: " + text);
        return v;
    }

    std::map<std::string, std::string> values_;
    std::map<std::string, bool> consumed_;
};

}  // namespace stablesim
