#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldx/errors.hpp"

namespace ldx {

/// Minimal TOML subset sufficient for run configurations: one level of
/// [section] tables, bare keys, string/number/boolean scalars, single-line
/// arrays of numbers or strings, and # comments. Keys are flattened to
/// "section.key". Anything outside the subset is rejected with a line number.
class toml_table {
public:
    using value = std::variant<std::string, double, bool, std::vector<double>, std::vector<std::string>>;

    static toml_table parse(std::string_view text) {
        toml_table t;
        std::string section;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string_view::npos) eol = text.size();
            std::string_view line = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++line_no;
            line = strip_comment(line);
            line = trim(line);
            if (line.empty()) {
                if (pos > text.size()) break;
                continue;
            }
            if (line.front() == '[') {
                if (line.back() != ']') throw config_error(err(line_no, "unterminated section header"));
                std::string_view name = trim(line.substr(1, line.size() - 2));
                if (name.empty() || !valid_key(name)) throw config_error(err(line_no, "bad section name"));
                section = std::string(name);
                continue;
            }
            std::size_t eq = line.find('=');
            if (eq == std::string_view::npos) throw config_error(err(line_no, "expected key = value"));
            std::string_view key = trim(line.substr(0, eq));
            std::string_view val = trim(line.substr(eq + 1));
            if (key.empty() || !valid_key(key)) throw config_error(err(line_no, "bad key"));
            std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
            if (t.values_.count(full)) throw config_error(err(line_no, "duplicate key '" + full + "'"));
            t.values_.emplace(std::move(full), parse_value(val, line_no));
            if (pos > text.size()) break;
        }
        return t;
    }

    bool contains(const std::string& key) const { return values_.count(key) != 0; }

    /// Typed getters mark the key consumed so leftovers can be rejected.
    std::string get_string(const std::string& key, const std::string& fallback) const {
        return get_or<std::string>(key, fallback, "string");
    }
    double get_number(const std::string& key, double fallback) const {
        return get_or<double>(key, fallback, "number");
    }
    bool get_bool(const std::string& key, bool fallback) const {
        return get_or<bool>(key, fallback, "boolean");
    }
    std::vector<double> get_numbers(const std::string& key) const {
        return get_or<std::vector<double>>(key, {}, "array of numbers");
    }

    std::string require_string(const std::string& key) const {
        if (!contains(key)) throw config_error("missing required key '" + key + "'");
        return get_string(key, "");
    }
    std::vector<double> require_numbers(const std::string& key) const {
        if (!contains(key)) throw config_error("missing required key '" + key + "'");
        return get_numbers(key);
    }

    /// All keys never touched by a getter; non-empty means a config typo.
    std::vector<std::string> unconsumed_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!consumed_.count(k)) out.push_back(k);
        return out;
    }

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (k.rfind(prefix, 0) == 0) out.push_back(k);
        return out;
    }

private:
    template <class T>
    T get_or(const std::string& key, const T& fallback, const char* type_name) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        if (const T* p = std::get_if<T>(&it->second)) return *p;
        if constexpr (std::is_same_v<T, double>) {
            // nothing else converts to number
        }
        throw config_error("key '" + key + "' is not a " + type_name);
    }

    static std::string err(std::size_t line, const std::string& what) {
        return "config line " + std::to_string(line) + ": " + what;
    }

    static std::string_view trim(std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    }

    static std::string_view strip_comment(std::string_view line) {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
            if (c == '#' && !in_string) return line.substr(0, i);
        }
        return line;
    }

    static bool valid_key(std::string_view key) {
        for (char c : key)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
        return true;
    }

    static std::string parse_string_literal(std::string_view raw, std::size_t line) {
        if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"')
            throw config_error(err(line, "expected quoted string"));
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            char c = raw[i];
            if (c == '\\') {
                if (i + 2 >= raw.size()) throw config_error(err(line, "dangling escape"));
                char n = raw[++i];
                switch (n) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    default: throw config_error(err(line, "unsupported escape"));
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    static value parse_value(std::string_view raw, std::size_t line) {
        if (raw.empty()) throw config_error(err(line, "empty value"));
        if (raw.front() == '"') return parse_string_literal(raw, line);
        if (raw == "true") return true;
        if (raw == "false") return false;
        if (raw.front() == '[') {
            if (raw.back() != ']') throw config_error(err(line, "unterminated array"));
            std::string_view body = trim(raw.substr(1, raw.size() - 2));
            if (body.empty()) return std::vector<double>{};
            std::vector<std::string_view> items;
            std::size_t start = 0;
            bool in_string = false;
            for (std::size_t i = 0; i <= body.size(); ++i) {
                if (i < body.size() && body[i] == '"') in_string = !in_string;
                if (i == body.size() || (body[i] == ',' && !in_string)) {
                    items.push_back(trim(body.substr(start, i - start)));
                    start = i + 1;
                }
            }
            if (!items.empty() && items.front().size() && items.front().front() == '"') {
                std::vector<std::string> out;
                for (auto item : items) out.push_back(parse_string_literal(item, line));
                return out;
            }
            std::vector<double> out;
            for (auto item : items) out.push_back(parse_number(item, line));
            return out;
        }
        return parse_number(raw, line);
    }

    static double parse_number(std::string_view raw, std::size_t line) {
        double v = 0.0;
        std::string_view body = raw;
        bool neg = false;
        if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
            neg = body.front() == '-';
            body.remove_prefix(1);
        }
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc() || ptr != body.data() + body.size())
            throw config_error(err(line, "bad number '" + std::string(raw) + "'"));
        return neg ? -v : v;
    }

    std::map<std::string, value> values_;
    mutable std::set<std::string> consumed_;
};

}  // namespace ldx
