#include "decohere/harness/config.hpp"

#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace decohere::harness {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

bool parse_number(const std::string& text, double& out)
{
    if (text.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(text.c_str(), &end);
    return errno == 0 && end == text.c_str() + text.size() && std::isfinite(out);
}

} // namespace

Config Config::parse(std::string_view text, std::string source)
{
    Config cfg;
    cfg.source_ = std::move(source);
    std::string current;
    std::istringstream is{std::string(text)};
    std::string raw;
    int line_no = 0;
    auto error = [&](const std::string& msg) {
        throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') error("unterminated section header");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (current.empty()) error("empty section name");
            if (cfg.section_lines_.count(current)) error("duplicate section [" + current + "]");
            cfg.section_lines_[current] = line_no;
            cfg.sections_[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) error("expected `key = value`");
        if (current.empty()) error("key outside of any [section]");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) error("empty key");
        auto& sec = cfg.sections_[current];
        if (sec.count(key)) error("duplicate key `" + key + "` in [" + current + "]");
        sec[key] = Entry{value, line_no};
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

bool Config::has(const std::string& section, const std::string& key) const
{
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const
{
    const auto s = sections_.find(section);
    if (s == sections_.end())
        throw ConfigError(source_ + ": missing section [" + section + "] (needed for `" + key + "`)");
    const auto k = s->second.find(key);
    if (k == s->second.end()) {
        const auto l = section_lines_.find(section);
        throw ConfigError(source_ + ":" + std::to_string(l == section_lines_.end() ? 0 : l->second) +
                          ": missing key `" + key + "` in [" + section + "]");
    }
    return k->second;
}

std::string Config::where(const std::string& section, const std::string& key) const
{
    const auto s = sections_.find(section);
    if (s != sections_.end()) {
        const auto k = s->second.find(key);
        if (k != s->second.end() && k->second.line > 0) return source_ + ":" + std::to_string(k->second.line);
    }
    return source_ + " [" + section + "] " + key;
}

void Config::fail(const std::string& section, const std::string& key, const std::string& msg) const
{
    throw ConfigError(where(section, key) + ": " + msg);
}

std::string Config::get_string(const std::string& section, const std::string& key) const
{
    return entry(section, key).value;
}

std::string Config::get_string(const std::string& section, const std::string& key, std::string fallback) const
{
    return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const
{
    const auto& e = entry(section, key);
    double v = 0.0;
    if (!parse_number(e.value, v)) fail(section, key, "`" + key + "` expects a finite number, got `" + e.value + "`");
    return v;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const
{
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const
{
    const auto& e = entry(section, key);
    long v = 0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        fail(section, key, "`" + key + "` expects an integer, got `" + e.value + "`");
    return v;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const
{
    return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const
{
    if (!has(section, key)) return fallback;
    const auto v = get_string(section, key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(section, key, "`" + key + "` expects true/false, got `" + v + "`");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const
{
    const auto& e = entry(section, key);
    std::vector<double> out;
    for (const auto& item : split(e.value, ',')) {
        double v = 0.0;
        if (!parse_number(item, v)) fail(section, key, "`" + key + "` expects a comma-separated list of numbers");
        out.push_back(v);
    }
    if (out.empty()) fail(section, key, "`" + key + "` is empty");
    return out;
}

void Config::set(const std::string& section, const std::string& key, std::string value)
{
    sections_[section][key] = Entry{std::move(value), 0};
}

void Config::erase_section(const std::string& section)
{
    sections_.erase(section);
    section_lines_.erase(section);
}

void Config::check_schema(const Schema& schema) const
{
    for (const auto& [name, keys] : sections_) {
        const auto s = schema.find(name);
        if (s == schema.end()) {
            const auto l = section_lines_.find(name);
            throw ConfigError(source_ + ":" + std::to_string(l == section_lines_.end() ? 0 : l->second) +
                              ": unknown section [" + name + "]");
        }
        for (const auto& [key, e] : keys) {
            if (!s->second.count(key)) fail(name, key, "unknown key `" + key + "` in [" + name + "]");
        }
    }
}

std::string Config::canonical() const
{
    std::ostringstream os;
    for (const auto& [name, keys] : sections_) {
        os << '[' << name << "]\n";
        for (const auto& [key, e] : keys) os << key << " = " << e.value << '\n';
    }
    return os.str();
}

std::string fnv1a_hex(std::string_view text)
{
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace decohere::harness
