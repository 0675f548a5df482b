// config.hpp: Line-oriented `[section]` / `key = value` configuration files.
//
// Every value remembers the line it came from so that errors raised while
// interpreting it point back into the file.

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decohere::harness {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    struct Entry {
        std::string value;
        int line = 0; // 0 for values set programmatically
    };
    using Schema = std::map<std::string, std::set<std::string>>;

    static Config parse(std::string_view text, std::string source = "<config>");
    static Config load(const std::filesystem::path& path);

    const std::string& source() const noexcept { return source_; }

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key, std::string fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, std::string value);
    void erase_section(const std::string& section);

    // "file:line" for a key, or "file [section]" when it was not read from disk.
    std::string where(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const;

    // Rejects sections and keys not listed in the schema.
    void check_schema(const Schema& schema) const;

    // Sections and keys in sorted order, one `key = value` per line.
    std::string canonical() const;

private:
    const Entry& entry(const std::string& section, const std::string& key) const;

    std::string source_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::map<std::string, int> section_lines_;
};

// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

} // namespace decohere::harness
