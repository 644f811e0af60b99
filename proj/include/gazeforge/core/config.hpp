#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

namespace gazeforge::core {

// Flat dotted-key configuration with a fixed registry of known keys.
// Unknown keys are rejected at set time so typos fail loudly.
class Config {
public:
    static Config defaults();

    void set(const std::string& key, const std::string& value);
    // "key=value"
    void apply_override(const std::string& assignment);
    // JSON object of key -> scalar
    void load_file(const std::filesystem::path& path);

    bool known(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    std::string digest() const;
    nlohmann::ordered_json to_json() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace gazeforge::core
