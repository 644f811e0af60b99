#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gazeforge::core {

// FNV-1a, 64-bit. Reproducibility fingerprints, not cryptographic.
class Fnv1a64 {
public:
    void update(const void* data, std::size_t len);
    void update(const std::string& s) { update(s.data(), s.size()); }
    std::uint64_t value() const { return hash_; }
    std::string hex() const;

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

std::string digest_string(const std::string& s);
std::string digest_file(const std::filesystem::path& path);

// Digest of every regular file under `dir` (sorted relative paths + contents).
// Files whose basename matches one of `exclude_names` are skipped.
std::string digest_directory(const std::filesystem::path& dir,
                             const std::vector<std::string>& exclude_names = {});

}  // namespace gazeforge::core
