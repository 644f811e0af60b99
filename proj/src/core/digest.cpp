#include "gazeforge/core/digest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gazeforge::core {

void Fnv1a64::update(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        hash_ ^= bytes[i];
        hash_ *= 0x100000001B3ULL;
    }
}

std::string Fnv1a64::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash_));
    return std::string(buf);
}

std::string digest_string(const std::string& s) {
    Fnv1a64 h;
    h.update(s);
    return h.hex();
}

std::string digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("digest_file: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return digest_string(buf.str());
}

std::string digest_directory(const std::filesystem::path& dir,
                             const std::vector<std::string>& exclude_names) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (std::find(exclude_names.begin(), exclude_names.end(), name) != exclude_names.end())
            continue;
        files.push_back(std::filesystem::relative(entry.path(), dir));
    }
    std::sort(files.begin(), files.end());
    Fnv1a64 h;
    for (const auto& rel : files) {
        h.update(rel.generic_string());
        h.update("\n", 1);
        std::ifstream in(dir / rel, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        h.update(buf.str());
    }
    return h.hex();
}

}  // namespace gazeforge::core
