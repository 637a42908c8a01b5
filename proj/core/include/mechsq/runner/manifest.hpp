#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mechsq::runner {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& file);

struct ManifestEntry {
    std::string curve;
    std::filesystem::path file;  ///< empty for failed curves
    std::string sha256;
    bool ok = true;
    std::string error;
    std::vector<std::pair<std::string, std::string>> inputs;
};

/// Plain-text record of a scenario or sweep: every output file with its
/// checksum and the resolved inputs that produced it, plus failures.
struct Manifest {
    std::string scenario;
    std::vector<ManifestEntry> entries;

    [[nodiscard]] bool all_ok() const;
    void write(const std::filesystem::path& file) const;
};

}  // namespace mechsq::runner
