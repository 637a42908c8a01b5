#include "mechsq/runner/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace mechsq::runner {

std::string sha256_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + file.string());

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

bool Manifest::all_ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.ok; });
}

void Manifest::write(const std::filesystem::path& file) const {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << "# mechsq manifest\n";
    out << "scenario: " << scenario << '\n';
    out << "status: " << (all_ok() ? "ok" : "partial") << '\n';
    for (const auto& e : entries) {
        out << '\n' << "[" << e.curve << "]\n";
        out << "status: " << (e.ok ? "ok" : "failed") << '\n';
        if (!e.file.empty()) {
            // Relative to the manifest so an output tree can be moved as a whole.
            auto rel = e.file.lexically_relative(file.parent_path());
            if (rel.empty() || *rel.begin() == "..") rel = e.file;
            out << "file: " << rel.generic_string() << '\n';
        }
        if (!e.sha256.empty()) out << "sha256: " << e.sha256 << '\n';
        if (!e.ok) out << "error: " << e.error << '\n';
        for (const auto& [k, v] : e.inputs) out << "input." << k << ": " << v << '\n';
    }
}

}  // namespace mechsq::runner
