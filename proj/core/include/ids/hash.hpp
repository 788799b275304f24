#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ids {

// FNV-1a over arbitrary bytes; used to fingerprint input files in run
// manifests.
std::uint64_t fnv1a64(std::string_view bytes);

// Hex fingerprint of a file's full contents. Throws DataError if the file
// cannot be read.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace ids
