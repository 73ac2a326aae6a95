#pragma once

#include <string>
#include <string_view>

namespace argrank {

// Lowercase 64-hex-char SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

// Digest of a file's contents; throws IoError if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace argrank
