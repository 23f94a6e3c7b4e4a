#pragma once

#include <string>
#include <string_view>

namespace cotypelab {

/// SHA-256 digest as a lowercase hex string.
std::string sha256_hex(std::string_view data);

}  // namespace cotypelab
