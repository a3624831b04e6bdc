#pragma once

#include <string>
#include <string_view>

namespace d2dsim {

// SHA-256 of a byte string, lowercase hex digest.
std::string sha256_hex(std::string_view data);

}  // namespace d2dsim
