#pragma once

#include <string>
#include <string_view>

namespace halprobe::util {

// SHA-256 of the input, as a 64-character lowercase hex string.
std::string sha256_hex(std::string_view data);

}  // namespace halprobe::util
