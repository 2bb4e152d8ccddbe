#include "halprobe/util/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "halprobe/errors.hpp"

namespace halprobe::util {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int digest_len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &digest_len, EVP_sha256(), nullptr) !=
      1) {
    throw Error("sha256: digest computation failed");
  }
  std::string hex(digest_len * 2, '\0');
  static const char* kHexDigits = "0123456789abcdef";
  for (unsigned int i = 0; i < digest_len; ++i) {
    hex[i * 2] = kHexDigits[digest[i] >> 4];
    hex[i * 2 + 1] = kHexDigits[digest[i] & 0xf];
  }
  return hex;
}

}  // namespace halprobe::util
