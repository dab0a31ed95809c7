#include "ppfs/digest.hpp"

#include <sodium.h>

#include <stdexcept>

namespace ppfs {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium init failed");
}

}  // namespace

Tag digest16(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Tag out;
  crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr,
                     0);
  return out;
}

Tag keyed_tag(const Tag& key, std::span<const std::uint8_t> data) {
  ensure_sodium();
  Tag out;
  crypto_generichash(out.data(), out.size(), data.data(), data.size(),
                     key.data(), key.size());
  return out;
}

std::string to_hex(std::span<const std::uint8_t> data) {
  std::string out(data.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.pop_back();  // drop the NUL
  return out;
}

std::string to_base64(std::span<const std::uint8_t> data) {
  std::string out(sodium_base64_encoded_len(data.size(),
                                            sodium_base64_VARIANT_ORIGINAL),
                  '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(out.find('\0'));
  return out;
}

}  // namespace ppfs
