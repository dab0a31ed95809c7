#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace ppfs {

// 128-bit BLAKE2b output; doubles as fingerprint tag, block label, session
// key and transcript digest material.
using Tag = std::array<std::uint8_t, 16>;

Tag digest16(std::span<const std::uint8_t> data);
// Keyed variant: a PRF under `key`. Equal (key, data) gives equal tags;
// without the key the tag reveals nothing but equality structure.
Tag keyed_tag(const Tag& key, std::span<const std::uint8_t> data);

std::string to_hex(std::span<const std::uint8_t> data);  // lowercase
std::string to_base64(std::span<const std::uint8_t> data);

}  // namespace ppfs
