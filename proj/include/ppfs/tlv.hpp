#pragma once

// Self-describing payload encoding. Every protocol message body is a flat
// token sequence; each token says what it is (unsigned integer, opaque
// bytes, text). Keeping payloads decodable without protocol context lets
// the transcript audit reason about tokens instead of raw byte windows:
// masked residues live in U64 tokens, fingerprint tags in BYTES tokens, and
// only STR tokens can ever carry plaintext.

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "ppfs/errors.hpp"

namespace ppfs {

enum class TokenType : std::uint8_t { u64 = 1, bytes = 2, str = 3 };

class TlvWriter {
 public:
  void put_u64(std::uint64_t v) {
    buf_.push_back(static_cast<std::uint8_t>(TokenType::u64));
    for (int i = 0; i < 8; ++i) buf_.push_back((v >> (8 * i)) & 0xFF);
  }
  void put_bytes(std::span<const std::uint8_t> b) {
    put_len(TokenType::bytes, b.size());
    buf_.insert(buf_.end(), b.begin(), b.end());
  }
  void put_str(std::string_view s) {
    put_len(TokenType::str, s.size());
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  void put_len(TokenType t, std::size_t n) {
    buf_.push_back(static_cast<std::uint8_t>(t));
    auto len = static_cast<std::uint32_t>(n);
    for (int i = 0; i < 4; ++i) buf_.push_back((len >> (8 * i)) & 0xFF);
  }
  std::vector<std::uint8_t> buf_;
};

struct Token {
  TokenType type;
  std::uint64_t number = 0;                 // u64 tokens
  std::span<const std::uint8_t> data = {};  // bytes / str tokens
};

// Decode a whole payload; malformed input throws. Used both by protocol
// engines and the audit (which treats undecodable payloads as violations).
inline std::vector<Token> tlv_scan(std::span<const std::uint8_t> p) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < p.size()) {
    auto t = static_cast<TokenType>(p[i++]);
    if (t == TokenType::u64) {
      if (i + 8 > p.size()) throw ProtocolError("truncated integer token");
      std::uint64_t v = 0;
      for (int k = 0; k < 8; ++k) v |= std::uint64_t{p[i + k]} << (8 * k);
      i += 8;
      out.push_back({t, v, {}});
    } else if (t == TokenType::bytes || t == TokenType::str) {
      if (i + 4 > p.size()) throw ProtocolError("truncated length");
      std::uint32_t len = 0;
      for (int k = 0; k < 4; ++k) len |= std::uint32_t{p[i + k]} << (8 * k);
      i += 4;
      if (i + len > p.size()) throw ProtocolError("token overruns payload");
      out.push_back({t, 0, p.subspan(i, len)});
      i += len;
    } else {
      throw ProtocolError("unknown token type " + std::to_string(p[i - 1]));
    }
  }
  return out;
}

// Sequential reader with type checking for protocol engines.
class TlvReader {
 public:
  explicit TlvReader(std::span<const std::uint8_t> p)
      : tokens_(tlv_scan(p)) {}

  std::uint64_t u64() { return expect(TokenType::u64).number; }
  std::span<const std::uint8_t> bytes() {
    return expect(TokenType::bytes).data;
  }
  std::string str() {
    auto d = expect(TokenType::str).data;
    return std::string(d.begin(), d.end());
  }
  bool done() const { return next_ == tokens_.size(); }
  std::size_t remaining() const { return tokens_.size() - next_; }

 private:
  const Token& expect(TokenType t) {
    if (next_ >= tokens_.size()) throw ProtocolError("payload too short");
    const Token& tok = tokens_[next_++];
    if (tok.type != t) throw ProtocolError("unexpected token type");
    return tok;
  }
  std::vector<Token> tokens_;
  std::size_t next_ = 0;
};

}  // namespace ppfs
