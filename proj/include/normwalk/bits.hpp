#pragma once

// Sequential bit streams. All randomness in normwalk is read from one of
// these; bytes are consumed most-significant bit first.

#include "normwalk/arith.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace normwalk {

class BitSourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BitSource {
 public:
  enum class Origin { file, os_entropy, http_fetcher, memory };

  BitSource() = default;
  BitSource(std::vector<std::uint8_t> bytes, Origin origin, std::string provenance)
      : bytes_(std::move(bytes)), origin_(origin), provenance_(std::move(provenance)) {}

  static BitSource from_file(const std::string& path,
                             Origin origin = Origin::file) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open bit file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return BitSource(std::move(bytes), origin, path);
  }

  /// Draws n bytes from std::random_device and writes them to dump_path so the
  /// run can be replayed.
  static BitSource from_os_entropy(std::size_t n, const std::string& dump_path) {
    std::random_device rd;
    std::vector<std::uint8_t> bytes(n);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rd() & 0xFFU);
    std::ofstream out(dump_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write entropy dump: " + dump_path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return BitSource(std::move(bytes), Origin::os_entropy, dump_path);
  }

  /// Bits given as a string of '0' and '1' (other characters ignored).
  static BitSource from_bit_string(std::string_view s) {
    std::vector<std::uint8_t> bytes;
    std::size_t n = 0;
    for (char ch : s) {
      if (ch != '0' && ch != '1') continue;
      if (n % 8 == 0) bytes.push_back(0);
      if (ch == '1') bytes.back() |= static_cast<std::uint8_t>(0x80U >> (n % 8));
      ++n;
    }
    BitSource src(std::move(bytes), Origin::memory, "bit-string");
    src.limit_ = n;
    return src;
  }

  Origin origin() const { return origin_; }
  const std::string& provenance() const { return provenance_; }
  std::uint64_t cursor() const { return cursor_; }
  std::uint64_t size() const { return limit_ ? *limit_ : bytes_.size() * 8; }
  std::uint64_t remaining() const { return size() - cursor_; }
  bool exhausted() const { return exhausted_; }

  /// Reads n bits as a big-endian unsigned integer. Consumes nothing and sets
  /// the exhausted flag if fewer than n bits remain.
  Integer read_uint(std::uint64_t n) {
    require(n);
    Integer v = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      v <<= 1;
      if (bit_at(cursor_ + i)) v += 1;
    }
    cursor_ += n;
    return v;
  }

  bool read_bit() { return read_uint(1) == 1; }

  /// Throws BitSourceExhausted unless n bits remain.
  void require(std::uint64_t n) {
    if (remaining() < n) {
      exhausted_ = true;
      throw BitSourceExhausted("bit source exhausted at offset " + std::to_string(cursor_) +
                               " (" + std::to_string(n) + " bits requested, " +
                               std::to_string(remaining()) + " left)");
    }
  }

  /// Uniform value in [0, m) by rejection sampling on ceil(log2 m) bits.
  Integer uniform_below(const Integer& m) {
    if (m < 1) throw PreconditionError("uniform_below needs a positive bound");
    if (m == 1) return 0;
    std::uint64_t k = 0;
    for (Integer t = m - 1; t > 0; t >>= 1) ++k;
    for (;;) {
      Integer v = read_uint(k);
      if (v < m) return v;
    }
  }

 private:
  bool bit_at(std::uint64_t i) const {
    return (bytes_[i / 8] >> (7 - i % 8)) & 1U;
  }

  std::vector<std::uint8_t> bytes_;
  Origin origin_ = Origin::memory;
  std::string provenance_;
  std::uint64_t cursor_ = 0;
  std::optional<std::uint64_t> limit_;
  bool exhausted_ = false;
};

inline const char* to_string(BitSource::Origin o) {
  switch (o) {
    case BitSource::Origin::file: return "file";
    case BitSource::Origin::os_entropy: return "os_entropy";
    case BitSource::Origin::http_fetcher: return "http_fetcher";
    case BitSource::Origin::memory: return "memory";
  }
  return "memory";
}

}  // namespace normwalk
