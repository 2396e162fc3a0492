#ifndef LPS_DIGEST_HPP_
#define LPS_DIGEST_HPP_

#include "lps/types.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>

namespace lps {

// FNV-1a over explicit little-endian bytes, so digests are stable across
// hosts regardless of native byte order.
class Fnv1a64 {
 public:
  void update_byte(std::uint8_t b) {
    hash_ ^= b;
    hash_ *= 0x100000001b3ull;
  }

  void update(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    for (std::size_t i = 0; i < n; ++i) update_byte(p[i]);
  }

  void update_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) update_byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void update_f64(double d) { update_u64(std::bit_cast<std::uint64_t>(d)); }

  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

// Row-major traversal (sample by sample) independent of Eigen's storage order.
inline std::uint64_t digest_matrix(const Matrix& m) {
  Fnv1a64 f;
  f.update_u64(static_cast<std::uint64_t>(m.rows()));
  f.update_u64(static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) f.update_f64(m(i, j));
  return f.value();
}

std::string to_hex(std::uint64_t v);

}  // namespace lps

#endif  // LPS_DIGEST_HPP_
