#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace hcdc {

// SHAKE256 over input, squeezed to out.size() bytes.
void shake256(std::span<const std::uint8_t> input, std::span<std::uint8_t> out);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> input);

// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::span<const std::uint8_t> data);
  std::array<std::uint8_t, 32> finish();

 private:
  void* ctx_;
};

inline void put_le64(std::uint8_t* dst, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) dst[b] = static_cast<std::uint8_t>(v >> (8 * b));
}

}  // namespace hcdc
