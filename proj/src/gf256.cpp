#include "hcdc/gf256.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#define HCDC_GF_AVX2 1
#endif

namespace hcdc::gf256 {

namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};
  // Full product table; row c is "multiply by c".
  std::array<std::array<std::uint8_t, 256>, 256> product{};
  // c * (low nibble) and c * (high nibble << 4), for shuffle-based kernels.
  std::array<std::array<std::uint8_t, 16>, 256> lo{};
  std::array<std::array<std::uint8_t, 16>, 256> hi{};

  constexpr Tables() {
    // 0x03 generates the multiplicative group under 0x11B.
    unsigned v = 1;
    for (int i = 0; i < 255; ++i) {
      exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
      log[v] = i;
      unsigned t = v << 1;
      if (t & 0x100) t ^= kPolynomial;
      v = t ^ v;
    }
    for (int i = 255; i < 512; ++i) exp[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i - 255)];
    for (unsigned a = 1; a < 256; ++a) {
      for (unsigned b = 1; b < 256; ++b) {
        product[a][b] = exp[static_cast<std::size_t>(log[a] + log[b])];
      }
    }
    for (unsigned c = 0; c < 256; ++c) {
      for (unsigned n = 0; n < 16; ++n) {
        lo[c][n] = product[c][n];
        hi[c][n] = product[c][n << 4];
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

#ifdef HCDC_GF_AVX2
__attribute__((target("avx2"))) std::size_t mul_add_avx2(std::uint8_t* dst, const std::uint8_t* src, std::size_t n,
                                                          std::uint8_t c) {
  const auto& t = tables();
  const __m256i lo = _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(t.lo[c].data())));
  const __m256i hi = _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(t.hi[c].data())));
  const __m256i mask = _mm256_set1_epi8(0x0F);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    const __m256i pl = _mm256_shuffle_epi8(lo, _mm256_and_si256(s, mask));
    const __m256i ph = _mm256_shuffle_epi8(hi, _mm256_and_si256(_mm256_srli_epi64(s, 4), mask));
    __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    d = _mm256_xor_si256(d, _mm256_xor_si256(pl, ph));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
  }
  if (i + 16 <= n) {
    const __m128i m = _mm_set1_epi8(0x0F);
    const __m128i s = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i));
    const __m128i pl = _mm_shuffle_epi8(_mm256_castsi256_si128(lo), _mm_and_si128(s, m));
    const __m128i ph = _mm_shuffle_epi8(_mm256_castsi256_si128(hi), _mm_and_si128(_mm_srli_epi64(s, 4), m));
    __m128i d = _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i));
    d = _mm_xor_si128(d, _mm_xor_si128(pl, ph));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), d);
    i += 16;
  }
  return i;
}

const bool kHaveAvx2 = __builtin_cpu_supports("avx2");
#endif

}  // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b) { return tables().product[a][b]; }

std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::domain_error("gf256: inverse of zero");
  const auto& t = tables();
  return t.exp[static_cast<std::size_t>(255 - t.log[a])];
}

void mul_add(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c) {
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  std::size_t i = 0;
#ifdef HCDC_GF_AVX2
  if (kHaveAvx2) i = mul_add_avx2(dst.data(), src.data(), dst.size(), c);
#endif
  const auto& row = tables().product[c];
  for (; i < dst.size(); ++i) dst[i] ^= row[src[i]];
}

void scale(std::span<std::uint8_t> dst, std::uint8_t c) {
  const auto& row = tables().product[c];
  for (auto& v : dst) v = row[v];
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("gf256: shape mismatch in multiply");
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) mul_add(out.row(r), b.row(k), a.at(r, k));
  }
  return out;
}

std::size_t rank(Matrix a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < a.rows() && a.at(pivot, c) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != r) {
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a.at(r, k), a.at(pivot, k));
    }
    const std::uint8_t f = inv(a.at(r, c));
    scale(a.row(r), f);
    for (std::size_t i = r + 1; i < a.rows(); ++i) mul_add(a.row(i), a.row(r), a.at(i, c));
    ++r;
  }
  return r;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("gf256: solve needs a square matrix");
  if (b.rows() != n) throw std::invalid_argument("gf256: right-hand side has wrong row count");

  // Work on [A | B] so every row operation is one contiguous pass.
  const std::size_t w = n + b.cols();
  Matrix ab(n, w);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(a.row(r).begin(), a.row(r).end(), ab.row(r).begin());
    std::copy(b.row(r).begin(), b.row(r).end(), ab.row(r).begin() + static_cast<std::ptrdiff_t>(n));
  }

  // Forward elimination; any nonzero entry is a valid pivot in a finite field.
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && ab.at(pivot, c) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != c) std::swap_ranges(ab.row(c).begin() + static_cast<std::ptrdiff_t>(c), ab.row(c).end(),
                                     ab.row(pivot).begin() + static_cast<std::ptrdiff_t>(c));
    scale(ab.row(c).subspan(c), inv(ab.at(c, c)));
    for (std::size_t i = c + 1; i < n; ++i) {
      const std::uint8_t e = ab.at(i, c);
      if (e != 0) mul_add(ab.row(i).subspan(c), ab.row(c).subspan(c), e);
    }
  }
  // Back substitution on the unit upper-triangular system.
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t i = 0; i < c; ++i) {
      const std::uint8_t e = ab.at(i, c);
      if (e != 0) mul_add(ab.row(i).subspan(n), ab.row(c).subspan(n), e);
    }
  }
  Matrix x(n, b.cols());
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = ab.row(r).subspan(n);
    std::copy(row.begin(), row.end(), x.row(r).begin());
  }
  return x;
}

}  // namespace hcdc::gf256
