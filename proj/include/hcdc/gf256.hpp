#pragma once

// GF(2^8) arithmetic modulo x^8 + x^4 + x^3 + x + 1 (0x11B) and Gaussian
// elimination over byte matrices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hcdc::gf256 {

inline constexpr unsigned kPolynomial = 0x11B;

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
// a must be nonzero.
std::uint8_t inv(std::uint8_t a);

// dst ^= c * src
void mul_add(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c);
// dst *= c
void scale(std::span<std::uint8_t> dst, std::uint8_t c);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint8_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<std::uint8_t> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const std::uint8_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

std::size_t rank(Matrix a);

// Solves A X = B for square A; B holds one payload per row. Returns nullopt
// when A is singular.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

}  // namespace hcdc::gf256
