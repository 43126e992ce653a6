#include "hcdc/lattice.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hcdc {

namespace {

constexpr std::size_t kMaxPoints = std::size_t{1} << 32;

}  // namespace

std::string to_fraction(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal(const Rational& q) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", q.convert_to<double>());
  return buf;
}

const char* to_string(SMode mode) { return mode == SMode::S1 ? "1" : "d"; }

HypercubeParams::HypercubeParams(int x, int d, int eta1, int eta2, SMode s_mode,
                                 std::size_t t_bytes)
    : x_(x), d_(d), eta1_(eta1), eta2_(eta2), s_mode_(s_mode), t_bytes_(t_bytes), num_points_(1) {
  if (x < 1) throw ConfigError("x must be >= 1 (got " + std::to_string(x) + ")");
  if (d < 2) throw ConfigError("d must be >= 2 (got " + std::to_string(d) + ")");
  if (eta1 < 1) throw ConfigError("eta1 must be >= 1 (got " + std::to_string(eta1) + ")");
  if (eta2 < 1) throw ConfigError("eta2 must be >= 1 (got " + std::to_string(eta2) + ")");
  strides_.reserve(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m) {
    strides_.push_back(num_points_);
    num_points_ *= static_cast<std::size_t>(x);
    if (num_points_ > kMaxPoints) throw ConfigError("x^d exceeds 2^32 lattice points");
  }
  const std::size_t unit = minimal_t(d);
  if (t_bytes == 0 || t_bytes % unit != 0) {
    throw ConfigError("T must be a positive multiple of " + std::to_string(unit) +
                      " bytes for d=" + std::to_string(d) + " (got " + std::to_string(t_bytes) +
                      ")");
  }
}

HypercubeParams HypercubeParams::with_minimal_t(int x, int d, int eta1, int eta2, SMode s_mode) {
  if (d < 2) throw ConfigError("d must be >= 2 (got " + std::to_string(d) + ")");
  return HypercubeParams(x, d, eta1, eta2, s_mode, minimal_t(d));
}

std::size_t HypercubeParams::num_functions() const {
  if (s_mode_ == SMode::S1) return static_cast<std::size_t>(eta2_) * static_cast<std::size_t>(num_nodes());
  return static_cast<std::size_t>(eta2_) * num_points_;
}

std::size_t point_to_index(const LatticePoint& p, const HypercubeParams& params) {
  if (p.coords.size() != static_cast<std::size_t>(params.d())) {
    throw std::out_of_range("lattice point has " + std::to_string(p.coords.size()) +
                            " coordinates, expected " + std::to_string(params.d()));
  }
  std::size_t n = 0;
  for (int m = 0; m < params.d(); ++m) {
    const int c = p.coords[static_cast<std::size_t>(m)];
    if (c < 0 || c >= params.x()) {
      throw std::out_of_range("coordinate " + std::to_string(c) + " outside [0," +
                              std::to_string(params.x()) + ")");
    }
    n += static_cast<std::size_t>(c) * params.stride(m);
  }
  return n;
}

LatticePoint index_to_point(std::size_t n, const HypercubeParams& params) {
  if (n >= params.num_points()) throw std::out_of_range("lattice index out of range");
  LatticePoint p;
  p.coords.reserve(static_cast<std::size_t>(params.d()));
  for (int m = 0; m < params.d(); ++m) p.coords.push_back(coord_of(n, m, params));
  return p;
}

std::vector<NodeId> nodes_through_point(const LatticePoint& p) {
  std::vector<NodeId> out;
  out.reserve(p.coords.size());
  for (std::size_t m = 0; m < p.coords.size(); ++m) out.push_back({static_cast<int>(m), p.coords[m]});
  return out;
}

std::vector<int> nodes_through_index(std::size_t n, const HypercubeParams& params) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(params.d()));
  for (int m = 0; m < params.d(); ++m) out.push_back(m * params.x() + coord_of(n, m, params));
  return out;
}

int gamma(const LatticePoint& p, const LatticePoint& q) {
  if (p.coords.size() != q.coords.size()) throw std::invalid_argument("dimension mismatch");
  int g = 0;
  for (std::size_t m = 0; m < p.coords.size(); ++m) g += p.coords[m] != q.coords[m] ? 1 : 0;
  return g;
}

int gamma(std::size_t p, std::size_t q, const HypercubeParams& params) {
  int g = 0;
  for (int m = 0; m < params.d(); ++m) g += coord_of(p, m, params) != coord_of(q, m, params) ? 1 : 0;
  return g;
}

std::size_t minimal_t(int d) {
  if (d < 2) throw std::invalid_argument("minimal_t requires d >= 2");
  std::size_t t = static_cast<std::size_t>(d - 1);
  for (int g = 2; g <= d; ++g) t = std::lcm(t, static_cast<std::size_t>(2 * g - 1));
  return t;
}

BigInt binom(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  // Each partial product is itself a binomial coefficient, so the division is exact.
  for (long long i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt ipow(long long base, unsigned exp) {
  BigInt result = 1;
  for (unsigned i = 0; i < exp; ++i) result *= base;
  return result;
}

}  // namespace hcdc
