#pragma once

// Closed-form loads of the hypercube schemes and of the baselines they are
// compared with. Everything is an exact rational.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcdc/common.hpp"

namespace hcdc {

struct LoadPair {
  Rational r;
  Rational L;

  bool operator==(const LoadPair&) const = default;
};

// s=1, necessary values only: r = (1 + (d-1)(x-1)) / x, L = (x-1) / (x(d-1)).
LoadPair theorem1(int x, int d);

// s=1, every node maps all local files: r = d, L as above. Throws
// std::logic_error if L != (1 - r/K) / (r - 1).
LoadPair corollary1(int x, int d);

// s=d, necessary values only: r = d(x^d - x + 1) / x^d and
// L = d(x-1) / (x^d (d-1)) + x^{-2d} sum_{g=2..d} 2 C(d,g) C(x,2)^g x^{d-g} g 2^{g-1} / (2g-1).
LoadPair theorem2(int x, int d);

// Optimal load with computation load r and s reducers per function, for the
// binomial-placement scheme:
// sum_{l=max(r+1,s)}^{min(r+s,K)} l C(K,l) C(l-2,r-1) C(r,l-s) / (r C(K,r) C(K,s)).
Rational optimal_cascaded(int K, int r, int s);

// Uncoded unicast, one reducer per function: 1 - r/K.
Rational uncoded(int K, int r);
// Uncoded unicast to each of s reducers: s (1 - r/K).
Rational uncoded_replicated(int K, int r, int s);

struct LoadPoint {
  std::string scheme;
  Rational r;
  Rational L;
  int K = 0;
  BigInt n_req;
  BigInt q_req;
};

struct RatioRow {
  int x = 0;
  int d = 0;
  int s = 0;
  Rational hypercube;
  Rational optimal;
  Rational ratio;
};

// s=1, all-local: L'_hc / L*(K=xd, r=d, s=1) for every x in [x_lo,x_hi], d in [d_lo,d_hi].
std::vector<RatioRow> optimality_ratios_s1(int x_lo, int x_hi, int d_lo, int d_hi);
// s=d=2: theorem2(x,2).L / L*(2x, 2, 2) for x in [x_lo,x_hi].
std::vector<RatioRow> optimality_ratios_sd2(int x_lo, int x_hi);

struct SweepGrid {
  int x_lo = 2;
  int x_hi = 6;
  int d_lo = 2;
  int d_hi = 4;
  bool include_s1 = true;
  bool include_sd = true;
};

struct SweepRow {
  int x = 0;
  int d = 0;
  int s = 0;
  Rational r_hc;
  Rational L_hc;
  Rational L_opt;
  Rational L_uncoded;
  BigInt n_hc;
  BigInt n_li;
  BigInt q_hc;
  BigInt q_li;
  // Filled in by the CLI when the row was also simulated.
  std::optional<Rational> r_sim;
  std::optional<Rational> L_sim;
};

// Rows ordered by x, then d, then s (1 before d). r_hc = d (all-local
// computation), L_opt = optimal_cascaded(xd, d, s).
std::vector<SweepRow> sweep(const SweepGrid& grid);

inline constexpr const char* kSweepHeader = "x,d,s,r_hc,L_hc,L_opt,L_uncoded,N_hc,N_li,Q_hc,Q_li";

// Cells are "fraction (decimal)". Simulated columns are appended only when
// with_simulation is set.
std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_simulation = false);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

// {"fraction": "p/q", "decimal": "..."}
nlohmann::json rational_json(const Rational& q);

}  // namespace hcdc
