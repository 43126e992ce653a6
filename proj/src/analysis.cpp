#include "hcdc/analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include "hcdc/design.hpp"
#include "hcdc/lattice.hpp"

namespace hcdc {

namespace {

void require_xd(int x, int d) {
  if (x < 1 || d < 2) throw std::invalid_argument("closed forms need x >= 1, d >= 2");
}

std::string cell(const Rational& q) { return to_fraction(q) + " (" + to_decimal(q) + ")"; }

}  // namespace

LoadPair theorem1(int x, int d) {
  require_xd(x, d);
  return {Rational(1 + (d - 1) * (x - 1), x), Rational(x - 1, x * (d - 1))};
}

LoadPair corollary1(int x, int d) {
  require_xd(x, d);
  const LoadPair out{Rational(d), theorem1(x, d).L};
  const Rational K = x * d;
  if (out.L != (1 - out.r / K) / (out.r - 1)) throw std::logic_error("corollary1 identity violated");
  return out;
}

LoadPair theorem2(int x, int d) {
  require_xd(x, d);
  const BigInt xd = ipow(x, static_cast<unsigned>(d));
  const Rational r = Rational(BigInt(d) * (xd - x + 1), xd);
  Rational L = Rational(BigInt(d) * (x - 1), xd * (d - 1));
  const BigInt pairs = binom(x, 2);
  Rational coded = 0;
  for (int g = 2; g <= d; ++g) {
    const BigInt term = 2 * binom(d, g) * ipow(static_cast<long long>(pairs), static_cast<unsigned>(g)) *
                        ipow(x, static_cast<unsigned>(d - g)) * g * ipow(2, static_cast<unsigned>(g - 1));
    coded += Rational(term, 2 * g - 1);
  }
  L += coded / (xd * xd);
  return {r, L};
}

Rational optimal_cascaded(int K, int r, int s) {
  if (K < 1 || r < 1 || s < 1 || r > K || s > K) throw std::invalid_argument("optimal_cascaded needs 1 <= r,s <= K");
  Rational total = 0;
  const int lo = std::max(r + 1, s);
  const int hi = std::min(r + s, K);
  const BigInt denom = BigInt(r) * binom(K, r) * binom(K, s);
  for (int l = lo; l <= hi; ++l) {
    total += Rational(BigInt(l) * binom(K, l) * binom(l - 2, r - 1) * binom(r, l - s), denom);
  }
  return total;
}

Rational uncoded(int K, int r) {
  if (K < 1 || r < 0 || r > K) throw std::invalid_argument("uncoded needs 0 <= r <= K");
  return 1 - Rational(r, K);
}

Rational uncoded_replicated(int K, int r, int s) { return s * uncoded(K, r); }

std::vector<RatioRow> optimality_ratios_s1(int x_lo, int x_hi, int d_lo, int d_hi) {
  std::vector<RatioRow> rows;
  for (int x = x_lo; x <= x_hi; ++x) {
    for (int d = d_lo; d <= d_hi; ++d) {
      RatioRow row{x, d, 1, corollary1(x, d).L, optimal_cascaded(x * d, d, 1), 0};
      row.ratio = row.optimal == 0 ? Rational(0) : row.hypercube / row.optimal;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<RatioRow> optimality_ratios_sd2(int x_lo, int x_hi) {
  std::vector<RatioRow> rows;
  for (int x = x_lo; x <= x_hi; ++x) {
    RatioRow row{x, 2, 2, theorem2(x, 2).L, optimal_cascaded(2 * x, 2, 2), 0};
    row.ratio = row.hypercube / row.optimal;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> sweep(const SweepGrid& grid) {
  std::vector<SweepRow> rows;
  for (int x = grid.x_lo; x <= grid.x_hi; ++x) {
    for (int d = grid.d_lo; d <= grid.d_hi; ++d) {
      const int K = x * d;
      std::vector<int> modes;
      if (grid.include_s1) modes.push_back(1);
      if (grid.include_sd) modes.push_back(d);
      for (int s : modes) {
        SweepRow row;
        row.x = x;
        row.d = d;
        row.s = s;
        row.r_hc = d;
        row.L_hc = s == 1 ? corollary1(x, d).L : theorem2(x, d).L;
        row.L_opt = optimal_cascaded(K, d, s);
        row.L_uncoded = uncoded_replicated(K, d, s);
        const Requirements req = min_requirements(K, d, s);
        row.n_hc = req.n_hc;
        row.n_li = req.n_li;
        row.q_hc = req.q_hc;
        row.q_li = req.q_li;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_simulation) {
  std::string out = kSweepHeader;
  if (with_simulation) out += ",r_sim,L_sim";
  out += '\n';
  for (const auto& row : rows) {
    out += std::to_string(row.x) + ',' + std::to_string(row.d) + ',' + std::to_string(row.s) + ',' + cell(row.r_hc) +
           ',' + cell(row.L_hc) + ',' + cell(row.L_opt) + ',' + cell(row.L_uncoded) + ',' + row.n_hc.str() + ',' +
           row.n_li.str() + ',' + row.q_hc.str() + ',' + row.q_li.str();
    if (with_simulation) {
      out += ',' + (row.r_sim ? cell(*row.r_sim) : std::string()) + ',' + (row.L_sim ? cell(*row.L_sim) : std::string());
    }
    out += '\n';
  }
  return out;
}

nlohmann::json rational_json(const Rational& q) {
  return {{"fraction", to_fraction(q)}, {"decimal", to_decimal(q)}};
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j{{"x", row.x},
                     {"d", row.d},
                     {"s", row.s},
                     {"r_hc", rational_json(row.r_hc)},
                     {"L_hc", rational_json(row.L_hc)},
                     {"L_opt", rational_json(row.L_opt)},
                     {"L_uncoded", rational_json(row.L_uncoded)},
                     {"N_hc", row.n_hc.str()},
                     {"N_li", row.n_li.str()},
                     {"Q_hc", row.q_hc.str()},
                     {"Q_li", row.q_li.str()}};
    if (row.r_sim) j["r_sim"] = rational_json(*row.r_sim);
    if (row.L_sim) j["L_sim"] = rational_json(*row.L_sim);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace hcdc
