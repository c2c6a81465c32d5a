// Vaughan's identity with both cuts at X, written as bilinear sums
//   sum_{u ~ U} xi_u sum_{v : uv in window} eta_v e((uv)^k alpha).
// For m > X in the window:
//   Lambda(m) = sum_{dv = m, d <= X} mu(d) log v                      (type I)
//             - sum_{uv = m, u <= X^2} (sum_{dl = u, d,l <= X} mu(d) Lambda(l))   (type I)
//             - sum_{uv = m, u > X, v > X} Lambda(u) sum_{d | v, d <= X} mu(d)   (type II)
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "kglab/interval.hpp"
#include "kglab/phase.hpp"

namespace kglab {

enum class BilinearKind { TypeI, TypeII };

struct BilinearComponent {
  BilinearKind kind = BilinearKind::TypeI;
  int sign = 1;
  std::string source;  // "mu-log", "mu-lambda" or "lambda-mu"
  double U = 1.0;      // dyadic block start: U <= u < 2U
  std::int64_t u_lo = 1, u_hi = 0;
  std::int64_t v_lo = 1, v_hi = 0;
  std::vector<double> xi;   // indexed by u - u_lo
  std::vector<double> eta;  // indexed by v - v_lo

  std::complex<double> evaluate(const Frequency& alpha, const ShortInterval& interval) const;
  double V() const { return static_cast<double>(v_lo); }
};

struct VaughanDecomposition {
  ShortInterval interval;
  double X = 0.0;
  std::vector<BilinearComponent> components;
  // max |coefficient| / tau(index)^3 over type II blocks; a diagnostic only.
  double max_coefficient_over_tau3 = 0.0;

  std::complex<double> evaluate(const Frequency& alpha) const;
};

// X = x y^(-1 + 2 rho), rho = 1/(31 t_k).
double default_vaughan_cut(const ShortInterval& interval);

// Requires 2 <= X <= sqrt(x + y) and every integer of the window > X.
VaughanDecomposition vaughan_decompose(const ShortInterval& interval, double X);

}  // namespace kglab
