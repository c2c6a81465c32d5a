#include "kglab/vaughan.hpp"

#include <algorithm>
#include <cmath>

#include "kglab/error.hpp"
#include "kglab/expsum.hpp"
#include "kglab/kernels.hpp"

namespace kglab {
namespace {

std::vector<int> moebius_table(std::int64_t limit) {
  std::vector<int> mu(static_cast<std::size_t>(limit + 1), 1);
  std::vector<bool> composite(static_cast<std::size_t>(limit + 1), false);
  if (limit >= 0) mu[0] = 0;
  for (std::int64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::int64_t m = p; m <= limit; m += p) {
      if (m > p) composite[m] = true;
      mu[m] = -mu[m];
    }
    for (std::int64_t sq = p * p, m = sq; sq <= limit && m <= limit; m += sq) mu[m] = 0;
  }
  return mu;
}

std::vector<double> mangoldt_table(std::int64_t limit) {
  std::vector<double> lam(static_cast<std::size_t>(limit + 1), 0.0);
  for (std::uint64_t p : primes_up_to(static_cast<std::uint64_t>(std::max<std::int64_t>(limit, 0)))) {
    double lp = std::log(static_cast<double>(p));
    for (std::uint64_t pk = p; pk <= static_cast<std::uint64_t>(limit); pk *= p) lam[pk] = lp;
  }
  return lam;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

std::complex<double> BilinearComponent::evaluate(const Frequency& alpha,
                                                 const ShortInterval& interval) const {
  std::vector<std::uint64_t> phases;
  std::vector<double> weights;
  for (std::int64_t u = u_lo; u <= u_hi; ++u) {
    double xu = xi[static_cast<std::size_t>(u - u_lo)];
    if (xu == 0.0) continue;
    std::int64_t first = std::max(v_lo, ceil_div(interval.lo, u));
    std::int64_t last = std::min(v_hi, interval.hi / u);
    for (std::int64_t v = first; v <= last; ++v) {
      double ev = eta[static_cast<std::size_t>(v - v_lo)];
      if (ev == 0.0) continue;
      phases.push_back(phase_of(checked_power(static_cast<std::uint64_t>(u * v), interval.k), alpha));
      weights.push_back(sign * xu * ev);
    }
  }
  return simd::active_kernels().phase_sum(phases, weights);
}

std::complex<double> VaughanDecomposition::evaluate(const Frequency& alpha) const {
  std::complex<double> total = 0.0;
  for (const auto& c : components) total += c.evaluate(alpha, interval);
  return total;
}

double default_vaughan_cut(const ShortInterval& interval) {
  double rho = minor_arc_rho(interval.k);
  return interval.x * std::pow(interval.y, -1.0 + 2.0 * rho);
}

VaughanDecomposition vaughan_decompose(const ShortInterval& interval, double X) {
  const double top = interval.upper();
  if (!(X >= 2.0 && X <= std::sqrt(top))) throw InvalidArgument("X must lie in [2, sqrt(x + y)]");
  if (!(static_cast<double>(interval.lo) > X))
    throw InvalidArgument("window must lie entirely above X");

  VaughanDecomposition dec;
  dec.interval = interval;
  dec.X = X;
  const auto x_floor = static_cast<std::int64_t>(std::floor(X));
  const auto x2_floor = static_cast<std::int64_t>(std::floor(X * X));
  const std::int64_t hi = interval.hi;
  const std::int64_t lo = interval.lo;

  const std::vector<int> mu = moebius_table(std::max(x2_floor, x_floor));
  const std::vector<double> lam = mangoldt_table(hi);

  // Dyadic type I blocks u in [2^j, 2^{j+1}) within [1, u_max].
  auto type_one = [&](std::int64_t u_max, int sign, const std::string& source,
                      auto coefficient, bool log_inner) {
    for (std::int64_t U = 1; U <= u_max; U *= 2) {
      BilinearComponent c;
      c.kind = BilinearKind::TypeI;
      c.sign = sign;
      c.source = source;
      c.U = static_cast<double>(U);
      c.u_lo = U;
      c.u_hi = std::min(u_max, 2 * U - 1);
      c.v_lo = std::max<std::int64_t>(1, ceil_div(lo, c.u_hi));
      c.v_hi = hi / c.u_lo;
      if (c.v_hi < c.v_lo) continue;
      for (std::int64_t u = c.u_lo; u <= c.u_hi; ++u) c.xi.push_back(coefficient(u));
      for (std::int64_t v = c.v_lo; v <= c.v_hi; ++v)
        c.eta.push_back(log_inner ? std::log(static_cast<double>(v)) : 1.0);
      dec.components.push_back(std::move(c));
    }
  };

  type_one(x_floor, +1, "mu-log", [&](std::int64_t d) { return static_cast<double>(mu[d]); }, true);

  std::vector<double> mu_lambda(static_cast<std::size_t>(x2_floor + 1), 0.0);
  for (std::int64_t d = 1; d <= x_floor; ++d) {
    if (mu[d] == 0) continue;
    for (std::int64_t l = 2; l <= x_floor && d * l <= x2_floor; ++l)
      mu_lambda[d * l] += mu[d] * lam[l];
  }
  type_one(x2_floor, -1, "mu-lambda", [&](std::int64_t u) { return mu_lambda[u]; }, false);

  // Type II: u in (X, (x+y)/X], v > X.
  const auto u_cap = static_cast<std::int64_t>(std::floor(top / X));
  auto truncated_mu_sum = [&](std::int64_t v) {
    int total = 0;
    for (std::int64_t d = 1; d <= x_floor && d <= v; ++d)
      if (v % d == 0) total += mu[d];
    return static_cast<double>(total);
  };
  for (double U = X; U <= top / X; U *= 2.0) {
    BilinearComponent c;
    c.kind = BilinearKind::TypeII;
    c.sign = -1;
    c.source = "lambda-mu";
    c.U = U;
    c.u_lo = std::max(x_floor + 1, static_cast<std::int64_t>(std::ceil(U)));
    c.u_hi = std::min(u_cap, static_cast<std::int64_t>(std::ceil(2.0 * U)) - 1);
    if (c.u_hi < c.u_lo) continue;
    c.v_lo = std::max(x_floor + 1, ceil_div(lo, c.u_hi));
    c.v_hi = hi / c.u_lo;
    if (c.v_hi < c.v_lo) continue;
    for (std::int64_t u = c.u_lo; u <= c.u_hi; ++u) {
      c.xi.push_back(lam[u]);
      double t3 = std::pow(static_cast<double>(divisor_count(static_cast<std::uint64_t>(u))), 3);
      dec.max_coefficient_over_tau3 = std::max(dec.max_coefficient_over_tau3, lam[u] / t3);
    }
    for (std::int64_t v = c.v_lo; v <= c.v_hi; ++v) {
      double e = truncated_mu_sum(v);
      c.eta.push_back(e);
      double t3 = std::pow(static_cast<double>(divisor_count(static_cast<std::uint64_t>(v))), 3);
      dec.max_coefficient_over_tau3 = std::max(dec.max_coefficient_over_tau3, std::fabs(e) / t3);
    }
    dec.components.push_back(std::move(c));
  }
  return dec;
}

}  // namespace kglab
