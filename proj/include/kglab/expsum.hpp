// Exponential sums over short windows, complete rational sums and exact
// mean values.
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kglab/arcs.hpp"
#include "kglab/interval.hpp"
#include "kglab/phase.hpp"
#include "kglab/weights.hpp"

namespace kglab {

// f(alpha) = sum_{m in window} w(m) e(m^k alpha), with the powers and
// non-zero weights materialized once.
class ExpSum {
 public:
  ExpSum(const ShortInterval& interval, const WeightFunction& w);
  ExpSum(const ShortInterval& interval, std::span<const double> dense_weights);

  std::complex<double> operator()(const Frequency& alpha) const;
  std::complex<double> operator()(double alpha) const {
    return (*this)(Frequency::from_double(alpha));
  }

  const ShortInterval& interval() const { return interval_; }
  double weight_bound() const { return bound_; }
  std::size_t terms() const { return powers_.size(); }

 private:
  ShortInterval interval_;
  std::vector<u128> powers_;
  std::vector<double> weights_;
  double bound_ = 0.0;
};

std::complex<double> f_eval(double alpha, const WeightFunction& w, const ShortInterval& interval);

inline constexpr std::uint64_t kCompleteSumCap = 1'000'000;

// S(q, a) = sum over units h mod q of e(a h^k / q). gcd(a, q) = 1 is expected
// but not enforced.
std::complex<double> complete_sum_S(std::uint64_t q, std::uint64_t a, int k,
                                    std::uint64_t cap = kCompleteSumCap);

struct MomentResult {
  u128 value = 0;        // rounded integral
  double raw = 0.0;      // sampled mean before rounding
  double residual = 0.0; // |raw - value|
  u128 samples = 0;      // N = 2t(hi^k - lo^k) + 1
};

inline constexpr u128 kMomentSampleCap = u128{4'000'000'000ULL};

// int_0^1 |f(alpha, 1)|^{2t} d alpha as the mean over N equispaced samples,
// exact because |f|^{2t} has frequencies bounded by t(hi^k - lo^k).
MomentResult moment_dft(const ShortInterval& interval, int t, u128 sample_cap = kMomentSampleCap);

inline constexpr std::uint64_t kMomentStateCap = 100'000'000;

// Weighted count of m_1^k + ... + m_t^k = m_{t+1}^k + ... + m_{2t}^k over
// the window, from the distribution of t-fold power sums.
double moment_enum(const ShortInterval& interval, int t, const WeightFunction& w,
                   std::uint64_t state_cap = kMomentStateCap);

// t_k: 2 for k = 2, k^2 - k + 1 for k >= 3.
int weyl_exponent(int k);
// rho = 1 / (31 t_k).
double minor_arc_rho(int k);

struct ScanRow {
  double alpha;
  bool major;
  std::uint64_t q;
  std::uint64_t a;
  double abs_f;
  double ratio;  // abs_f / y^(1 - rho)
};

struct ScanReport {
  std::vector<ScanRow> rows;
  std::size_t minor_samples = 0;
  bool minor_empty = true;
  double sup_minor = 0.0;
  double argmax_alpha = 0.0;
  double sup_ratio = 0.0;
  double rho = 0.0;
  double scale = 0.0;  // y^(1 - rho)
  double trivial_bound = 0.0;
  double f_at_zero = 0.0;

  std::string to_csv() const;
};

// Samples alpha uniformly in [1/Q, 1 + 1/Q). Measurement only: the ratio
// column is reported, never compared against a constant. The trivial bound
// |f| <= B |window| is enforced on every sample.
ScanReport weyl_scan(const ShortInterval& interval, const ArcDissection& dissection,
                     std::size_t samples, const WeightFunction& w, std::uint64_t seed);

}  // namespace kglab
