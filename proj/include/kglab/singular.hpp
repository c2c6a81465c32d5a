// Singular series, singular integral, the major-arc approximant f* and the
// main-term prediction S(n) J(n) L^{-s}.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kglab/arcs.hpp"
#include "kglab/interval.hpp"

namespace kglab {

inline constexpr std::uint64_t kATermCap = 100'000;

// A(q, n) = phi(q)^{-s} sum_{(a,q)=1} S(q,a)^s e(-an/q). Throws
// InternalError when the imaginary part exceeds 1e-10.
double A_term(std::uint64_t q, std::int64_t n, int k, int s, std::uint64_t cap = kATermCap);

struct LocalFactorValue {
  std::uint64_t p;
  double sigma;  // 1 + sum_{j >= 1, p^j <= Qmax} A(p^j, n)
};

struct SingularSeriesEstimate {
  std::int64_t n = 0;
  int k = 2;
  int s = 5;
  std::uint64_t qmax = 0;
  double value = 0.0;           // authoritative: product of the local factors
  double multiplicative = 0.0;  // same as value
  std::optional<double> direct_sum;  // sum_{q <= Qmax} A(q, n)
  std::vector<LocalFactorValue> p_local;
  std::string method = "multiplicative";
  bool obstructed = false;  // value <= 1e-6
  bool weak = false;        // value in (1e-6, 0.05)
};

inline constexpr std::uint64_t kSeriesQCap = 1'000'000;
inline constexpr double kObstructionThreshold = 1e-6;

SingularSeriesEstimate singular_series(std::int64_t n, int k, int s, std::uint64_t qmax,
                                       bool with_direct_sum = true);

// Local factors for many n at fixed (k, s, Qmax). A(p^j, n) depends on n only
// through its orbit mod p^j under multiplication by k-th powers of units, so
// values are cached per orbit.
class SingularSeriesTable {
 public:
  SingularSeriesTable(int k, int s, std::uint64_t qmax);
  ~SingularSeriesTable();
  SingularSeriesTable(SingularSeriesTable&&) noexcept;
  SingularSeriesTable& operator=(SingularSeriesTable&&) noexcept;

  SingularSeriesEstimate evaluate(std::int64_t n);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// sum_{d | q} A(d, n) against q phi(q)^{-s} M_n(q), with M_n(q) the number of
// unit solutions of h_1^k + ... + h_s^k = n (mod q). Requires q <= 500, s <= 6.
bool local_solution_identity_check(std::uint64_t q, std::int64_t n, int k, int s);

// v(beta; order) = int_{x-y}^{x+y} u^{order-1} e(u^k beta) du. |beta| <= 1.
std::complex<double> v_integral(double beta, const ShortInterval& interval, double order);

enum class IntegralMethod { FourierQuadrature, DensityConvolution };
const char* to_string(IntegralMethod method);
IntegralMethod parse_integral_method(const std::string& name);

struct SingularIntegralEstimate {
  std::int64_t n = 0;
  int k = 2;
  int s = 5;
  ShortInterval interval;
  double value = 0.0;
  IntegralMethod method = IntegralMethod::FourierQuadrature;
  // fourier-quadrature: beta cutoff and panel count; density-convolution:
  // grid cells and cell width.
  double cutoff = 0.0;
  std::size_t panels = 0;
  std::size_t cells = 0;
  double cell_width = 0.0;
};

inline constexpr std::size_t kDefaultConvolutionCells = std::size_t{1} << 14;

SingularIntegralEstimate singular_integral(std::int64_t n, const ShortInterval& interval, int s,
                                           IntegralMethod method,
                                           std::size_t cells = kDefaultConvolutionCells);

struct SingularIntegralComparison {
  SingularIntegralEstimate fourier;
  SingularIntegralEstimate convolution;
  double relative_gap = 0.0;
  bool flagged = false;  // gap above 5%
};

SingularIntegralComparison compare_integral_methods(std::int64_t n, const ShortInterval& interval,
                                                    int s);

// kappa phi(q)^{-1} S(q,a) v(alpha - a/q; 1) / log x on the arc containing
// alpha; throws InvalidArgument on the minor arcs.
std::complex<double> f_star(double alpha, const ArcDissection& dissection,
                            const ShortInterval& interval, double kappa = 1.0);

struct SieveDensities {
  double kappa_minus = 0.99;
  double kappa_plus = 1.01;
};

struct PredictionReport {
  std::int64_t n = 0;
  int k = 2;
  int s = 5;
  double theta = 0.0;
  ShortInterval interval;
  bool admissible = false;
  SingularSeriesEstimate series;
  SingularIntegralEstimate integral;
  double log_x = 0.0;
  double prediction = 0.0;  // S(n) J(n) L^{-s}
  double C = 0.0;           // S(n) J(n) y^{1-s} x^{k-1}
  bool obstructed = false;
};

PredictionReport predict_main_term(std::int64_t n, int k, int s, double theta, std::uint64_t qmax,
                                   IntegralMethod method = IntegralMethod::FourierQuadrature);

// Same, with the series taken from a shared table.
PredictionReport predict_main_term(std::int64_t n, double theta, SingularSeriesTable& table,
                                   int k, int s, std::uint64_t qmax,
                                   IntegralMethod method = IntegralMethod::FourierQuadrature);

}  // namespace kglab
