#include "kglab/singular.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "kglab/error.hpp"
#include "kglab/expsum.hpp"
#include "kglab/kernels.hpp"
#include "kglab/local.hpp"
#include "kglab/parallel.hpp"
#include "kglab/phase.hpp"

namespace kglab {
namespace {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using cplx = std::complex<double>;

constexpr double kImagTolerance = 1e-10;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % q);
}

cplx ipow(cplx z, int e) {
  cplx r = 1.0;
  while (e) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

// Units mod q grouped into cosets of H = {h^k : h unit}. S(q, .) is constant
// on each coset.
struct ResidueStructure {
  std::uint64_t q = 1;
  std::uint64_t phi = 1;
  std::vector<std::uint32_t> powers;        // H, increasing
  std::vector<std::uint32_t> unit_order;    // units grouped by coset
  std::vector<std::size_t> coset_begin;     // offsets into unit_order, size cosets+1
  std::vector<cplx> coset_sum;              // S(q, representative)

  ResidueStructure(std::uint64_t modulus, int k) : q(modulus) {
    std::vector<std::uint8_t> unit(q, 1);
    if (q > 1) {
      unit[0] = 0;
      for (auto [p, e] : factorize(q))
        for (std::uint64_t m = 0; m < q; m += p) unit[m] = 0;
    }
    std::vector<std::uint32_t> count(q, 0);
    phi = 0;
    for (std::uint64_t h = 0; h < q; ++h) {
      if (!unit[h]) continue;
      ++phi;
      ++count[powmod(h, static_cast<std::uint64_t>(k), q)];
    }
    for (std::uint64_t r = 0; r < q; ++r)
      if (count[r]) powers.push_back(static_cast<std::uint32_t>(r));

    std::vector<std::uint8_t> seen(q, 0);
    unit_order.reserve(phi);
    std::vector<std::uint64_t> phases;
    std::vector<double> weights;
    for (std::uint64_t a = 0; a < q; ++a) {
      if (!unit[a] || seen[a]) continue;
      coset_begin.push_back(unit_order.size());
      for (std::uint32_t r : powers) {
        std::uint64_t m = mulmod(a, r, q);
        if (!seen[m]) {
          seen[m] = 1;
          unit_order.push_back(static_cast<std::uint32_t>(m));
        }
      }
      phases.clear();
      weights.clear();
      for (std::uint32_t r : powers) {
        phases.push_back(rational_phase(mulmod(a, r, q), q));
        weights.push_back(static_cast<double>(count[r]));
      }
      coset_sum.push_back(simd::active_kernels().phase_sum(phases, weights));
    }
    coset_begin.push_back(unit_order.size());
  }

  std::size_t cosets() const { return coset_sum.size(); }

  // Complex A(q, n) before the realness check.
  cplx a_value(std::int64_t n, int s) const {
    const auto nr = static_cast<std::uint64_t>(((n % static_cast<std::int64_t>(q)) +
                                                static_cast<std::int64_t>(q)) %
                                               static_cast<std::int64_t>(q));
    const double inv_phi = 1.0 / static_cast<double>(phi);
    std::vector<std::uint64_t> phases;
    cplx total = 0.0;
    for (std::size_t c = 0; c < cosets(); ++c) {
      phases.clear();
      for (std::size_t i = coset_begin[c]; i < coset_begin[c + 1]; ++i) {
        std::uint64_t an = mulmod(unit_order[i], nr, q);
        phases.push_back(rational_phase(an == 0 ? 0 : q - an, q));
      }
      cplx e_sum = simd::active_kernels().phase_sum(phases, {});
      total += ipow(coset_sum[c] * inv_phi, s) * e_sum;
    }
    return total;
  }
};

double checked_real(cplx v) {
  if (std::fabs(v.imag()) > kImagTolerance)
    throw InternalError("A(q, n) has a non-negligible imaginary part");
  return v.real();
}

void validate_series_args(int k, int s, std::uint64_t qmax) {
  require(k >= 2 && k <= 64, "k must lie in [2, 64]");
  require(s >= 3, "s must be >= 3");
  if (qmax > kSeriesQCap) throw ResourceError("Qmax exceeds cap");
  const u128 K = local_profile(k).K;
  require(static_cast<u128>(qmax) >= K, "Qmax must be at least K(k)");
}

void finish(SingularSeriesEstimate& est) {
  est.multiplicative = 1.0;
  for (const auto& f : est.p_local) est.multiplicative *= f.sigma;
  est.value = est.multiplicative;
  est.obstructed = est.value <= kObstructionThreshold;
  est.weak = !est.obstructed && est.value < 0.05;
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  static constexpr int kOrder = 16;
  std::array<double, kOrder> node{};
  std::array<double, kOrder> weight{};
  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= kOrder; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        double dp = kOrder * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) {
          node[i] = z;
          weight[i] = 2.0 / ((1.0 - z * z) * dp * dp);
          break;
        }
      }
    }
  }
};

const GaussLegendre& gauss() {
  static const GaussLegendre g;
  return g;
}

// (x + t)^k - x^k by the binomial expansion, in long double.
long double power_offset(long double x, long double t, int k) {
  long double total = 0.0L;
  long double binom = 1.0L;
  long double tp = 1.0L;
  for (int i = 1; i <= k; ++i) {
    binom = binom * (k - i + 1) / i;
    tp *= t;
    total += binom * std::pow(x, static_cast<long double>(k - i)) * tp;
  }
  return total;
}

cplx turn(long double phase) {
  long double f = phase - std::floor(phase);
  double ang = static_cast<double>(2.0L * std::numbers::pi_v<long double> * f);
  return {std::cos(ang), std::sin(ang)};
}

// int_{x-y}^{x+y} u^{order-1} e(base + ((u^k - x^k) + shift) beta) du over
// `panels` Gauss-Legendre panels.
cplx window_integral(const ShortInterval& I, double order, long double beta, long double base,
                     long double shift, std::size_t panels) {
  const auto& g = gauss();
  const long double a = static_cast<long double>(I.x) - I.y;
  const long double width = 2.0L * I.y / static_cast<long double>(panels);
  const long double x = I.x;
  cplx total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const long double mid = a + (static_cast<long double>(p) + 0.5L) * width;
    cplx panel = 0.0;
    for (int i = 0; i < GaussLegendre::kOrder; ++i) {
      long double u = mid + 0.5L * width * g.node[i];
      long double phase = base + (power_offset(x, u - x, I.k) + shift) * beta;
      double amp = order == 1.0 ? 1.0 : static_cast<double>(std::pow(u, static_cast<long double>(order - 1.0)));
      panel += g.weight[i] * amp * turn(phase);
    }
    total += panel * static_cast<double>(0.5L * width);
  }
  return total;
}

std::size_t min_panels(const ShortInterval& I, double beta) {
  double osc = I.y * std::pow(I.x, I.k - 1) * std::fabs(beta);
  return static_cast<std::size_t>(std::ceil(8.0 * (1.0 + osc)));
}

constexpr std::size_t kPanelCap = 1u << 22;

}  // namespace

double A_term(std::uint64_t q, std::int64_t n, int k, int s, std::uint64_t cap) {
  require(q >= 1, "q must be positive");
  require(k >= 1 && s >= 1, "k and s must be positive");
  if (q > cap) throw ResourceError("q exceeds A-term cap");
  if (q == 1) return 1.0;
  return checked_real(ResidueStructure(q, k).a_value(n, s));
}

SingularSeriesEstimate singular_series(std::int64_t n, int k, int s, std::uint64_t qmax,
                                       bool with_direct_sum) {
  validate_series_args(k, s, qmax);
  SingularSeriesEstimate est;
  est.n = n;
  est.k = k;
  est.s = s;
  est.qmax = qmax;

  const auto primes = primes_up_to(qmax);
  est.p_local.resize(primes.size());
  constexpr std::size_t kPrimeChunk = 64;
  parallel_chunks((primes.size() + kPrimeChunk - 1) / kPrimeChunk, [&](std::size_t c) {
    std::size_t end = std::min(primes.size(), (c + 1) * kPrimeChunk);
    for (std::size_t i = c * kPrimeChunk; i < end; ++i) {
      std::uint64_t p = primes[i];
      double sigma = 1.0;
      for (std::uint64_t pj = p; pj <= qmax; pj *= p) sigma += A_term(pj, n, k, s, qmax);
      est.p_local[i] = {p, sigma};
    }
  });
  finish(est);

  if (with_direct_sum) {
    constexpr std::uint64_t kChunk = 256;
    const std::size_t chunks = static_cast<std::size_t>((qmax + kChunk - 1) / kChunk);
    std::vector<double> partial(chunks, 0.0);
    parallel_chunks(chunks, [&](std::size_t c) {
      std::uint64_t end = std::min<std::uint64_t>(qmax, (c + 1) * kChunk);
      double acc = 0.0;
      for (std::uint64_t q = c * kChunk + 1; q <= end; ++q) acc += A_term(q, n, k, s, qmax);
      partial[c] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    est.direct_sum = total;
  }
  return est;
}

struct SingularSeriesTable::Impl {
  struct PowerEntry {
    std::uint64_t q;
    std::vector<std::int32_t> orbit;  // residue -> orbit id
    std::vector<double> value;        // orbit id -> A(q, n)
  };
  struct PrimeEntry {
    std::uint64_t p;
    std::vector<PowerEntry> powers;
  };
  int k, s;
  std::uint64_t qmax;
  std::vector<PrimeEntry> primes;
};

SingularSeriesTable::SingularSeriesTable(int k, int s, std::uint64_t qmax)
    : impl_(std::make_unique<Impl>()) {
  validate_series_args(k, s, qmax);
  impl_->k = k;
  impl_->s = s;
  impl_->qmax = qmax;
  const auto primes = primes_up_to(qmax);
  impl_->primes.resize(primes.size());
  parallel_chunks(primes.size(), [&](std::size_t i) {
    Impl::PrimeEntry entry;
    entry.p = primes[i];
    for (std::uint64_t q = entry.p; q <= qmax; q *= entry.p) {
      ResidueStructure rs(q, k);
      Impl::PowerEntry pe;
      pe.q = q;
      pe.orbit.assign(q, -1);
      for (std::uint64_t r = 0; r < q; ++r) {
        if (pe.orbit[r] >= 0) continue;
        auto id = static_cast<std::int32_t>(pe.value.size());
        for (std::uint32_t h : rs.powers) pe.orbit[mulmod(r, h, q)] = id;
        pe.value.push_back(checked_real(rs.a_value(static_cast<std::int64_t>(r), s)));
      }
      entry.powers.push_back(std::move(pe));
    }
    impl_->primes[i] = std::move(entry);
  });
}

SingularSeriesTable::~SingularSeriesTable() = default;
SingularSeriesTable::SingularSeriesTable(SingularSeriesTable&&) noexcept = default;
SingularSeriesTable& SingularSeriesTable::operator=(SingularSeriesTable&&) noexcept = default;

SingularSeriesEstimate SingularSeriesTable::evaluate(std::int64_t n) {
  SingularSeriesEstimate est;
  est.n = n;
  est.k = impl_->k;
  est.s = impl_->s;
  est.qmax = impl_->qmax;
  for (const auto& entry : impl_->primes) {
    double sigma = 1.0;
    for (const auto& pe : entry.powers) {
      auto q = static_cast<std::int64_t>(pe.q);
      auto r = static_cast<std::size_t>(((n % q) + q) % q);
      sigma += pe.value[static_cast<std::size_t>(pe.orbit[r])];
    }
    est.p_local.push_back({entry.p, sigma});
  }
  finish(est);
  return est;
}

bool local_solution_identity_check(std::uint64_t q, std::int64_t n, int k, int s) {
  require(q >= 1, "q must be positive");
  if (q > 500 || s > 6) throw ResourceError("identity check limited to q <= 500, s <= 6");
  double lhs = 0.0;
  for (std::uint64_t d = 1; d <= q; ++d)
    if (q % d == 0) lhs += A_term(d, n, k, s);
  const double phi = static_cast<double>(euler_phi(q));
  const double solutions = static_cast<double>(unit_solution_count(n, k, s, q));
  const double rhs = static_cast<double>(q) * solutions / std::pow(phi, s);
  return std::fabs(lhs - rhs) <= 1e-8 * std::max(1.0, std::fabs(rhs));
}

std::complex<double> v_integral(double beta, const ShortInterval& interval, double order) {
  require(std::fabs(beta) <= 1.0, "v_integral needs |beta| <= 1");
  require(interval.y > 0.0, "window must have positive width");
  Real50 xk = boost::multiprecision::pow(Real50(interval.x), interval.k);
  Real50 base50 = xk * Real50(beta);
  base50 -= boost::multiprecision::floor(base50);
  const auto base = base50.convert_to<long double>();

  std::size_t panels = min_panels(interval, beta);
  if (panels > kPanelCap) throw ResourceError("v_integral panel count exceeds cap");
  cplx coarse = window_integral(interval, order, beta, base, 0.0L, panels);
  for (;;) {
    std::size_t finer_panels = panels * 2;
    if (finer_panels > kPanelCap) throw ResourceError("v_integral did not converge within panel cap");
    cplx fine = window_integral(interval, order, beta, base, 0.0L, finer_panels);
    double scale = std::max(std::abs(fine), 1e-12 * std::abs(window_integral(interval, order, 0.0, 0.0L, 0.0L, 8)));
    if (std::abs(fine - coarse) <= 1e-8 * scale) return fine;
    coarse = fine;
    panels = finer_panels;
  }
}

const char* to_string(IntegralMethod method) {
  return method == IntegralMethod::FourierQuadrature ? "fourier-quadrature" : "density-convolution";
}

IntegralMethod parse_integral_method(const std::string& name) {
  if (name == "fourier-quadrature" || name == "fourier") return IntegralMethod::FourierQuadrature;
  if (name == "density-convolution" || name == "convolution")
    return IntegralMethod::DensityConvolution;
  throw InvalidArgument("unknown singular-integral method: " + name);
}

namespace {

SingularIntegralEstimate fourier_integral(std::int64_t n, const ShortInterval& I, int s) {
  SingularIntegralEstimate est;
  const long double A = std::pow(static_cast<long double>(I.x) - I.y, static_cast<long double>(I.k));
  const long double B = std::pow(static_cast<long double>(I.x) + I.y, static_cast<long double>(I.k));
  const long double width = B - A;
  const long double nl = static_cast<long double>(n);
  const long double max_freq = std::max(std::fabs(s * A - nl), std::fabs(s * B - nl));
  const long double step = 1.0L / std::max(max_freq, width);

  // shift = x^k - n/s so that the phase is (u^k - n/s) beta.
  Real50 xk = boost::multiprecision::pow(Real50(I.x), I.k);
  const auto shift = (xk - Real50(n) / Real50(s)).convert_to<long double>();

  const auto& g = gauss();
  const auto window_panels = static_cast<std::size_t>(std::ceil(2.0L / (width * step))) + 1;
  std::vector<double> envelope;  // per-panel max |v|
  double value = 0.0;
  std::size_t panel = 0;
  for (;; ++panel) {
    if (panel >= kPanelCap) throw ResourceError("singular integral did not converge");
    const long double b0 = panel * step;
    cplx acc = 0.0;
    double env = 0.0;
    for (int i = 0; i < GaussLegendre::kOrder; ++i) {
      long double beta = b0 + 0.5L * step * (1.0L + g.node[i]);
      std::size_t up = 2 * min_panels(I, static_cast<double>(beta));
      cplx v = window_integral(I, 1.0, beta, 0.0L, shift, up);
      env = std::max(env, std::abs(v));
      acc += g.weight[i] * ipow(v, s);
    }
    value += 2.0 * acc.real() * static_cast<double>(0.5L * step);
    envelope.push_back(env);
    const long double b1 = b0 + step;
    if (b1 * width < 4.0L) continue;
    double recent = 0.0;
    for (std::size_t j = envelope.size() > window_panels ? envelope.size() - window_panels : 0;
         j < envelope.size(); ++j)
      recent = std::max(recent, envelope[j]);
    // |v| decays like 1/beta past the main lobe.
    double tail = 2.0 * std::pow(recent, s) * static_cast<double>(b1) / (s - 1);
    if (tail < 1e-4 * std::fabs(value)) {
      est.cutoff = static_cast<double>(b1);
      break;
    }
  }
  est.value = std::max(0.0, value);
  est.panels = panel + 1;
  return est;
}

SingularIntegralEstimate convolution_integral(std::int64_t n, const ShortInterval& I, int s,
                                              std::size_t cells) {
  require(cells >= kDefaultConvolutionCells, "density grid needs at least 2^14 cells");
  SingularIntegralEstimate est;
  const long double lo = static_cast<long double>(I.x) - I.y;
  const long double A = std::pow(lo, static_cast<long double>(I.k));
  const long double B = std::pow(static_cast<long double>(I.x) + I.y, static_cast<long double>(I.k));
  const long double h = (B - A) / cells;
  const long double inv_k = 1.0L / I.k;

  std::vector<double> mass(cells);
  long double prev = lo;
  for (std::size_t i = 0; i < cells; ++i) {
    long double next = i + 1 == cells ? static_cast<long double>(I.x) + I.y
                                      : std::pow(A + (i + 1) * h, inv_k);
    mass[i] = static_cast<double>(next - prev);
    prev = next;
  }

  // The s-fold sum of the cell midpoints sits at s A + (J + s/2) h.
  const int left = (s + 1) / 2;
  const int right = s - left;
  const auto& kern = simd::active_kernels();
  std::vector<std::vector<double>> chain{mass};
  for (int j = 2; j <= left; ++j) {
    const auto& prevd = chain.back();
    std::vector<double> out(prevd.size() + cells - 1);
    kern.convolve(prevd, mass, out);
    chain.push_back(std::move(out));
  }
  const auto& ga = chain[static_cast<std::size_t>(left - 1)];
  const auto& gb = chain[static_cast<std::size_t>(right - 1)];

  const long double j_real = (static_cast<long double>(n) - s * A) / h - s / 2.0L;
  auto mass_at = [&](long double jj) -> double {
    if (jj < 0) return 0.0;
    auto J = static_cast<std::size_t>(jj);
    if (J >= ga.size() + gb.size() - 1) return 0.0;
    std::size_t i0 = J >= gb.size() ? J - gb.size() + 1 : 0;
    std::size_t i1 = std::min(J, ga.size() - 1);
    double acc = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) acc += ga[i] * gb[J - i];
    return acc;
  };
  const long double j0 = std::floor(j_real);
  const double frac = static_cast<double>(j_real - j0);
  double m0 = mass_at(j0);
  double m1 = mass_at(j0 + 1);
  est.value = ((1.0 - frac) * m0 + frac * m1) / static_cast<double>(h);
  est.cells = cells;
  est.cell_width = static_cast<double>(h);
  return est;
}

}  // namespace

SingularIntegralEstimate singular_integral(std::int64_t n, const ShortInterval& interval, int s,
                                           IntegralMethod method, std::size_t cells) {
  require(s >= 3, "s must be >= 3");
  require(interval.y > 0.0 && interval.x > interval.y * 0.0, "invalid window");
  SingularIntegralEstimate est;
  const double lo_k = std::pow(interval.x - interval.y, interval.k);
  const double hi_k = std::pow(interval.x + interval.y, interval.k);
  const double nd = static_cast<double>(n);
  if (nd <= s * lo_k || nd >= s * hi_k) {
    est.value = 0.0;
  } else if (method == IntegralMethod::FourierQuadrature) {
    est = fourier_integral(n, interval, s);
  } else {
    est = convolution_integral(n, interval, s, cells);
  }
  est.n = n;
  est.k = interval.k;
  est.s = s;
  est.interval = interval;
  est.method = method;
  return est;
}

SingularIntegralComparison compare_integral_methods(std::int64_t n, const ShortInterval& interval,
                                                    int s) {
  SingularIntegralComparison c;
  c.fourier = singular_integral(n, interval, s, IntegralMethod::FourierQuadrature);
  c.convolution = singular_integral(n, interval, s, IntegralMethod::DensityConvolution);
  double scale = std::max(std::fabs(c.fourier.value), std::fabs(c.convolution.value));
  c.relative_gap = scale > 0.0 ? std::fabs(c.fourier.value - c.convolution.value) / scale : 0.0;
  c.flagged = c.relative_gap > 0.05;
  return c;
}

std::complex<double> f_star(double alpha, const ArcDissection& dissection,
                            const ShortInterval& interval, double kappa) {
  Frequency freq = Frequency::from_double(alpha);
  ArcClass cls = classify(freq, dissection);
  if (!cls.major) throw InvalidArgument("f* is defined on the major arcs only");
  const double beta = arc_offset(freq, dissection, cls.q, cls.a) / static_cast<double>(cls.q);
  const cplx S = complete_sum_S(cls.q, cls.a, interval.k);
  const cplx v = v_integral(beta, interval, 1.0);
  const double phi = static_cast<double>(euler_phi(cls.q));
  return kappa / phi * S * v / std::log(interval.x);
}

namespace {

PredictionReport assemble(std::int64_t n, int k, int s, double theta,
                          SingularSeriesEstimate series, IntegralMethod method) {
  PredictionReport r;
  r.n = n;
  r.k = k;
  r.s = s;
  r.theta = theta;
  r.interval = build_interval(n, k, s, theta);
  r.admissible = is_admissible(n, k, s);
  r.series = std::move(series);
  r.integral = singular_integral(n, r.interval, s, method);
  r.log_x = std::log(r.interval.x);
  r.prediction = r.series.value * r.integral.value / std::pow(r.log_x, s);
  r.C = r.series.value * r.integral.value * std::pow(r.interval.y, 1.0 - s) *
        std::pow(r.interval.x, k - 1);
  r.obstructed = r.series.obstructed;
  return r;
}

}  // namespace

PredictionReport predict_main_term(std::int64_t n, int k, int s, double theta, std::uint64_t qmax,
                                   IntegralMethod method) {
  build_interval(n, k, s, theta);  // validates before the expensive series
  return assemble(n, k, s, theta, singular_series(n, k, s, qmax, false), method);
}

PredictionReport predict_main_term(std::int64_t n, double theta, SingularSeriesTable& table,
                                   int k, int s, std::uint64_t qmax, IntegralMethod method) {
  (void)qmax;
  return assemble(n, k, s, theta, table.evaluate(n), method);
}

}  // namespace kglab
