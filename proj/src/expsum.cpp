#include "kglab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "kglab/error.hpp"
#include "kglab/kernels.hpp"
#include "kglab/parallel.hpp"

namespace kglab {
namespace {

struct Compensated {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

ExpSum::ExpSum(const ShortInterval& interval, const WeightFunction& w)
    : ExpSum(interval, w.values(interval)) {
  bound_ = w.bound(interval);
}

ExpSum::ExpSum(const ShortInterval& interval, std::span<const double> dense_weights)
    : interval_(interval) {
  require(interval.hi >= interval.lo, "empty window");
  require(dense_weights.size() == static_cast<std::size_t>(interval.count()),
          "weight vector does not match the window");
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m) {
    double v = dense_weights[static_cast<std::size_t>(m - interval.lo)];
    bound_ = std::max(bound_, std::fabs(v));
    if (v == 0.0) continue;
    powers_.push_back(checked_power(static_cast<std::uint64_t>(m), interval.k));
    weights_.push_back(v);
  }
}

std::complex<double> ExpSum::operator()(const Frequency& alpha) const {
  std::vector<std::uint64_t> phases(powers_.size());
  for (std::size_t i = 0; i < powers_.size(); ++i) phases[i] = phase_of(powers_[i], alpha);
  return simd::active_kernels().phase_sum(phases, weights_);
}

std::complex<double> f_eval(double alpha, const WeightFunction& w, const ShortInterval& interval) {
  return ExpSum(interval, w)(alpha);
}

std::complex<double> complete_sum_S(std::uint64_t q, std::uint64_t a, int k, std::uint64_t cap) {
  require(q >= 1, "q must be positive");
  require(k >= 1, "k must be positive");
  if (q > cap) throw ResourceError("modulus exceeds complete-sum cap");
  std::vector<std::uint64_t> phases;
  phases.reserve(q);
  const std::uint64_t ar = a % q;
  for (std::uint64_t h = 1; h <= q; ++h) {
    if (std::gcd(h, q) != 1) continue;
    std::uint64_t r = static_cast<std::uint64_t>(
        static_cast<u128>(ar) * powmod(h, static_cast<std::uint64_t>(k), q) % q);
    phases.push_back(rational_phase(r, q));
  }
  return simd::active_kernels().phase_sum(phases, {});
}

MomentResult moment_dft(const ShortInterval& interval, int t, u128 sample_cap) {
  require(t >= 1, "t must be positive");
  require(interval.hi >= interval.lo, "empty window");
  const u128 base = checked_power(static_cast<std::uint64_t>(interval.lo), interval.k);
  std::vector<u128> freq;
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m)
    freq.push_back(checked_power(static_cast<std::uint64_t>(m), interval.k) - base);
  const u128 span_max = freq.back();
  const u128 N = 2 * static_cast<u128>(t) * span_max + 1;
  if (N > sample_cap) throw ResourceError("moment sample count exceeds cap");
  const auto n64 = static_cast<std::uint64_t>(N);
  const u128 inv_n = ~u128{0} / N;

  MomentResult result;
  result.samples = N;
  const double count = static_cast<double>(freq.size());
  auto power_t = [t](double abs2) {
    double v = 1.0;
    for (int i = 0; i < t; ++i) v *= abs2;
    return v;
  };

  // |f(j/N)| = |f((N - j)/N)|, so only 1 <= j <= (N - 1)/2 are evaluated.
  const std::uint64_t half = (n64 - 1) / 2;
  constexpr std::uint64_t kChunk = 1 << 13;
  const std::size_t chunks = static_cast<std::size_t>((half + kChunk - 1) / kChunk);
  std::vector<Compensated> partial(chunks);
  const auto& kern = simd::active_kernels();

  parallel_chunks(chunks, [&](std::size_t c) {
    std::uint64_t j0 = 1 + c * kChunk;
    std::uint64_t j1 = std::min<std::uint64_t>(half, j0 + kChunk - 1);
    std::vector<std::uint64_t> residue(freq.size());
    std::vector<std::uint64_t> step(freq.size());
    std::vector<std::uint64_t> phases(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) {
      step[i] = static_cast<std::uint64_t>(freq[i] % N);
      residue[i] = static_cast<std::uint64_t>(static_cast<u128>(j0) * step[i] % N);
    }
    Compensated acc;
    for (std::uint64_t j = j0; j <= j1; ++j) {
      for (std::size_t i = 0; i < freq.size(); ++i) {
        phases[i] = static_cast<std::uint64_t>((static_cast<u128>(residue[i]) * inv_n) >> 64);
        std::uint64_t next = residue[i] + step[i];
        residue[i] = next >= n64 ? next - n64 : next;
      }
      std::complex<double> f = kern.phase_sum(phases, {});
      acc.add(power_t(std::norm(f)));
    }
    partial[c] = acc;
  });

  Compensated total;
  total.add(power_t(count * count));
  Compensated doubled;
  for (const auto& p : partial) {
    doubled.add(p.sum);
    doubled.add(p.comp);
  }
  total.add(2.0 * doubled.value());
  result.raw = total.value() / static_cast<double>(N);
  double rounded = std::nearbyint(result.raw);
  result.residual = std::fabs(result.raw - rounded);
  if (result.residual > 1e-3)
    throw InternalError("sampled moment is not an integer; sampling is inconsistent");
  result.value = static_cast<u128>(rounded);
  return result;
}

namespace {

// Sum of W(v)^2 over the t-fold power-sum distribution. Sums are kept in
// 64 bits whenever t hi^k fits, which halves the table footprint.
template <typename Sum>
double enumerate_moment(const std::vector<std::pair<u128, double>>& terms, int t,
                        std::uint64_t state_cap) {
  struct Entry {
    Sum sum;
    double weight;
  };
  std::vector<Entry> dist{{0, 1.0}};
  for (int step = 0; step < t; ++step) {
    if (static_cast<double>(dist.size()) * static_cast<double>(terms.size()) >
        static_cast<double>(state_cap))
      throw ResourceError("moment enumeration exceeds state cap");
    std::vector<Entry> next;
    next.reserve(dist.size() * terms.size());
    for (const auto& e : dist)
      for (const auto& [power, v] : terms)
        next.push_back({static_cast<Sum>(e.sum + static_cast<Sum>(power)), e.weight * v});
    std::vector<Entry>().swap(dist);
    std::sort(next.begin(), next.end(), [](const Entry& l, const Entry& r) { return l.sum < r.sum; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (out > 0 && next[out - 1].sum == next[i].sum)
        next[out - 1].weight += next[i].weight;
      else
        next[out++] = next[i];
    }
    next.resize(out);
    next.shrink_to_fit();
    dist.swap(next);
  }
  Compensated total;
  for (const auto& e : dist) total.add(e.weight * e.weight);
  return total.value();
}

}  // namespace

double moment_enum(const ShortInterval& interval, int t, const WeightFunction& w,
                   std::uint64_t state_cap) {
  require(t >= 1, "t must be positive");
  std::vector<std::pair<u128, double>> terms;
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m) {
    double v = w(m);
    if (v != 0.0) terms.emplace_back(checked_power(static_cast<std::uint64_t>(m), interval.k), v);
  }
  if (terms.empty()) return 0.0;
  const u128 top = terms.back().first;
  if (top <= ~std::uint64_t{0} / static_cast<std::uint64_t>(t))
    return enumerate_moment<std::uint64_t>(terms, t, state_cap);
  if (top > ~u128{0} / static_cast<u128>(t)) throw RangeError("t-fold power sums exceed 128 bits");
  return enumerate_moment<u128>(terms, t, state_cap);
}

int weyl_exponent(int k) {
  require(k >= 2, "k must be >= 2");
  return k == 2 ? 2 : k * k - k + 1;
}

double minor_arc_rho(int k) { return 1.0 / (31.0 * weyl_exponent(k)); }

std::string ScanReport::to_csv() const {
  std::string out = "alpha,class,q,a,abs_f,ratio\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.15g,%s,%llu,%llu,%.15g,%.15g\n", r.alpha,
                  r.major ? "major" : "minor", static_cast<unsigned long long>(r.q),
                  static_cast<unsigned long long>(r.a), r.abs_f, r.ratio);
    out += line;
  }
  return out;
}

ScanReport weyl_scan(const ShortInterval& interval, const ArcDissection& dissection,
                     std::size_t samples, const WeightFunction& w, std::uint64_t seed) {
  require(samples >= 1000, "weyl_scan needs at least 1000 samples");
  ExpSum f(interval, w);
  ScanReport report;
  report.rho = minor_arc_rho(interval.k);
  report.scale = std::pow(interval.y, 1.0 - report.rho);
  report.trivial_bound = f.weight_bound() * static_cast<double>(interval.count());
  report.f_at_zero = std::abs(f(Frequency{}));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lower = 1.0 / dissection.Q;
  std::vector<double> alphas(samples);
  for (auto& a : alphas) a = lower + unit(rng);

  report.rows.resize(samples);
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  parallel_chunks(chunks, [&](std::size_t c) {
    std::size_t end = std::min(samples, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      Frequency freq = Frequency::from_double(alphas[i]);
      ArcClass cls = classify(freq, dissection);
      double abs_f = std::abs(f(freq));
      report.rows[i] = {alphas[i], cls.major, cls.q, cls.a, abs_f, abs_f / report.scale};
    }
  });

  for (const auto& r : report.rows) {
    if (r.abs_f > report.trivial_bound * (1.0 + 1e-12) + 1e-9)
      throw InternalError("exponential sum exceeds the trivial bound");
    if (r.major) continue;
    ++report.minor_samples;
    if (report.minor_empty || r.abs_f > report.sup_minor) {
      report.sup_minor = r.abs_f;
      report.argmax_alpha = r.alpha;
    }
    report.minor_empty = false;
  }
  report.sup_ratio = report.sup_minor / report.scale;
  return report;
}

}  // namespace kglab
