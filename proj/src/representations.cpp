#include "kglab/representations.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "kglab/error.hpp"
#include "kglab/parallel.hpp"
#include "kglab/phase.hpp"

namespace kglab {
namespace {

template <typename W>
struct Slot {
  std::vector<std::pair<u128, W>> entries;  // (m^k, weight), increasing in m^k
};

// m^k, or nullopt once it exceeds n.
std::optional<u128> bounded_power(std::uint64_t m, int k, u128 n) {
  u128 acc = 1;
  for (int i = 0; i < k; ++i) {
    if (m != 0 && acc > n / m) return std::nullopt;
    acc *= m;
  }
  if (acc > n) return std::nullopt;
  return acc;
}

template <typename W>
Slot<W> make_slot(const std::vector<std::pair<std::uint64_t, W>>& values, int k, u128 n) {
  Slot<W> slot;
  for (auto [m, w] : values) {
    if (w == W{}) continue;
    if (auto p = bounded_power(m, k, n)) slot.entries.emplace_back(*p, w);
  }
  std::sort(slot.entries.begin(), slot.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return slot;
}

template <typename W>
class Counter {
 public:
  Counter(u128 n, std::vector<const Slot<W>*> slots) : n_(n), slots_(std::move(slots)) {}

  W meet_in_middle() const {
    const std::size_t left = slots_.size() / 2;
    double full = 1.0;
    for (std::size_t j = 0; j < left; ++j) full *= static_cast<double>(slots_[j]->entries.size());
    if (full > static_cast<double>(kCountTableCap)) throw ResourceError("sum table exceeds cap");
    std::vector<std::pair<u128, W>> table{{0, W{1}}};
    for (std::size_t j = 0; j < left; ++j) {
      std::vector<std::pair<u128, W>> next;
      for (const auto& [sum, w] : table) {
        for (const auto& [p, wp] : slots_[j]->entries) {
          if (sum + p > n_) break;
          next.emplace_back(sum + p, w * wp);
        }
      }
      std::sort(next.begin(), next.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      table.clear();
      for (const auto& e : next) {
        if (!table.empty() && table.back().first == e.first)
          table.back().second += e.second;
        else
          table.push_back(e);
      }
    }
    auto leaf = [&](u128 partial) -> W {
      const u128 target = n_ - partial;
      auto it = std::lower_bound(table.begin(), table.end(), target,
                                 [](const auto& e, u128 t) { return e.first < t; });
      return it != table.end() && it->first == target ? it->second : W{};
    };
    return probe(left, leaf);
  }

  W exhaustive() const {
    std::uint64_t visited = 0;
    return recurse(0, 0, W{1}, visited);
  }

 private:
  // Sum over tuples of slots [first, end) of weight * leaf(partial sum),
  // parallel over the first slot and reduced in slot order.
  template <typename Leaf>
  W probe(std::size_t first, const Leaf& leaf) const {
    if (first == slots_.size()) return leaf(0);
    const auto& head = slots_[first]->entries;
    std::vector<W> partial(head.size(), W{});
    parallel_chunks(head.size(), [&](std::size_t i) {
      if (head[i].first > n_) return;
      partial[i] = head[i].second * descend(first + 1, head[i].first, leaf);
    });
    W total{};
    for (const W& v : partial) total += v;
    return total;
  }

  template <typename Leaf>
  W descend(std::size_t j, u128 sum, const Leaf& leaf) const {
    if (j == slots_.size()) return leaf(sum);
    W total{};
    for (const auto& [p, w] : slots_[j]->entries) {
      if (sum + p > n_) break;
      W inner = descend(j + 1, sum + p, leaf);
      if (inner != W{}) total += w * inner;
    }
    return total;
  }

  W recurse(std::size_t j, u128 sum, W weight, std::uint64_t& visited) const {
    if (j == slots_.size()) {
      if (++visited > kExhaustiveLeafCap) throw ResourceError("exhaustive enumeration exceeds cap");
      return sum == n_ ? weight : W{};
    }
    W total{};
    for (const auto& [p, w] : slots_[j]->entries) {
      if (sum + p > n_) break;
      total += recurse(j + 1, sum + p, weight * w, visited);
    }
    return total;
  }

  u128 n_;
  std::vector<const Slot<W>*> slots_;
};

template <typename W>
W run_counter(u128 n, std::vector<const Slot<W>*> slots, CountMethod method) {
  Counter<W> counter(n, std::move(slots));
  return method == CountMethod::Exhaustive ? counter.exhaustive() : counter.meet_in_middle();
}

std::vector<std::uint64_t> window_primes(const ShortInterval& I) {
  // A window this wide holds far more than the cap (density >= 1/(2 log hi)),
  // so skip the sieve.
  const double width = static_cast<double>(I.count());
  if (width / (2.0 * std::log(std::max(3.0, I.x + I.y))) > static_cast<double>(kCountPrimeCap))
    throw ResourceError("too many primes in the window");
  auto primes = primes_in_interval(I).primes;
  if (primes.size() > kCountPrimeCap) throw ResourceError("too many primes in the window");
  return primes;
}

template <typename W>
std::vector<std::pair<std::uint64_t, W>> indicator_values(const std::vector<std::uint64_t>& ms) {
  std::vector<std::pair<std::uint64_t, W>> out;
  out.reserve(ms.size());
  for (auto m : ms) out.emplace_back(m, W{1});
  return out;
}

std::vector<std::pair<std::uint64_t, double>> weight_values(const WeightFunction& w,
                                                            const ShortInterval& I) {
  auto dense = w.values(I);
  std::vector<std::pair<std::uint64_t, double>> out;
  for (std::int64_t m = I.lo; m <= I.hi; ++m) {
    double v = dense[static_cast<std::size_t>(m - I.lo)];
    if (v != 0.0 && m >= 0) out.emplace_back(static_cast<std::uint64_t>(m), v);
  }
  return out;
}

}  // namespace

const char* to_string(CountMethod method) {
  return method == CountMethod::Exhaustive ? "exhaustive" : "meet-in-middle";
}

CountMethod parse_count_method(const std::string& name) {
  if (name == "exhaustive") return CountMethod::Exhaustive;
  if (name == "meet-in-middle") return CountMethod::MeetInMiddle;
  throw InvalidArgument("unknown count method: " + name);
}

CountReport count_exact(std::int64_t n, int k, int s, double theta, CountMethod method) {
  require(s >= 1, "s must be positive");
  const auto start = std::chrono::steady_clock::now();
  CountReport r;
  r.n = n;
  r.k = k;
  r.s = s;
  r.theta = theta;
  r.method = method;
  r.interval = build_interval(n, k, s, theta);
  const auto primes = window_primes(r.interval);
  r.prime_count = primes.size();
  const u128 target = static_cast<u128>(n);
  const auto slot = make_slot(indicator_values<std::uint64_t>(primes), k, target);
  r.R = run_counter<std::uint64_t>(
      target, std::vector<const Slot<std::uint64_t>*>(static_cast<std::size_t>(s), &slot), method);
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double count_weighted(std::int64_t n, int k, int s, double theta, const WeightFunction& lambda,
                      const WeightFunction& lambda_plus, CountMethod method) {
  require(s >= 5, "weighted counts need s >= 5");
  const ShortInterval I = build_interval(n, k, s, theta);
  const u128 target = static_cast<u128>(n);
  const auto primes = window_primes(I);
  const auto prime_slot = make_slot(indicator_values<double>(primes), k, target);
  const auto lambda_slot = make_slot(weight_values(lambda, I), k, target);
  const auto plus_slot = make_slot(weight_values(lambda_plus, I), k, target);
  std::vector<const Slot<double>*> slots(static_cast<std::size_t>(s - 5), &prime_slot);
  slots.push_back(&lambda_slot);
  for (int j = 0; j < 4; ++j) slots.push_back(&plus_slot);
  return run_counter<double>(target, std::move(slots), method);
}

bool check_domination(const WeightFunction& lambda_minus, const WeightFunction& lambda_plus,
                      const ShortInterval& interval) {
  const auto primes = primes_in_interval(interval).primes;
  const auto minus = lambda_minus.values(interval);
  const auto plus = lambda_plus.values(interval);
  std::size_t next = 0;
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m) {
    double indicator = 0.0;
    if (next < primes.size() && static_cast<std::int64_t>(primes[next]) == m) {
      indicator = 1.0;
      ++next;
    }
    auto i = static_cast<std::size_t>(m - interval.lo);
    if (minus[i] > indicator || indicator > plus[i]) return false;
  }
  return true;
}

VectorSieveResult vector_sieve_lower(std::int64_t n, int k, int s, double theta,
                                     const WeightFunction& lambda_minus,
                                     const WeightFunction& lambda_plus) {
  const ShortInterval I = build_interval(n, k, s, theta);
  if (!check_domination(lambda_minus, lambda_plus, I))
    throw InvalidArgument("sieve weights do not bracket the prime indicator on the window");
  VectorSieveResult r;
  r.weighted_minus = count_weighted(n, k, s, theta, lambda_minus, lambda_plus);
  r.weighted_plus = count_weighted(n, k, s, theta, lambda_plus, lambda_plus);
  r.lower = 5.0 * r.weighted_minus - 4.0 * r.weighted_plus;
  try {
    r.exact = count_exact(n, k, s, theta).R;
  } catch (const ResourceError&) {
    r.exact.reset();
  }
  if (r.exact) {
    const auto exact = static_cast<double>(*r.exact);
    if (r.lower > exact + 1e-9 * std::max(1.0, std::fabs(r.lower)))
      throw InternalError("vector-sieve lower bound exceeds the exact count");
  }
  return r;
}

double vector_sieve_rhs(const SieveTuple& t) {
  double all_plus = 1.0;
  for (double v : t.lambda_plus) all_plus *= v;
  double sum = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < 5; ++j)
      if (j != i) others *= t.lambda_plus[j];
    sum += t.lambda_minus[i] * others;
  }
  return sum - 4.0 * all_plus;
}

PointwiseSieveReport check_vector_sieve_pointwise(std::uint64_t samples, std::uint64_t seed) {
  PointwiseSieveReport report;
  report.samples = samples;
  report.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution edge(0.25);
  // Box endpoints are drawn with positive probability since equality cases
  // sit there.
  auto draw = [&](double lo, double hi) {
    if (edge(rng)) return coin(rng) ? lo : hi;
    return lo + (hi - lo) * unit(rng);
  };
  for (std::uint64_t i = 0; i < samples; ++i) {
    SieveTuple t;
    t.lhs = 1.0;
    for (std::size_t j = 0; j < 5; ++j) {
      t.e[j] = coin(rng) ? 1.0 : 0.0;
      t.lambda_plus[j] = draw(t.e[j], 1.0);
      t.lambda_minus[j] = draw(-2.0, t.e[j]);
      t.lhs *= t.e[j];
    }
    t.rhs = vector_sieve_rhs(t);
    if (t.lhs < t.rhs - 1e-12) {
      if (!report.witness) report.witness = t;
      ++report.violations;
    }
  }
  return report;
}

SieveWeightPair toy_weights(const ShortInterval& interval, double z) {
  const double limit = std::sqrt(interval.x + interval.y);
  if (!(z >= 1.0 && z <= limit)) throw InvalidArgument("z must lie in [1, sqrt(x + y)]");
  return {WeightFunction::sieve_lower(z, limit), WeightFunction::sieve_upper(z)};
}

}  // namespace kglab
