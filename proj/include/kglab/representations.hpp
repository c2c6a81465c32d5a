// Ordered-tuple representation counts n = m_1^k + ... + m_s^k over a short
// window, weighted variants and the vector-sieve combination.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kglab/interval.hpp"
#include "kglab/weights.hpp"

namespace kglab {

enum class CountMethod { Exhaustive, MeetInMiddle };
const char* to_string(CountMethod method);
CountMethod parse_count_method(const std::string& name);

inline constexpr std::uint64_t kCountTableCap = 100'000'000;
inline constexpr std::size_t kCountPrimeCap = 50'000;
// Exhaustive recursion visits at most this many leaves.
inline constexpr std::uint64_t kExhaustiveLeafCap = 200'000'000;

struct CountReport {
  std::int64_t n = 0;
  int k = 2;
  int s = 5;
  double theta = 0.0;
  ShortInterval interval;
  std::uint64_t R = 0;
  CountMethod method = CountMethod::MeetInMiddle;
  std::size_t prime_count = 0;
  double elapsed = 0.0;  // seconds
};

// Primes p_i in the window with n = p_1^k + ... + p_s^k, ordered tuples.
CountReport count_exact(std::int64_t n, int k, int s, double theta,
                        CountMethod method = CountMethod::MeetInMiddle);

// Sum over (p_1..p_{s-5}, m_1..m_5) in the window of
// lambda(m_1) lambda_plus(m_2) ... lambda_plus(m_5). Requires s >= 5.
double count_weighted(std::int64_t n, int k, int s, double theta, const WeightFunction& lambda,
                      const WeightFunction& lambda_plus,
                      CountMethod method = CountMethod::MeetInMiddle);

// lambda_minus(m) <= 1_P(m) <= lambda_plus(m) for every m in the window.
bool check_domination(const WeightFunction& lambda_minus, const WeightFunction& lambda_plus,
                      const ShortInterval& interval);

struct VectorSieveResult {
  double lower = 0.0;  // 5 R(lambda-) - 4 R(lambda+)
  double weighted_minus = 0.0;
  double weighted_plus = 0.0;
  std::optional<std::uint64_t> exact;  // when count_exact fits the caps
};

// Throws InvalidArgument if the weights fail check_domination and
// InternalError if the lower bound exceeds the exact count.
VectorSieveResult vector_sieve_lower(std::int64_t n, int k, int s, double theta,
                                     const WeightFunction& lambda_minus,
                                     const WeightFunction& lambda_plus);

struct SieveTuple {
  std::array<double, 5> e{};
  std::array<double, 5> lambda_minus{};
  std::array<double, 5> lambda_plus{};
  double lhs = 0.0;  // e_1 ... e_5
  double rhs = 0.0;  // sum_i lambda-_i prod_{j != i} lambda+_j - 4 prod lambda+_j
};

struct PointwiseSieveReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t violations = 0;
  std::optional<SieveTuple> witness;  // first violation
  // The sampled box: e in {0,1}, e <= lambda+ <= 1, -2 <= lambda- <= e.
  // The inequality is only asserted inside this box.
  std::string box = "lambda+ in [e,1], lambda- in [-2,e]";
};

double vector_sieve_rhs(const SieveTuple& t);
PointwiseSieveReport check_vector_sieve_pointwise(std::uint64_t samples, std::uint64_t seed);

struct SieveWeightPair {
  WeightFunction lower;
  WeightFunction upper;
};

// lambda+ = indicator of no prime factor <= z, lambda- = lambda+ minus the
// number of prime factors in (z, sqrt(x + y)]. Requires 1 <= z <= sqrt(x + y).
SieveWeightPair toy_weights(const ShortInterval& interval, double z);

}  // namespace kglab
