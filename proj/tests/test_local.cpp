#include <doctest.h>

#include <map>
#include <random>

#include "kglab/error.hpp"
#include "kglab/local.hpp"
#include "oracles.hpp"

using namespace kglab;

namespace {

std::uint64_t K_of(int k) { return static_cast<std::uint64_t>(local_profile(k).K); }

}  // namespace

TEST_SUITE("local") {
  TEST_CASE("profiles for small k") {
    auto p2 = local_profile(2);
    REQUIRE(p2.factors.size() == 2);
    CHECK(p2.factors[0].p == 2);
    CHECK(p2.factors[0].tau == 1);
    CHECK(p2.factors[0].gamma == 3);
    CHECK(p2.factors[1].p == 3);
    CHECK(p2.factors[1].tau == 0);
    CHECK(p2.factors[1].gamma == 1);
    CHECK(K_of(2) == 24);

    auto p3 = local_profile(3);
    REQUIRE(p3.factors.size() == 1);
    CHECK(p3.factors[0].p == 2);
    CHECK(p3.factors[0].gamma == 1);
    CHECK(K_of(3) == 2);

    auto p4 = local_profile(4);
    REQUIRE(p4.factors.size() == 3);
    CHECK(p4.factors[0].gamma == 4);
    CHECK(K_of(4) == 240);
  }

  TEST_CASE("profile invariants up to k = 64") {
    for (int k = 2; k <= 64; ++k) {
      auto prof = local_profile(k);
      u128 product = 1;
      for (const auto& f : prof.factors) {
        CHECK(k % static_cast<int>(f.p - 1) == 0);
        std::uint64_t pt = 1;
        for (int i = 0; i < f.tau; ++i) pt *= f.p;
        CHECK(k % pt == 0);
        CHECK(k % (pt * f.p) != 0);
        CHECK(f.gamma == ((f.p == 2 && f.tau > 0) ? f.tau + 2 : f.tau + 1));
        for (int i = 0; i < f.gamma; ++i) product *= f.p;
      }
      CHECK(product == prof.K);
      // Every prime p <= k + 1 with (p - 1) | k is listed.
      std::size_t expected = 0;
      for (int p = 2; p <= k + 1; ++p)
        if (oracle::trial_prime(static_cast<std::uint64_t>(p)) && k % (p - 1) == 0) ++expected;
      CHECK(prof.factors.size() == expected);
    }
    CHECK_THROWS_AS(local_profile(1), InvalidArgument);
    CHECK_THROWS_AS(local_profile(65), InvalidArgument);
  }

  TEST_CASE("admissibility") {
    CHECK(is_admissible(29, 2, 5));
    CHECK_FALSE(is_admissible(21, 2, 5));
    for (int k = 2; k <= 12; ++k)
      for (int s = 1; s <= 20; ++s) CHECK(is_admissible(s, k, s));
  }

  TEST_CASE("unit-solution DP matches tuple enumeration") {
    for (std::uint64_t q : {1, 2, 3, 4, 8, 9, 12, 24}) {
      for (int k : {2, 3}) {
        for (int s : {1, 2, 3, 4}) {
          for (std::int64_t n = 0; n < static_cast<std::int64_t>(q); ++n) {
            CHECK(unit_solution_count(n, k, s, q) == oracle::unit_tuples(q, n, k, s));
          }
        }
      }
    }
  }

  TEST_CASE("admissible classes are exactly the unit-soluble classes mod K") {
    // k-th powers of units are 1 mod K(k), so a unit solution exists iff
    // n = s (mod K). Checked for 10^4 random n per (k, s).
    std::mt19937_64 rng(2024);
    for (int k = 2; k <= 12; ++k) {
      const std::uint64_t K = K_of(k);
      for (int s : {3, 5, 7}) {
        const auto dist = unit_solution_distribution(k, s, K);
        for (int i = 0; i < 10'000; ++i) {
          std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 1'000'000'000);
          bool soluble = dist[static_cast<std::size_t>(n % static_cast<std::int64_t>(K))] > 0;
          CHECK(soluble == is_admissible(n, k, s));
        }
      }
    }
  }

  TEST_CASE("distribution against tuple enumeration mod K for small K") {
    for (int k : {2, 3, 5}) {
      const std::uint64_t K = K_of(k);
      if (K > 24) continue;
      const auto dist = unit_solution_distribution(k, 4, K);
      for (std::uint64_t r = 0; r < K; ++r)
        CHECK(dist[r] == oracle::unit_tuples(K, static_cast<std::int64_t>(r), k, 4));
    }
  }
}
