#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "kglab/arcs.hpp"
#include "kglab/error.hpp"
#include "kglab/expsum.hpp"
#include "oracles.hpp"

using namespace kglab;

namespace {

// Direct count of ordered 2t-tuples with equal power sums, weighted.
template <typename W>
long double brute_moment(std::int64_t lo, std::int64_t hi, int k, int t, W w) {
  std::map<oracle::u128, long double> dist{{0, 1.0L}};
  for (int i = 0; i < t; ++i) {
    std::map<oracle::u128, long double> next;
    for (auto [sum, weight] : dist)
      for (std::int64_t m = lo; m <= hi; ++m)
        if (w(m) != 0) next[sum + oracle::ipow(static_cast<std::uint64_t>(m), k)] += weight * w(m);
    dist.swap(next);
  }
  long double total = 0;
  for (auto [sum, weight] : dist) total += weight * weight;
  return total;
}

}  // namespace

TEST_SUITE("expsum") {
  TEST_CASE("f at zero, integer shifts and a three-term sum") {
    auto I = build_interval(845, 2, 5, 0.85);
    auto unit = WeightFunction::unit();
    auto f0 = f_eval(0.0, unit, I);
    CHECK(f0.real() == doctest::Approx(static_cast<double>(I.count())));
    CHECK(f0.imag() == doctest::Approx(0.0));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
      // Dyadic so that a + 3 is exact in double; the sums must then coincide.
      double a = std::ldexp(static_cast<double>(rng() >> 14), -50);
      auto x = f_eval(a, unit, I);
      auto y = f_eval(a + 3.0, unit, I);
      CHECK(x == y);
    }
    auto three = f_eval(0.5, unit, ShortInterval::from_range(1, 3, 2));
    CHECK(three.real() == doctest::Approx(-1.0));
    CHECK(std::fabs(three.imag()) < 1e-14);
  }

  TEST_CASE("f at rationals against exact residues") {
    for (int k : {2, 3, 4}) {
      auto I = ShortInterval::from_range(1000, 1400, k);
      ExpSum f(I, WeightFunction::von_mangoldt());
      for (std::uint64_t q : {3, 7, 97, 1009, 65537}) {
        for (std::uint64_t a : {std::uint64_t{1}, q / 2, q - 1}) {
          auto want = oracle::f_rational(a, q, I.lo, I.hi, k,
                                         [](std::int64_t m) { return oracle::mangoldt(static_cast<std::uint64_t>(m)); });
          auto got = f(Frequency::from_rational(static_cast<std::int64_t>(a), q));
          CHECK(std::abs(std::complex<long double>(got) - want) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("large powers keep their phase") {
    // m^5 ~ 1e25 overflows 64 bits but not the fixed-point product.
    auto I = ShortInterval::from_range(100'000, 100'050, 5);
    ExpSum f(I, WeightFunction::unit());
    auto want = oracle::f_rational(12345, 99991, I.lo, I.hi, 5, [](std::int64_t) { return 1.0L; });
    auto got = f(Frequency::from_rational(12345, 99991));
    CHECK(std::abs(std::complex<long double>(got) - want) < 1e-9);
  }

  TEST_CASE("conjugate symmetry") {
    auto I = build_interval(1'000'000, 3, 7, 0.8);
    ExpSum f(I, WeightFunction::prime_indicator());
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
      Frequency a = Frequency::from_double(std::uniform_real_distribution<double>(0, 1)(rng));
      CHECK(std::abs(f(a.negated()) - std::conj(f(a))) < 1e-10);
    }
  }

  TEST_CASE("complete sums") {
    CHECK(std::abs(complete_sum_S(1, 1, 2) - std::complex<double>(1, 0)) < 1e-14);
    CHECK(std::abs(complete_sum_S(2, 1, 2) - std::complex<double>(-1, 0)) < 1e-14);
    CHECK(std::abs(complete_sum_S(4, 1, 2) - std::complex<double>(0, 2)) < 1e-14);
    for (std::uint64_t q = 1; q <= 60; ++q)
      for (std::uint64_t a = 1; a <= q; ++a)
        for (int k : {2, 3, 5}) {
          auto got = complete_sum_S(q, a, k);
          CHECK(std::abs(std::complex<long double>(got) - oracle::S(q, a, k)) < 1e-12);
        }
    CHECK_THROWS_AS(complete_sum_S(2'000'000, 1, 2), ResourceError);
  }

  TEST_CASE("|S|^2 by the h <-> q - h pairing") {
    for (std::uint64_t q : {5, 12, 25, 64, 81, 105, 997}) {
      for (int k : {2, 3, 4}) {
        for (std::uint64_t a = 1; a < q; a += (q / 7) + 1) {
          if (std::gcd(a, q) != 1) continue;
          std::complex<long double> paired = 0;
          for (std::uint64_t h = 1; 2 * h <= q; ++h) {
            if (std::gcd(h, q) != 1) continue;
            auto term = [&](std::uint64_t v) {
              return oracle::e_rational(
                  static_cast<std::uint64_t>(static_cast<oracle::u128>(a) * oracle::pow_mod(v, k, q) % q), q);
            };
            paired += term(h);
            if (2 * h != q) paired += term(q - h);
          }
          double direct = std::norm(complete_sum_S(q, a, k));
          CHECK(std::fabs(direct - static_cast<double>(std::norm(paired))) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("moments on {11..20}") {
    auto I = ShortInterval::from_range(11, 20, 2);
    CHECK(moment_dft(I, 2).value == 190);
    CHECK(moment_enum(I, 2, WeightFunction::unit()) == 190.0);
    // Primes 11, 13, 17, 19: four diagonal sums with r = 1 and six
    // off-diagonal sums with r = 2 give 4 + 6 * 4 = 28.
    CHECK(moment_enum(I, 2, WeightFunction::prime_indicator()) == 28.0);
    CHECK(static_cast<double>(brute_moment(11, 20, 2, 2, [](std::int64_t m) {
            return oracle::trial_prime(static_cast<std::uint64_t>(m)) ? 1.0L : 0.0L;
          })) == 28.0);
  }

  TEST_CASE("Parseval and the cubic example") {
    for (auto [lo, hi, k] : std::vector<std::tuple<int, int, int>>{{5, 10, 3}, {1, 30, 2}, {40, 90, 3}}) {
      auto I = ShortInterval::from_range(lo, hi, k);
      CHECK(moment_dft(I, 1).value == static_cast<u128>(I.count()));
      CHECK(moment_enum(I, 1, WeightFunction::unit()) == static_cast<double>(I.count()));
      auto d = moment_dft(I, 2);
      CHECK(static_cast<double>(d.value) == moment_enum(I, 2, WeightFunction::unit()));
      CHECK(d.residual < 1e-6);
    }
  }

  TEST_CASE("weighted enumeration matches brute force") {
    std::mt19937_64 rng(12);
    std::map<std::int64_t, double> table;
    for (std::int64_t m = 20; m <= 45; ++m) table[m] = std::uniform_real_distribution<double>(-1, 1)(rng);
    auto w = WeightFunction::table(table, 1.0);
    auto I = ShortInterval::from_range(20, 45, 2);
    for (int t : {1, 2, 3}) {
      long double want = brute_moment(20, 45, 2, t, [&](std::int64_t m) { return static_cast<long double>(table[m]); });
      CHECK(moment_enum(I, t, w) == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
    }
  }

  TEST_CASE("moment caps") {
    auto I = ShortInterval::from_range(1000, 2000, 3);
    CHECK_THROWS_AS(moment_dft(I, 2, 1000), ResourceError);
    CHECK_THROWS_AS(moment_enum(I, 3, WeightFunction::unit(), 1000), ResourceError);
  }

  TEST_CASE("mean-value slope at desk scale") {
    // log2-slope of I_4 against y for y = x^0.85, x doubling; the gate is
    // s - 1 + 0.3 with s = 4.
    std::vector<double> ys, moments;
    for (double x : {2000.0, 4000.0, 8000.0, 16000.0}) {
      auto I = ShortInterval::from_center(x, 0.85, 2);
      ys.push_back(I.y);
      moments.push_back(moment_enum(I, 2, WeightFunction::unit()));
    }
    for (std::size_t i = 1; i < ys.size(); ++i) {
      double slope = std::log2(moments[i] / moments[i - 1]) / std::log2(ys[i] / ys[i - 1]);
      MESSAGE("I_4 slope " << slope);
      CHECK(slope < 3.3);
    }
  }

  TEST_CASE("Weyl exponents") {
    CHECK(weyl_exponent(2) == 2);
    CHECK(weyl_exponent(3) == 7);
    CHECK(weyl_exponent(4) == 13);
    CHECK(minor_arc_rho(2) == doctest::Approx(1.0 / 62.0));
  }

  TEST_CASE("scan with every point major") {
    auto I = build_interval(1'000'000, 2, 5, 0.85);
    auto D = ArcDissection::from_parameters(4.0, 2.0);
    auto r = weyl_scan(I, D, 1000, WeightFunction::prime_indicator(), 1);
    CHECK(r.minor_empty);
    CHECK(r.minor_samples == 0);
    CHECK(r.sup_minor == 0.0);
  }

  TEST_CASE("minor-arc sup stays below the peak") {
    auto I = ShortInterval::from_center(10'000.0, 0.85, 2);
    auto D = build_dissection(I, 0.05);
    auto r = weyl_scan(I, D, 100'000, WeightFunction::prime_indicator(), 99);
    CHECK_FALSE(r.minor_empty);
    CHECK(r.sup_minor < r.f_at_zero);
    for (const auto& row : r.rows) CHECK(row.abs_f <= r.trivial_bound);
    CHECK(r.to_csv().rfind("alpha,class,q,a,abs_f,ratio\n", 0) == 0);
  }

  TEST_CASE("scans are reproducible from the seed") {
    auto I = build_interval(500'000, 2, 5, 0.9);
    auto D = build_dissection(I, 0.05);
    auto a = weyl_scan(I, D, 2000, WeightFunction::von_mangoldt(), 5).to_csv();
    auto b = weyl_scan(I, D, 2000, WeightFunction::von_mangoldt(), 5).to_csv();
    auto c = weyl_scan(I, D, 2000, WeightFunction::von_mangoldt(), 6).to_csv();
    CHECK(a == b);
    CHECK(a != c);
    CHECK_THROWS_AS(weyl_scan(I, D, 999, WeightFunction::unit(), 5), InvalidArgument);
  }
}
