#include <doctest.h>

#include <cmath>
#include <random>

#include "kglab/error.hpp"
#include "kglab/expsum.hpp"
#include "kglab/vaughan.hpp"
#include "oracles.hpp"

using namespace kglab;

namespace {

long double lambda_mass(const ShortInterval& I) {
  long double total = 0;
  for (std::int64_t m = I.lo; m <= I.hi; ++m) total += oracle::mangoldt(static_cast<std::uint64_t>(m));
  return total;
}

}  // namespace

TEST_SUITE("vaughan") {
  TEST_CASE("identity at zero and at random frequencies") {
    struct Case {
      double x;
      double theta;
      int k;
    };
    for (Case c : {Case{1e3, 0.85, 2}, Case{1e4, 0.85, 2}, Case{5e4, 0.9, 2}, Case{2e4, 0.8, 3},
                   Case{3e3, 0.7, 4}}) {
      auto I = ShortInterval::from_center(c.x, c.theta, c.k);
      auto V = vaughan_decompose(I, default_vaughan_cut(I));
      const long double mass = lambda_mass(I);
      auto at_zero = V.evaluate(Frequency{});
      CHECK(at_zero.real() == doctest::Approx(static_cast<double>(mass)).epsilon(1e-10));
      CHECK(std::fabs(at_zero.imag()) < 1e-8 * static_cast<double>(mass));

      ExpSum f(I, WeightFunction::von_mangoldt());
      std::mt19937_64 rng(static_cast<std::uint64_t>(c.x));
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        Frequency a = Frequency::from_double(std::uniform_real_distribution<double>(0, 1)(rng));
        worst = std::max(worst, std::abs(V.evaluate(a) - f(a)) / static_cast<double>(mass));
      }
      CHECK(worst < 1e-8);
    }
  }

  TEST_CASE("identity for explicit cuts") {
    auto I = ShortInterval::from_center(20'000.0, 0.85, 2);
    ExpSum f(I, WeightFunction::von_mangoldt());
    const double mass = static_cast<double>(lambda_mass(I));
    for (double X : {2.0, 7.5, 30.0, std::sqrt(I.x + I.y)}) {
      auto V = vaughan_decompose(I, X);
      Frequency a = Frequency::from_double(0.318309886);
      CHECK(std::abs(V.evaluate(a) - f(a)) / mass < 1e-8);
    }
  }

  TEST_CASE("component ranges") {
    auto I = ShortInterval::from_center(1e4, 0.85, 2);
    const double X = default_vaughan_cut(I);
    auto V = vaughan_decompose(I, X);
    CHECK(V.X == X);
    bool saw_type_one = false, saw_type_two = false;
    for (const auto& c : V.components) {
      CHECK(c.xi.size() == static_cast<std::size_t>(c.u_hi - c.u_lo + 1));
      CHECK(std::abs(c.sign) == 1);
      if (c.kind == BilinearKind::TypeI) {
        saw_type_one = true;
        CHECK(c.U <= X * X);
        CHECK(static_cast<double>(c.u_hi) <= X * X);
        CHECK((c.source == "mu-log" || c.source == "mu-lambda"));
      } else {
        saw_type_two = true;
        CHECK(c.U >= X);
        CHECK(c.U <= (I.x + I.y) / X);
        CHECK(static_cast<double>(c.u_lo) > X);
        CHECK(static_cast<double>(c.v_lo) > X);
        CHECK(c.eta.size() == static_cast<std::size_t>(c.v_hi - c.v_lo + 1));
        CHECK(c.source == "lambda-mu");
        CHECK(c.sign == -1);
      }
    }
    CHECK(saw_type_one);
    CHECK(saw_type_two);
    CHECK(V.max_coefficient_over_tau3 > 0.0);
  }

  TEST_CASE("default cut") {
    auto I = ShortInterval::from_center(1e4, 0.85, 2);
    double rho = 1.0 / 62.0;
    CHECK(default_vaughan_cut(I) == doctest::Approx(I.x * std::pow(I.y, -1.0 + 2.0 * rho)));
  }

  TEST_CASE("cut out of range") {
    auto I = ShortInterval::from_center(1e4, 0.85, 2);
    CHECK_THROWS_AS(vaughan_decompose(I, 1.5), InvalidArgument);
    CHECK_THROWS_AS(vaughan_decompose(I, 1e3), InvalidArgument);
    // Full window from 1 contains integers below X.
    auto full = ShortInterval::from_range(1, 200, 2);
    CHECK_THROWS_AS(vaughan_decompose(full, 5.0), InvalidArgument);
  }
}
