#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sedsim/error.hpp"
#include "sedsim/interference.hpp"
#include "sedsim/random.hpp"

using namespace sedsim;
using namespace sedsim::interference;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLambda = 500e-9;

// Direct evaluation of the two-cell product, written independently of the
// library's detector plumbing.
double oracle_rate(double lambda, double d1, double d2, double phi, Regime regime) {
  const double a = std::cos(kPi * d1 / lambda + phi / 2.0);
  const double b = std::cos(kPi * d2 / lambda + phi / 2.0);
  return regime == Regime::amplitude ? a * b : a * a * b * b;
}

// Midpoint rule over one period; spectrally accurate for trigonometric
// polynomials of low order.
double oracle_mean(double lambda, double d1, double d2, Regime regime) {
  const int n = 4096;
  long double acc = 0.0L;
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * kPi * (k + 0.5) / n;
    acc += oracle_rate(lambda, d1, d2, phi, regime);
  }
  return static_cast<double>(acc / n);
}

}  // namespace

TEST_CASE("coincidence rate examples") {
  const TwoSourceSetup aligned(kLambda, 0.0, 0.0, Regime::amplitude);
  CHECK(coincidence_rate(aligned, 0.0) == doctest::Approx(1.0));
  CHECK(std::fabs(coincidence_rate(aligned, kPi)) < 1e-30);
  const TwoSourceSetup aligned_i(kLambda, 0.0, 0.0, Regime::intensity);
  CHECK(coincidence_rate(aligned_i, 0.0) == doctest::Approx(1.0));
  CHECK(std::fabs(coincidence_rate(aligned_i, kPi)) < 1e-30);
}

TEST_CASE("coincidence rate matches direct formula") {
  SplitMix64 gen(derive_seed(31, {0}));
  for (int i = 0; i < 2000; ++i) {
    const double d1 = (uniform01(gen) - 0.5) * 4.0 * kLambda;
    const double d2 = (uniform01(gen) - 0.5) * 4.0 * kLambda;
    const double phi = 2.0 * kPi * uniform01(gen);
    for (Regime r : {Regime::amplitude, Regime::intensity}) {
      const TwoSourceSetup s(kLambda, d1, d2, r);
      CHECK(std::fabs(coincidence_rate(s, phi) - oracle_rate(kLambda, d1, d2, phi, r)) <= 1e-12);
    }
  }
}

TEST_CASE("closed forms agree with numeric phase integration") {
  for (double frac : {0.0, 0.1, 0.25, 0.5, 0.77, 1.0, 1.5, -0.3}) {
    for (Regime r : {Regime::amplitude, Regime::intensity}) {
      const TwoSourceSetup s(kLambda, frac * kLambda + 1e-7, 1e-7, r);
      CHECK(closed_form_mean_coincidence(s) ==
            doctest::Approx(oracle_mean(kLambda, s.delta1_m, s.delta2_m, r)).scale(1.0).epsilon(1e-12));
    }
  }
  const TwoSourceSetup node(kLambda, kLambda / 2.0, 0.0, Regime::amplitude);
  CHECK(std::fabs(closed_form_mean_coincidence(node)) < 1e-15);
  CHECK(closed_form_mean_coincidence(TwoSourceSetup(kLambda, 0, 0, Regime::amplitude)) == 0.5);
  CHECK(closed_form_mean_coincidence(TwoSourceSetup(kLambda, 0, 0, Regime::intensity)) == 0.375);
}

TEST_CASE("monte carlo agrees with closed form and error shrinks as 1/sqrt(n)") {
  for (Regime r : {Regime::amplitude, Regime::intensity}) {
    for (double frac : {0.0, 0.3, 0.5}) {
      std::vector<double> errors;
      for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL}) {
        const TwoSourceSetup s(kLambda, frac * kLambda, 0.0, r, n);
        const auto est = monte_carlo_mean_coincidence(s, {11, 0, 1});
        CHECK(est.standard_error > 0.0);
        CHECK(std::fabs(est.mean - closed_form_mean_coincidence(s)) <= 4.0 * est.standard_error);
        errors.push_back(est.standard_error);
      }
      CHECK(errors[0] / errors[1] == doctest::Approx(std::sqrt(10.0)).epsilon(0.1));
      CHECK(errors[1] / errors[2] == doctest::Approx(std::sqrt(10.0)).epsilon(0.1));
    }
  }
}

TEST_CASE("monte carlo with a million trials") {
  const TwoSourceSetup s(kLambda, 0.0, 0.0, Regime::amplitude, 1000000);
  const auto est = mean_coincidence(s, Averaging::monte_carlo, {5, 0, 0});
  CHECK(std::fabs(est.mean - 0.5) <= 3.0 * est.standard_error);
}

TEST_CASE("only the path difference matters") {
  // Dyadic multiples of the wavelength keep the shift exact in binary.
  const double lambda = 0.5;
  for (double shift : {0.25, 1.0, -3.5, 1024.0}) {
    for (Regime r : {Regime::amplitude, Regime::intensity}) {
      const TwoSourceSetup a(lambda, 0.375, 0.125, r, 5000);
      const TwoSourceSetup b(lambda, 0.375 + shift, 0.125 + shift, r, 5000);
      CHECK(closed_form_mean_coincidence(a) == closed_form_mean_coincidence(b));
      const auto ma = monte_carlo_mean_coincidence(a, {3, 0, 1});
      const auto mb = monte_carlo_mean_coincidence(b, {3, 0, 1});
      CHECK(std::fabs(ma.mean - mb.mean) <= 4.0 * std::hypot(ma.standard_error, mb.standard_error));
    }
  }
}

TEST_CASE("fringe periods") {
  for (double frac : {0.0, 0.13, 0.5, 0.81}) {
    const double d = frac * kLambda;
    const auto amp = [&](double x) {
      return closed_form_mean_coincidence(TwoSourceSetup(kLambda, x, 0.0, Regime::amplitude));
    };
    const auto inten = [&](double x) {
      return closed_form_mean_coincidence(TwoSourceSetup(kLambda, x, 0.0, Regime::intensity));
    };
    CHECK(amp(d + 2.0 * kLambda) == doctest::Approx(amp(d)).scale(1.0).epsilon(1e-12));
    CHECK(amp(d + kLambda) == doctest::Approx(-amp(d)).scale(1.0).epsilon(1e-12));
    CHECK(inten(d + kLambda) == doctest::Approx(inten(d)).scale(1.0).epsilon(1e-12));
  }
  // Intensity regime is not periodic over half a wavelength (minimum at lambda/2).
  CHECK(closed_form_mean_coincidence(TwoSourceSetup(kLambda, kLambda / 2, 0, Regime::intensity)) ==
        doctest::Approx(0.125));
}

TEST_CASE("monte carlo is identical across worker counts") {
  const TwoSourceSetup s(kLambda, 0.2 * kLambda, 0.0, Regime::amplitude, 50000);
  const auto one = monte_carlo_mean_coincidence(s, {77, 4, 1});
  for (unsigned w : {2u, 3u, 8u, 0u}) {
    const auto many = monte_carlo_mean_coincidence(s, {77, 4, w});
    CHECK(many.mean == one.mean);
    CHECK(many.standard_error == one.standard_error);
  }
  const auto other_seed = monte_carlo_mean_coincidence(s, {78, 4, 1});
  CHECK(other_seed.mean != one.mean);
}

TEST_CASE("fringe scans") {
  const TwoSourceSetup base(kLambda, 0.0, 0.0, Regime::amplitude, 2000);

  SUBCASE("single point") {
    const auto t = scan_fringes(base, {0.0}, Averaging::closed_form);
    REQUIRE(t.size() == 1);
    CHECK(t[0].mean_coincidence == 0.5);
    CHECK(t[0].standard_error == 0.0);
  }

  SUBCASE("symmetric range gives symmetric table") {
    const auto deltas = linspace(-kLambda, kLambda, 41);
    for (Regime r : {Regime::amplitude, Regime::intensity}) {
      const TwoSourceSetup s(kLambda, 0.0, 0.0, r);
      const auto t = scan_fringes(s, deltas, Averaging::closed_form);
      for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(t[i].mean_coincidence ==
              doctest::Approx(t[t.size() - 1 - i].mean_coincidence).scale(1.0).epsilon(1e-14));
      }
    }
  }

  SUBCASE("monte carlo scan tracks the closed form") {
    const TwoSourceSetup s(kLambda, 0.0, 0.0, Regime::intensity, 20000);
    const auto deltas = linspace(0.0, kLambda, 101);
    const auto mc = scan_fringes(s, deltas, Averaging::monte_carlo, {9, 0, 1});
    const auto cf = scan_fringes(s, deltas, Averaging::closed_form);
    REQUIRE(mc.size() == 101);
    int outside3 = 0;
    for (std::size_t i = 0; i < mc.size(); ++i) {
      CHECK(mc[i].delta_m == deltas[i]);
      const double z = std::fabs(mc[i].mean_coincidence - cf[i].mean_coincidence) / mc[i].standard_error;
      CHECK(z < 5.0);
      if (z > 3.0) ++outside3;
    }
    CHECK(outside3 <= 3);
  }

  SUBCASE("empty range rejected") {
    CHECK_THROWS_AS(scan_fringes(base, {}, Averaging::closed_form), Error);
  }
}

TEST_CASE("visibility by regime") {
  const auto deltas = linspace(0.0, kLambda, 101);
  const auto amp = scan_fringes(TwoSourceSetup(kLambda, 0, 0, Regime::amplitude), deltas,
                                Averaging::closed_form);
  const auto inten = scan_fringes(TwoSourceSetup(kLambda, 0, 0, Regime::intensity), deltas,
                                  Averaging::closed_form);
  CHECK(visibility(amp) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(visibility(inten) == doctest::Approx(0.5).epsilon(1e-12));

  const auto mc = scan_fringes(TwoSourceSetup(kLambda, 0, 0, Regime::amplitude, 20000), deltas,
                               Averaging::monte_carlo, {1, 0, 1});
  CHECK(visibility(mc) == doctest::Approx(1.0).epsilon(0.02));

  FringeTable flat{{0.0, 0.3, 0.0}, {1e-7, 0.3, 0.0}, {2e-7, -0.3, 0.0}};
  CHECK(visibility(flat) == 0.0);

  FringeTable zeros{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  try {
    visibility(zeros);
    FAIL("expected UndefinedVisibility");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_visibility);
  }
  CHECK_THROWS_AS(visibility(FringeTable{}), Error);
}

TEST_CASE("setup validation and csv") {
  CHECK_THROWS_AS(TwoSourceSetup(0.0, 0, 0, Regime::amplitude), Error);
  CHECK_THROWS_AS(TwoSourceSetup(-1.0, 0, 0, Regime::amplitude), Error);
  CHECK_THROWS_AS(TwoSourceSetup(1.0, 0, 0, Regime::amplitude, 0), Error);
  CHECK_THROWS_AS(TwoSourceSetup(1.0, INFINITY, 0, Regime::amplitude), Error);

  const auto pts = linspace(0.0, 1.0, 5);
  CHECK(pts == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(linspace(3.0, 4.0, 1) == std::vector<double>{3.0});

  const FringeTable t{{0.0, 0.5, 0.0}, {2.5e-7, 0.25, 0.0}};
  CHECK(fringe_csv(t) == "delta_m,mean_coincidence\n0,0.5\n2.5e-07,0.25\n");
}
