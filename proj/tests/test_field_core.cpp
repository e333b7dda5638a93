#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"
#include "sedsim/field_core.hpp"
#include "sedsim/random.hpp"

using namespace sedsim;
using namespace sedsim::field;
using constants::boltzmann_k;
using constants::planck_h;

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

// Two-segment piecewise-linear density with a kink at nu = 2.
double kinked_density(double nu) { return nu < 2.0 ? 1.0 + 0.5 * (nu - 1.0) : 1.5 - 0.25 * (nu - 2.0); }

// Reference trapezoid at many points, written independently of the library.
template <typename F>
double fine_trapezoid(F f, double lo, double hi, std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n);
  long double acc = 0.5L * (f(lo) + f(hi));
  for (std::size_t i = 1; i < n; ++i) acc += f(lo + h * static_cast<double>(i));
  return static_cast<double>(acc * h);
}

SpectralMode sampled(double (*f)(double), double lo, double hi, std::size_t n) {
  auto g = uniform_grid(lo, hi, n);
  std::vector<double> w;
  for (double nu : g) w.push_back(f(nu));
  return SpectralMode(g, w);
}

}  // namespace

TEST_CASE("normalize_mode: constant density over an e-fold of frequency") {
  const double c = 3.0;
  const auto grid = uniform_grid(1e14, std::exp(1.0) * 1e14, 200001);
  const SpectralMode mode(grid, std::vector<double>(grid.size(), c));
  const auto result = normalize_mode(mode);
  CHECK(result.mode.normalized());
  CHECK(result.scale == doctest::Approx(planck_h / c).epsilon(1e-9));
  CHECK(result.mode.action_integral() == doctest::Approx(planck_h).epsilon(1e-12));
}

TEST_CASE("normalize_mode: idempotent on an already normalized mode") {
  const auto first = normalize_mode(sampled(kinked_density, 1.0, 3.0, 501));
  const auto second = normalize_mode(first.mode);
  CHECK(std::fabs(second.scale - 1.0) <= 1e-9);
}

TEST_CASE("normalize_mode: piecewise-linear density against a 1e6-point quadrature") {
  const auto result = normalize_mode(sampled(kinked_density, 1.0, 3.0, 2001));
  const double oracle = planck_h / fine_trapezoid([](double nu) { return kinked_density(nu) / nu; },
                                                  1.0, 3.0, 1000000);
  CHECK(result.scale == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("normalize_mode: trapezoid convergence is second order") {
  // Halving the spacing should shrink successive changes by ~4.
  auto scale = [](std::size_t cells) {
    return normalize_mode(sampled([](double nu) { return std::exp(-nu); }, 1.0, 3.0, cells + 1)).scale;
  };
  const double s1 = scale(50), s2 = scale(100), s3 = scale(200);
  const double ratio = (s1 - s2) / (s2 - s3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
  // Order estimate for the step itself: |s2 - s1| <= C h^2 with C from the
  // curvature of the integrand (max |f''| = 2e^-1 / ...); use a loose bound.
  const double h = 2.0 / 100.0;
  CHECK(std::fabs(s2 - s1) / s2 <= h * h);
}

TEST_CASE("normalize_mode: error paths") {
  const auto g = uniform_grid(1.0, 2.0, 5);
  try {
    normalize_mode(SpectralMode(g, std::vector<double>(5, 0.0)));
    FAIL("expected NotNormalizable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_normalizable);
  }
  try {
    SpectralMode({0.0, 1.0}, {1.0, 1.0});
    FAIL("expected InvalidGrid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_grid);
  }
  CHECK_THROWS_AS(SpectralMode({-1.0, 1.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(SpectralMode({2.0, 1.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(SpectralMode({1.0, 2.0}, {1.0, -1.0}), Error);
  CHECK_THROWS_AS(normalize_mode(SpectralMode({1.0}, {1.0})), Error);
  // A normalized flag must be backed by the integral.
  CHECK_THROWS_AS(SpectralMode({1.0, 2.0}, {1.0, 1.0}, true), Error);
}

TEST_CASE("mode_energy") {
  const auto g = uniform_grid(5.0, 9.0, 17);
  CHECK(mode_energy(SpectralMode(g, std::vector<double>(g.size(), 0.0))) == 0.0);
  CHECK(mode_energy(SpectralMode(g, std::vector<double>(g.size(), 2.5))) == doctest::Approx(10.0).epsilon(1e-15));

  // Random density, piecewise linear between nodes; the oracle integrates the
  // interpolant on a 1000x refined grid.
  SplitMix64 gen(5);
  std::vector<double> grid{1.0};
  for (int i = 0; i < 40; ++i) grid.push_back(grid.back() + 0.05 + uniform01(gen));
  std::vector<double> w;
  for (std::size_t i = 0; i < grid.size(); ++i) w.push_back(uniform01(gen) * 1e-30);
  long double oracle = 0.0L;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const int sub = 1000;
    const double h = (grid[i] - grid[i - 1]) / sub;
    for (int k = 0; k < sub; ++k) {
      auto at = [&](int j) { return w[i - 1] + (w[i] - w[i - 1]) * j / static_cast<double>(sub); };
      oracle += 0.5L * h * (at(k) + at(k + 1));
    }
  }
  CHECK(mode_energy(SpectralMode(grid, w)) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-6));
}

TEST_CASE("superpose and is_orthogonal") {
  const auto g = uniform_grid(1.0, 4.0, 31);
  std::vector<double> low(g.size(), 0.0), high(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) (g[i] < 2.0 ? low : high)[i] = 1.0 + g[i];
  const PhasedMode a{SpectralMode(g, low)};
  const PhasedMode b{SpectralMode(g, high)};

  SUBCASE("disjoint supports are orthogonal") {
    CHECK(is_orthogonal(a, b, 1e-12));
    CHECK(is_orthogonal(b, a, 1e-12));
  }
  SUBCASE("a mode with itself doubles in amplitude") {
    const auto doubled = superpose(a, a);
    CHECK(mode_energy(doubled.mode) == doctest::Approx(4.0 * mode_energy(a.mode)).epsilon(1e-14));
    CHECK_FALSE(is_orthogonal(a, a, 1e-6));
  }
  SUBCASE("quadrature phase on the common support is orthogonal") {
    std::vector<double> w;
    for (double nu : g) w.push_back(std::exp(-nu));
    const PhasedMode p{SpectralMode(g, w), std::vector<double>(g.size(), 0.3)};
    const PhasedMode q{SpectralMode(g, w), std::vector<double>(g.size(), 0.3 + constants::pi / 2)};
    CHECK(is_orthogonal(p, q, 1e-12));
    CHECK(is_orthogonal(q, p, 1e-12));
  }
  SUBCASE("energy excess equals the directly evaluated cross term") {
    SplitMix64 gen(11);
    std::vector<double> wa, wb, pa, pb;
    for (std::size_t i = 0; i < g.size(); ++i) {
      wa.push_back(uniform01(gen));
      wb.push_back(uniform01(gen));
      pa.push_back(constants::two_pi * uniform01(gen));
      pb.push_back(constants::two_pi * uniform01(gen));
    }
    const PhasedMode p{SpectralMode(g, wa), pa};
    const PhasedMode q{SpectralMode(g, wb), pb};
    // Trapezoid of 2 sqrt(wa wb) cos(pa - pb), written out by hand.
    double cross = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      auto term = [&](std::size_t k) { return 2.0 * std::sqrt(wa[k] * wb[k]) * std::cos(pa[k] - pb[k]); };
      cross += 0.5 * (g[i] - g[i - 1]) * (term(i) + term(i - 1));
    }
    const double excess = mode_energy(superpose(p, q).mode) - mode_energy(p.mode) - mode_energy(q.mode);
    CHECK(excess == doctest::Approx(cross).epsilon(1e-10));
    CHECK(is_orthogonal(p, q, 0.5) == is_orthogonal(q, p, 0.5));
  }
}

TEST_CASE("superpose: grid policies") {
  const PhasedMode a{SpectralMode({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0})};
  const PhasedMode b{SpectralMode({1.5, 2.5, 3.5}, {1.0, 1.0, 1.0})};
  try {
    superpose(a, b);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::grid_mismatch);
  }
  const auto merged = superpose(a, b, GridPolicy::union_linear);
  CHECK(merged.mode.frequency() == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0, 3.5});
  // Inside both supports amplitudes add coherently (1 + 1)^2.
  CHECK(merged.mode.density()[2] == doctest::Approx(4.0));
  // Outside b's grid only a contributes.
  CHECK(merged.mode.density()[0] == doctest::Approx(1.0));
  CHECK(is_orthogonal(a, b, 1e-9, GridPolicy::union_linear) ==
        is_orthogonal(b, a, 1e-9, GridPolicy::union_linear));
}

TEST_CASE("planck_mean_energy") {
  const ThermalState room(300.0);
  const double kt = boltzmann_k * 300.0;

  CHECK(planck_mean_energy(1e20, room) == 0.0);  // h nu / kT ~ 1.6e7
  CHECK(planck_mean_energy(701.0 * kt / planck_h, room) == 0.0);
  CHECK(planck_mean_energy(1e12, ThermalState(0.0)) == 0.0);

  // h nu = kT: 1 / (e - 1) evaluated at 30 digits.
  CHECK(planck_mean_energy(kt / planck_h, room) / kt ==
        doctest::Approx(0.581976706869326424385).epsilon(1e-14));

  // Expansion about small h nu / kT: e ~ kT - h nu / 2 with O(x^2) remainder.
  const double nu = 0.01 * kt / planck_h;
  const double e = planck_mean_energy(nu, room);
  const double rel = std::fabs(e - (kt - 0.5 * planck_h * nu)) / kt;
  CHECK(rel < 1e-4);
  CHECK(rel == doctest::Approx(0.01 * 0.01 / 12.0).epsilon(1e-3));
  CHECK_THROWS_AS(planck_mean_energy(0.0, room), Error);
  CHECK_THROWS_AS(ThermalState(-1.0), Error);
}

TEST_CASE("planck_mean_energy_with_zero_point") {
  const ThermalState room(300.0);
  const double kt = boltzmann_k * 300.0;
  const double nu_small = 0.01 * kt / planck_h;
  CHECK(std::fabs(planck_mean_energy_with_zero_point(nu_small, room) / kt - 1.0) < 1e-4);
  // 30-digit value of x/expm1(x) + x/2 at x = 0.01.
  CHECK(planck_mean_energy_with_zero_point(nu_small, room) / kt ==
        doctest::Approx(1.00000833331944447751).epsilon(1e-13));
  CHECK(planck_mean_energy_with_zero_point(5e14, ThermalState(0.0)) == 0.5 * planck_h * 5e14);
  CHECK(planck_mean_energy_with_zero_point(kt / planck_h, room) / kt ==
        doctest::Approx(1.081976706869326424385).epsilon(1e-14));
}

TEST_CASE("planck properties over a grid") {
  for (double t : {1.0, 30.0, 300.0, 3000.0}) {
    const ThermalState s(t);
    double prev = INFINITY;
    for (double nu = 1e9; nu < 1e15; nu *= 1.7) {
      const double e = planck_mean_energy(nu, s);
      if (e > 0.0) CHECK(e < prev);
      prev = e;
      const double z = planck_mean_energy_with_zero_point(nu, s);
      CHECK(z >= 0.5 * planck_h * nu);
      // Strict only while the thermal term survives the addition.
      if (e > 1e-12 * planck_h * nu) CHECK(z > 0.5 * planck_h * nu);
    }
  }
  for (double nu : {1e9, 1e12, 1e14}) {
    double prev = -1.0;
    for (double t = 1.0; t < 1e4; t *= 1.9) {
      const double e = planck_mean_energy(nu, ThermalState(t));
      if (prev > 0.0) CHECK(e > prev);
      CHECK(e >= prev);
      prev = e;
    }
  }
  // Second-order remainder bound for h nu / kT in (0, 0.1).
  const ThermalState s(500.0);
  const double kt = boltzmann_k * 500.0;
  for (double x = 1e-4; x < 0.1; x *= 1.3) {
    const double nu = x * kt / planck_h;
    const double hv = planck_h * nu;
    CHECK(std::fabs(planck_mean_energy(nu, s) - (kt - hv / 2.0)) <= hv * hv / (12.0 * kt) * 1.01);
  }
}

TEST_CASE("zero-point sampling") {
  const double nu = 5e14;
  const double target = 0.5 * planck_h * nu;

  SUBCASE("ensemble mean energy is h nu / 2") {
    SplitMix64 gen(2024);
    const int n = 1000000;
    long double sum = 0.0L;
    for (int i = 0; i < n; ++i) {
      const auto a = sample_stochastic_amplitude(gen, nu);
      REQUIRE(a.amplification_beta == 1.0);
      REQUIRE(a.baseline_e0 >= 0.0);
      sum += a.energy();
    }
    CHECK(std::fabs(static_cast<double>(sum / n) / target - 1.0) < 0.005);
  }
  SUBCASE("fixed seed gives a bit-identical sequence") {
    SplitMix64 g1(77), g2(77);
    for (int i = 0; i < 1000; ++i) {
      const auto a = sample_stochastic_amplitude(g1, nu);
      const auto b = sample_stochastic_amplitude(g2, nu);
      REQUIRE(a.baseline_e0 == b.baseline_e0);
      REQUIRE(a.phase_rad == b.phase_rad);
    }
  }
  SUBCASE("phase is uniform on [0, 2 pi)") {
    SplitMix64 gen(31337);
    const int bins = 100;
    const int n = 200000;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < n; ++i) {
      const double phase = sample_stochastic_amplitude(gen, nu).phase_rad;
      REQUIRE(phase >= 0.0);
      REQUIRE(phase < constants::two_pi);
      ++counts[static_cast<int>(phase / constants::two_pi * bins)];
    }
    const double expected = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // 99th percentile of chi-square with 99 degrees of freedom.
    CHECK(chi2 < 134.6416);
  }
}

TEST_CASE("spectral mode csv round trip") {
  const auto mode = sampled(kinked_density, 1.0, 3.0, 9);
  std::istringstream in(mode_csv(mode));
  const auto back = read_mode_csv(in);
  CHECK(back.frequency() == mode.frequency());
  CHECK(back.density() == mode.density());
  CHECK(mode_csv(mode).rfind("frequency_hz,density_j_per_hz\n", 0) == 0);
}
