#include "sedsim/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include "sedsim/constants.hpp"
#include "sedsim/csv.hpp"
#include "sedsim/error.hpp"

namespace sedsim::soliton {

namespace {

constexpr double kAlphaCutoff = 1e-9;

struct Bracket {
  double lo;
  double hi;
};

// Root of g in a sign-changing bracket: secant step when it lands inside the
// shrinking bracket, bisection otherwise. Runs until the bracket collapses so
// the returned root is as tight as the arithmetic allows, not just within tol.
double refine_root(const RotationResponse& r, Bracket b, double tol) {
  auto g = [&r](double a) { return r.ratio(a) - 1.0; };
  double glo = g(b.lo);
  double ghi = g(b.hi);
  if (std::fabs(glo) <= tol) return b.lo;
  if (std::fabs(ghi) <= tol) return b.hi;
  double best = std::fabs(glo) < std::fabs(ghi) ? b.lo : b.hi;
  double best_g = std::min(std::fabs(glo), std::fabs(ghi));
  for (int iter = 0; iter < 200; ++iter) {
    double x = b.lo - glo * (b.hi - b.lo) / (ghi - glo);
    const double width = b.hi - b.lo;
    if (!(x > b.lo + 0.01 * width && x < b.hi - 0.01 * width)) x = 0.5 * (b.lo + b.hi);
    const double gx = g(x);
    if (std::fabs(gx) < best_g) {
      best = x;
      best_g = std::fabs(gx);
    }
    if (best_g == 0.0) break;
    if ((gx < 0.0) == (glo < 0.0)) {
      b.lo = x;
      glo = gx;
    } else {
      b.hi = x;
      ghi = gx;
    }
    // Secant can stall on one side; force a bisection in that case.
    const double mid = 0.5 * (b.lo + b.hi);
    if (b.hi - b.lo > 0.5 * width) {
      const double gm = g(mid);
      if (std::fabs(gm) < best_g) {
        best = mid;
        best_g = std::fabs(gm);
      }
      if ((gm < 0.0) == (glo < 0.0)) {
        b.lo = mid;
        glo = gm;
      } else {
        b.hi = mid;
        ghi = gm;
      }
    }
    if (b.hi - b.lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(b.hi)) break;
  }
  return best;
}

}  // namespace

double curl_correction(double xi_m, double alpha) {
  const double product = xi_m * alpha;
  if (!(std::fabs(product) < 1.0)) {
    throw Error(ErrorKind::out_of_validity_region, "|xi * alpha| must be < 1");
  }
  return 1.0 - product;
}

FilamentProfile::FilamentProfile(double period, double evanescent_radius, double critical_flux)
    : period_m(period), evanescent_radius_m(evanescent_radius), critical_flux_w(critical_flux) {
  if (!(period > 0.0) || !(evanescent_radius > 0.0) || !(critical_flux > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "period, radius and flux must be > 0");
  }
}

RotationResponse RotationResponse::polynomial(std::vector<double> coefficients) {
  RotationResponse r;
  r.beta_poly_ = Polynomial(std::move(coefficients));
  if (r.beta_poly_.coefficients()[0] != 0.0) {
    throw Error(ErrorKind::invalid_argument, "beta(0) must be 0 (constant coefficient nonzero)");
  }
  r.ratio_poly_ = r.beta_poly_.divided_by_x();
  r.ratio_slope_poly_ = r.ratio_poly_.derivative();
  return r;
}

RotationResponse RotationResponse::tabulated(std::vector<double> alpha, std::vector<double> beta) {
  if (alpha.size() != beta.size() || alpha.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "table needs at least 2 matching samples");
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!std::isfinite(alpha[i]) || !std::isfinite(beta[i])) {
      throw Error(ErrorKind::invalid_argument, "table values must be finite");
    }
    if (i > 0 && !(alpha[i] > alpha[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "alpha samples must be strictly increasing");
    }
    if (alpha[i] == 0.0 && beta[i] != 0.0) {
      throw Error(ErrorKind::invalid_argument, "beta(0) must be 0");
    }
  }
  RotationResponse r;
  r.table_alpha_ = std::move(alpha);
  r.table_beta_ = std::move(beta);
  return r;
}

double RotationResponse::table_min() const { return table_alpha_.front(); }
double RotationResponse::table_max() const { return table_alpha_.back(); }

double RotationResponse::beta(double alpha) const {
  if (!is_tabulated()) return beta_poly_(alpha);
  if (alpha < table_min() || alpha > table_max()) {
    throw Error(ErrorKind::invalid_argument, "alpha outside the tabulated range");
  }
  const auto hi = std::lower_bound(table_alpha_.begin(), table_alpha_.end(), alpha);
  const auto j = static_cast<std::size_t>(hi - table_alpha_.begin());
  if (table_alpha_[j] == alpha) return table_beta_[j];
  const double t = (alpha - table_alpha_[j - 1]) / (table_alpha_[j] - table_alpha_[j - 1]);
  return table_beta_[j - 1] + t * (table_beta_[j] - table_beta_[j - 1]);
}

double RotationResponse::ratio(double alpha) const {
  if (!is_tabulated()) return ratio_poly_(alpha);
  if (std::fabs(alpha) < kAlphaCutoff) {
    throw Error(ErrorKind::invalid_argument, "f(alpha) undefined this close to alpha = 0");
  }
  return beta(alpha) / alpha;
}

double RotationResponse::ratio_slope(double alpha) const {
  if (!is_tabulated()) return ratio_slope_poly_(alpha);
  const double h = 1e-6 * std::max(1.0, std::fabs(alpha));
  const double lo = std::max(alpha - h, table_min());
  const double hi = std::min(alpha + h, table_max());
  return (ratio(hi) - ratio(lo)) / (hi - lo);
}

RotationResponse stable_fixture() { return RotationResponse::polynomial({0.0, 2.0, -1.0}); }
RotationResponse no_root_fixture() { return RotationResponse::polynomial({0.0, 0.5}); }
RotationResponse unstable_fixture() { return RotationResponse::polynomial({0.0, 0.0, 1.0}); }

StableRoot find_stable_alpha(const RotationResponse& response, const SearchOptions& options) {
  const double a = options.alpha_min;
  const double b = options.alpha_max;
  if (!(a < b) || options.scan_cells < 1 || !(options.tol > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "need alpha_min < alpha_max, cells >= 1, tol > 0");
  }
  if ((a <= 0.0 && b >= 0.0) || std::fabs(a) < kAlphaCutoff || std::fabs(b) < kAlphaCutoff) {
    throw Error(ErrorKind::invalid_argument, "search interval must exclude a neighbourhood of 0");
  }
  if (response.is_tabulated() && (a < response.table_min() || b > response.table_max())) {
    throw Error(ErrorKind::invalid_argument, "search interval exceeds the tabulated range");
  }

  std::vector<double> roots;
  const double step = (b - a) / static_cast<double>(options.scan_cells);
  double x_prev = a;
  double g_prev = response.ratio(a) - 1.0;
  if (std::fabs(g_prev) <= options.tol) roots.push_back(a);
  for (std::size_t i = 1; i <= options.scan_cells; ++i) {
    const double x = i == options.scan_cells ? b : a + step * static_cast<double>(i);
    const double g = response.ratio(x) - 1.0;
    if (!std::isfinite(g)) throw Error(ErrorKind::invalid_argument, "response not finite");
    const bool prev_hit = std::fabs(g_prev) <= options.tol;
    const bool hit = std::fabs(g) <= options.tol;
    if (hit) {
      roots.push_back(x);
    } else if (!prev_hit && (g < 0.0) != (g_prev < 0.0)) {
      roots.push_back(refine_root(response, {x_prev, x}, options.tol));
    }
    x_prev = x;
    g_prev = g;
  }
  // Exact grid hits can be recorded twice by neighbouring cells.
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  if (roots.empty()) {
    throw Error(ErrorKind::no_solution, "f(alpha) = 1 has no root in the search interval");
  }
  for (double root : roots) {
    const double residual = std::fabs(response.ratio(root) - 1.0);
    const double slope = response.ratio_slope(root);
    if (residual <= options.tol && slope < 0.0) return {root, residual, slope, roots};
  }
  std::ostringstream msg;
  msg << "no root with df/dalpha < 0; roots:";
  for (double root : roots) msg << ' ' << root;
  throw Error(ErrorKind::unstable_only, msg.str());
}

std::vector<TorusCandidate> quantized_radii(const FilamentProfile& profile, int k_max,
                                            double alpha0) {
  if (k_max < 1) throw Error(ErrorKind::invalid_argument, "k_max must be >= 1");
  const double spacing = profile.period_m / constants::two_pi;
  std::vector<TorusCandidate> out;
  for (int k = 1; k <= k_max; ++k) {
    const double radius = static_cast<double>(k) * spacing;
    if (radius > profile.evanescent_radius_m) out.push_back({radius, k, alpha0});
  }
  return out;
}

TorusCandidate nearest_quantized_radius(const FilamentProfile& profile, double target_radius,
                                        double alpha0) {
  if (!(target_radius > 0.0)) throw Error(ErrorKind::invalid_argument, "target radius must be > 0");
  const double spacing = profile.period_m / constants::two_pi;
  const int k_min = static_cast<int>(std::floor(profile.evanescent_radius_m / spacing)) + 1;
  const int k = std::max(k_min, static_cast<int>(std::lround(target_radius / spacing)));
  return {static_cast<double>(k) * spacing, k, alpha0};
}

RotationResponse read_response_csv(std::istream& in) {
  const auto table = csv::read_numeric(in, 2);
  return RotationResponse::tabulated(table.column(0), table.column(1));
}

std::string candidates_csv(const std::vector<TorusCandidate>& candidates) {
  csv::Writer w({"winding_k", "radius_m", "alpha0_rad"});
  for (const auto& c : candidates) {
    w.add_row({std::to_string(c.winding), csv::format_number(c.radius_m),
               csv::format_number(c.alpha0)});
  }
  return w.str();
}

}  // namespace sedsim::soliton
