#include "sedsim/polynomial.hpp"

#include <cmath>

#include "sedsim/error.hpp"

namespace sedsim {

Polynomial::Polynomial(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) coefficients_.push_back(0.0);
  for (double c : coefficients_) {
    if (!std::isfinite(c)) {
      throw Error(ErrorKind::invalid_argument, "polynomial coefficients must be finite");
    }
  }
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coefficients_.size() == 1) return Polynomial({0.0});
  std::vector<double> d(coefficients_.size() - 1);
  for (std::size_t k = 1; k < coefficients_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * coefficients_[k];
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::divided_by_x() const {
  if (coefficients_.size() == 1) return Polynomial({0.0});
  return Polynomial(std::vector<double>(coefficients_.begin() + 1, coefficients_.end()));
}

}  // namespace sedsim
