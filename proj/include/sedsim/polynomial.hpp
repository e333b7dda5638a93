#pragma once

#include <span>
#include <vector>

namespace sedsim {

// Dense polynomial with coefficients in ascending order: c0 + c1 x + c2 x^2 ...
class Polynomial {
 public:
  Polynomial() : coefficients_{0.0} {}
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double x) const;
  Polynomial derivative() const;

  // Coefficients of p(x) / x with the constant term dropped. Exact when
  // p(0) == 0.
  Polynomial divided_by_x() const;

  std::size_t degree() const { return coefficients_.size() - 1; }
  std::span<const double> coefficients() const { return coefficients_; }

 private:
  std::vector<double> coefficients_;
};

}  // namespace sedsim
