#pragma once

#include <cmath>
#include <complex>
#include <concepts>

namespace stieltjes {

// Coefficient field for series and ODE data: real or complex doubles.
template <class T>
concept ScalarField = std::same_as<T, double> || std::same_as<T, std::complex<double>>;

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const std::complex<double>& z) { return std::abs(z); }

// lambda^n / n! without overflowing intermediate powers.
template <ScalarField T>
T pow_over_factorial(const T& lambda, int n) {
  if (n == 0) return T{1};
  double r = abs_value(lambda);
  if (r == 0.0) return T{0};
  double mag = std::exp(n * std::log(r) - std::lgamma(n + 1.0));
  if constexpr (std::same_as<T, double>) {
    return (lambda < 0 && (n % 2 != 0)) ? -mag : mag;
  } else {
    double theta = std::arg(lambda);
    return std::polar(mag, n * theta);
  }
}

}  // namespace stieltjes
