#pragma once

// Independent reference values for the tests. Nothing here calls the library.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

using quad = __float128;

// sum_m (-x^2/4)^m / (m! (nu+1)_m), so J_nu(x) = (x/2)^nu / Gamma(nu+1) * reduced_series.
// Plain term recurrence in binary128, stopped once terms stop mattering.
inline quad reduced_series(double nu, quad x) {
  const quad q = -x * x / 4;
  quad term = 1, sum = 1;
  for (int m = 1; m < 4000; ++m) {
    term *= q / (quad(m) * (quad(nu) + m));
    sum += term;
    const quad a = term < 0 ? -term : term;
    const quad s = sum < 0 ? -sum : sum;
    if (m > 2 * static_cast<double>(x) && a < s * quad(1e-30)) break;
  }
  return sum;
}

inline double bessel_j(double nu, double x) {
  return static_cast<double>(reduced_series(nu, x)) * std::pow(x / 2.0, nu) / std::tgamma(nu + 1.0);
}

// First `count` positive zeros of J_nu: scan at step 0.1 for sign changes of
// the reduced series, then bisect to the last bit.
inline std::vector<double> bessel_zeros(double nu, std::size_t count) {
  std::vector<double> out;
  double lo = 1e-3;
  quad flo = reduced_series(nu, lo);
  while (out.size() < count) {
    const double hi = lo + 0.1;
    const quad fhi = reduced_series(nu, hi);
    if ((flo < 0) != (fhi < 0)) {
      double a = lo, b = hi;
      quad fa = flo;
      for (int i = 0; i < 200 && b - a > 1e-15 * b; ++i) {
        const double mid = 0.5 * (a + b);
        const quad fm = reduced_series(nu, mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    lo = hi;
    flo = fhi;
    if (lo > 1e4) throw std::runtime_error("oracle zero scan ran away");
  }
  return out;
}

// Central difference of order 4.
template <class F>
auto derivative(F f, double x, double h = 1e-3) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

}  // namespace oracle
