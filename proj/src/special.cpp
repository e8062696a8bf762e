#include "gruenwald/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <type_traits>

#include "gruenwald/errors.hpp"
#include "gruenwald/format.hpp"

namespace gruenwald {

namespace {

using quad = __float128;
using ldouble = long double;

constexpr double kPi = std::numbers::pi;
constexpr ldouble kPiL = std::numbers::pi_v<ldouble>;

double qabs(quad v) { return static_cast<double>(v < 0 ? -v : v); }

// Minimal binary128 complex; std::complex<__float128> is not portable.
struct QComplex {
  quad re = 0;
  quad im = 0;

  QComplex operator+(const QComplex& o) const { return {re + o.re, im + o.im}; }
  QComplex operator*(const QComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  QComplex operator*(quad s) const { return {re * s, im * s}; }
  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  double magnitude() const { return std::hypot(static_cast<double>(re), static_cast<double>(im)); }
  cplx to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

double magnitude(quad v) { return qabs(v); }
double magnitude(const QComplex& v) { return v.magnitude(); }

// Partial sums of the power series sum_m c_m X^m with X = x^2 and
//   c_0 = lead, c_m = c_{m-1} * (-1/4) / (m (p + m - 1)),
// together with the sums needed for the first two x-derivatives.
//   s0 = sum c_m X^m
//   s1 = sum_{m>=1} 2m c_m X^{m-1}
//   s2 = sum_{m>=1} 2m(2m-1) c_m X^{m-1}
//   t1 = sum (2m+1) c_m X^m
//   t2 = sum_{m>=1} (2m+1) 2m c_m X^{m-1}
// An even function is s0 (derivatives x*s1, s2); an odd one is x*s0
// (derivatives t1, x*t2).
template <class T>
struct PowerSums {
  T s0{}, s1{}, s2{}, t1{}, t2{};
  double abs_s0 = 0.0;
};

template <class T>
PowerSums<T> power_sums(quad p, quad lead, const T& X, double x_magnitude) {
  PowerSums<T> out;
  T unit{};
  if constexpr (std::is_same_v<T, quad>) {
    unit = 1;
  } else {
    unit = QComplex{1, 0};
  }
  out.s0 = unit * lead;
  out.t1 = unit * lead;
  out.abs_s0 = qabs(lead);
  out.s1 = unit * quad(0);
  out.s2 = unit * quad(0);
  out.t2 = unit * quad(0);

  // cx = c_m X^{m-1}; starts at m = 1.
  T cx = unit * (lead * quad(-0.25) / p);
  const double min_terms = 0.5 * x_magnitude + 4.0;
  for (int m = 1; m < SpecialTolerances::max_series_terms; ++m) {
    const quad qm = m;
    const T term0 = cx * X;  // c_m X^m
    out.s0 += term0;
    out.abs_s0 += magnitude(term0);
    out.s1 += cx * (2 * qm);
    out.s2 += cx * (2 * qm * (2 * qm - 1));
    out.t1 += term0 * (2 * qm + 1);
    out.t2 += cx * ((2 * qm + 1) * (2 * qm));

    const double scale = magnitude(out.s0) + magnitude(out.s1) + magnitude(out.s2) + 1e-300;
    const double growth = 4.0 * (m + 1.0) * (m + 1.0) * std::max(1.0, x_magnitude * x_magnitude);
    if (m > min_terms && magnitude(cx) * growth < 1e-34 * scale) {
      return out;
    }
    cx = cx * X * (quad(-0.25) / (quad(m + 1) * (p + quad(m))));
  }
  throw EvaluationError("power series did not converge within the term limit");
}

// Hankel large-argument expansion of J_order(x), x > 0, with term-wise
// differentiated derivatives.
struct HankelJet {
  ldouble j0 = 0, j1 = 0, j2 = 0;
};

HankelJet hankel_jet(double order, double x) {
  const ldouble mu = 4.0L * order * order;
  const ldouble lx = x;
  ldouble p = 0, p1 = 0, p2 = 0, q = 0, q1 = 0, q2 = 0;
  ldouble a = 1;        // a_k(order)
  ldouble xk = 1;       // x^{-k}
  ldouble prev = 1e300L;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const ldouble odd = 2.0L * k - 1.0L;
      a *= (mu - odd * odd) / (8.0L * k);
      xk /= lx;
    }
    const ldouble t = a * xk;
    const ldouble mag = std::fabs(t);
    if (k > 0 && (mag == 0 || (mag > prev && (2.0L * k - 1.0L) * (2.0L * k - 1.0L) > mu))) break;
    // d/dx x^{-k} = -k x^{-k-1};  d2/dx2 x^{-k} = k(k+1) x^{-k-2}
    const ldouble t1 = -k * t / lx;
    const ldouble t2 = k * (k + 1.0L) * t / (lx * lx);
    const int half = k / 2;
    const ldouble sign = (half % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      p += sign * t;
      p1 += sign * t1;
      p2 += sign * t2;
    } else {
      q += sign * t;
      q1 += sign * t1;
      q2 += sign * t2;
    }
    if (mag < 1e-22L * std::fabs(p)) break;
    prev = mag;
  }
  const ldouble c = (0.5L * order + 0.25L) * kPiL;
  const ldouble cx = std::cos(lx), sx = std::sin(lx);
  const ldouble cc = std::cos(c), sc = std::sin(c);
  const ldouble cw = cx * cc + sx * sc;  // cos(x - c)
  const ldouble sw = sx * cc - cx * sc;  // sin(x - c)

  const ldouble u = p * cw - q * sw;
  const ldouble u1 = (p1 - q) * cw - (p + q1) * sw;
  const ldouble u2 = (p2 - 2 * q1 - p) * cw - (2 * p1 + q2 - q) * sw;

  const ldouble norm = std::sqrt(2.0L / kPiL);
  const ldouble g = 1.0L / std::sqrt(lx);
  const ldouble g1 = -0.5L * g / lx;
  const ldouble g2 = 0.75L * g / (lx * lx);
  return {norm * g * u, norm * (g1 * u + g * u1), norm * (g2 * u + 2 * g1 * u1 + g * u2)};
}

void require_order(double nu) {
  if (!std::isfinite(nu) || nu <= -1.0) {
    throw DomainError("order must exceed -1 (got " + std::to_string(nu) + ")");
  }
}

void require_finite(double x) {
  if (!std::isfinite(x)) throw DomainError("argument must be finite");
}

// Jet of the even (shift = 0) or odd (shift = 1) normalized series at real x.
Jet series_jet(quad p, quad lead, int shift, double x) {
  const quad X = quad(x) * quad(x);
  const auto s = power_sums<quad>(p, lead, X, std::fabs(x));
  Jet out;
  if (shift == 0) {
    out.value = static_cast<double>(s.s0);
    out.d1 = static_cast<double>(quad(x) * s.s1);
    out.d2 = static_cast<double>(s.s2);
  } else {
    out.value = static_cast<double>(quad(x) * s.s0);
    out.d1 = static_cast<double>(s.t1);
    out.d2 = static_cast<double>(quad(x) * s.t2);
  }
  return out;
}

// Gamma(nu+1) 2^nu x^{-nu} times a Hankel jet of J_order, x > 0.
Jet normalized_hankel(double nu, double order, double x) {
  const HankelJet j = hankel_jet(order, x);
  const ldouble lx = x;
  const ldouble scale = std::tgamma(static_cast<ldouble>(nu) + 1.0L) * std::pow(2.0L, static_cast<ldouble>(nu));
  const ldouble h = std::pow(lx, -static_cast<ldouble>(nu));
  const ldouble h1 = -nu * h / lx;
  const ldouble h2 = nu * (nu + 1.0L) * h / (lx * lx);
  return {static_cast<double>(scale * h * j.j0), static_cast<double>(scale * (h1 * j.j0 + h * j.j1)),
          static_cast<double>(scale * (h2 * j.j0 + 2 * h1 * j.j1 + h * j.j2))};
}

Jet even_reflect(Jet j, bool negative) {
  if (negative) j.d1 = -j.d1;
  return j;
}

Jet odd_reflect(Jet j, bool negative) {
  if (negative) {
    j.value = -j.value;
    j.d2 = -j.d2;
  }
  return j;
}

template <class T>
void guard_cancellation(const PowerSums<T>& s) {
  const double value = magnitude(s.s0);
  if (!std::isfinite(value) || !std::isfinite(s.abs_s0)) {
    throw EvaluationError("entire-function series overflowed");
  }
  // binary128 carries ~34 digits; keep at least ~16 of them.
  if (s.abs_s0 > 1e17 * std::max(value, 1e-300)) {
    throw EvaluationError("entire-function series lost all significance to cancellation");
  }
}

PowerSums<QComplex> complex_sums(quad p, quad lead, cplx z) {
  const QComplex qz{z.real(), z.imag()};
  const auto s = power_sums<QComplex>(p, lead, qz * qz, std::abs(z));
  guard_cancellation(s);
  return s;
}

}  // namespace

Order::Order(double nu) : nu_(nu) {
  require_order(nu);
  if (std::fabs(nu + 0.5) < SpecialTolerances::classical_window) {
    regime_ = Regime::Classical;
  } else {
    regime_ = nu > -0.5 ? Regime::G : Regime::H;
  }
}

double bessel_crossover(double nu) noexcept { return 20.0 + 2.0 * std::fabs(nu); }

Jet bessel_j_jet(double nu, double x) {
  require_order(nu);
  require_finite(x);
  if (x < 0) {
    if (nu != std::floor(nu)) {
      throw DomainError("J_nu(x) for x < 0 requires an integer order");
    }
    Jet j = bessel_j_jet(nu, -x);
    const bool odd = static_cast<long long>(nu) % 2 != 0;
    return odd ? Jet{-j.value, j.d1, -j.d2} : Jet{j.value, -j.d1, j.d2};
  }
  if (x == 0) {
    if (nu < 0) throw DomainError("J_nu(0) is infinite for -1 < nu < 0");
  }
  if (x < bessel_crossover(nu)) {
    // J_nu(x) = (x/2)^nu / Gamma(nu+1) * A_nu(x)
    const Jet a = series_jet(quad(nu) + 1, 1, 0, x);
    if (x == 0) {
      // only nu >= 0 reaches here
      if (nu == 0) return {1.0, 0.0, -0.5};
      if (nu == 1) return {0.0, 0.5, 0.0};
      return {0.0, nu < 1 ? INFINITY : 0.0, 0.0};
    }
    const ldouble g = std::pow(static_cast<ldouble>(x) / 2.0L, static_cast<ldouble>(nu)) /
                      std::tgamma(static_cast<ldouble>(nu) + 1.0L);
    const ldouble g1 = nu * g / x;
    const ldouble g2 = nu * (nu - 1.0L) * g / (static_cast<ldouble>(x) * x);
    return {static_cast<double>(g * a.value), static_cast<double>(g1 * a.value + g * a.d1),
            static_cast<double>(g2 * a.value + 2 * g1 * a.d1 + g * a.d2)};
  }
  const HankelJet h = hankel_jet(nu, x);
  return {static_cast<double>(h.j0), static_cast<double>(h.j1), static_cast<double>(h.j2)};
}

double bessel_j(double nu, double x) { return bessel_j_jet(nu, x).value; }

Jet a_nu_jet(const Order& order, double x) {
  require_finite(x);
  if (order.classical()) return {std::cos(x), -std::sin(x), -std::cos(x)};
  const double nu = order.nu();
  const double ax = std::fabs(x);
  if (ax < bessel_crossover(nu)) return series_jet(quad(nu) + 1, 1, 0, x);
  return even_reflect(normalized_hankel(nu, nu, ax), x < 0);
}

Jet b_nu_jet(const Order& order, double x) {
  require_finite(x);
  if (order.classical()) return {std::sin(x), std::cos(x), -std::sin(x)};
  const double nu = order.nu();
  const double ax = std::fabs(x);
  if (ax < bessel_crossover(nu + 1.0)) {
    return series_jet(quad(nu) + 2, quad(1) / (2 * (quad(nu) + 1)), 1, x);
  }
  return odd_reflect(normalized_hankel(nu, nu + 1.0, ax), x < 0);
}

cplx a_nu(const Order& order, cplx z) {
  if (order.classical()) return std::cos(z);
  if (z.imag() == 0) return a_nu_jet(order, z.real()).value;
  return complex_sums(quad(order.nu()) + 1, 1, z).s0.to_cplx();
}

cplx a_nu_prime(const Order& order, cplx z) {
  if (order.classical()) return -std::sin(z);
  if (z.imag() == 0) return a_nu_jet(order, z.real()).d1;
  const auto s = complex_sums(quad(order.nu()) + 1, 1, z);
  return z * s.s1.to_cplx();
}

cplx b_nu(const Order& order, cplx z) {
  if (order.classical()) return std::sin(z);
  if (z.imag() == 0) return b_nu_jet(order, z.real()).value;
  const auto s = complex_sums(quad(order.nu()) + 2, quad(1) / (2 * (quad(order.nu()) + 1)), z);
  return z * s.s0.to_cplx();
}

cplx b_nu_prime(const Order& order, cplx z) {
  if (order.classical()) return std::cos(z);
  if (z.imag() == 0) return b_nu_jet(order, z.real()).d1;
  const auto s = complex_sums(quad(order.nu()) + 2, quad(1) / (2 * (quad(order.nu()) + 1)), z);
  return s.t1.to_cplx();
}

// ---------------------------------------------------------------------------
// Zeros

ZeroTable::ZeroTable(Order order, ZeroKind kind, std::vector<double> zeros,
                     std::vector<double> derivs, std::vector<double> second_derivs)
    : order_(order),
      kind_(kind),
      zeros_(std::move(zeros)),
      derivs_(std::move(derivs)),
      second_derivs_(std::move(second_derivs)) {
  if (zeros_.size() != derivs_.size() || zeros_.size() != second_derivs_.size()) {
    throw DomainError("zero table columns differ in length");
  }
}

void ZeroTable::write_csv(std::ostream& out) const {
  out << "index,zero,deriv,second_deriv\n";
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    out << (i + 1) << ',' << format_double(zeros_[i]) << ',' << format_double(derivs_[i]) << ','
        << format_double(second_derivs_[i]) << '\n';
  }
}

namespace {

Jet generator_jet(const Order& order, ZeroKind kind, double x) {
  return kind == ZeroKind::A ? a_nu_jet(order, x) : b_nu_jet(order, x);
}

// McMahon's expansion for the j-th positive zero of J_order.
double mcmahon_guess(double order, std::size_t j) {
  const double mu = 4.0 * order * order;
  const double beta = (static_cast<double>(j) + 0.5 * order - 0.25) * kPi;
  const double e = 8.0 * beta;
  return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

int sign_of(double v) { return (v > 0) - (v < 0); }

// Locates the first zero of S to the right of `prev` (0 or the previous zero).
// `expected_sign` is the sign S takes just right of `prev`.
double next_zero(const Order& order, ZeroKind kind, double bessel_order, std::size_t index,
                 double prev, int expected_sign) {
  const double guess = mcmahon_guess(bessel_order, index);
  const double floor_gap = prev + 1e-9 * std::max(1.0, prev);
  double a = std::max(floor_gap, guess - 1.0);
  double b = std::max(a + 0.5, guess + 1.0);
  double fa = generator_jet(order, kind, a).value;
  double fb = generator_jet(order, kind, b).value;

  if (sign_of(fa) != expected_sign || sign_of(fb) == sign_of(fa)) {
    // The guess window is unreliable; walk right from prev until S changes sign.
    constexpr double kScanStep = 0.05;
    a = floor_gap;
    fa = generator_jet(order, kind, a).value;
    bool found = false;
    for (int k = 1; k < 100000; ++k) {
      const double x = floor_gap + k * kScanStep;
      const double fx = generator_jet(order, kind, x).value;
      if (sign_of(fx) != sign_of(fa)) {
        b = x;
        fb = fx;
        found = true;
        break;
      }
      a = x;
      fa = fx;
    }
    if (!found) {
      throw ConvergenceError("no sign change found for zero " + std::to_string(index), index);
    }
  }

  double x = (guess > a && guess < b) ? guess : 0.5 * (a + b);
  for (int it = 0; it < SpecialTolerances::max_root_iterations; ++it) {
    const Jet j = generator_jet(order, kind, x);
    if (j.value == 0) return x;
    if (sign_of(j.value) == sign_of(fa)) {
      a = x;
      fa = j.value;
    } else {
      b = x;
    }
    double next = (j.d1 != 0) ? x - j.value / j.d1 : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::fabs(next - x) <= 2e-16 * std::max(1.0, x) ||
        b - a <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, x)) {
      return next;
    }
    x = next;
  }
  throw ConvergenceError("zero " + std::to_string(index) + " did not converge", index);
}

template <class Stop>
ZeroTable build_table(const Order& order, ZeroKind kind, Stop stop) {
  std::vector<double> zeros, d1, d2;
  const double bessel_order = order.nu() + (kind == ZeroKind::B ? 1.0 : 0.0);
  double prev = 0.0;
  int sign_right = 1;  // A(0) = 1 and B(x) ~ x/(2nu+2) are both positive just right of 0
  for (std::size_t j = 1;; ++j) {
    double eta;
    if (order.classical()) {
      eta = kind == ZeroKind::A ? (static_cast<double>(j) - 0.5) * kPi : static_cast<double>(j) * kPi;
    } else {
      eta = next_zero(order, kind, bessel_order, j, prev, sign_right);
    }
    const Jet jet = generator_jet(order, kind, eta);
    if (jet.d1 == 0) throw ConvergenceError("derivative vanishes at zero " + std::to_string(j), j);
    zeros.push_back(eta);
    d1.push_back(jet.d1);
    d2.push_back(jet.d2);
    sign_right = sign_of(jet.d1);
    prev = eta;
    if (stop(j, eta)) break;
  }
  return ZeroTable(order, kind, std::move(zeros), std::move(d1), std::move(d2));
}

}  // namespace

ZeroTable zero_table(const Order& order, ZeroKind kind, std::size_t count) {
  if (count == 0) throw DomainError("zero count must be positive");
  return build_table(order, kind, [count](std::size_t j, double) { return j >= count; });
}

ZeroTable zero_table_upto(const Order& order, ZeroKind kind, double max_zero) {
  if (!std::isfinite(max_zero)) throw DomainError("zero bound must be finite");
  return build_table(order, kind, [max_zero](std::size_t, double eta) { return eta > max_zero; });
}

std::vector<MagnitudeSample> magnitude_profile(const Order& order, std::span<const double> xs) {
  std::vector<MagnitudeSample> out;
  out.reserve(xs.size());
  for (double x : xs) {
    require_finite(x);
    const double a = a_nu_jet(order, x).value;
    const double b = b_nu_jet(order, x).value;
    out.push_back({x, a * a + b * b});
  }
  return out;
}

}  // namespace gruenwald
