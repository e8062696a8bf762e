#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace gruenwald {

using cplx = std::complex<double>;

/// Numerical constants shared by the special-function routines.
struct SpecialTolerances {
  /// Absolute residual accepted for a function value at a computed zero.
  static constexpr double function_residual = 1e-12;
  /// Target accuracy of a computed zero.
  static constexpr double zero = 1e-10;
  /// |nu + 1/2| below this is treated as the classical order.
  static constexpr double classical_window = 1e-12;
  /// Largest number of terms any power series may use.
  static constexpr int max_series_terms = 2000;
  /// Newton/bisection iteration cap per zero.
  static constexpr int max_root_iterations = 200;
};

enum class Regime {
  G,          // nu > -1/2: interpolate at zeros of J_nu with A_nu
  Classical,  // nu = -1/2: A = cos, B = sin
  H,          // -1 < nu < -1/2: interpolate at zeros of J_{nu+1} with B_nu
};

/// A real Bessel order nu > -1 together with its regime.
class Order {
 public:
  explicit Order(double nu);

  double nu() const noexcept { return nu_; }
  Regime regime() const noexcept { return regime_; }
  bool classical() const noexcept { return regime_ == Regime::Classical; }
  /// Exponent 2nu+1 of the homogeneous weight.
  double weight_exponent() const noexcept { return 2.0 * nu_ + 1.0; }

 private:
  double nu_;
  Regime regime_;
};

/// Value and first two derivatives of a real function at one point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Bessel function of the first kind J_nu(x), nu > -1.
///
/// Uses the ascending series (summed in binary128) for x below
/// `bessel_crossover(nu)` and the Hankel large-argument expansion above it.
/// Negative x is accepted only for integer nu; J_nu(0) for -1 < nu < 0 is
/// infinite and rejected.
double bessel_j(double nu, double x);

/// J_nu(x) with its first two x-derivatives, each obtained from the same
/// representation (term-wise differentiated series or expansion).
Jet bessel_j_jet(double nu, double x);

/// Argument above which the asymptotic expansion replaces the series.
double bessel_crossover(double nu) noexcept;

/// Gamma(nu+1) (x/2)^{-nu} J_nu(x) and its derivatives at real x. Even in x.
Jet a_nu_jet(const Order& order, double x);
/// Gamma(nu+1) (x/2)^{-nu} J_{nu+1}(x) and its derivatives at real x. Odd in x.
Jet b_nu_jet(const Order& order, double x);

// Entire-function evaluation at complex z. Off the real axis these are summed
// from their even/odd power series; an EvaluationError is raised when the
// series would lose all significance to cancellation or exceeds its term cap.
cplx a_nu(const Order& order, cplx z);
cplx a_nu_prime(const Order& order, cplx z);
cplx b_nu(const Order& order, cplx z);
cplx b_nu_prime(const Order& order, cplx z);

enum class ZeroKind {
  A,  // positive zeros of J_nu (generator A_nu)
  B,  // positive zeros of J_{nu+1} (generator B_nu)
};

/// Ordered positive zeros of A_nu or B_nu with S'(eta) and S''(eta),
/// S being the generator matching the kind. Immutable once built.
class ZeroTable {
 public:
  ZeroTable(Order order, ZeroKind kind, std::vector<double> zeros,
            std::vector<double> derivs, std::vector<double> second_derivs);

  const Order& order() const noexcept { return order_; }
  ZeroKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return zeros_.size(); }
  std::span<const double> zeros() const noexcept { return zeros_; }
  std::span<const double> derivs() const noexcept { return derivs_; }
  std::span<const double> second_derivs() const noexcept { return second_derivs_; }

  /// CSV with header "index,zero,deriv,second_deriv"; index starts at 1.
  void write_csv(std::ostream& out) const;

 private:
  Order order_;
  ZeroKind kind_;
  std::vector<double> zeros_;
  std::vector<double> derivs_;
  std::vector<double> second_derivs_;
};

/// First `count` positive zeros. McMahon initial guesses, refined by
/// safeguarded Newton inside a verified sign-change bracket.
ZeroTable zero_table(const Order& order, ZeroKind kind, std::size_t count);

/// Every positive zero up to `max_zero`, plus the first one beyond it.
ZeroTable zero_table_upto(const Order& order, ZeroKind kind, double max_zero);

struct MagnitudeSample {
  double x = 0.0;
  double value = 0.0;  // A_nu(x)^2 + B_nu(x)^2
};

std::vector<MagnitudeSample> magnitude_profile(const Order& order,
                                               std::span<const double> xs);

}  // namespace gruenwald
