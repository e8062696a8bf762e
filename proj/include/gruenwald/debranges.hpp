#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gruenwald/grid.hpp"
#include "gruenwald/report.hpp"
#include "gruenwald/series.hpp"

namespace gruenwald {

/// E = A - iB with A, B real entire. Second derivatives are optional; when
/// absent they are taken by central differences of the first derivatives
/// (only the near-node Taylor branch of the series uses them).
struct HermiteBiehler {
  std::string name;
  EntireFn A;
  EntireFn B;
  EntireFn A_deriv;
  EntireFn B_deriv;
  EntireFn A_second;
  EntireFn B_second;
  /// Declared exponential type; nodes are about pi/type_tau apart.
  double type_tau = 1.0;
  /// Closed-form phase derivative, if known.
  std::function<double(double)> phase_deriv;

  cplx E(cplx z) const;
  /// E*(z) = conj(E(conj z)).
  cplx E_star(cplx z) const;
};

struct HermiteBiehlerCheck {
  /// min over probes of |E(z)| - |E(conj z)|, Im z > 0.
  double hb_margin = 0.0;
  /// min |E(x)| over the real grid.
  double min_abs_real = 0.0;
  /// max |A - (E+E*)/2| + |B - i(E-E*)/2| over the probes.
  double decomposition_residual = 0.0;
  bool ok = false;
  std::string failure;
};

/// Sampled check (necessary, not sufficient) of the Hermite-Biehler
/// inequality, absence of real zeros on the grid and consistency of A, B
/// with E. Probes are x + iy for x on a coarse copy of the grid and
/// y in {0.05, 0.5, 2}.
HermiteBiehlerCheck verify_hermite_biehler(const HermiteBiehler& hb, const GridSpec& grid);

/// Reproducing kernel [A(conj w)B(z) - A(z)B(conj w)] / (pi (z - conj w)),
/// replaced by its first-order expansion when |z - conj w| < 1e-8.
cplx kernel_K(const HermiteBiehler& hb, cplx w, cplx z);

/// phi'(x): closed form when the structure has one, else pi K(x,x)/|E(x)|^2.
double phase_derivative(const HermiteBiehler& hb, double x);

/// A rotated decomposition e^{i alpha} E = A_alpha - i B_alpha.
struct PhaseData {
  const HermiteBiehler* hb = nullptr;
  double alpha = 0.0;

  double phase_deriv(double x) const { return phase_derivative(*hb, x); }
  cplx A_alpha(cplx z) const;
  cplx B_alpha(cplx z) const;
  cplx A_alpha_deriv(cplx z) const;
  cplx A_alpha_second(cplx z) const;
};

/// max over the grid of |phi'(x) - type_tau|, and min of phi'.
struct PhaseBound {
  double max_deviation = 0.0;
  double min_phase_deriv = 0.0;
};
PhaseBound phase_bound(const HermiteBiehler& hb, const GridSpec& grid);

/// Exact number of zeros of A_alpha in (a, b], from the phase increment.
std::size_t phase_node_count(const HermiteBiehler& hb, double alpha, double a, double b);

/// Every zero of A_alpha in [a, b] with A_alpha' and A_alpha''. Brackets come
/// from a sign scan at a quarter of the minimal spacing pi/(type + C); the
/// count is checked against the phase increment and a mismatch throws
/// HypothesisError.
std::vector<KernelNode> node_set(const HermiteBiehler& hb, double alpha, double a, double b, double phase_C);

void write_node_csv(std::ostream& out, std::span<const KernelNode> nodes);

/// G_E with nodes at the zeros of A_alpha. Built for |Re z| <= max_abs_x.
class DeBrangesOperator {
 public:
  DeBrangesOperator(const HermiteBiehler& hb, double alpha, double max_abs_x, double phase_C,
                    TruncationPolicy policy = {});

  const GruenwaldKernel& kernel() const noexcept { return kernel_; }
  SeriesValue apply(const std::function<double(double)>& f, cplx z) const;

 private:
  TruncationPolicy policy_;
  GruenwaldKernel kernel_;
};

SeriesValue gruenwald_E(const HermiteBiehler& hb, double alpha, const std::function<double(double)>& f, cplx z,
                        const TruncationPolicy& policy = {}, double phase_C = 2.0);

/// E_tau(z) = (2/sinh 2tau)^{1/2} sin(tau(z+i))/(z+i) with closed forms.
struct SinhExample {
  double tau = 1.0;
  HermiteBiehler hb;
  /// Declared bound on |phi' - tau| for tau >= 1.
  double phase_C = 2.0;

  cplx E(cplx z) const;
  double phase_deriv(double x) const;
  /// (x^2+1)|E(x)|^2 from its closed form (cosh 2tau - cos 2tau x)/sinh 2tau.
  double weighted_magnitude(double x) const;
  double sandwich_lo() const;  // tanh tau
  double sandwich_hi() const;  // coth tau
};

SinhExample example_sinh(double tau);

/// A = cos(tau z): max over the grid of |p_tau(x)|, where
/// w G_{A_tau}(1/w) = 1 + p_tau/tau and w(x) = x^2+1.
struct CosCaseResult {
  double max_abs_p = 0.0;
  double argmax = 0.0;
};
CosCaseResult cos_case_probe(double tau, const GridSpec& grid, const TruncationPolicy& policy = {});

/// G_{A_tau}(1/w)(0) for the dilations A_tau(z) = A(tau z) of A = sin(z)/z.
std::vector<double> dilation_failure(std::span<const double> tau_ladder, const TruncationPolicy& policy = {});
/// tau coth tau - 1: the closed form of the same series.
double dilation_failure_exact(double tau);
/// G_{E_tau}(1/w)(0) for the sinh family on the same ladder.
std::vector<double> dilation_control(std::span<const double> tau_ladder, const TruncationPolicy& policy = {});

enum class Theorem2Part {
  A,  // weight |E_tau|^{-2}
  B,  // weight w
};

struct Theorem2Setup {
  std::string family_id;
  std::function<HermiteBiehler(double tau)> family;
  std::string target;
  std::function<double(double)> f;
  std::function<double(double)> w;
  Theorem2Part part = Theorem2Part::B;
  /// |phi_tau' - tau| <= phase_C is checked on the grid.
  double phase_C = 2.0;
  /// c <= |E_tau|^2 w <= d, checked on the grid for part B.
  double sandwich_c = 0.0;
  double sandwich_d = 0.0;
};

/// One row per tau with the weighted sup error; hypothesis violations are
/// recorded in the report's failures and that tau is skipped.
ConvergenceReport theorem2_convergence(const Theorem2Setup& setup, std::span<const double> tau_ladder,
                                       const GridSpec& grid, const TruncationPolicy& policy = {});

/// The sinh family with w = x^2 + 1, sandwich bounds tanh/coth of tau_min.
Theorem2Setup sinh_setup(std::string target, std::function<double(double)> f, double tau_min = 1.0);

}  // namespace gruenwald
