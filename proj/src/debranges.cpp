#include "gruenwald/debranges.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>

#include "gruenwald/errors.hpp"
#include "gruenwald/format.hpp"

namespace gruenwald {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

cplx second_or_difference(const EntireFn& second, const EntireFn& first, cplx z) {
  if (second) return second(z);
  const double h = 1e-5 * std::max(1.0, std::abs(z));
  return (first(z + h) - first(z - h)) / (2.0 * h);
}

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive");
}

// Safeguarded Newton inside a sign-change bracket [a, b] of a real function.
template <class F, class D>
double refine_root(F f, D df, double a, double b) {
  double fa = f(a);
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    const double d = df(x);
    double next = d != 0.0 ? x - fx / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::fabs(next - x) <= 2e-16 * std::max(1.0, std::fabs(x)) ||
        b - a <= 4e-16 * std::max(1.0, std::fabs(x))) {
      return next;
    }
    x = next;
  }
  throw ConvergenceError("node refinement did not converge near " + std::to_string(x), 0);
}

GruenwaldKernel cos_kernel(double tau, double reach) {
  const auto kmax = static_cast<long long>(std::ceil(reach / kPi)) + 2;
  std::vector<KernelNode> nodes;
  for (long long k = -kmax - 1; k <= kmax; ++k) {
    nodes.push_back({(static_cast<double>(k) + 0.5) * kPi, (k % 2 == 0) ? -1.0 : 1.0, 0.0});
  }
  const double cover = (static_cast<double>(kmax) + 0.5) * kPi;
  return GruenwaldKernel(std::move(nodes), [](cplx w) { return std::cos(w); }, tau, 1.0, -cover, cover);
}

cplx sinc(cplx u) {
  if (std::abs(u) < 1e-4) {
    const cplx u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

GruenwaldKernel sinc_kernel(double tau, double reach) {
  const auto kmax = static_cast<long long>(std::ceil(reach / kPi)) + 2;
  std::vector<KernelNode> nodes;
  for (long long k = -kmax; k <= kmax; ++k) {
    if (k == 0) continue;
    const double u = static_cast<double>(k) * kPi;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    // (sin u/u)' = cos u/u, (sin u/u)'' = -2 cos u/u^2 at u = k pi
    nodes.push_back({u, sign / u, -2.0 * sign / (u * u)});
  }
  const double cover = static_cast<double>(kmax) * kPi;
  return GruenwaldKernel(std::move(nodes), sinc, tau, 1.0, -cover, cover);
}

double poisson(double x) { return 1.0 / (x * x + 1.0); }

}  // namespace

cplx HermiteBiehler::E(cplx z) const { return A(z) - kI * B(z); }

cplx HermiteBiehler::E_star(cplx z) const { return std::conj(E(std::conj(z))); }

HermiteBiehlerCheck verify_hermite_biehler(const HermiteBiehler& hb, const GridSpec& grid) {
  HermiteBiehlerCheck out;
  out.hb_margin = INFINITY;
  out.min_abs_real = INFINITY;
  const auto xs = grid.points();
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / 64);
  for (std::size_t i = 0; i < xs.size(); i += stride) {
    for (double y : {0.05, 0.5, 2.0}) {
      const cplx z(xs[i], y);
      const cplx e = hb.E(z);
      out.hb_margin = std::min(out.hb_margin, std::abs(e) - std::abs(hb.E(std::conj(z))));
      const cplx es = hb.E_star(z);
      const double ra = std::abs(hb.A(z) - 0.5 * (e + es));
      const double rb = std::abs(hb.B(z) - 0.5 * kI * (e - es));
      out.decomposition_residual =
          std::max(out.decomposition_residual, (ra + rb) / std::max(1.0, std::abs(e) + std::abs(es)));
    }
  }
  for (double x : xs) out.min_abs_real = std::min(out.min_abs_real, std::abs(hb.E(x)));
  out.ok = true;
  if (!(out.hb_margin > 0.0)) {
    out.ok = false;
    out.failure = "|E(z)| > |E(conj z)| fails at a probe point";
  } else if (!(out.min_abs_real > 0.0)) {
    out.ok = false;
    out.failure = "E has a real zero on the grid";
  } else if (!(out.decomposition_residual < 1e-9)) {
    out.ok = false;
    out.failure = "A and B are inconsistent with E";
  }
  return out;
}

cplx kernel_K(const HermiteBiehler& hb, cplx w, cplx z) {
  const cplx wb = std::conj(w);
  const cplx d = z - wb;
  if (std::abs(d) >= 1e-8) {
    return (hb.A(wb) * hb.B(z) - hb.A(z) * hb.B(wb)) / (kPi * d);
  }
  const cplx a = hb.A(wb), b = hb.B(wb);
  const cplx a1 = hb.A_deriv(wb), b1 = hb.B_deriv(wb);
  const cplx a2 = second_or_difference(hb.A_second, hb.A_deriv, wb);
  const cplx b2 = second_or_difference(hb.B_second, hb.B_deriv, wb);
  return ((a * b1 - a1 * b) + 0.5 * (a * b2 - a2 * b) * d) / kPi;
}

double phase_derivative(const HermiteBiehler& hb, double x) {
  if (hb.phase_deriv) return hb.phase_deriv(x);
  return kPi * kernel_K(hb, x, x).real() / std::norm(hb.E(x));
}

cplx PhaseData::A_alpha(cplx z) const { return std::cos(alpha) * hb->A(z) + std::sin(alpha) * hb->B(z); }

cplx PhaseData::B_alpha(cplx z) const { return std::cos(alpha) * hb->B(z) - std::sin(alpha) * hb->A(z); }

cplx PhaseData::A_alpha_deriv(cplx z) const {
  return std::cos(alpha) * hb->A_deriv(z) + std::sin(alpha) * hb->B_deriv(z);
}

cplx PhaseData::A_alpha_second(cplx z) const {
  return std::cos(alpha) * second_or_difference(hb->A_second, hb->A_deriv, z) +
         std::sin(alpha) * second_or_difference(hb->B_second, hb->B_deriv, z);
}

PhaseBound phase_bound(const HermiteBiehler& hb, const GridSpec& grid) {
  PhaseBound out;
  out.min_phase_deriv = INFINITY;
  for (double x : grid.points()) {
    const double p = phase_derivative(hb, x);
    out.max_deviation = std::max(out.max_deviation, std::fabs(p - hb.type_tau));
    out.min_phase_deriv = std::min(out.min_phase_deriv, p);
  }
  return out;
}

std::size_t phase_node_count(const HermiteBiehler& hb, double alpha, double a, double b) {
  if (!(b > a)) return 0;
  // phi with E(x) e^{i phi(x)} real, so A_alpha = |E| cos(alpha - phi).
  const double phi_a = -std::arg(hb.E(a));
  const double panel = kPi / (2.0 * std::max(hb.type_tau, 1.0));
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / panel));
  const double h = (b - a) / static_cast<double>(panels);
  double increment = 0.0;
  const auto dphi = [&hb](double x) { return phase_derivative(hb, x); };
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + static_cast<double>(k) * h;
    increment += boost::math::quadrature::gauss<double, 20>::integrate(dphi, lo, lo + h);
  }
  const double phi_b = phi_a + increment;
  const double shift = 0.5 * kPi - alpha;
  const double count = std::floor((phi_b + shift) / kPi) - std::floor((phi_a + shift) / kPi);
  if (count < 0) throw HypothesisError("phase decreases across the window");
  return static_cast<std::size_t>(count);
}

std::vector<KernelNode> node_set(const HermiteBiehler& hb, double alpha, double a, double b, double phase_C) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("node window must be a finite interval");
  if (!(phase_C >= 0.0)) throw DomainError("phase bound must be nonnegative");
  const PhaseData ph{&hb, alpha};
  const auto f = [&ph](double x) { return ph.A_alpha(x).real(); };
  const auto df = [&ph](double x) { return ph.A_alpha_deriv(x).real(); };

  const double step = kPi / (hb.type_tau + phase_C) / 4.0;
  const auto steps = static_cast<std::size_t>(std::ceil((b - a) / step));
  const double h = (b - a) / static_cast<double>(steps);

  std::vector<KernelNode> nodes;
  auto push = [&](double t) {
    nodes.push_back({t, ph.A_alpha_deriv(t).real(), ph.A_alpha_second(t).real()});
  };
  double x0 = a;
  double f0 = f(x0);
  if (f0 == 0.0) push(x0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double x1 = k == steps ? b : a + static_cast<double>(k) * h;
    const double f1 = f(x1);
    if (f1 == 0.0) {
      push(x1);
    } else if (f0 != 0.0 && (f0 > 0) != (f1 > 0)) {
      push(refine_root(f, df, x0, x1));
    }
    x0 = x1;
    f0 = f1;
  }

  const std::size_t after_a =
      static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [a](const KernelNode& n) { return n.t > a; }));
  const std::size_t expected = phase_node_count(hb, alpha, a, b);
  if (after_a != expected) {
    throw HypothesisError("node scan found " + std::to_string(after_a) + " zeros but the phase increment predicts " +
                          std::to_string(expected));
  }
  return nodes;
}

void write_node_csv(std::ostream& out, std::span<const KernelNode> nodes) {
  out << "index,node,A_deriv\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << (i + 1) << ',' << format_double(nodes[i].t) << ',' << format_double(nodes[i].d1) << '\n';
  }
}

namespace {

GruenwaldKernel debranges_kernel(const HermiteBiehler& hb, double alpha, double max_abs_x, double phase_C,
                                 const TruncationPolicy& policy) {
  policy.validate();
  if (!(hb.type_tau > 0.0)) throw DomainError("Hermite-Biehler type must be positive");
  const double unit = 1.0 / hb.type_tau;
  const double reach = max_abs_x + policy.reach() * unit + 2.0 * kPi * unit;
  auto nodes = node_set(hb, alpha, -reach, reach, phase_C);
  EntireFn gen = [hb, alpha](cplx z) { return PhaseData{&hb, alpha}.A_alpha(z); };
  return GruenwaldKernel(std::move(nodes), std::move(gen), 1.0, unit, -reach, reach);
}

}  // namespace

DeBrangesOperator::DeBrangesOperator(const HermiteBiehler& hb, double alpha, double max_abs_x, double phase_C,
                                     TruncationPolicy policy)
    : policy_(policy), kernel_(debranges_kernel(hb, alpha, max_abs_x, phase_C, policy)) {}

SeriesValue DeBrangesOperator::apply(const std::function<double(double)>& f, cplx z) const {
  return eval_series(kernel_, f, z, policy_);
}

SeriesValue gruenwald_E(const HermiteBiehler& hb, double alpha, const std::function<double(double)>& f, cplx z,
                        const TruncationPolicy& policy, double phase_C) {
  return DeBrangesOperator(hb, alpha, std::fabs(z.real()), phase_C, policy).apply(f, z);
}

// ---------------------------------------------------------------------------

cplx SinhExample::E(cplx z) const {
  return std::sqrt(2.0 / std::sinh(2.0 * tau)) * std::sin(tau * (z + kI)) / (z + kI);
}

double SinhExample::phase_deriv(double x) const { return hb.phase_deriv(x); }

double SinhExample::weighted_magnitude(double x) const {
  const double t2 = 2.0 * tau;
  return 1.0 / std::tanh(t2) - std::cos(t2 * x) / std::sinh(t2);
}

double SinhExample::sandwich_lo() const { return std::tanh(tau); }

double SinhExample::sandwich_hi() const { return 1.0 / std::tanh(tau); }

SinhExample example_sinh(double tau) {
  require_tau(tau);
  SinhExample ex;
  ex.tau = tau;
  const double rc = std::sqrt(1.0 / std::tanh(tau));  // sqrt(2/sinh 2tau) cosh tau
  const double rt = std::sqrt(std::tanh(tau));        // sqrt(2/sinh 2tau) sinh tau

  // A = N/D, B = M/D with D = z^2 + 1; each callable returns (value, d1, d2)
  // of N or M through `which`.
  struct Parts {
    cplx n, n1, n2, m, m1, m2;
  };
  auto parts = [tau, rc, rt](cplx z) {
    const cplx s = std::sin(tau * z), c = std::cos(tau * z);
    Parts p;
    p.n = z * rc * s + rt * c;
    p.n1 = rc * s + tau * z * rc * c - tau * rt * s;
    p.n2 = 2.0 * tau * rc * c - tau * tau * z * rc * s - tau * tau * rt * c;
    p.m = rc * s - z * rt * c;
    p.m1 = tau * rc * c - rt * c + tau * z * rt * s;
    p.m2 = -tau * tau * rc * s + 2.0 * tau * rt * s + tau * tau * z * rt * c;
    return p;
  };
  // Quotient rule for order 0, 1, 2. Off the removable points z = +-i.
  auto quotient = [](cplx z, cplx u, cplx u1, cplx u2, int order) -> cplx {
    const cplx d = z * z + 1.0;
    if (order == 0) return u / d;
    if (order == 1) return u1 / d - 2.0 * z * u / (d * d);
    return u2 / d - 4.0 * z * u1 / (d * d) - 2.0 * u / (d * d) + 8.0 * z * z * u / (d * d * d);
  };
  // Near z = +-i average two symmetric neighbours (error ~ h^2).
  auto regular = [](auto fn) {
    return [fn](cplx z) {
      if (std::abs(z * z + 1.0) < 1e-6) {
        const double h = 1e-4;
        return 0.5 * (fn(z + h) + fn(z - h));
      }
      return fn(z);
    };
  };
  auto make = [&](bool is_a, int order) {
    return regular([parts, quotient, is_a, order](cplx z) {
      const Parts p = parts(z);
      return is_a ? quotient(z, p.n, p.n1, p.n2, order) : quotient(z, p.m, p.m1, p.m2, order);
    });
  };

  HermiteBiehler& hb = ex.hb;
  hb.name = "sinh";
  hb.A = make(true, 0);
  hb.A_deriv = make(true, 1);
  hb.A_second = make(true, 2);
  hb.B = make(false, 0);
  hb.B_deriv = make(false, 1);
  hb.B_second = make(false, 2);
  hb.type_tau = tau;
  hb.phase_deriv = [tau](double x) {
    const double t2 = 2.0 * tau;
    // tau sinh 2tau/(cosh 2tau - cos 2tau x), rearranged to avoid overflow
    return tau * std::tanh(t2) / (1.0 - std::cos(t2 * x) / std::cosh(t2)) - 1.0 / (x * x + 1.0);
  };
  return ex;
}

CosCaseResult cos_case_probe(double tau, const GridSpec& grid, const TruncationPolicy& policy) {
  require_tau(tau);
  policy.validate();
  const double max_x = std::max(std::fabs(grid.min), std::fabs(grid.max));
  const GruenwaldKernel kernel = cos_kernel(tau, tau * max_x + policy.reach());
  const auto samples = [tau](double u) { return poisson(u / tau); };
  CosCaseResult out;
  for (double x : grid.points()) {
    const double g = eval_series(kernel, samples, x, policy).value.real();
    const double p = tau * ((x * x + 1.0) * g - 1.0);
    if (std::fabs(p) > out.max_abs_p) {
      out.max_abs_p = std::fabs(p);
      out.argmax = x;
    }
  }
  return out;
}

std::vector<double> dilation_failure(std::span<const double> tau_ladder, const TruncationPolicy& policy) {
  policy.validate();
  std::vector<double> out;
  for (double tau : tau_ladder) {
    require_tau(tau);
    // Samples decay on the scale tau in kernel coordinates; keep the window
    // well beyond it so the tail completion sees a nearly constant density.
    TruncationPolicy wide = policy;
    wide.radius = std::max(policy.radius, 64.0 * tau);
    const GruenwaldKernel kernel = sinc_kernel(tau, wide.reach());
    out.push_back(eval_series(kernel, [tau](double u) { return poisson(u / tau); }, 0.0, wide).value.real());
  }
  return out;
}

double dilation_failure_exact(double tau) {
  require_tau(tau);
  return tau / std::tanh(tau) - 1.0;
}

std::vector<double> dilation_control(std::span<const double> tau_ladder, const TruncationPolicy& policy) {
  std::vector<double> out;
  for (double tau : tau_ladder) {
    const SinhExample ex = example_sinh(tau);
    out.push_back(gruenwald_E(ex.hb, 0.0, poisson, 0.0, policy, ex.phase_C).value.real());
  }
  return out;
}

ConvergenceReport theorem2_convergence(const Theorem2Setup& setup, std::span<const double> tau_ladder,
                                       const GridSpec& grid, const TruncationPolicy& policy) {
  ConvergenceReport report;
  report.experiment = setup.part == Theorem2Part::A ? "theorem2a" : "theorem2b";
  report.family_id = setup.family_id;
  report.target = setup.target;
  report.operator_name = "G_E";
  report.grid = grid;
  report.radius = policy.radius;
  report.tail_tolerance = policy.tail_tolerance;
  const auto xs = grid.points();
  const double max_x = std::max(std::fabs(grid.min), std::fabs(grid.max));

  for (double tau : tau_ladder) {
    const HermiteBiehler hb = setup.family(tau);
    const std::string at = " at tau=" + format_double(tau);
    const HermiteBiehlerCheck hbc = verify_hermite_biehler(hb, grid);
    if (!hbc.ok) {
      report.failures.push_back(hbc.failure + at);
      continue;
    }
    const PhaseBound pb = phase_bound(hb, grid);
    if (!(pb.max_deviation <= setup.phase_C)) {
      report.failures.push_back("phase bound |phi' - tau| <= " + format_double(setup.phase_C) + " violated (" +
                                format_double(pb.max_deviation) + ")" + at);
      continue;
    }
    if (setup.part == Theorem2Part::B) {
      bool ok = true;
      for (double x : xs) {
        const double v = std::norm(hb.E(x)) * setup.w(x);
        if (!(v >= setup.sandwich_c && v <= setup.sandwich_d)) {
          report.failures.push_back("sandwich c <= |E|^2 w <= d violated at x=" + format_double(x) + at);
          ok = false;
          break;
        }
      }
      if (!ok) continue;
    }

    const DeBrangesOperator op(hb, 0.0, max_x, setup.phase_C, policy);
    ConvergenceRow row;
    row.tau = tau;
    bool first = true;
    for (double x : xs) {
      const SeriesValue s = op.apply(setup.f, x);
      const double weight = setup.part == Theorem2Part::B ? setup.w(x) : 1.0 / std::norm(hb.E(x));
      const double err = std::fabs(s.value.real() - setup.f(x)) * weight;
      if (first || err > row.sup_error) {
        row.sup_error = err;
        row.argmax = x;
        first = false;
      }
      row.nodes_used = std::max(row.nodes_used, s.nodes_used);
      row.tail_estimate = std::max(row.tail_estimate, s.tail_estimate * weight);
    }
    report.rows.push_back(row);
  }
  return report;
}

Theorem2Setup sinh_setup(std::string target, std::function<double(double)> f, double tau_min) {
  require_tau(tau_min);
  Theorem2Setup s;
  s.family_id = "sinh";
  s.family = [](double tau) { return example_sinh(tau).hb; };
  s.target = std::move(target);
  s.f = std::move(f);
  s.w = [](double x) { return x * x + 1.0; };
  s.part = Theorem2Part::B;
  s.phase_C = 2.0;
  // tanh and coth are monotone, so the smallest tau gives the widest band.
  s.sandwich_c = std::tanh(tau_min) * (1.0 - 1e-13);
  s.sandwich_d = (1.0 / std::tanh(tau_min)) * (1.0 + 1e-13);
  return s;
}

}  // namespace gruenwald
