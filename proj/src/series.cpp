#include "gruenwald/series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "gruenwald/errors.hpp"

namespace gruenwald {

namespace {

constexpr double kPi = std::numbers::pi;
// Closer than this to a node (kernel coordinates), the Taylor form is used.
constexpr double kNearNode = 1e-6;
constexpr double kGeneratorResidual = 1e-10;

using lcplx = std::complex<long double>;

}  // namespace

SampleFn samples_from_map(std::map<double, double> table) {
  return [table = std::move(table)](double t) {
    const auto it = table.find(t);
    if (it == table.end()) throw MissingSampleError(t);
    return it->second;
  };
}

GruenwaldKernel::GruenwaldKernel(std::vector<KernelNode> nodes, EntireFn generator, double scale,
                                 double phase_unit, double cover_lo, double cover_hi)
    : nodes_(std::move(nodes)),
      gen_(std::move(generator)),
      scale_(scale),
      phase_unit_(phase_unit),
      cover_lo_(cover_lo),
      cover_hi_(cover_hi) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw DomainError("kernel scale must be positive");
  if (!(phase_unit_ > 0.0) || !std::isfinite(phase_unit_)) {
    throw DomainError("kernel phase unit must be positive");
  }
  if (!(cover_lo_ < cover_hi_)) throw DomainError("kernel coverage interval is empty");
  if (!gen_) throw DomainError("kernel needs a generator");
  std::sort(nodes_.begin(), nodes_.end(),
            [](const KernelNode& a, const KernelNode& b) { return a.t < b.t; });
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const KernelNode& n = nodes_[i];
    if (!std::isfinite(n.t) || !std::isfinite(n.d1) || !std::isfinite(n.d2)) {
      throw DomainError("kernel node data must be finite");
    }
    if (i > 0 && !(n.t > nodes_[i - 1].t)) throw DomainError("kernel nodes must be distinct");
    if (n.d1 == 0.0) throw DomainError("generator derivative vanishes at a node");
    const double residual = std::abs(gen_(n.t));
    const double allowed = kGeneratorResidual * std::max(1.0, std::fabs(n.d1) * std::max(1.0, std::fabs(n.t)));
    if (!(residual <= allowed)) {
      throw DomainError("generator does not vanish at node " + std::to_string(n.t));
    }
  }
  symmetric_ = true;
  for (std::size_t i = 0, j = nodes_.size(); i < j;) {
    --j;
    if (i == j) {
      symmetric_ = symmetric_ && nodes_[i].t == 0.0;
      break;
    }
    if (std::fabs(nodes_[i].t + nodes_[j].t) > 1e-12 * std::max(1.0, std::fabs(nodes_[j].t))) {
      symmetric_ = false;
      break;
    }
    ++i;
  }
}

std::vector<KernelNode> GruenwaldKernel::nodes_by_magnitude() const {
  std::vector<KernelNode> out(nodes_);
  std::stable_sort(out.begin(), out.end(), [](const KernelNode& a, const KernelNode& b) {
    const double fa = std::fabs(a.t), fb = std::fabs(b.t);
    if (fa != fb) return fa < fb;
    return a.t > b.t;
  });
  return out;
}

void TruncationPolicy::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("truncation radius must be positive");
  if (!(tail_tolerance > 0.0)) throw DomainError("tail tolerance must be positive");
  if (min_nodes == 0) throw DomainError("min_nodes must be positive");
}

double TruncationPolicy::reach() const {
  return 1.6 * std::max(radius, (static_cast<double>(min_nodes) / 2.0 + 4.0) * kPi) + 8.0 * kPi;
}

SeriesValue eval_series(const GruenwaldKernel& kernel, const SampleFn& samples, cplx z,
                        const TruncationPolicy& policy) {
  policy.validate();
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("evaluation point must be finite");
  const auto nodes = kernel.nodes();
  const cplx w = kernel.scale() * z;
  const double center = w.real();

  auto below = [&](double v) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), v, [](const KernelNode& n, double x) { return n.t < x; }) -
        nodes.begin());
  };
  auto through = [&](double v) {
    return static_cast<std::size_t>(
        std::upper_bound(nodes.begin(), nodes.end(), v, [](double x, const KernelNode& n) { return x < n.t; }) -
        nodes.begin());
  };

  double r = policy.radius * kernel.phase_unit();
  std::size_t lo = 0, hi = 0;
  for (;;) {
    if (center - r < kernel.cover_lo() || center + r > kernel.cover_hi()) {
      throw EvaluationError("node table does not cover the truncation window at " + std::to_string(z.real()));
    }
    lo = below(center - r);
    hi = through(center + r);
    if (hi - lo >= policy.min_nodes && hi - lo >= 4) break;
    r *= 1.25;
  }

  const cplx s_w = kernel.generator(w);
  const lcplx s_w_l(s_w.real(), s_w.imag());

  auto term = [&](const KernelNode& n) -> lcplx {
    const double sample = samples(n.t);
    if (sample == 0.0) return {};
    const cplx d = w - n.t;
    if (std::abs(d) < kNearNode) {
      // S(w) = S'(t) d + S''(t) d^2/2 + ...
      const lcplx f = 1.0L + lcplx(n.d2 / (2.0 * n.d1)) * lcplx(d.real(), d.imag());
      return static_cast<long double>(sample) * f * f;
    }
    const lcplx q = s_w_l / (static_cast<long double>(n.d1) * lcplx(d.real(), d.imag()));
    return static_cast<long double>(sample) * q * q;
  };

  // Ascending |t|: two pointers walking out from the origin.
  const std::size_t split = std::clamp(below(0.0), lo, hi);
  lcplx sum = 0;
  std::size_t left = split, right = split;
  while (left > lo || right < hi) {
    const bool take_right =
        left == lo || (right < hi && std::fabs(nodes[right].t) <= std::fabs(nodes[left - 1].t));
    if (take_right) {
      sum += term(nodes[right++]);
    } else {
      sum += term(nodes[--left]);
    }
  }

  // Excluded nodes: each side treated as a midpoint sum for the integral of
  // rho(u) S(w)^2/(w-u)^2, rho = sample/S'^2 per unit length, with the first
  // Euler-Maclaurin correction.
  SeriesValue out;
  out.nodes_used = hi - lo;
  const double s2 = std::norm(s_w);
  cplx completion = 0;
  double bound = 0.0;
  {
    const KernelNode& edge = nodes[lo];
    const double gap = nodes[lo + 1].t - edge.t;
    const double rho = samples(edge.t) / (edge.d1 * edge.d1);
    const cplx start = w - (edge.t - 0.5 * gap);
    completion += rho * s_w * s_w * (1.0 / (gap * start) - gap / (12.0 * start * start * start));
    double m = 0.0;
    for (std::size_t i = lo; i < hi && nodes[i].t < center - 0.5 * r; ++i) {
      m = std::max(m, std::fabs(samples(nodes[i].t)) / (nodes[i].d1 * nodes[i].d1));
    }
    bound += s2 * m / (gap * std::abs(start));
  }
  {
    const KernelNode& edge = nodes[hi - 1];
    const double gap = edge.t - nodes[hi - 2].t;
    const double rho = samples(edge.t) / (edge.d1 * edge.d1);
    const cplx start = (edge.t + 0.5 * gap) - w;
    completion += rho * s_w * s_w * (1.0 / (gap * start) - gap / (12.0 * start * start * start));
    double m = 0.0;
    for (std::size_t i = hi; i-- > lo && nodes[i].t > center + 0.5 * r;) {
      m = std::max(m, std::fabs(samples(nodes[i].t)) / (nodes[i].d1 * nodes[i].d1));
    }
    bound += s2 * m / (gap * std::abs(start));
  }

  out.value = cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  out.tail_completion = completion;
  if (policy.complete_tail) out.value += completion;
  out.tail_estimate = bound;
  out.tail_flagged = bound > policy.tail_tolerance;
  return out;
}

GruenwaldKernel fejer_kernel(double tau, double reach) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive");
  if (!(reach > 0.0) || !std::isfinite(reach)) throw DomainError("reach must be positive");
  const auto kmax = static_cast<long long>(std::ceil(reach / kPi)) + 2;
  std::vector<KernelNode> nodes;
  nodes.reserve(static_cast<std::size_t>(2 * kmax + 1));
  for (long long k = -kmax; k <= kmax; ++k) {
    nodes.push_back({static_cast<double>(k) * kPi, (k % 2 == 0) ? 1.0 : -1.0, 0.0});
  }
  const double cover = static_cast<double>(kmax) * kPi;
  return GruenwaldKernel(std::move(nodes), [](cplx w) { return std::sin(w); }, tau, 1.0, -cover, cover);
}

SeriesValue fejer_operator(const std::function<double(double)>& f, double tau, cplx z,
                           const TruncationPolicy& policy) {
  policy.validate();
  const GruenwaldKernel kernel = fejer_kernel(tau, tau * std::fabs(z.real()) + policy.reach());
  return eval_series(kernel, [&](double t) { return f(t / tau); }, z, policy);
}

double estimate_type(const EntireFn& f, std::span<const double> y_ladder) {
  std::vector<std::pair<double, double>> pts;
  for (double y : y_ladder) {
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("type ladder entries must be positive");
    double mag = 0.0;
    try {
      mag = std::abs(f(cplx(0.0, y)));
    } catch (const EvaluationError&) {
      continue;
    }
    if (!(mag > 0.0) || !std::isfinite(mag)) continue;
    pts.emplace_back(y, std::log(mag));
  }
  if (pts.size() < 3) throw DomainError("fewer than three usable points for the type estimate");
  double my = 0, ml = 0;
  for (auto [y, l] : pts) {
    my += y;
    ml += l;
  }
  my /= static_cast<double>(pts.size());
  ml /= static_cast<double>(pts.size());
  double num = 0, den = 0;
  for (auto [y, l] : pts) {
    num += (y - my) * (l - ml);
    den += (y - my) * (y - my);
  }
  if (den == 0.0) throw DomainError("type ladder needs distinct points");
  return num / den;
}

}  // namespace gruenwald
