#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "gruenwald/special.hpp"

namespace gruenwald {

/// Complex-capable entire function.
using EntireFn = std::function<cplx(cplx)>;

/// A real node t of the generator S with S'(t) and S''(t).
struct KernelNode {
  double t = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Sample value attached to a node, given the node in kernel coordinates.
using SampleFn = std::function<double(double t)>;

/// Samples looked up in a table keyed by node; a node with no entry raises
/// MissingSampleError when the series reaches it.
SampleFn samples_from_map(std::map<double, double> table);

/// Quadratic-node interpolation kernel
///   z -> sum_t s(t) S(scale*z)^2 / (S'(t)^2 (scale*z - t)^2).
///
/// Nodes live in kernel coordinates (the argument of S). They are a finite
/// window of an infinite node set: every node of S in [cover_lo, cover_hi]
/// must be present. `phase_unit` is the typical node gap divided by pi and
/// converts truncation radii into kernel coordinates.
class GruenwaldKernel {
 public:
  GruenwaldKernel(std::vector<KernelNode> nodes, EntireFn generator, double scale,
                  double phase_unit, double cover_lo, double cover_hi);

  /// Nodes sorted by value.
  std::span<const KernelNode> nodes() const noexcept { return nodes_; }
  /// Nodes ordered by |t|, with -t directly after t.
  std::vector<KernelNode> nodes_by_magnitude() const;

  cplx generator(cplx w) const { return gen_(w); }
  double scale() const noexcept { return scale_; }
  double phase_unit() const noexcept { return phase_unit_; }
  double cover_lo() const noexcept { return cover_lo_; }
  double cover_hi() const noexcept { return cover_hi_; }
  /// True when the node set is invariant under t -> -t.
  bool symmetric() const noexcept { return symmetric_; }

 private:
  std::vector<KernelNode> nodes_;
  EntireFn gen_;
  double scale_;
  double phase_unit_;
  double cover_lo_;
  double cover_hi_;
  bool symmetric_ = false;
};

/// Which nodes take part in one evaluation and how the rest is accounted for.
struct TruncationPolicy {
  /// Half-width of the node window around Re(scale*z), in units where the
  /// node gap is about pi. Widened by 25% steps until min_nodes are inside.
  double radius = 256.0 * 3.14159265358979323846;
  /// Tail estimates above this are flagged on the result.
  double tail_tolerance = 1e-2;
  std::size_t min_nodes = 500;
  /// Add the integral approximation of the excluded nodes to the value.
  bool complete_tail = true;

  void validate() const;
  /// Distance from an evaluation point that a node table must cover, in
  /// phase units, to serve any window this policy can request.
  double reach() const;
};

struct SeriesValue {
  cplx value;
  /// Riemann-sum bound on the excluded nodes' contribution.
  double tail_estimate = 0.0;
  /// Integral approximation of the excluded nodes (already in `value` when
  /// the policy completes the tail).
  cplx tail_completion;
  std::size_t nodes_used = 0;
  bool tail_flagged = false;
};

/// Sums the kernel series at z. Terms are accumulated in ascending |t|, the
/// pair +-t consecutively, so results do not depend on the caller.
SeriesValue eval_series(const GruenwaldKernel& kernel, const SampleFn& samples, cplx z,
                        const TruncationPolicy& policy = {});

/// Kernel of the Fejer-type operator: S = sin, nodes k*pi, scale tau, with
/// every node up to `reach` (kernel coordinates) on both sides.
GruenwaldKernel fejer_kernel(double tau, double reach);

/// sum_k f(k pi/tau) sin^2(tau z)/(tau z - k pi)^2.
SeriesValue fejer_operator(const std::function<double(double)>& f, double tau, cplx z,
                           const TruncationPolicy& policy = {});

/// Least-squares slope of log|F(iy)| against y over the ladder: a heuristic
/// witness for the exponential type of F. Points where F vanishes or
/// overflows are dropped; fewer than three usable points is an error.
double estimate_type(const EntireFn& f, std::span<const double> y_ladder);

}  // namespace gruenwald
