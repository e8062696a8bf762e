#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gruenwald {

/// Uniform evaluation grid [min, max] with spacing `step`.
///
/// Points are generated as min + k*step (never by accumulation) so that two
/// runs with the same spec produce bit-identical abscissae. A point whose
/// magnitude is below step*1e-9 is snapped to exactly 0, which lets callers
/// detect the origin reliably.
struct GridSpec {
  double min = -5.0;
  double max = 5.0;
  double step = 1.0 / 97.0;

  void validate() const;
  std::vector<double> points() const;

  /// Parses "min:max:step"; the step may be written as a fraction "1/97".
  static GridSpec parse(std::string_view text);
  std::string to_string() const;
};

}  // namespace gruenwald
