#include "gruenwald/grid.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "gruenwald/errors.hpp"
#include "gruenwald/format.hpp"

namespace gruenwald {

namespace {

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

double parse_maybe_fraction(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text);
  const double num = parse_number(text.substr(0, slash));
  const double den = parse_number(text.substr(slash + 1));
  if (den == 0.0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

constexpr std::size_t kMaxPoints = 50'000'000;

}  // namespace

void GridSpec::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(step)) {
    throw DomainError("grid bounds and step must be finite");
  }
  if (!(max >= min)) throw DomainError("grid max must not be below grid min");
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if ((max - min) / step > static_cast<double>(kMaxPoints)) {
    throw DomainError("grid has too many points");
  }
}

std::vector<double> GridSpec::points() const {
  validate();
  // Tolerate rounding so that e.g. -5:5:1/97 includes 5.
  const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    double x = min + static_cast<double>(k) * step;
    if (std::fabs(x) < step * 1e-9) x = 0.0;
    out.push_back(x);
  }
  return out;
}

GridSpec GridSpec::parse(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
      text.find(':', c2 + 1) != std::string_view::npos) {
    throw DomainError("grid must look like min:max:step");
  }
  GridSpec g;
  g.min = parse_maybe_fraction(text.substr(0, c1));
  g.max = parse_maybe_fraction(text.substr(c1 + 1, c2 - c1 - 1));
  g.step = parse_maybe_fraction(text.substr(c2 + 1));
  g.validate();
  return g;
}

std::string GridSpec::to_string() const {
  return format_double(min) + ":" + format_double(max) + ":" + format_double(step);
}

}  // namespace gruenwald
