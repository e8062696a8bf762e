#pragma once

#include <string>

namespace gruenwald {

/// Locale-independent rendering with 17 significant digits and '.' as the
/// decimal separator. Used for every CSV cell the library writes.
std::string format_double(double value);

}  // namespace gruenwald
