#pragma once

#include <cstddef>

namespace acx {

/// Composite Simpson rule with `intervals` panels (rounded up to even).
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals = 1000) {
  if (intervals % 2 == 1) ++intervals;
  const double h = (b - a) / static_cast<double>(intervals);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; ++i) {
    const double v = f(a + h * static_cast<double>(i));
    (i % 2 == 1 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace acx
