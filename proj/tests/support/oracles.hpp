#pragma once

// Reference values computed without the library: closed forms and a Romberg
// integrator, so tests never check the code against itself.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

/// Romberg integration to near machine precision for smooth integrands.
template <class F>
double romberg(F&& f, double a, double b, int levels = 20) {
  std::vector<double> prev(1), cur;
  double h = b - a;
  prev[0] = 0.5 * h * (f(a) + f(b));
  for (int i = 1; i < levels; ++i) {
    h *= 0.5;
    double sum = 0.0;
    const std::size_t count = std::size_t{1} << (i - 1);
    for (std::size_t k = 0; k < count; ++k) sum += f(a + (2.0 * static_cast<double>(k) + 1.0) * h);
    cur.assign(static_cast<std::size_t>(i) + 1, 0.0);
    cur[0] = 0.5 * prev[0] + h * sum;
    double factor = 1.0;
    for (int j = 1; j <= i; ++j) {
      factor *= 4.0;
      cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (factor - 1.0);
    }
    if (i > 5 && std::abs(cur[i] - prev[i - 1]) <= 1e-15 * std::abs(cur[i])) return cur[i];
    prev = cur;
  }
  return prev.back();
}

inline double sinh_schedule(double X, double nu, double T, double t) {
  return X * std::sinh(nu * (T - t)) / std::sinh(nu * T);
}

/// Optimal martingale strategy on a constant price s, using
/// int_0^t ds / (1 + cosh(nu (T-s))) = (tanh(nu T/2) - tanh(nu (T-t)/2)) / nu.
inline double gs_constant(double X, double nu, double lambda, double s, double T, double t) {
  const double integral = (std::tanh(nu * T / 2) - std::tanh(nu * (T - t) / 2)) / nu;
  return std::sinh(nu * (T - t)) * (X / std::sinh(nu * T) - lambda * s / (2 * nu) * integral);
}

/// Same on nu = 0: (T-t)/T (X - lambda T/4 s t).
inline double gs_constant_nu0(double X, double lambda, double s, double T, double t) {
  return (T - t) / T * (X - lambda * T / 4 * s * t);
}

/// Martingale value with second moment m2(t), nu > 0.
template <class M2>
double value_nu(double X, double nu, double lambda, double s0, double T, M2&& m2) {
  const double tail = romberg(
      [&](double t) {
        const double th = std::tanh(nu * (T - t) / 2);
        return m2(t) * th * th;
      },
      0.0, T);
  return nu * X * X / std::tanh(nu * T) + lambda * X * s0 * std::tanh(nu * T / 2) / nu -
         lambda * lambda / (4 * nu * nu) * tail;
}

/// Mean of the realized cost of any deterministic schedule under a martingale:
/// -X S0 + eta int xdot^2 + gamma X^2 / 2.
inline double martingale_cost(double X, double s0, double eta, double gamma, double kinetic) {
  return -X * s0 + eta * kinetic + 0.5 * gamma * X * X;
}

}  // namespace oracle
