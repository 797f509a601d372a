#pragma once

#include <cmath>
#include <limits>

// Standard-normal building blocks. Everything downstream (marginals,
// posterior weights, threshold solvers) is expressed through phi, the upper
// tail Phi-bar and the scaled tail H(z) = exp(z^2/2) * Phi-bar(z), which
// stays representable where exp(z^2/2) and Phi-bar(z) separately do not.

namespace slabeb {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline double std_normal(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

inline double log_std_normal(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

/// Phi-bar(x) = P[N(0,1) > x].
inline double upper_tail(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

/// exp(t^2) * erfc(t), stable for all t.
double erfcx(double t);

/// H(z) = exp(z^2/2) * Phi-bar(z). Decreasing, H(0) = 1/2, H(z) ~ 1/(sqrt(2*pi) z).
inline double scaled_upper_tail(double z) { return 0.5 * erfcx(z * 0.70710678118654752440); }

/// log H(z), valid for either sign of z (grows like z^2/2 for z -> -inf).
double log_scaled_upper_tail(double z);

/// log Phi-bar(x), stable in both tails.
double log_upper_tail(double x);

inline double log_sum_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace slabeb
