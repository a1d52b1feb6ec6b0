#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace sdqc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(x) + exp(y)) without overflow.
inline double log_add(double x, double y) {
  if (x < y) std::swap(x, y);
  if (y == kNegInf) return x;
  return x + std::log1p(std::exp(y - x));
}

// log sum exp over a span: max shift, then a single accumulation pass.
// Both inference passes and the chain reference use this exact routine so
// that their elementary operation order matches.
inline double log_sum_exp(std::span<const double> values) {
  double m = kNegInf;
  for (double v : values) {
    if (v > m) m = v;
  }
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - m);
  }
  return m + std::log(acc);
}

}  // namespace sdqc
