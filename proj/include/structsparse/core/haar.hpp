#pragma once

#include <cmath>

#include "structsparse/core/signal.hpp"

namespace structsparse {

inline bool is_power_of_two(Index p) { return p >= 1 && (p & (p - 1)) == 0; }

inline int log2_exact(Index p) {
  int l = 0;
  while ((Index{1} << l) < p) ++l;
  return l;
}

namespace detail {

// One orthonormal Haar step on `len` samples read with stride `stride`:
// averages go to the first half, details to the second.
inline void haar_step(double* data, Index len, Index stride, double* tmp) {
  const double s = 1.0 / std::sqrt(2.0);
  const Index half = len / 2;
  for (Index i = 0; i < half; ++i) {
    const double a = data[2 * i * stride];
    const double b = data[(2 * i + 1) * stride];
    tmp[i] = s * (a + b);
    tmp[half + i] = s * (a - b);
  }
  for (Index i = 0; i < len; ++i) data[i * stride] = tmp[i];
}

inline void haar_step_inverse(double* data, Index len, Index stride, double* tmp) {
  const double s = 1.0 / std::sqrt(2.0);
  const Index half = len / 2;
  for (Index i = 0; i < half; ++i) {
    const double a = data[i * stride];
    const double d = data[(half + i) * stride];
    tmp[2 * i] = s * (a + d);
    tmp[2 * i + 1] = s * (a - d);
  }
  for (Index i = 0; i < len; ++i) data[i * stride] = tmp[i];
}

inline void check_side(Index p, Index size) {
  if (p < 2 || !is_power_of_two(p))
    throw InvalidParameter("haar2d: side must be a power of two >= 2");
  if (size != p * p) throw InvalidParameter("haar2d: signal length must be p*p");
}

}  // namespace detail

/// Full-depth (log2 p levels) separable 2-D Haar analysis of a row-major
/// p x p image. Output uses the usual pyramid layout: the scaling coefficient
/// sits at (0,0), detail bands of scale s occupy [0,2s)^2 \ [0,s)^2.
inline Signal haar2d_forward(const Signal& image, Index p) {
  detail::check_side(p, image.size());
  Signal c = image;
  std::vector<double> tmp(static_cast<std::size_t>(p));
  for (Index len = p; len >= 2; len /= 2) {
    for (Index r = 0; r < len; ++r) detail::haar_step(c.data() + r * p, len, 1, tmp.data());
    for (Index col = 0; col < len; ++col) detail::haar_step(c.data() + col, len, p, tmp.data());
  }
  return c;
}

inline Signal haar2d_inverse(const Signal& coeffs, Index p) {
  detail::check_side(p, coeffs.size());
  Signal x = coeffs;
  std::vector<double> tmp(static_cast<std::size_t>(p));
  for (Index len = 2; len <= p; len *= 2) {
    for (Index col = 0; col < len; ++col)
      detail::haar_step_inverse(x.data() + col, len, p, tmp.data());
    for (Index r = 0; r < len; ++r)
      detail::haar_step_inverse(x.data() + r * p, len, 1, tmp.data());
  }
  return x;
}

}  // namespace structsparse
