#pragma once

#include <cmath>
#include <limits>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse {

struct Metrics {
  double relative_error = 0.0;
  double psnr = std::numeric_limits<double>::infinity();  // +inf when identical
  double support_precision = 1.0;
  double support_recall = 1.0;
};

/// Support of an estimate: entries above 1e-8 * ||x||_inf.
inline Support estimated_support(const Signal& x) {
  const double peak = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0) return Support(x.size());
  return Support::of(x, 1e-8 * peak);
}

inline Metrics compute_metrics(const Signal& estimate, const Signal& truth) {
  if (estimate.size() != truth.size())
    throw InvalidParameter("compute_metrics: length mismatch");
  const double ref = truth.norm();
  if (ref == 0.0) throw UndefinedReference("compute_metrics: reference signal is zero");

  Metrics m;
  const double err = (estimate - truth).norm();
  m.relative_error = err / ref;

  const double mse = err * err / static_cast<double>(truth.size());
  const double peak = truth.cwiseAbs().maxCoeff();
  m.psnr = mse == 0.0 ? std::numeric_limits<double>::infinity()
                      : 10.0 * std::log10(peak * peak / mse);

  const Support est = estimated_support(estimate);
  const Support tru = Support::of(truth);
  std::size_t hits = 0;
  for (Index i : est)
    if (tru.contains(i)) ++hits;
  m.support_precision = est.empty() ? 1.0 : static_cast<double>(hits) / est.size();
  m.support_recall = tru.empty() ? 1.0 : static_cast<double>(hits) / tru.size();
  return m;
}

}  // namespace structsparse
