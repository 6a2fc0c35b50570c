#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/haar.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse::harness {

enum class ExperimentKind { spikes, spikes_denoise, clustered, wavelet };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::spikes: return "spikes";
    case ExperimentKind::spikes_denoise: return "spikes-denoise";
    case ExperimentKind::clustered: return "clustered";
    case ExperimentKind::wavelet: return "wavelet";
  }
  return "unknown";
}

inline ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::spikes, ExperimentKind::spikes_denoise, ExperimentKind::clustered,
                 ExperimentKind::wavelet})
    if (to_string(k) == s) return k;
  throw InvalidParameter("unknown experiment: " + s);
}

inline std::vector<std::string> registered_methods(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::spikes:
    case ExperimentKind::spikes_denoise:
      return {"discrete", "discrete-iht", "exclusive", "exclusive-pursuit", "bp"};
    case ExperimentKind::clustered: return {"IC", "BP", "TV", "OGL"};
    case ExperimentKind::wavelet: return {"RC", "BP", "HGL", "PC", "FAM"};
  }
  return {};
}

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::spikes;
  Index n = 500;
  /// Measurements; 0 derives them from `subsample` (wavelet) or n.
  Index m = 70;
  Index k = 25;
  /// Minimum gap of the generated spike train.
  Index delta = 20;
  /// Gap assumed by the discrete solvers and the exclusive-norm windows.
  Index solver_delta = 15;
  /// Image side for clustered and wavelet runs.
  Index size = 16;
  double subsample = 0.125;
  Index expander_degree = 8;
  std::vector<std::string> methods;
  int trials = 5;
  std::uint64_t seed = 1;
  /// l2 norm of the additive measurement noise.
  double noise = 0.0;
  std::vector<double> lambda_grid;
  std::vector<double> tau_grid;
  /// Optional input image for the wavelet experiment.
  std::string image;
  std::string emit_images;
  int threads = 1;
  int max_iters = 0;  // 0: per-method default
};

/// Reference-scale defaults for each experiment family.
inline ExperimentSpec default_spec(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  s.methods = registered_methods(kind);
  switch (kind) {
    case ExperimentKind::spikes:
      s.lambda_grid = {1e-4, 1e-3, 1e-2};
      break;
    case ExperimentKind::spikes_denoise:
      s.m = 500;
      s.noise = 1e-2;
      s.lambda_grid = {1e-4, 1e-3, 1e-2};
      break;
    case ExperimentKind::clustered:
      s.size = 16;
      s.n = 256;
      s.m = 100;
      s.k = 0;
      s.lambda_grid = {0.002, 0.005, 0.01};
      s.tau_grid = {0.005, 0.01, 0.02};
      break;
    case ExperimentKind::wavelet:
      s.size = 32;
      s.n = 1024;
      s.m = 0;
      s.k = 32;
      break;
  }
  return s;
}

/// Measurement count actually used.
inline Index measurements(const ExperimentSpec& s) {
  if (s.kind == ExperimentKind::spikes_denoise) return s.n;
  if (s.m > 0) return s.m;
  return std::max<Index>(1, static_cast<Index>(std::llround(s.subsample * static_cast<double>(s.n))));
}

/// Normalizes derived fields and checks every invariant.
inline void validate(ExperimentSpec& s) {
  const bool image = s.kind == ExperimentKind::clustered || s.kind == ExperimentKind::wavelet;
  if (image) {
    if (s.size < 1) throw InvalidParameter("size must be positive");
    s.n = s.size * s.size;
  }
  if (s.n < 1) throw InvalidParameter("n must be positive");
  if (s.trials < 1) throw InvalidParameter("trials must be positive");
  if (s.threads < 1) throw InvalidParameter("threads must be positive");
  if (s.noise < 0.0 || !std::isfinite(s.noise)) throw InvalidParameter("noise must be a finite value >= 0");
  if (s.m < 0) throw InvalidParameter("m must be positive");
  if (!(s.subsample > 0.0 && s.subsample <= 1.0)) throw InvalidParameter("subsample must lie in (0, 1]");
  const Index m = measurements(s);
  if (m < 1 || m > s.n) throw InvalidParameter("need 1 <= m <= n");
  if (s.methods.empty()) throw InvalidParameter("no methods selected");
  const auto known = registered_methods(s.kind);
  for (const auto& name : s.methods)
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw InvalidParameter("unknown method '" + name + "' for " + to_string(s.kind));
  for (double v : s.lambda_grid)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("lambda grid values must be >= 0");
  for (double v : s.tau_grid)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("tau grid values must be >= 0");

  switch (s.kind) {
    case ExperimentKind::spikes:
    case ExperimentKind::spikes_denoise:
      if (s.k < 1 || s.k > s.n) throw InvalidParameter("need 1 <= k <= n");
      if (s.delta < 1 || s.solver_delta < 1 || s.delta > s.n || s.solver_delta > s.n)
        throw InvalidParameter("need 1 <= delta <= n");
      if ((s.k - 1) * s.delta + 1 > s.n)
        throw InvalidParameter("k spikes with the requested gap do not fit in n");
      if (s.lambda_grid.empty()) throw InvalidParameter("lambda grid is empty");
      break;
    case ExperimentKind::clustered:
      if (s.size < 3) throw InvalidParameter("clustered images need size >= 3");
      if (s.lambda_grid.empty() || s.tau_grid.empty()) throw InvalidParameter("lambda/tau grid is empty");
      break;
    case ExperimentKind::wavelet:
      if (s.size < 2 || s.size > 64 || !is_power_of_two(s.size))
        throw InvalidParameter("wavelet size must be a power of two in [2, 64]");
      if (s.k < 1 || s.k > s.n) throw InvalidParameter("need 1 <= k <= n");
      if (s.expander_degree < 1 || s.expander_degree > m)
        throw InvalidParameter("expander degree must lie in [1, m]");
      break;
  }
}

}  // namespace structsparse::harness
