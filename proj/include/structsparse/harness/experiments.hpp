#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/core/metrics.hpp"
#include "structsparse/core/pgm.hpp"
#include "structsparse/core/random.hpp"
#include "structsparse/core/tree.hpp"
#include "structsparse/harness/generators.hpp"
#include "structsparse/harness/report.hpp"
#include "structsparse/harness/spec.hpp"
#include "structsparse/prox/hierarchical.hpp"
#include "structsparse/prox/latent.hpp"
#include "structsparse/prox/norms.hpp"
#include "structsparse/solvers/admm.hpp"
#include "structsparse/solvers/cosamp.hpp"
#include "structsparse/solvers/iht.hpp"
#include "structsparse/solvers/primal_dual.hpp"
#include "structsparse/solvers/projectors.hpp"
#include "structsparse/submodular/mm.hpp"
#include "structsparse/submodular/set_function.hpp"

namespace structsparse::harness {

struct MethodOutcome {
  Signal estimate;
  int iterations = 0;
  bool converged = true;
};

/// Everything a single trial contributes to the report.
struct TrialOutput {
  std::vector<ReportRow> rows;
  std::vector<GridRow> grid;
  std::vector<std::string> notes;
  bool solver_failure = false;
};

namespace detail {

using Clock = std::chrono::steady_clock;
using Params = std::pair<double, double>;  // (lambda, tau)

inline MethodOutcome from_solve(solvers::SolveResult r) { return {std::move(r.estimate), r.iterations, r.converged}; }

/// Runs one method, possibly over a parameter grid, keeping the grid point
/// with the smallest oracle error; ties keep the earlier grid point.
class TrialRecorder {
 public:
  TrialRecorder(int trial, std::uint64_t seed, Signal truth, std::function<Signal(const Signal&)> to_output)
      : trial_(trial), seed_(seed), truth_(std::move(truth)), to_output_(std::move(to_output)) {}

  Signal run(const std::string& method, const std::vector<Params>& grid,
             const std::function<MethodOutcome(double, double)>& solve) {
    const auto start = Clock::now();
    const std::vector<Params> points = grid.empty() ? std::vector<Params>{{0.0, 0.0}} : grid;
    MethodOutcome best;
    Metrics best_metrics;
    std::size_t best_index = 0;
    bool have = false;
    std::vector<GridRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
      MethodOutcome out;
      try {
        out = solve(points[i].first, points[i].second);
      } catch (const ConvergenceError& e) {
        out = {e.best_iterate(), 0, false};
        out_.solver_failure = true;
      }
      Signal mapped = to_output_(out.estimate);
      if (!all_finite(mapped)) {
        mapped = Signal::Zero(truth_.size());
        out.converged = false;
      }
      const Metrics met = compute_metrics(mapped, truth_);
      if (!grid.empty())
        rows.push_back({trial_, method, points[i].first, points[i].second, met.relative_error, false});
      if (!have || met.relative_error < best_metrics.relative_error) {
        best = std::move(out);
        best.estimate = std::move(mapped);
        best_metrics = met;
        best_index = i;
        have = true;
      }
    }
    if (!rows.empty()) rows[best_index].selected = true;
    out_.grid.insert(out_.grid.end(), rows.begin(), rows.end());
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();
    out_.rows.push_back({trial_, method, best_metrics, best.iterations, wall, seed_, best.converged});
    return best.estimate;
  }

  TrialOutput& output() { return out_; }

 private:
  int trial_;
  std::uint64_t seed_;
  Signal truth_;
  std::function<Signal(const Signal&)> to_output_;
  TrialOutput out_;
};

inline std::vector<Params> lambda_points(const std::vector<double>& lambdas) {
  std::vector<Params> g;
  for (double l : lambdas) g.push_back({l, 0.0});
  return g;
}

inline std::vector<Params> lambda_tau_points(const std::vector<double>& lambdas, const std::vector<double>& taus) {
  std::vector<Params> g;
  for (double l : lambdas)
    for (double t : taus) g.push_back({l, t});
  return g;
}

inline bool wants(const ExperimentSpec& s, const std::string& method) {
  return std::find(s.methods.begin(), s.methods.end(), method) != s.methods.end();
}

inline int iters_or(const ExperimentSpec& s, int fallback) { return s.max_iters > 0 ? s.max_iters : fallback; }

inline Signal l1_prox(const Signal& v, double t) { return prox::soft_threshold(v, t); }

/// Expansion x -> (x_G)_G as an operator (adjoint sums the copies).
inline LinearOperator expand_operator(const prox::DuplicationMap& map) {
  return make_custom(
      map.latent_size(), map.ambient(), [map](const Signal& x) { return map.expand(x); },
      [map](const Signal& z) { return map.collapse(z); });
}

/// Sensing operator: Gaussian, or the identity when m == n.
inline LinearOperator gaussian_sensing(Index m, Index n, std::uint64_t seed) {
  return m == n ? make_identity(n) : make_gaussian(m, n, seed);
}

inline void emit(const ExperimentSpec& s, int trial, const std::string& name, const Signal& pixels, Index side) {
  if (s.emit_images.empty()) return;
  std::filesystem::create_directories(s.emit_images);
  const auto path = std::filesystem::path(s.emit_images) / ("trial" + std::to_string(trial) + "_" + name + ".pgm");
  write_pgm(path.string(), GrayImage::from_signal(pixels, side, side), PgmFormat::binary);
}

/// Log-magnitude display of wavelet coefficients over four decades.
inline Signal log_magnitude(const Signal& c, double peak) {
  Signal out = Signal::Zero(c.size());
  if (peak <= 0.0) return out;
  for (Index i = 0; i < c.size(); ++i)
    if (c(i) != 0.0) out(i) = std::clamp((std::log10(std::abs(c(i)) / peak) + 4.0) / 4.0, 0.0, 1.0);
  return out;
}

template <class TrialFn>
ExperimentReport run_trials(const ExperimentSpec& s, TrialFn&& fn) {
  std::vector<TrialOutput> outputs(static_cast<std::size_t>(s.trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(s.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t; (t = next.fetch_add(1)) < s.trials;) {
      try {
        outputs[static_cast<std::size_t>(t)] = fn(t, s.seed + static_cast<std::uint64_t>(t));
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
  };
  const int workers = std::min(s.threads, s.trials);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentReport rep;
  for (auto& o : outputs) {
    rep.rows.insert(rep.rows.end(), o.rows.begin(), o.rows.end());
    rep.grid.insert(rep.grid.end(), o.grid.begin(), o.grid.end());
    for (auto& note : o.notes)
      if (std::find(rep.notes.begin(), rep.notes.end(), note) == rep.notes.end()) rep.notes.push_back(note);
    rep.solver_failure = rep.solver_failure || o.solver_failure;
  }
  rep.sort();
  return rep;
}

}  // namespace detail

/// Spike-train recovery from Gaussian measurements (or denoising when the
/// operator is the identity).
inline ExperimentReport run_spikes(ExperimentSpec s) {
  validate(s);
  const bool denoise = s.kind == ExperimentKind::spikes_denoise;
  const Index m = measurements(s);
  return detail::run_trials(s, [&](int trial, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    const Signal truth = spike_train(s.n, s.k, s.delta, rng);
    const LinearOperator A = denoise ? make_identity(s.n) : detail::gaussian_sensing(m, s.n, rng());
    const Signal u = A.apply(truth) + noise_vector(m, s.noise, rng);
    const prox::DuplicationMap windows(s.n, prox::sliding_window_groups(s.n, s.solver_delta));

    detail::TrialRecorder rec(trial, seed, truth, [](const Signal& x) { return x; });
    if (detail::wants(s, "discrete"))
      rec.run("discrete", {}, [&](double, double) {
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 100);
        cfg.tol = 1e-10;
        return detail::from_solve(
            solvers::model_cosamp(A, u, solvers::dispersive_projector(s.solver_delta), s.k, cfg));
      });
    if (detail::wants(s, "discrete-iht"))
      rec.run("discrete-iht", {}, [&](double, double) {
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 500);
        cfg.tol = 1e-10;
        cfg.normalized_step = true;
        cfg.debias = true;
        return detail::from_solve(solvers::iht(A, u, solvers::dispersive_projector(s.solver_delta), s.k, cfg,
                                               Signal::Zero(s.n)));
      });
    if (detail::wants(s, "exclusive"))
      rec.run("exclusive", detail::lambda_points(s.lambda_grid), [&](double lambda, double) {
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 3000);
        cfg.tol = 1e-6;
        return detail::from_solve(solvers::admm_duplication(A, u, windows, lambda, cfg,
                                                            solvers::BlockPenalty::squared_l1,
                                                            solvers::Coupling::replicate));
      });
    if (detail::wants(s, "exclusive-pursuit"))
      rec.run("exclusive-pursuit", {}, [&](double, double) {
        solvers::PrimalDualProblem p{A, u, s.noise, {}, {}, std::nullopt};
        p.analysis = solvers::analysis_from_prox(
            detail::expand_operator(windows),
            [&](const Signal& z, double t) {
              return solvers::detail::block_prox(z, windows, t, solvers::BlockPenalty::squared_l1);
            },
            [&](const Signal& z) { return solvers::detail::block_penalty(z, windows, solvers::BlockPenalty::squared_l1); });
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 20000);
        return detail::from_solve(solvers::chambolle_pock(p, cfg));
      });
    if (detail::wants(s, "bp"))
      rec.run("bp", {}, [&](double, double) {
        solvers::PrimalDualProblem p{A, u, s.noise, detail::l1_prox,
                                     [](const Signal& x) { return x.lpNorm<1>(); }, std::nullopt};
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 20000);
        return detail::from_solve(solvers::chambolle_pock(p, cfg));
      });
    return std::move(rec.output());
  });
}

inline ExperimentReport run_spikes_denoise(ExperimentSpec s) {
  s.kind = ExperimentKind::spikes_denoise;
  return run_spikes(std::move(s));
}

/// Clustered image recovery: Ising MM against l1, TV and overlapping group
/// lasso over 3x3 patches.
inline ExperimentReport run_clustered(ExperimentSpec s) {
  validate(s);
  const Index side = s.size;
  const Index m = measurements(s);
  const auto lattice = submodular::CutFunction::lattice(side, side);
  prox::Groups patches;
  for (Index r = 0; r + 3 <= side; ++r)
    for (Index c = 0; c + 3 <= side; ++c) {
      std::vector<Index> g;
      for (Index dr = 0; dr < 3; ++dr)
        for (Index dc = 0; dc < 3; ++dc) g.push_back((r + dr) * side + c + dc);
      patches.push_back(std::move(g));
    }
  const prox::DuplicationMap patch_map(s.n, patches);
  const LinearOperator diff = prox::difference_operator(lattice);

  return detail::run_trials(s, [&](int trial, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    const Signal truth = blob_image(side, rng);
    const LinearOperator A = detail::gaussian_sensing(m, s.n, rng());
    const Signal u = A.apply(truth) + noise_vector(m, s.noise, rng);
    detail::emit(s, trial, "truth", truth, side);

    detail::TrialRecorder rec(trial, seed, truth, [](const Signal& x) { return x; });
    auto report = [&](const std::string& name, const Signal& est) { detail::emit(s, trial, name, est, side); };
    if (detail::wants(s, "IC"))
      report("IC", rec.run("IC", detail::lambda_tau_points(s.lambda_grid, s.tau_grid), [&](double lambda, double tau) {
        // Continuation: warm starts from coarser (8x, 4x, 2x) penalties.
        const auto R = submodular::SetFunction::cut(lattice);
        Signal x0 = Signal::Zero(s.n);
        int iterations = 0;
        for (double scale : {8.0, 4.0, 2.0}) {
          submodular::MMConfig stage;
          stage.lambda = scale * lambda;
          stage.tau = scale * tau;
          stage.max_iters = 200;
          stage.tol = 1e-14;
          const auto r = submodular::mm_solve(A, u, R, stage, x0);
          x0 = r.estimate;
          iterations += r.iterations;
        }
        submodular::MMConfig cfg;
        cfg.lambda = lambda;
        cfg.tau = tau;
        cfg.max_iters = detail::iters_or(s, 1000);
        cfg.tol = 1e-14;
        const auto r = submodular::mm_solve(A, u, R, cfg, x0);
        iterations += r.iterations;
        return MethodOutcome{r.estimate, iterations, r.converged};
      }));
    if (detail::wants(s, "BP"))
      report("BP", rec.run("BP", {}, [&](double, double) {
        solvers::PrimalDualProblem p{A, u, s.noise, detail::l1_prox,
                                     [](const Signal& x) { return x.lpNorm<1>(); }, std::nullopt};
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 20000);
        return detail::from_solve(solvers::chambolle_pock(p, cfg));
      }));
    if (detail::wants(s, "TV"))
      report("TV", rec.run("TV", {}, [&](double, double) {
        solvers::PrimalDualProblem p{A, u, s.noise, {}, {}, solvers::l1_analysis(diff, 1.0)};
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 20000);
        return detail::from_solve(solvers::chambolle_pock(p, cfg));
      }));
    if (detail::wants(s, "OGL"))
      report("OGL", rec.run("OGL", detail::lambda_points(s.lambda_grid), [&](double lambda, double) {
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 2000);
        cfg.tol = 1e-6;
        return detail::from_solve(solvers::admm_duplication(A, u, patch_map, lambda, cfg));
      }));
    return std::move(rec.output());
  });
}

/// Wavelet-domain recovery of p x p images from expander measurements.
inline ExperimentReport run_wavelet(ExperimentSpec s) {
  validate(s);
  const Index p = s.size;
  const Index m = measurements(s);
  const Tree tree = wavelet_quadtree(p);
  const LinearOperator W = make_haar2d(p);
  const prox::Groups subtrees = prox::hierarchical_groups(tree);
  const prox::DuplicationMap pc = prox::build_latent(tree, prox::LatentFamily::parent_child);
  const prox::DuplicationMap fam = prox::build_latent(tree, prox::LatentFamily::family);

  std::optional<Signal> loaded;
  if (!s.image.empty()) {
    const GrayImage img = read_pgm(s.image);
    if (img.width != p || img.height != p)
      throw InvalidParameter("image must be " + std::to_string(p) + "x" + std::to_string(p));
    loaded = img.to_signal();
  }

  const auto latent_run = [&](const prox::DuplicationMap& map, const LinearOperator& AW, const Signal& u) {
    const LinearOperator op = compose(AW, map.collapse_operator());
    solvers::PrimalDualProblem prob{op, u, s.noise,
                                    [&map](const Signal& v, double t) { return prox::latent_group_prox(v, map, t); },
                                    {}, std::nullopt};
    solvers::SolverConfig cfg;
    cfg.max_iters = detail::iters_or(s, 20000);
    auto r = solvers::chambolle_pock(prob, cfg);
    r.estimate = map.collapse(r.estimate);
    return detail::from_solve(std::move(r));
  };

  ExperimentReport rep = detail::run_trials(s, [&](int trial, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    const Signal truth = loaded ? *loaded : W.apply(tree_sparse_coefficients(tree, s.k, rng));
    const LinearOperator Phi = m == s.n ? make_identity(s.n) : make_expander(m, s.n, s.expander_degree, rng());
    const LinearOperator AW = compose(Phi, W);
    const Signal u = Phi.apply(truth) + noise_vector(m, s.noise, rng);

    const double lo = truth.minCoeff();
    const double span = std::max(truth.maxCoeff() - lo, 1e-300);
    const auto display = [&](const Signal& x) { return Signal((x.array() - lo) / span); };
    const double coeff_peak = W.adjoint(truth).cwiseAbs().maxCoeff();
    detail::emit(s, trial, "truth", display(truth), p);
    detail::emit(s, trial, "truth_coeffs", detail::log_magnitude(W.adjoint(truth), coeff_peak), p);

    detail::TrialRecorder rec(trial, seed, truth, [&W](const Signal& c) { return W.apply(c); });
    auto report = [&](const std::string& name, const Signal& est) {
      detail::emit(s, trial, name, display(est), p);
      detail::emit(s, trial, name + "_coeffs", detail::log_magnitude(W.adjoint(est), coeff_peak), p);
    };
    const auto cp_run = [&](std::function<Signal(const Signal&, double)> prox_g) {
      solvers::PrimalDualProblem prob{AW, u, s.noise, std::move(prox_g), {}, std::nullopt};
      solvers::SolverConfig cfg;
      cfg.max_iters = detail::iters_or(s, 20000);
      return detail::from_solve(solvers::chambolle_pock(prob, cfg));
    };
    if (detail::wants(s, "RC"))
      report("RC", rec.run("RC", {}, [&](double, double) {
        solvers::SolverConfig cfg;
        cfg.max_iters = detail::iters_or(s, 500);
        cfg.tol = 1e-10;
        cfg.normalized_step = true;
        cfg.debias = true;
        return detail::from_solve(
            solvers::iht(AW, u, solvers::rc_tree_projector(tree), s.k, cfg, Signal::Zero(s.n)));
      }));
    if (detail::wants(s, "BP")) report("BP", rec.run("BP", {}, [&](double, double) { return cp_run(detail::l1_prox); }));
    if (detail::wants(s, "HGL"))
      report("HGL", rec.run("HGL", {}, [&](double, double) {
        return cp_run([&](const Signal& v, double t) { return prox::hgl_prox(v, subtrees, t); });
      }));
    if (detail::wants(s, "PC")) report("PC", rec.run("PC", {}, [&](double, double) { return latent_run(pc, AW, u); }));
    if (detail::wants(s, "FAM"))
      report("FAM", rec.run("FAM", {}, [&](double, double) { return latent_run(fam, AW, u); }));
    return std::move(rec.output());
  });
  rep.notes.push_back("PC latent size " + std::to_string(pc.latent_size()));
  rep.notes.push_back("FAM latent size " + std::to_string(fam.latent_size()));
  return rep;
}

inline ExperimentReport run_experiment(const ExperimentSpec& s) {
  switch (s.kind) {
    case ExperimentKind::spikes: return run_spikes(s);
    case ExperimentKind::spikes_denoise: return run_spikes_denoise(s);
    case ExperimentKind::clustered: return run_clustered(s);
    case ExperimentKind::wavelet: return run_wavelet(s);
  }
  throw InvalidParameter("unknown experiment kind");
}

}  // namespace structsparse::harness
