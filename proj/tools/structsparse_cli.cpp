#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "structsparse/harness/experiments.hpp"

namespace ss = structsparse;
namespace hs = structsparse::harness;

namespace {

using ss::Index;

enum ExitCode { kOk = 0, kFailure = 1, kInvalid = 2, kNotConverged = 3 };

struct Overrides {
  Index n = 0, m = 0, k = 0, delta = 0, solver_delta = 0, size = 0, degree = 0;
  double subsample = 0.0, noise = 0.0;
  std::vector<std::string> methods;
  std::vector<double> lambda_grid, tau_grid;
  int trials = 0, threads = 0, max_iters = 0;
  std::uint64_t seed = 0;
  std::string out, emit_images, image;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured sparse recovery experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying any flag; command-line flags take precedence");

  Overrides o;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  auto add = [&](const std::string& name, auto& target, const std::string& help) {
    opts.emplace_back(name, app.add_option(name, target, help));
    return opts.back().second;
  };
  add("--n", o.n, "signal length");
  add("--m", o.m, "number of measurements");
  add("--k", o.k, "sparsity budget (spikes or tree nodes)");
  add("--delta", o.delta, "minimum gap of the generated spike train");
  add("--solver-delta", o.solver_delta, "gap assumed by the solvers");
  add("--size", o.size, "image side");
  add("--subsample", o.subsample, "m / n when --m is not given (wavelet)");
  add("--degree", o.degree, "expander left degree");
  add("--methods", o.methods, "comma separated method list")->delimiter(',');
  add("--trials", o.trials, "number of trials");
  add("--seed", o.seed, "base seed; trial t uses seed + t");
  add("--noise", o.noise, "l2 norm of the measurement noise");
  add("--lambda-grid", o.lambda_grid, "comma separated lambda values")->delimiter(',');
  add("--tau-grid", o.tau_grid, "comma separated tau values")->delimiter(',');
  add("--max-iters", o.max_iters, "iteration cap for every solver");
  add("--threads", o.threads, "trials run in parallel");
  add("--image", o.image, "PGM input for the wavelet experiment");
  add("--out", o.out, "CSV report path (stdout when omitted)");
  add("--emit-images", o.emit_images, "directory for PGM reconstructions");

  std::optional<hs::ExperimentKind> kind;
  for (auto k : {hs::ExperimentKind::spikes, hs::ExperimentKind::spikes_denoise, hs::ExperimentKind::clustered,
                 hs::ExperimentKind::wavelet}) {
    app.add_subcommand(hs::to_string(k), "run the " + hs::to_string(k) + " experiment")
        ->callback([&kind, k] { kind = k; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  const auto given = [&](const std::string& name) {
    for (auto& [n, opt] : opts)
      if (n == name) return opt->count() > 0;
    return false;
  };

  try {
    hs::ExperimentSpec s = hs::default_spec(*kind);
    if (given("--n")) s.n = o.n;
    if (given("--m")) s.m = o.m;
    if (given("--k")) s.k = o.k;
    if (given("--delta")) s.delta = o.delta;
    if (given("--solver-delta")) s.solver_delta = o.solver_delta;
    if (given("--size")) s.size = o.size;
    if (given("--subsample")) {
      s.subsample = o.subsample;
      if (!given("--m")) s.m = 0;
    }
    if (given("--degree")) s.expander_degree = o.degree;
    if (given("--methods")) s.methods = o.methods;
    if (given("--trials")) s.trials = o.trials;
    if (given("--seed")) s.seed = o.seed;
    if (given("--noise")) s.noise = o.noise;
    if (given("--lambda-grid")) s.lambda_grid = o.lambda_grid;
    if (given("--tau-grid")) s.tau_grid = o.tau_grid;
    if (given("--max-iters")) s.max_iters = o.max_iters;
    if (given("--threads")) s.threads = o.threads;
    if (given("--image")) s.image = o.image;
    if (given("--emit-images")) s.emit_images = o.emit_images;

    const hs::ExperimentReport rep = hs::run_experiment(s);
    if (o.out.empty()) {
      hs::write_report(std::cout, rep);
    } else {
      hs::write_report(o.out, rep);
    }
    for (const auto& note : rep.notes) std::cerr << note << '\n';
    if (rep.solver_failure || !rep.all_converged()) {
      for (const auto& r : rep.rows)
        if (!r.converged) std::cerr << "not converged: trial " << r.trial << " method " << r.method << '\n';
      return kNotConverged;
    }
    return kOk;
  } catch (const ss::InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kInvalid;
  } catch (const ss::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
