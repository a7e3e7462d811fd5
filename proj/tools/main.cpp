#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "ttlcache/errors.hpp"
#include "ttlcache/parallel.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kInternal = 3 };

void add_common(CLI::App* app, ttlcli::CommonOptions& c, bool with_policies = true) {
  app->add_option("--R", c.remote_cost, "Remote (miss) cost R in storage-time units")->capture_default_str();
  app->add_option("--T", c.ttl, "TTL threshold T (default R)");
  app->add_option("--W", c.window, "Dual-window threshold W (default T)");
  if (with_policies) {
    app->add_option("--policies", c.policies,
                    "Comma list: offline,baseline,always:M,window:M,dual:2,local,remote");
  }
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_flag("--json", c.json, "Write JSON instead of CSV");
}

void add_source(CLI::App* app, ttlcli::TraceSource& s, bool with_trace) {
  if (with_trace) app->add_option("--trace", s.trace_path, "Trace CSV file, '-' for stdin");
  app->add_option("--dist", s.dist, "Distribution, e.g. exp:1 (or exp:auto with --files)");
  app->add_option("--requests", s.requests, "Generate a single-object trace with this many requests");
  app->add_option("--files", s.files, "Generate a Zipf trace over this many files");
  app->add_option("--gamma", s.gamma, "Zipf exponent")->capture_default_str();
  app->add_option("--rate", s.rate, "Per-file average requests per R time units")->capture_default_str();
  app->add_option("--trace-horizon", s.horizon, "Generation horizon for Zipf traces");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-based TTL cache insertion policies: analysis, simulation and bound checks"};
  app.require_subcommand(1);

  std::string out_path;
  int threads = 0;
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--threads", threads, "Worker threads (default: all available)")->check(CLI::NonNegativeNumber);

  ttlcli::CommonOptions common;

  ttlcli::AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Analytic cost-ratio sweep over normalized request rate");
  add_common(a, common);
  a->add_option("--dist", analyze.dist, "Distribution, rate left free: exp:auto, erlang:k,auto, det:auto, pareto:alpha,auto")
      ->required();
  a->add_option("--grid", analyze.grid, "min,max,points of the log-spaced rate grid")->capture_default_str();
  a->add_flag("--peaks", analyze.peaks, "Report each curve's maximum instead of the sweep");

  ttlcli::SimulateOptions simulate;
  auto* s = app.add_subcommand("simulate", "Simulate policies on a trace");
  add_common(s, common);
  add_source(s, simulate.source, true);
  s->add_option("--horizon", simulate.horizon, "Observation horizon (default: last timestamp)");
  s->add_flag("--truncate-at-horizon", simulate.truncate, "Clip trailing TTL storage at the horizon");
  s->add_option("--bands", simulate.bands, "Request-count band thresholds")->capture_default_str();
  s->add_option("--bands-out", simulate.bands_out, "Write the band breakdown to this file");

  ttlcli::AdversaryOptions adversary;
  auto* v = app.add_subcommand("adversary", "Worst-case traces and randomized bound checks");
  add_common(v, common);
  v->add_option("--batches", adversary.batches, "Batches in the tightness trace")->capture_default_str();
  v->add_option("--epsilon", adversary.epsilon, "Spacing inside a batch (default 1e-4 R)");
  v->add_option("--gap", adversary.gap, "Spacing between batches (default 1.01 max(T, R))");
  v->add_option("--trials", adversary.trials, "Random traces per policy")->capture_default_str();

  ttlcli::MultifileOptions multifile;
  auto* m = app.add_subcommand("multifile", "Analytic Zipf-catalog cost-ratio sweep");
  add_common(m, common);
  m->add_option("--dist", multifile.dist, "Distribution family, e.g. exp:auto")->required();
  m->add_option("--files", multifile.files, "Number of files")->capture_default_str();
  m->add_option("--gamma", multifile.gamma, "Zipf exponent")->capture_default_str();
  m->add_option("--grid", multifile.grid, "min,max,points of the per-file rate grid")->capture_default_str();

  ttlcli::TraceSource gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic trace");
  add_common(g, common, false);
  add_source(g, gen, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    ttlcache::set_thread_count(threads);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw ttlcache::ValidationError("cannot write '" + out_path + "'");
      out = &file;
    }
    if (a->parsed()) ttlcli::cmd_analyze(common, analyze, *out);
    if (s->parsed()) ttlcli::cmd_simulate(common, simulate, *out);
    if (v->parsed()) ttlcli::cmd_adversary(common, adversary, *out);
    if (m->parsed()) ttlcli::cmd_multifile(common, multifile, *out);
    if (g->parsed()) ttlcli::cmd_gen(common, gen, *out);
    out->flush();
    if (!*out) throw ttlcache::ValidationError("write failed");
  } catch (const ttlcache::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ttlcache::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ttlcache::NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ttlcache::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
