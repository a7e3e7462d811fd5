#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace ttlcli {

struct CommonOptions {
  double remote_cost = 1.0;
  std::optional<double> ttl;     // default R
  std::optional<double> window;  // default T
  std::string policies;
  std::uint64_t seed = 1;
  bool json = false;

  double T() const { return ttl.value_or(remote_cost); }
  double W() const { return window.value_or(T()); }
};

struct AnalyzeOptions {
  std::string dist;
  std::string grid = "1e-2,1e3,101";
  bool peaks = false;
};

struct TraceSource {
  std::string trace_path;  // "-" for stdin
  std::string dist;
  std::size_t requests = 0;
  std::size_t files = 0;
  double gamma = 1.0;
  double rate = 1.0;  // per-file average requests per R time units
  double horizon = 0.0;
};

struct SimulateOptions {
  TraceSource source;
  std::optional<double> horizon;
  bool truncate = false;
  std::string bands = "3,20";
  std::string bands_out;
};

struct AdversaryOptions {
  std::size_t batches = 1000;
  std::optional<double> epsilon;
  std::optional<double> gap;
  std::size_t trials = 10000;
};

struct MultifileOptions {
  std::string dist;
  std::size_t files = 1'000'000;
  double gamma = 1.0;
  std::string grid = "1e-2,1e3,101";
};

void cmd_analyze(const CommonOptions& common, const AnalyzeOptions& opt, std::ostream& out);
void cmd_simulate(const CommonOptions& common, const SimulateOptions& opt, std::ostream& out);
void cmd_adversary(const CommonOptions& common, const AdversaryOptions& opt, std::ostream& out);
void cmd_multifile(const CommonOptions& common, const MultifileOptions& opt, std::ostream& out);
void cmd_gen(const CommonOptions& common, const TraceSource& opt, std::ostream& out);

}  // namespace ttlcli
