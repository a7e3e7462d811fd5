#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <json.hpp>
#include <vector>

#include "ttlcache/adversary.hpp"
#include "ttlcache/analytic.hpp"
#include "ttlcache/errors.hpp"
#include "ttlcache/multifile.hpp"
#include "ttlcache/numeric_text.hpp"
#include "ttlcache/trace_io.hpp"

using namespace ttlcache;
using nlohmann::json;

namespace ttlcli {
namespace {

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text);
  if (parts.size() != 3) throw ParameterError("--grid expects min,max,points");
  const auto lo = parse_double(parts[0]);
  const auto hi = parse_double(parts[1]);
  const auto n = parse_integer(parts[2]);
  if (!lo || !hi || !n || *n < 1) throw ParameterError("--grid expects min,max,points");
  return log_grid(*lo, *hi, static_cast<std::size_t>(*n));
}

std::vector<std::uint64_t> parse_bands(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text)) {
    const auto v = parse_integer(part);
    if (!v || *v < 1) throw ParameterError("--bands expects increasing positive integers");
    out.push_back(static_cast<std::uint64_t>(*v));
  }
  return out;
}

std::vector<LegendEntry> legend_of(const CommonOptions& c) {
  (void)CostParams(c.remote_cost);
  return parse_legend(c.policies.empty() ? std::string(kDefaultLegend) : c.policies, c.T(), c.W());
}

json sweep_json(const SweepTable& t) {
  json rows = json::array();
  for (std::size_t i = 0; i < t.rates.size(); ++i) {
    json row{{"rate", t.rates[i]}};
    for (std::size_t j = 0; j < t.columns.size(); ++j) row[t.columns[j]] = t.rows[i][j];
    rows.push_back(std::move(row));
  }
  return json{{"columns", t.columns}, {"rows", rows}};
}

void emit_sweep(const CommonOptions& c, const SweepTable& table, std::ostream& out) {
  if (c.json) {
    out << sweep_json(table).dump(2) << '\n';
  } else {
    write_sweep_csv(out, table);
  }
}

void emit_peaks(const CommonOptions& c, const std::vector<LegendEntry>& legend,
                const std::vector<Peak>& peaks, std::ostream& out) {
  if (c.json) {
    json arr = json::array();
    for (std::size_t j = 0; j < legend.size(); ++j) {
      arr.push_back({{"policy", legend[j].label()}, {"peak_rate", peaks[j].rate}, {"peak_ratio", peaks[j].ratio}});
    }
    out << arr.dump(2) << '\n';
    return;
  }
  out << "policy,peak_rate,peak_ratio\n";
  for (std::size_t j = 0; j < legend.size(); ++j) {
    out << legend[j].label() << ',' << format_double(peaks[j].rate) << ',' << format_double(peaks[j].ratio)
        << '\n';
  }
}

RequestTrace acquire_trace(const CommonOptions& c, const TraceSource& src) {
  const int chosen = !src.trace_path.empty() + (src.requests > 0) + (src.files > 0);
  if (chosen != 1) {
    throw ParameterError("choose exactly one trace source: --trace, --requests or --files");
  }
  if (!src.trace_path.empty()) {
    if (src.trace_path == "-") return read_trace(std::cin);
    return load_trace(src.trace_path);
  }
  if (src.dist.empty()) throw ParameterError("--dist is required to generate a trace");
  if (src.requests > 0) return generate_trace(parse_distribution(src.dist), src.requests, c.seed);
  const DistributionSpec spec = parse_distribution_spec(src.dist);
  if (!(src.horizon > 0.0)) throw ParameterError("--trace-horizon must be > 0 for a Zipf trace");
  const ZipfCatalog catalog(src.files, src.gamma, total_rate_for(src.rate, src.files, c.remote_cost),
                            spec.family);
  return generate_zipf_trace(catalog, src.horizon, c.seed);
}

struct Row {
  std::string label;
  CostReport report;
};

// Undefined when the offline cost has no steady part (every object requested once).
std::optional<double> steady_ratio(const CostReport& r, const CostReport& offline) {
  if (offline.renewal_total() == 0.0) return std::nullopt;
  return r.renewal_total() / offline.renewal_total();
}

}  // namespace

void cmd_analyze(const CommonOptions& c, const AnalyzeOptions& opt, std::ostream& out) {
  const auto legend = legend_of(c);
  const DistributionSpec spec = parse_distribution_spec(opt.dist);

  if (spec.concrete) {
    // A concrete distribution gives a single row at its own normalized rate.
    const Distribution& d = *spec.concrete;
    SweepTable table;
    for (const auto& e : legend) table.columns.push_back(e.label());
    table.rates.push_back(normalized_rate(d, c.remote_cost));
    const double offline = offline_cost(d, c.remote_cost).cost_per_time_unit;
    std::vector<double> row;
    for (const auto& e : legend) row.push_back(legend_cost(d, c.remote_cost, e).cost_per_time_unit / offline);
    table.rows.push_back(std::move(row));
    emit_sweep(c, table, out);
    return;
  }

  const auto grid = parse_grid(opt.grid);
  if (opt.peaks) {
    std::vector<Peak> peaks;
    for (const auto& e : legend) {
      peaks.push_back(find_peak([&](double x) { return ratio_at_rate(spec.family, c.remote_cost, e, x); },
                                grid.front(), grid.back(), grid.size()));
    }
    emit_peaks(c, legend, peaks, out);
    return;
  }
  emit_sweep(c, ratio_sweep(spec.family, c.remote_cost, legend, grid), out);
}

void cmd_multifile(const CommonOptions& c, const MultifileOptions& opt, std::ostream& out) {
  const auto legend = legend_of(c);
  const DistributionSpec spec = parse_distribution_spec(opt.dist);
  const auto grid = parse_grid(opt.grid);
  emit_sweep(c, multifile_sweep(opt.files, opt.gamma, spec.family, c.remote_cost, legend, grid), out);
}

void cmd_simulate(const CommonOptions& c, const SimulateOptions& opt, std::ostream& out) {
  const CostParams costs(c.remote_cost);
  const auto legend = legend_of(c);
  const PopularityBands bands(parse_bands(opt.bands));
  const RequestTrace trace = acquire_trace(c, opt.source);
  if (trace.empty()) throw ValidationError("trace has no requests");
  const SimulationOptions sim{opt.horizon, opt.truncate};
  const double horizon = resolve_horizon(trace, sim);

  std::vector<PolicySpec> policies;
  for (const auto& e : legend) {
    if (e.kind == LegendKind::Policy) policies.push_back(*e.policy);
  }
  const MultifileReport report = simulate_multifile(trace, policies, costs, bands, sim);
  const CostReport& offline = report.offline;

  std::vector<Row> rows;
  std::size_t next_policy = 0;
  for (const auto& e : legend) {
    switch (e.kind) {
      case LegendKind::Offline:
        rows.push_back({e.label(), offline});
        break;
      case LegendKind::Baseline:
        rows.push_back({e.label(), static_oracle_cost(trace, costs, horizon)});
        break;
      case LegendKind::Policy:
        rows.push_back({e.label(), report.totals[next_policy++]});
        break;
    }
  }

  const bool multi = trace.object_count() > 1;
  if (c.json) {
    json j;
    j["requests"] = trace.size();
    j["objects"] = trace.object_count();
    j["horizon"] = horizon;
    for (const auto& r : rows) {
      j["policies"].push_back({{"policy", r.label},
                               {"bandwidth_cost", r.report.bandwidth_cost},
                               {"storage_cost", r.report.storage_cost},
                               {"miss_count", r.report.miss_count},
                               {"hit_count", r.report.hit_count},
                               {"total", r.report.total()},
                               {"ratio", r.report.total() / offline.total()},
                               {"ratio_excl_tail", r.report.total_excluding_tail() / offline.total()},
                               {"steady_ratio", steady_ratio(r.report, offline) ? json(*steady_ratio(r.report, offline)) : json(nullptr)}});
    }
    if (multi) {
      for (std::size_t b = 0; b < report.bands.size(); ++b) {
        for (std::size_t p = 0; p < policies.size(); ++p) {
          j["bands"].push_back({{"band", report.bands[b]},
                                {"objects", report.band_objects[b]},
                                {"policy", report.policies[p]},
                                {"cost_ratio_share", report.band_share(b, p)}});
        }
      }
    }
    out << j.dump(2) << '\n';
    return;
  }

  out << "policy,bandwidth_cost,storage_cost,miss_count,hit_count,total,ratio,ratio_excl_tail,steady_ratio\n";
  for (const auto& r : rows) {
    out << r.label << ',' << format_double(r.report.bandwidth_cost) << ','
        << format_double(r.report.storage_cost) << ',' << r.report.miss_count << ',' << r.report.hit_count
        << ',' << format_double(r.report.total()) << ',' << format_double(r.report.total() / offline.total())
        << ',' << format_double(r.report.total_excluding_tail() / offline.total()) << ','
        << (steady_ratio(r.report, offline) ? format_double(*steady_ratio(r.report, offline)) : "") << '\n';
  }
  if (!multi) return;

  std::ofstream band_file;
  std::ostream* band_out = &out;
  if (!opt.bands_out.empty()) {
    band_file.open(opt.bands_out);
    if (!band_file) throw ValidationError("cannot write '" + opt.bands_out + "'");
    band_out = &band_file;
  } else {
    out << '\n';
  }
  *band_out << "band,policy,cost_ratio_share\n";
  for (std::size_t b = 0; b < report.bands.size(); ++b) {
    for (std::size_t p = 0; p < policies.size(); ++p) {
      *band_out << report.bands[b] << ',' << report.policies[p] << ','
                << format_double(report.band_share(b, p)) << '\n';
    }
  }
}

void cmd_adversary(const CommonOptions& c, const AdversaryOptions& opt, std::ostream& out) {
  const CostParams costs(c.remote_cost);
  const std::string list = c.policies.empty() ? "always:1,always:2,window:2,window:4,dual:2" : c.policies;
  struct Result {
    std::string label;
    std::optional<double> bound;
    double achieved, achieved_excl_tail, random_worst;
    bool safe;
  };
  std::vector<Result> results;
  for (const auto& e : parse_legend(list, c.T(), c.W())) {
    if (e.kind != LegendKind::Policy) throw ParameterError("adversary takes online policies only");
    const PolicySpec& p = *e.policy;
    const int m = p.kind() == PolicyKind::DualWindow2nd ? 2 : p.m();
    AdversaryConfig cfg = AdversaryConfig::defaults(m, std::isfinite(p.ttl()) ? p.ttl() : 0.0, c.remote_cost,
                                                    opt.batches);
    if (opt.epsilon) cfg.batch_epsilon = *opt.epsilon;
    if (opt.gap) cfg.inter_batch_gap = *opt.gap;
    const RequestTrace trace = batch_trace(cfg);
    const CostReport sim = simulate(trace, p, costs);
    const double offline = offline_optimal_cost(trace, costs).total();
    const AdversaryResult search = random_adversary_search(p, costs, opt.trials, c.seed);
    const auto bound = competitive_bound(p, c.remote_cost);
    const double achieved = sim.total() / offline;
    const bool safe = !bound || (achieved <= *bound + 1e-9 && search.worst_ratio <= *bound + 1e-9);
    results.push_back({e.label(), bound, achieved, sim.total_excluding_tail() / offline, search.worst_ratio, safe});
  }

  if (c.json) {
    json arr = json::array();
    for (const auto& r : results) {
      arr.push_back({{"policy", r.label},
                     {"bound", r.bound ? json(*r.bound) : json(nullptr)},
                     {"achieved", r.achieved},
                     {"achieved_excl_tail", r.achieved_excl_tail},
                     {"random_worst", r.random_worst},
                     {"safe", r.safe}});
    }
    out << arr.dump(2) << '\n';
    return;
  }
  out << "policy,bound,achieved,achieved_excl_tail,random_worst,safe\n";
  for (const auto& r : results) {
    out << r.label << ',' << (r.bound ? format_double(*r.bound) : std::string()) << ','
        << format_double(r.achieved) << ',' << format_double(r.achieved_excl_tail) << ','
        << format_double(r.random_worst) << ',' << (r.safe ? "true" : "false") << '\n';
  }
}

void cmd_gen(const CommonOptions& c, const TraceSource& opt, std::ostream& out) {
  if (!opt.trace_path.empty()) throw ParameterError("gen does not read traces");
  const RequestTrace trace = acquire_trace(c, opt);
  if (c.json) {
    json arr = json::array();
    for (const Request& r : trace.requests()) {
      arr.push_back({{"timestamp", r.time}, {"object_id", trace.object_id(r.object)}, {"size", r.size}});
    }
    out << arr.dump() << '\n';
    return;
  }
  write_trace(out, trace);
}

}  // namespace ttlcli
