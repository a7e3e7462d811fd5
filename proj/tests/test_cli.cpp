#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ttlcache/analytic.hpp"
#include "ttlcache/random.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "ttlcache_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::string& args) {
  fs::create_directories(kWork);
  const auto out = kWork / "stdout.txt", err = kWork / "stderr.txt";
  const std::string cmd = std::string("\"") + TTLCACHE_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string golden(const std::string& name) { return slurp(fs::path(TTLCACHE_GOLDEN_DIR) / name); }

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line) && !line.empty()) out.push_back(split(line));
  return out;
}

}  // namespace

TEST_CASE("golden outputs") {
  write_file(kWork / "one.csv", "0,a\n");
  CHECK(cli("simulate --trace \"" + (kWork / "one.csv").string() + "\" --policies offline,always:1,window:2").out ==
        golden("simulate_single.csv"));
  CHECK(cli("analyze --dist det:auto --grid 0.5,2,3 --policies offline,baseline,always:1,always:2,window:2").out ==
        golden("analyze_det.csv"));
  CHECK(cli("gen --dist det:1 --requests 4").out == "0,1\n1,1\n2,1\n3,1\n");
  CHECK(cli("adversary --policies always:1,window:2,dual:2,window:2 --T 2 --batches 100 --trials 50 --seed 3").out ==
        golden("adversary.csv"));
  CHECK(cli("multifile --dist exp:auto --files 10 --grid 0.1,10,3 --policies offline,window:2,always:2").out ==
        golden("multifile.csv"));

  write_file(kWork / "small.csv", "0,a\n0.5,b\n1,a\n1.25,a\n4,b\n4.5,c\n");
  CHECK(cli("simulate --trace \"" + (kWork / "small.csv").string() + "\" --policies offline,baseline,always:1,dual:2 --W 0.5").out ==
        golden("simulate_small.csv"));
}

TEST_CASE("single request under always-on-1st") {
  const auto rows = rows_of(cli("simulate --trace - --policies always:1 --R 3 < \"" +
                                (kWork / "one.csv").string() + "\"").out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "policy");
  CHECK(rows[1][5] == "6");  // R + T with T defaulting to R
  CHECK(rows[1][6] == "2");
}

TEST_CASE("every subcommand is deterministic under a seed") {
  for (const std::string args :
       {"simulate --dist pareto:1.5,0.2 --requests 5000 --seed 9", "gen --dist exp:auto --files 20 --trace-horizon 5 --seed 9",
        "adversary --policies window:2 --trials 300 --batches 50 --seed 9",
        "analyze --dist erlang:3,auto --grid 0.1,10,7", "multifile --dist exp:auto --files 100 --grid 0.1,10,4"}) {
    CAPTURE(args);
    const auto a = cli(args), b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
  CHECK(cli("gen --dist exp:1 --requests 50 --seed 1").out != cli("gen --dist exp:1 --requests 50 --seed 2").out);
}

TEST_CASE("CSV schemas") {
  const auto header = [](const std::string& csv) { return csv.substr(0, csv.find('\n')); };
  CHECK(header(cli("analyze --dist exp:auto --grid 1,2,2").out) ==
        "rate,offline,baseline,always1,always2,window2,window4,dual2");
  CHECK(header(cli("analyze --dist exp:auto --grid 0.1,10,5 --peaks").out) == "policy,peak_rate,peak_ratio");
  CHECK(header(cli("simulate --dist exp:1 --requests 10").out) ==
        "policy,bandwidth_cost,storage_cost,miss_count,hit_count,total,ratio,ratio_excl_tail,steady_ratio");
  CHECK(header(cli("adversary --trials 10 --batches 10").out) ==
        "policy,bound,achieved,achieved_excl_tail,random_worst,safe");
}

TEST_CASE("peak report") {
  const auto rows = rows_of(cli("analyze --dist exp:auto --grid 0.01,100,401 --peaks --policies baseline,window:2").out);
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-9));
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(1.05236).epsilon(1e-3));
}

TEST_CASE("family comparisons from the sweep") {
  auto peak = [](const std::string& dist, const std::string& policy) {
    const auto rows = rows_of(cli("analyze --dist " + dist + " --peaks --policies " + policy).out);
    return std::stod(rows.at(1).at(2));
  };
  CHECK(peak("erlang:4,auto", "window:2") < peak("exp:auto", "window:2"));
  CHECK(peak("erlang:4,auto", "window:4") < peak("exp:auto", "window:4"));
  CHECK(peak("pareto:1.1,auto", "baseline") > 3.0);
}

TEST_CASE("adversary report") {
  const auto rows = rows_of(cli("adversary --policies window:2,always:1,dual:2 --batches 1000 --trials 1000").out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][1] == "3");
  CHECK(std::stod(rows[1][2]) >= 2.97);
  CHECK(rows[2][1] == "2");
  CHECK(std::stod(rows[2][2]) >= 1.99);
  CHECK(rows[3][1] == "3");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][5] == "true");
}

TEST_CASE("Zipf simulation band shares add up to the aggregate") {
  const auto bands_path = kWork / "bands.csv";
  const auto run = cli("simulate --files 200 --gamma 1 --dist exp:auto --rate 0.5 --trace-horizon 40 --seed 4 "
                       "--policies offline,window:2,always:1 --bands-out \"" + bands_path.string() + "\"");
  REQUIRE(run.code == 0);
  const auto main_rows = rows_of(run.out);
  const auto band_rows = rows_of(slurp(bands_path));
  REQUIRE(band_rows.size() == 7);
  CHECK(band_rows[0] == std::vector<std::string>{"band", "policy", "cost_ratio_share"});
  for (const std::string policy : {"window2", "always1"}) {
    double share = 0.0;
    for (const auto& r : band_rows) {
      if (r[1] == policy) share += std::stod(r[2]);
    }
    for (const auto& r : main_rows) {
      if (r[0] == policy) CHECK(share == doctest::Approx(std::stod(r[6])).epsilon(1e-12));
    }
  }
}

TEST_CASE("generated exponential trace agrees with the analytic ratio") {
  // Batch means of the same gap sequence the CLI generates give the standard error.
  const std::uint64_t seed = 17;
  const int n = 1'000'000;
  const auto rows = rows_of(cli("simulate --dist exp:1 --requests 1000000 --seed 17 --policies offline,always:1,window:2,dual:2 --W 0.5").out);
  REQUIRE(rows.size() == 5);

  const std::vector<ttlcache::PolicySpec> ps{ttlcache::PolicySpec::always_on_mth(1, 1.0),
                                             ttlcache::PolicySpec::single_window_mth(2, 1.0),
                                             ttlcache::PolicySpec::dual_window_2nd(0.5, 1.0)};
  std::vector<ttlcache::ObjectSimulator> sims;
  for (const auto& p : ps) sims.emplace_back(p, 1.0);
  for (auto& s : sims) s.advance(0.0);
  ttlcache::Rng rng = ttlcache::Rng::for_stream(seed, 0);
  const int batches = 100, per = (n - 1) / batches;
  std::vector<std::vector<double>> batch_cost(ps.size(), std::vector<double>(batches));
  std::vector<double> batch_offline(batches);
  std::vector<double> before(ps.size());
  for (int b = 0; b < batches; ++b) {
    for (std::size_t j = 0; j < ps.size(); ++j) before[j] = sims[j].report().total();
    const int count = b + 1 == batches ? (n - 1) - per * (batches - 1) : per;
    for (int g = 0; g < count; ++g) {
      const double gap = ttlcache::sample(ttlcache::Exponential{1.0}, rng);
      batch_offline[b] += std::min(gap, 1.0);
      for (auto& s : sims) s.advance(gap);
    }
    for (std::size_t j = 0; j < ps.size(); ++j) batch_cost[j][b] = sims[j].report().total() - before[j];
  }
  double off_sum = 0.0;
  for (double x : batch_offline) off_sum += x;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    double sum = 0.0;
    for (double x : batch_cost[j]) sum += x;
    const double ratio = sum / off_sum;
    double ss = 0.0;
    for (int b = 0; b < batches; ++b) {
      const double r = batch_cost[j][b] - ratio * batch_offline[b];
      ss += r * r;
    }
    const double se = std::sqrt(ss / (batches * (batches - 1.0))) / (off_sum / batches);
    const double analytic = ttlcache::policy_cost(ttlcache::Exponential{1.0}, 1.0, ps[j]).cost_per_time_unit /
                            ttlcache::offline_cost(ttlcache::Exponential{1.0}, 1.0).cost_per_time_unit;
    const double cli_ratio = std::stod(rows[j + 2][8]);
    CAPTURE(ps[j].label());
    CHECK(cli_ratio == doctest::Approx(ratio).epsilon(1e-9));
    CHECK(std::abs(cli_ratio - analytic) <= 3.0 * se);
  }
}

TEST_CASE("JSON output parses") {
  const auto j = nlohmann::json::parse(cli("simulate --dist exp:1 --requests 100 --json").out);
  CHECK(j["requests"] == 100);
  CHECK(j["policies"].size() == 7);
  const auto a = nlohmann::json::parse(cli("analyze --dist exp:auto --grid 1,10,3 --json").out);
  CHECK(a.is_object());
  CHECK_FALSE(cli("adversary --trials 10 --batches 10 --json").out.empty());
  const auto g = nlohmann::json::parse(cli("gen --dist det:2 --requests 3 --json").out);
  CHECK(g.size() == 3);
  CHECK(g[2]["timestamp"] == 4.0);
}

TEST_CASE("output file option") {
  const auto path = kWork / "sweep.csv";
  const auto r = cli("--out \"" + path.string() + "\" analyze --dist det:auto --grid 0.5,2,3 --policies offline,baseline,always:1,always:2,window:2");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == golden("analyze_det.csv"));
}

TEST_CASE("exit codes") {
  CHECK(cli("--help").code == 0);
  CHECK(cli("").code == 1);
  CHECK(cli("analyze").code == 1);
  CHECK(cli("analyze --dist weibull:auto").code == 1);
  CHECK(cli("analyze --dist exp:auto --policies lru").code == 1);
  CHECK(cli("analyze --dist exp:auto --grid 1,0.5,3").code == 1);
  CHECK(cli("simulate --dist exp:1").code == 1);
  CHECK(cli("--threads -2 analyze --dist exp:auto").code == 1);

  write_file(kWork / "bad.csv", "0,a\n2,a\n1,b\n");
  const auto bad = cli("simulate --trace \"" + (kWork / "bad.csv").string() + "\"");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(cli("simulate --trace \"" + (kWork / "missing.csv").string() + "\"").code == 2);
  write_file(kWork / "empty.csv", "# nothing\n");
  CHECK(cli("simulate --trace \"" + (kWork / "empty.csv").string() + "\"").code == 2);
  CHECK(cli("simulate --trace \"" + (kWork / "one.csv").string() + "\" --horizon -1").code == 1);
}
