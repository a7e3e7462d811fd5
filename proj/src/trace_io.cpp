#include "ttlcache/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <string>

#include "ttlcache/errors.hpp"
#include "ttlcache/numeric_text.hpp"
#include "ttlcache/random.hpp"

namespace ttlcache {

RequestTrace read_trace(std::istream& in) {
  RequestTrace::Builder builder;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;

    const auto c1 = text.find(',');
    if (c1 == std::string_view::npos) throw ParseError(number, "expected timestamp,object_id[,size]");
    const auto c2 = text.find(',', c1 + 1);
    const std::string_view ts = text.substr(0, c1);
    const std::string_view id =
        trim(text.substr(c1 + 1, c2 == std::string_view::npos ? std::string_view::npos : c2 - c1 - 1));

    const auto time = parse_double(ts);
    if (!time) throw ParseError(number, "bad timestamp '" + std::string(ts) + "'");
    if (id.empty()) throw ParseError(number, "empty object id");
    double size = 1.0;
    if (c2 != std::string_view::npos) {
      const std::string_view sz = text.substr(c2 + 1);
      if (sz.find(',') != std::string_view::npos) throw ParseError(number, "too many fields");
      const auto parsed = parse_double(sz);
      if (!parsed) throw ParseError(number, "bad size '" + std::string(sz) + "'");
      size = *parsed;
    }
    try {
      builder.add(*time, id, size);
    } catch (const ValidationError& e) {
      throw ParseError(number, e.what());
    }
  }
  if (in.bad()) throw ValidationError("read error");
  return std::move(builder).build();
}

RequestTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file '" + path.string() + "'");
  return read_trace(in);
}

void write_trace(std::ostream& out, const RequestTrace& trace) {
  for (const Request& r : trace.requests()) {
    out << format_double(r.time) << ',' << trace.object_id(r.object);
    if (r.size != 1.0) out << ',' << format_double(r.size);
    out << '\n';
  }
}

void save_trace(const std::filesystem::path& path, const RequestTrace& trace) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write trace file '" + path.string() + "'");
  write_trace(out, trace);
  if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

namespace {

double next_time(double now, double gap) {
  const double t = now + gap;
  return t > now ? t : std::nextafter(now, INFINITY);
}

}  // namespace

RequestTrace generate_trace(const Distribution& d, std::size_t n_requests, std::uint64_t seed) {
  if (n_requests < 1) throw ParameterError("need at least one request");
  Rng rng = Rng::for_stream(seed, 0);
  RequestTrace::Builder b;
  double now = 0.0;
  b.add(now, "1");
  for (std::size_t i = 1; i < n_requests; ++i) {
    now = next_time(now, sample(d, rng));
    b.add(now, "1");
  }
  return std::move(b).build();
}

RequestTrace generate_zipf_trace(const ZipfCatalog& catalog, double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ParameterError("horizon must be > 0");
  const std::size_t n = catalog.n_files();

  struct Stream {
    Distribution dist;
    Rng rng;
  };
  std::vector<Stream> streams;
  streams.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    streams.push_back({catalog.per_file_distribution(i), Rng::for_stream(seed, i - 1)});
  }

  using Entry = std::pair<double, std::size_t>;  // (time, file index - 1)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < n; ++i) heap.emplace(0.0, i);

  RequestTrace::Builder b;
  const std::vector<std::string> ids = [n] {
    std::vector<std::string> v;
    v.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) v.push_back(std::to_string(i));
    return v;
  }();
  while (!heap.empty()) {
    const auto [t, i] = heap.top();
    heap.pop();
    b.add(t, ids[i]);
    const double next = next_time(t, sample(streams[i].dist, streams[i].rng));
    if (next <= horizon) heap.emplace(next, i);
  }
  return std::move(b).build();
}

}  // namespace ttlcache
