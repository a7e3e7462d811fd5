#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "ttlcache/cost_model.hpp"
#include "ttlcache/distributions.hpp"
#include "ttlcache/multifile.hpp"

namespace ttlcache {

// CSV lines `timestamp,object_id[,size]`. Blank lines and lines starting with
// '#' are skipped. Any malformed line or ordering violation throws ParseError
// carrying the 1-based line number.
RequestTrace read_trace(std::istream& in);
RequestTrace load_trace(const std::filesystem::path& path);

// Shortest round-trip decimals; the size column is written only when != 1.
void write_trace(std::ostream& out, const RequestTrace& trace);
void save_trace(const std::filesystem::path& path, const RequestTrace& trace);

// Single object "1": first request at 0, then n - 1 IID gaps.
RequestTrace generate_trace(const Distribution& d, std::size_t n_requests, std::uint64_t seed);

// Object "i" (i = 1..n) requests at 0 and then at IID gaps from
// per_file_distribution(i) while the time stays <= horizon. File i draws from
// stream i - 1 of the seed, so a one-file catalog matches generate_trace.
// Streams are merged lazily; equal timestamps keep file order.
RequestTrace generate_zipf_trace(const ZipfCatalog& catalog, double horizon, std::uint64_t seed);

}  // namespace ttlcache
