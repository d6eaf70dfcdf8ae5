#pragma once

#include "sandpile/graph.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sandpile {

inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

struct ScanRecord
{
  /// Graph in the mini-language, e.g. "sp(path:2,path:7)" or "g6:Cr".
  std::string graph;
  /// Scan coordinates: (i, j) for products, (n, index) for enumerations.
  std::vector<int> params;
  bool verdict = false;
  /// Expectation for this instance, when the scan has one.
  bool expected = false;
  bool has_expectation = false;
  /// Collapsed firing-vector denominators (Cartesian scan only).
  std::vector<std::string> denominators;
  /// Free-form tags: COUNTEREXAMPLE, bipartite, cycle, complete, sieve, ...
  std::vector<std::string> tags;
};

struct ScanReport
{
  std::string scan_id;
  std::vector<std::pair<std::string, int>> parameters;
  /// Sorted by params.
  std::vector<ScanRecord> records;
  /// Graphs of the positive records, in record order.
  std::vector<std::string> positives;
  std::vector<std::string> counterexamples;
  /// No counterexamples and every scan-level expectation met.
  bool ok = false;
  double wall_seconds = 0;
  std::string version = kToolkitVersion;
};

struct ScanOptions
{
  int jobs = 1;
};

/// P_i strong P_j for 2 <= i <= j <= max_k.
ScanReport scan_strong_paths(int max_k, const ScanOptions& opts = {});
/// K_i Cartesian P_j for 2 <= i <= max_i, 2 <= j <= max_j.
ScanReport scan_cartesian_complete(int max_i, int max_j, const ScanOptions& opts = {});
/// Connected graphs up to max_n (at most 7): all-leaf CIP against bipartiteness.
ScanReport scan_cip_leaf_bipartite(int max_n, const ScanOptions& opts = {});
/// Biconnected CMIP graphs with 3 .. max_n vertices (max_n at most 7).
ScanReport scan_biconnected_cmip(int max_n, const ScanOptions& opts = {});
/// Same over caller-supplied graphs (e.g. read from a graph6 file); the
/// biconnected ones are scanned, others are skipped.
ScanReport scan_biconnected_cmip(const std::vector<Graph>& graphs, const ScanOptions& opts = {});

/**
 * JSON object with keys, in order: schema, scan, version, parameters, records,
 * positives, counterexamples, ok, wall_seconds. wall_seconds is omitted when
 * include_timing is false; everything else is a function of the parameters.
 */
std::string to_json(const ScanReport& r, bool include_timing = true);
/// Header "graph,params,verdict,expected,denominators,tags"; params, lists
/// and tags are joined with ';'. expected is empty when there is no
/// expectation.
std::string to_csv(const ScanReport& r);
std::string to_text(const ScanReport& r);

} // namespace sandpile
