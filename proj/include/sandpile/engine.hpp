#pragma once

#include "sandpile/exact.hpp"
#include "sandpile/graph.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sandpile {

/// Chip counts. Over the non-sink vertices of a Sandpile (a ChipConfig, in
/// vertex order skipping the sink) or over every vertex (a FullConfig).
using ChipVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using ChipConfig = ChipVector;
using FullConfig = ChipVector;
/// Per-vertex firing counts, indexed like a ChipConfig.
using Odometer = ChipVector;

class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct Stabilization
{
  ChipConfig config;
  Odometer odometer;
  std::int64_t firings = 0;
};

/**
 * A connected graph with a designated sink.
 *
 * Configurations are dense vectors over the non-sink vertices. Index i refers
 * to vertex vertex_at(i); the sink is skipped, so vertices above the sink are
 * shifted down by one.
 */
class Sandpile
{
public:
  Sandpile(Graph g, Vertex sink);

  const Graph& graph() const { return graph_; }
  Vertex sink() const { return sink_; }
  int dim() const { return dim_; }

  Vertex vertex_at(int index) const { return index < sink_ ? index : index + 1; }
  /// -1 for the sink.
  int index_of(Vertex v) const { return v == sink_ ? -1 : (v < sink_ ? v : v - 1); }

  std::int64_t degree_at(int index) const { return degree_[index]; }
  /// Weight of the edge from vertex_at(index) to the sink.
  std::int64_t sink_weight_at(int index) const { return sink_weight_[index]; }

  ChipConfig zero() const { return ChipConfig::Zero(dim_); }
  ChipConfig max_stable() const;

  ChipConfig restrict(const FullConfig& full) const;
  /// Inserts `sink_value` at the sink position.
  FullConfig extend(const ChipConfig& c, std::int64_t sink_value = 0) const;

  bool is_stable(const ChipConfig& c) const;
  bool is_nonnegative(const ChipConfig& c) const;

  /// Worklist stabilization; a popped vertex with c >= deg fires floor(c/deg)
  /// times at once. Throws ConfigError on negative input.
  Stabilization stabilize(const ChipConfig& c) const;
  /// One firing at a time, choosing uniformly among the active vertices.
  Stabilization stabilize_random(const ChipConfig& c, std::uint64_t seed) const;
  ChipConfig stab(const ChipConfig& c) const { return stabilize(c).config; }
  /// Sandpile-group addition Stab(a + b).
  ChipConfig add(const ChipConfig& a, const ChipConfig& b) const { return stab(a + b); }

  // Unrestricted moves; chip counts may go negative.
  void fire(ChipConfig& c, Vertex v, std::int64_t times = 1) const;
  void backfire(ChipConfig& c, Vertex v, std::int64_t times = 1) const { fire(c, v, -times); }
  /// Firing the sink: the same as backfiring every non-sink vertex once.
  void fire_sink(ChipConfig& c, std::int64_t times = 1) const;
  void backfire_sink(ChipConfig& c, std::int64_t times = 1) const { fire_sink(c, -times); }

  /// Burning test. Throws ConfigError if c is not stable and nonnegative.
  bool is_recurrent(const ChipConfig& c) const;
  /// Stab(2m - Stab(2m)).
  ChipConfig recurrent_identity() const;

  IntegerMatrix reduced_laplacian() const { return sandpile::reduced_laplacian(graph_, sink_); }
  /// Unique y with reduced_laplacian() * y = c - d.
  ExactVector firing_vector_between(const ChipConfig& c, const ChipConfig& d) const;
  bool equivalent(const ChipConfig& c, const ChipConfig& d) const;

private:
  Graph graph_;
  Vertex sink_;
  int dim_;
  std::vector<std::int64_t> degree_;
  std::vector<std::int64_t> sink_weight_;
  // Adjacency among non-sink indices.
  std::vector<int> offsets_;
  std::vector<int> nbr_;
  std::vector<std::int64_t> nbr_weight_;

  void check_size(const ChipConfig& c) const;
};

/// Full-Laplacian moves on a FullConfig.
void fire_full(const Graph& g, FullConfig& c, Vertex v, std::int64_t times = 1);

} // namespace sandpile
