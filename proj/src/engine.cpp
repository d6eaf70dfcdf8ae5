#include "sandpile/engine.hpp"

#include <deque>
#include <random>
#include <stdexcept>

namespace sandpile {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("chip count overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("chip count overflow");
  return r;
}

} // namespace

Sandpile::Sandpile(Graph g, Vertex sink)
  : graph_(std::move(g))
  , sink_(sink)
  , dim_(graph_.order() - 1)
{
  if (graph_.order() < 2)
    throw GraphError("a sandpile needs at least two vertices");
  if (sink < 0 || sink >= graph_.order())
    throw GraphError("sink out of range");
  if (!is_connected(graph_))
    throw GraphError("sandpile graph must be connected");
  degree_.resize(dim_);
  sink_weight_.assign(dim_, 0);
  offsets_.assign(dim_ + 1, 0);
  for (int i = 0; i < dim_; ++i) {
    const Vertex v = vertex_at(i);
    degree_[i] = graph_.degree(v);
    for (const Arc& a : graph_.neighbors(v)) {
      if (a.to == sink_) {
        sink_weight_[i] = a.weight;
      } else {
        nbr_.push_back(index_of(a.to));
        nbr_weight_.push_back(a.weight);
      }
    }
    offsets_[i + 1] = static_cast<int>(nbr_.size());
  }
}

void Sandpile::check_size(const ChipConfig& c) const
{
  if (c.size() != dim_)
    throw ConfigError("configuration length " + std::to_string(c.size()) + " does not match " + std::to_string(dim_) +
                      " non-sink vertices");
}

ChipConfig Sandpile::max_stable() const
{
  ChipConfig m(dim_);
  for (int i = 0; i < dim_; ++i)
    m[i] = degree_[i] - 1;
  return m;
}

ChipConfig Sandpile::restrict(const FullConfig& full) const
{
  if (full.size() != graph_.order())
    throw ConfigError("full configuration has the wrong length");
  ChipConfig c(dim_);
  for (int i = 0; i < dim_; ++i)
    c[i] = full[vertex_at(i)];
  return c;
}

FullConfig Sandpile::extend(const ChipConfig& c, std::int64_t sink_value) const
{
  check_size(c);
  FullConfig full(graph_.order());
  for (int i = 0; i < dim_; ++i)
    full[vertex_at(i)] = c[i];
  full[sink_] = sink_value;
  return full;
}

bool Sandpile::is_stable(const ChipConfig& c) const
{
  check_size(c);
  for (int i = 0; i < dim_; ++i)
    if (c[i] >= degree_[i])
      return false;
  return true;
}

bool Sandpile::is_nonnegative(const ChipConfig& c) const
{
  check_size(c);
  return (c.array() >= 0).all();
}

Stabilization Sandpile::stabilize(const ChipConfig& start) const
{
  check_size(start);
  if (!is_nonnegative(start))
    throw ConfigError("stabilize requires nonnegative chips");
  Stabilization out{start, Odometer::Zero(dim_), 0};
  ChipConfig& c = out.config;
  std::vector<char> queued(dim_, 0);
  std::deque<int> work;
  for (int i = 0; i < dim_; ++i)
    if (c[i] >= degree_[i]) {
      work.push_back(i);
      queued[i] = 1;
    }
  while (!work.empty()) {
    const int i = work.front();
    work.pop_front();
    queued[i] = 0;
    const std::int64_t q = c[i] / degree_[i];
    if (q == 0)
      continue;
    c[i] -= q * degree_[i];
    out.odometer[i] += q;
    out.firings = checked_add(out.firings, q);
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const int j = nbr_[k];
      c[j] = checked_add(c[j], checked_mul(q, nbr_weight_[k]));
      if (!queued[j] && c[j] >= degree_[j]) {
        work.push_back(j);
        queued[j] = 1;
      }
    }
  }
  return out;
}

Stabilization Sandpile::stabilize_random(const ChipConfig& start, std::uint64_t seed) const
{
  check_size(start);
  if (!is_nonnegative(start))
    throw ConfigError("stabilize requires nonnegative chips");
  Stabilization out{start, Odometer::Zero(dim_), 0};
  ChipConfig& c = out.config;
  std::mt19937_64 rng(seed);
  std::vector<int> active;
  std::vector<int> where(dim_, -1);
  auto activate = [&](int i) {
    if (where[i] < 0 && c[i] >= degree_[i]) {
      where[i] = static_cast<int>(active.size());
      active.push_back(i);
    }
  };
  for (int i = 0; i < dim_; ++i)
    activate(i);
  while (!active.empty()) {
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, active.size() - 1)(rng);
    const int i = active[pick];
    c[i] -= degree_[i];
    out.odometer[i] += 1;
    out.firings += 1;
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const int j = nbr_[k];
      c[j] = checked_add(c[j], nbr_weight_[k]);
      activate(j);
    }
    if (c[i] < degree_[i]) {
      const int last = active.back();
      active[pick] = last;
      where[last] = static_cast<int>(pick);
      active.pop_back();
      where[i] = -1;
    }
  }
  return out;
}

void Sandpile::fire(ChipConfig& c, Vertex v, std::int64_t times) const
{
  check_size(c);
  const int i = index_of(v);
  if (v < 0 || v >= graph_.order())
    throw ConfigError("vertex out of range");
  if (i < 0) {
    fire_sink(c, times);
    return;
  }
  c[i] = checked_add(c[i], -checked_mul(times, degree_[i]));
  for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
    c[nbr_[k]] = checked_add(c[nbr_[k]], checked_mul(times, nbr_weight_[k]));
}

void Sandpile::fire_sink(ChipConfig& c, std::int64_t times) const
{
  check_size(c);
  for (int i = 0; i < dim_; ++i)
    if (sink_weight_[i] != 0)
      c[i] = checked_add(c[i], checked_mul(times, sink_weight_[i]));
}

bool Sandpile::is_recurrent(const ChipConfig& c) const
{
  if (!is_stable(c) || !is_nonnegative(c))
    throw ConfigError("recurrence test needs a stable nonnegative configuration");
  ChipConfig burn = c;
  fire_sink(burn);
  const Stabilization s = stabilize(burn);
  return s.config == c && (s.odometer.array() == 1).all();
}

ChipConfig Sandpile::recurrent_identity() const
{
  const ChipConfig twice = 2 * max_stable();
  return stab(twice - stab(twice));
}

ExactVector Sandpile::firing_vector_between(const ChipConfig& c, const ChipConfig& d) const
{
  check_size(c);
  check_size(d);
  IntegerVector diff(dim_);
  for (int i = 0; i < dim_; ++i)
    diff[i] = Integer(c[i]) - Integer(d[i]);
  return solve_exact_vector(reduced_laplacian(), diff);
}

bool Sandpile::equivalent(const ChipConfig& c, const ChipConfig& d) const
{
  return is_integral(firing_vector_between(c, d));
}

void fire_full(const Graph& g, FullConfig& c, Vertex v, std::int64_t times)
{
  if (c.size() != g.order())
    throw ConfigError("full configuration has the wrong length");
  if (v < 0 || v >= g.order())
    throw ConfigError("vertex out of range");
  c[v] = checked_add(c[v], -checked_mul(times, g.degree(v)));
  for (const Arc& a : g.neighbors(v))
    c[a.to] = checked_add(c[a.to], checked_mul(times, a.weight));
}

} // namespace sandpile
