// One line per criterion: id, PASS/FAIL, wall time against its limit, detail.
#include "oracles.hpp"

#include "sandpile/canonical.hpp"
#include "sandpile/exact.hpp"
#include "sandpile/flowfire.hpp"
#include "sandpile/graph.hpp"
#include "sandpile/graph_io.hpp"
#include "sandpile/identity.hpp"
#include "sandpile/scan.hpp"
#include "sandpile/script.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace sandpile;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict
{
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what)
  {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, double limit_seconds, const std::function<void(Verdict&)>& body)
{
  Verdict v;
  const auto start = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  if (v.ok && !in_time)
    v.detail = "over the time limit";
  const bool pass = v.ok && in_time;
  if (!pass)
    ++failures;
  std::printf("%-4s %s  %-44s %10.4f s (limit %g s)%s%s\n", id, pass ? "PASS" : "FAIL", title, secs, limit_seconds,
              v.detail.empty() ? "" : "  ", v.detail.c_str());
  std::fflush(stdout);
}

ChipConfig cfg(std::initializer_list<std::int64_t> v)
{
  ChipConfig c(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v)
    c[i++] = x;
  return c;
}

IntegerMatrix imat(std::initializer_list<std::initializer_list<long>> rows)
{
  IntegerMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (long v : r)
      m(i, j++) = v;
    ++i;
  }
  return m;
}

std::string name_of(const Graph& g)
{
  std::string s = emit_graph6(g);
  while (!s.empty() && s.back() == '\n')
    s.pop_back();
  return s;
}

std::vector<Graph> connected_up_to(int n)
{
  std::vector<Graph> out;
  for (int k = 2; k <= n; ++k)
    for (auto& g : enumerate_connected(k))
      out.push_back(std::move(g));
  return out;
}

std::vector<ChipConfig> all_stable(const Sandpile& sp)
{
  std::vector<ChipConfig> out;
  ChipConfig c = ChipConfig::Zero(sp.dim());
  for (;;) {
    out.push_back(c);
    int i = 0;
    while (i < sp.dim() && c[i] == sp.degree_at(i) - 1)
      c[i++] = 0;
    if (i == sp.dim())
      break;
    ++c[i];
  }
  return out;
}

/// Witness for C_2n plus a leaf at vertex 0: 2 chips there,
/// nothing opposite or on the leaf, 1 chip elsewhere.
FullConfig even_cycle_witness(int n)
{
  FullConfig w = FullConfig::Constant(2 * n + 1, 1);
  w[0] = 2;
  w[n] = 0;
  w[2 * n] = 0;
  return w;
}

/// Witness for K_{m,n} plus a leaf a at b = 0: b holds n,
/// the rest of b's side D holds 0, the other side C holds m - 1, a holds 0.
FullConfig bipartite_witness(int m, int n)
{
  FullConfig w = FullConfig::Zero(m + n + 1);
  w[0] = n;
  for (int v = m; v < m + n; ++v)
    w[v] = m - 1;
  return w;
}

bool restricts_to_identity_everywhere(const Graph& g, const FullConfig& w)
{
  for (int s = 0; s < g.order(); ++s) {
    const Sandpile sp(g, s);
    if (sp.restrict(w) != sp.recurrent_identity())
      return false;
  }
  return true;
}

std::vector<std::vector<std::int64_t>> crop(const flow::FlowField& f, int r, int c, int half)
{
  std::vector<std::vector<std::int64_t>> out;
  for (int i = r - half; i <= r + half; ++i) {
    out.emplace_back();
    for (int k = c - half; k <= c + half; ++k)
      out.back().push_back(f.at(i, k));
  }
  return out;
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

int main()
{
  criterion("AC1", "C4 worked example", 1e-3, [](Verdict& v) {
    const Graph c4 = cycle_graph(4);
    const Sandpile sp(c4, 0);
    v.require(sp.stabilize(cfg({2, 2, 0})).config == cfg({1, 1, 1}), "Stab(2,2,0) differs from (1,1,1)");
    v.require(reduced_laplacian(c4, 0) == imat({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}), "reduced Laplacian differs");
    v.require(!sp.equivalent(sp.max_stable(), sp.zero()), "m is equivalent to 0");
  });

  criterion("AC2", "K3 identity", 1e-3, [](Verdict& v) {
    const Sandpile sp(complete_graph(3), 0);
    const ChipConfig e = sp.recurrent_identity();
    v.require(e == cfg({1, 1}), "identity differs from (1,1)");
    const ExactVector y = sp.firing_vector_between(e, sp.zero());
    v.require(y.size() == 2 && y[0] == 1 && y[1] == 1, "firing vector differs from (1,1)");
  });

  // Every CMIP graph met in AC3 and AC4, for the bound check.
  std::vector<Graph> cmip_seen;

  criterion("AC3", "CMIP ground truths", 30, [&](Verdict& v) {
    std::vector<Graph> yes;
    for (int n = 3; n <= 8; ++n)
      yes.push_back(complete_graph(n));
    for (int n = 1; n <= 6; ++n)
      yes.push_back(cycle_graph(2 * n + 1));
    std::mt19937_64 rng(303);
    for (int t = 0; t < 25; ++t)
      yes.push_back(oracle::random_tree(rng, 2 + static_cast<int>(rng() % 9)));
    yes.push_back(petersen_graph());
    for (int k = 1; k <= 3; ++k)
      yes.push_back(diamond_ring(k));
    for (const auto& g : yes) {
      v.require(has_cmip(g).overall, "expected CMIP on " + name_of(g));
      cmip_seen.push_back(g);
    }
    for (int n = 2; n <= 6; ++n)
      v.require(!has_cmip(cycle_graph(2 * n)).overall, "unexpected CMIP on C" + std::to_string(2 * n));
  });

  criterion("AC4", "minimal compatibility numbers", 10, [&](Verdict& v) {
    for (int n = 3; n <= 9; ++n) {
      v.require(minimal_compatibility_number(complete_graph(n)).x == n, "x(K" + std::to_string(n) + ")");
      v.require(minimal_compatibility_number(cycle_graph(n)).x == n, "x(C" + std::to_string(n) + ")");
      cmip_seen.push_back(complete_graph(n));
    }
    std::mt19937_64 rng(404);
    for (int t = 0; t < 20; ++t) {
      const Graph tree = oracle::random_tree(rng, 2 + static_cast<int>(rng() % 11));
      v.require(minimal_compatibility_number(tree).x == 1, "x != 1 on tree " + name_of(tree));
    }
    for (const auto& g : cmip_seen) {
      const Integer x = minimal_compatibility_number(g).x;
      const Integer n = g.order();
      v.require(n == 2 ? x == 1 : x <= n * n - 2 * n, "x above n^2 - 2n on " + name_of(g));
    }
  });

  criterion("AC5", "strong-product scan to 20", 600, [](Verdict& v) {
    const ScanReport r = scan_strong_paths(20);
    std::set<std::vector<int>> want{{2, 2}};
    for (int j = 2; j <= 20; ++j)
      if (j % 3 == 1)
        want.insert({2, j});
    std::set<std::vector<int>> got;
    for (const auto& rec : r.records)
      if (rec.verdict)
        got.insert(rec.params);
    v.require(r.records.size() == 190, "instance count");
    v.require(got == want, "positive set differs");
    v.require(r.counterexamples.empty(), "counterexamples reported");
  });

  criterion("AC6", "Cartesian scan 12 x 8 and j = 2 closed form", 600, [](Verdict& v) {
    const ScanReport r = scan_cartesian_complete(12, 8);
    std::set<std::vector<int>> got;
    for (const auto& rec : r.records)
      if (rec.verdict)
        got.insert(rec.params);
    v.require(r.records.size() == 77, "instance count");
    v.require(got == std::set<std::vector<int>>{{4, 2}}, "positive set differs");
    for (int i = 2; i <= 12; ++i) {
      const std::string tag = "i = " + std::to_string(i);
      const ExactVector closed = quotient_firing_vector_j2(i);
      v.require(closed == cartesian_quotient(i, 2).firing_vector, "closed form differs from collapsed solve, " + tag);
      // The uncollapsed system, solved over all 2i - 1 non-sink vertices.
      const Graph g = cartesian_product(complete_graph(i), path_graph(2));
      IntegerVector m(g.order() - 1);
      for (int u = 1; u < g.order(); ++u)
        m(u - 1) = g.degree(u) - 1;
      const ExactVector y = solve_exact_vector(reduced_laplacian(g, 0), m);
      for (int x = 0; x < i; ++x) {
        if (x > 0)
          v.require(y(2 * x - 1) == closed(2), "class (x,0) differs, " + tag);
        v.require(y(2 * x) == closed(x == 0 ? 0 : 1), "class (x,1) differs, " + tag);
      }
      v.require(is_integral(closed) == (i == 4), "integrality away from i = 4, " + tag);
    }
  });

  criterion("AC7", "CIP constructions and table replays", 30, [](Verdict& v) {
    for (int n = 2; n <= 6; ++n) {
      const Graph g = attach_leaf(cycle_graph(2 * n), 0);
      const FullConfig w = even_cycle_witness(n);
      const CipReport r = has_cip(g);
      v.require(r.holds && r.witness && *r.witness == w, "C" + std::to_string(2 * n) + " + leaf witness");
      v.require(restricts_to_identity_everywhere(g, w), "C" + std::to_string(2 * n) + " + leaf restriction");
    }
    for (int m = 2; m <= 5; ++m)
      for (int n = 2; n <= 5; ++n) {
        const std::string tag = "K" + std::to_string(m) + "," + std::to_string(n) + " + leaf";
        const Graph g = attach_leaf(complete_bipartite(m, n), 0);
        const FullConfig w = bipartite_witness(m, n);
        const CipReport r = has_cip(g);
        v.require(r.holds && r.witness && *r.witness == w, tag + " witness");
        v.require(restricts_to_identity_everywhere(g, w), tag + " restriction");
      }
    const Graph k34 = attach_leaf(complete_bipartite(3, 4), 0);
    for (const char* t : {"a", "b", "c", "d"}) {
      const FiringScript s =
        FiringScript::parse(read_file(std::string(SANDPILE_TEST_DATA) + "/k34_table_" + t + ".script"));
      v.require(s.sink.has_value() && s.start.has_value(), std::string("table ") + t + " lacks sink or start");
      const Sandpile sp(k34, *s.sink);
      const ScriptRun run = run_script(sp, sp.zero(), s);
      v.require(run.final == sp.zero(), std::string("table ") + t + " does not end at 0");
    }
  });

  criterion("AC8", "all-leaf CIP scan to 7 vertices", 1200, [](Verdict& v) {
    const ScanReport r = scan_cip_leaf_bipartite(7);
    int non_bipartite_positive = 0;
    bool cube = false;
    std::size_t connected = 0;
    for (const auto& rec : r.records) {
      const auto has = [&](const char* t) { return std::find(rec.tags.begin(), rec.tags.end(), t) != rec.tags.end(); };
      if (has("hypercube")) {
        cube = !rec.verdict && has("bipartite");
        continue;
      }
      ++connected;
      const Graph g = parse_graph6(rec.graph.substr(3));
      if (rec.verdict && !is_bipartite(g))
        ++non_bipartite_positive;
    }
    v.require(connected == 1 + 1 + 2 + 6 + 21 + 112 + 853, "connected graph count");
    v.require(non_bipartite_positive == 0, "non-bipartite graph with the all-leaf property");
    v.require(cube, "C4 x K2 not recorded as a bipartite failure");
    const Graph q3 = cartesian_product(cycle_graph(4), complete_graph(2));
    v.require(is_bipartite(q3) && !all_leaf_attachments_have_cip(q3), "C4 x K2 direct check");
  });

  criterion("AC9", "tree decoration gives CMIP", 60, [](Verdict& v) {
    std::mt19937_64 rng(909);
    for (int t = 0; t < 20; ++t) {
      const int n = 2 + static_cast<int>(rng() % 5);
      const int extra = std::min<int>(static_cast<int>(rng() % 4), n * (n - 1) / 2 - (n - 1));
      const Graph g = oracle::random_connected(rng, n, extra);
      const TreeDecoration d = cmip_tree_decoration(g);
      v.require(has_cmip(d.graph).overall, "decoration of " + name_of(g) + " lacks CMIP");
    }
  });

  criterion("AC10", "flow-firing", 300, [](Verdict& v) {
    using namespace flow;
    const std::vector<std::int64_t> want{6, 6, 5, 4, 3, 3, 2, 1, 0};
    const FlowField strip = unidirectional_config({6, 6, 6, 6, 6});
    const ExploreResult s = explore_terminals(strip);
    v.require(s.exhaustive && s.terminals.size() == 1, "strip has several terminals");
    v.require(!s.terminals.empty() && strip_profile(s.terminals[0]) == want, "strip terminal differs");
    v.require(unidirectional_predicted(6, 5) == want, "closed form differs");

    const std::vector<std::vector<std::int64_t>> aztec3{
      {0, 0, 0, 1, 0, 0, 0}, {0, 0, 1, 2, 1, 0, 0}, {0, 1, 2, 3, 2, 1, 0}, {1, 2, 3, 3, 3, 2, 1},
      {0, 1, 2, 3, 2, 1, 0}, {0, 0, 1, 2, 1, 0, 0}, {0, 0, 0, 1, 0, 0, 0},
    };
    const FlowField pyr = aztec_pyramid(3);
    const int c = window_centre(pyr.rows());
    v.require(crop(pyr, c, c, 3) == aztec3, "Aztec_3 grid differs");
    const ConfluenceResult a = check_global_confluence(PulseSpec{3, 0});
    v.require(a.verdict == Confluence::confluent && a.terminals.size() == 1 && a.terminals[0] == pyr,
              "pulse 3 is not certified to end at Aztec_3");
    for (const Policy::Kind kind : {Policy::Kind::lowest_index, Policy::Kind::random}) {
      const StabilizeOutcome run = stabilize_policy(pulse_config({3, 0}), Policy{kind, 5});
      v.require(run.terminated && run.field == pyr, "a policy run of pulse 3 misses Aztec_3");
    }

    const std::vector<std::vector<std::int64_t>> perturbed{
      {0, 0, 1, 1, 0, 0, 0}, {0, 1, 1, 2, 1, 0, 0}, {0, 1, 2, 3, 2, 1, 0}, {1, 2, 3, 3, 3, 2, 1},
      {0, 1, 2, 3, 2, 1, 0}, {0, 0, 1, 2, 1, 0, 0}, {0, 0, 0, 1, 0, 0, 0},
    };
    FlowField pert = pyr;
    pert.set(c - 2, c - 1, 3);
    const ExploreResult p = explore_terminals(pert);
    v.require(p.exhaustive && p.terminals.size() == 1, "perturbed grid has several terminals");
    v.require(!p.terminals.empty() && crop(p.terminals[0], c, c, 3) == perturbed, "perturbed terminal differs");

    for (int f = -3; f <= 3; ++f)
      for (int r = 0; r <= 2; ++r) {
        const bool want_confluent = std::abs(f) <= 1 || r <= 1;
        const ConfluenceResult res = check_global_confluence(PulseSpec{f, r});
        const std::string tag = "f = " + std::to_string(f) + ", r = " + std::to_string(r);
        v.require(res.verdict != Confluence::inconclusive, "inconclusive at " + tag);
        v.require((res.verdict == Confluence::confluent) == want_confluent, "wrong verdict at " + tag);
      }
  });

  criterion("AC11", "property suites", 600, [](Verdict& v) {
    std::mt19937_64 rng(1111);
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + static_cast<int>(rng() % 7);
      const Graph g = oracle::random_connected(rng, n, static_cast<int>(rng() % (n + 1)));
      const Sandpile sp(g, static_cast<int>(rng() % n));
      ChipConfig c(sp.dim());
      for (int i = 0; i < sp.dim(); ++i)
        c[i] = static_cast<std::int64_t>(rng() % (3 * sp.degree_at(i) + 1));
      const auto a = sp.stabilize_random(c, rng());
      const auto b = sp.stabilize(c);
      const auto o = oracle::naive_stabilize(sp, c);
      v.require(a.config == b.config && a.odometer == b.odometer, "firing orders disagree on " + name_of(g));
      v.require(o.config == b.config && o.odometer == b.odometer, "oracle disagrees on " + name_of(g));
    }
    for (const auto& g : connected_up_to(5)) {
      std::int64_t bound = 0;
      for (int u = 0; u < g.order(); ++u)
        bound = std::max(bound, g.degree(u));
      for (int s = 0; s < g.order(); ++s) {
        const Sandpile sp(g, s);
        const auto rec = oracle::recurrent_set(sp, static_cast<int>(bound));
        v.require(Integer(rec.size()) == determinant(sp.reduced_laplacian()), "recurrent count on " + name_of(g));
        for (const auto& c : all_stable(sp))
          v.require(sp.is_recurrent(c) == (rec.count(c) == 1), "burning test on " + name_of(g));
      }
    }
    for (const auto& g : connected_up_to(6)) {
      const Integer t = oracle::spanning_trees(g);
      v.require(spanning_tree_count(g) == t, "Matrix-Tree on " + name_of(g));
      v.require(minimal_compatibility_number(g, false).x == oracle::least_d(g), "x against least d on " + name_of(g));
    }
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
