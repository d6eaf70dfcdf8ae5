#include "oracles.hpp"

#include "sandpile/canonical.hpp"
#include "sandpile/graph.hpp"
#include "sandpile/graph_io.hpp"
#include "sandpile/graph_spec.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

using namespace sandpile;

namespace {

std::set<std::pair<int, int>> edge_pairs(const Graph& g)
{
  std::set<std::pair<int, int>> out;
  for (const auto& e : g.edges())
    out.insert({e.u, e.v});
  return out;
}

Graph random_graph(std::mt19937_64& rng, int n, double p)
{
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng))
        edges.push_back({i, j, 1});
  return Graph(n, edges);
}

} // namespace

TEST_SUITE("graph")
{
  TEST_CASE("families")
  {
    const Graph p3 = path_graph(3);
    CHECK(p3.order() == 3);
    CHECK(edge_pairs(p3) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});

    const Graph ring = diamond_ring(3);
    CHECK(ring.order() == 12);
    CHECK(ring.size() == 18);
    CHECK(canonical_form(diamond_ring(1)) == canonical_form(complete_graph(4)));

    CHECK_THROWS_AS(cycle_graph(1), GraphError);
    CHECK_THROWS_AS(cycle_graph(2), GraphError);

    CHECK(petersen_graph().order() == 10);
    CHECK(petersen_graph().size() == 15);
    const Graph d = diamond_graph();
    CHECK(d.degree(0) == 2);
    CHECK(d.degree(1) == 3);
    CHECK(d.degree(2) == 3);
    CHECK(d.degree(3) == 2);
    CHECK(complete_bipartite(3, 4).size() == 12);
    CHECK(star_graph(4).degree(0) == 4);
  }

  TEST_CASE("grid with boundary sink gives every cell degree four")
  {
    const Graph g = grid_graph(4, 5, true);
    CHECK(g.order() == 21);
    for (int v = 0; v < 20; ++v)
      CHECK(g.degree(v) == 4);
    CHECK(g.weight(0, 20) == 2);
    CHECK(g.weight(1, 20) == 1);
    CHECK(g.weight(6, 20) == 0);
  }

  TEST_CASE("rejects loops and repeated pairs")
  {
    CHECK_THROWS_AS(Graph(2, {{0, 0, 1}}), GraphError);
    CHECK_THROWS_AS(Graph(2, {{0, 1, 1}, {1, 0, 1}}), GraphError);
    CHECK_THROWS_AS(Graph(2, {{0, 2, 1}}), GraphError);
    CHECK_THROWS_AS(Graph(2, {{0, 1, 0}}), GraphError);
  }

  TEST_CASE("products")
  {
    const Graph p3 = path_graph(3);
    const Graph cart = cartesian_product(p3, p3);
    CHECK(cart.order() == 9);
    CHECK(cart.size() == 12);
    CHECK(canonical_form(cart) == canonical_form(grid_graph(3, 3)));

    const Graph tens = tensor_product(p3, p3);
    CHECK(tens.order() == 9);
    CHECK(tens.size() == 8);
    CHECK(tens.has_edge(0, 4));
    CHECK(tens.has_edge(1, 3));
    CHECK_FALSE(is_connected(tens));

    CHECK(canonical_form(strong_product(path_graph(2), path_graph(2))) == canonical_form(complete_graph(4)));
  }

  TEST_CASE("product invariants")
  {
    const std::vector<Graph> small{path_graph(2), path_graph(3), cycle_graph(3), star_graph(3), cycle_graph(4),
                                   complete_graph(3), diamond_graph(), path_graph(5)};
    for (const auto& g : small) {
      for (const auto& h : small) {
        const Graph c = cartesian_product(g, h);
        const Graph t = tensor_product(g, h);
        const Graph s = strong_product(g, h);
        CHECK(c.size() == g.order() * h.size() + h.order() * g.size());
        CHECK(t.size() == 2 * g.size() * h.size());
        auto u = edge_pairs(c);
        const auto te = edge_pairs(t);
        u.insert(te.begin(), te.end());
        CHECK(u == edge_pairs(s));
        if (g.order() * h.order() <= 10) {
          for (auto kind : {ProductKind::cartesian, ProductKind::tensor, ProductKind::strong})
            CHECK(canonical_form(product(kind, g, h)) == canonical_form(product(kind, h, g)));
        }
      }
    }
  }

  TEST_CASE("attach_tree")
  {
    const Graph d5 = attach_leaf(diamond_graph(), 3);
    CHECK(d5.order() == 5);
    CHECK(d5.size() == 6);
    CHECK(d5.has_edge(3, 4));

    const Graph g = cycle_graph(5);
    CHECK(attach_tree(g, 2, TreeShape::single_vertex()) == g);

    const Graph c7 = attach_leaf(cycle_graph(6), 0);
    CHECK(c7.order() == 7);
    CHECK(c7.degree(6) == 1);
    CHECK(c7.degree(0) == 3);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + trial % 6;
      const Graph base = trial % 2 ? oracle::random_tree(rng, n) : oracle::random_connected(rng, n, 2);
      const int v = static_cast<int>(rng() % n);
      const TreeShape t = trial % 3 == 0 ? TreeShape::star(3) : TreeShape::path(trial % 4);
      const Graph a = attach_tree(base, v, t);
      CHECK(a.size() == base.size() + t.size());
      CHECK(a.order() == base.order() + t.size());
      CHECK(is_tree(a) == is_tree(base));
    }
  }

  TEST_CASE("predicates")
  {
    CHECK(is_biconnected(petersen_graph()));
    CHECK(is_bipartite(cycle_graph(6)));
    CHECK_FALSE(is_bipartite(cycle_graph(5)));
    CHECK(is_tree(path_graph(7)));
    CHECK_FALSE(is_tree(cycle_graph(7)));
    CHECK_FALSE(is_biconnected(path_graph(3)));
    CHECK_FALSE(is_biconnected(attach_leaf(cycle_graph(4), 0)));
    CHECK(is_biconnected(complete_graph(3)));
    CHECK_FALSE(is_connected(Graph(3, {{0, 1, 1}})));
  }

  TEST_CASE("relabel preserves the canonical form")
  {
    const Graph p3 = path_graph(3);
    const std::vector<int> perm{1, 0, 2};
    const Graph q = relabel(p3, perm);
    CHECK_FALSE(q == p3);
    CHECK(canonical_form(q) == canonical_form(p3));
    CHECK(canonical_form(complete_graph(3)) != canonical_form(p3));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 3 + trial % 8;
      const Graph g = random_graph(rng, n, 0.4);
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      const auto lab = canonical_labeling(g);
      CHECK(lab.form == canonical_form(relabel(g, p)));
      CHECK(canonical_form(relabel(g, lab.perm)) == lab.form);
    }
  }

  TEST_CASE("enumeration counts match the labeled brute force")
  {
    for (int n = 1; n <= 6; ++n) {
      CAPTURE(n);
      CHECK(enumerate_connected(n).size() == oracle::count_classes(n, true));
      CHECK(enumerate_all(n).size() == oracle::count_classes(n, false));
    }
    CHECK(enumerate_connected(4).size() == 6);
    CHECK(enumerate_connected(5).size() == 21);
    const auto bi3 = enumerate_connected(3, true);
    REQUIRE(bi3.size() == 1);
    CHECK(canonical_form(bi3[0]) == canonical_form(cycle_graph(3)));
  }

  TEST_CASE("enumeration at seven vertices")
  {
    CHECK(enumerate_connected(7).size() == 853);
    CHECK(enumerate_connected(7, true).size() == 468);
    CHECK(enumerate_connected(6, true).size() == 56);
    CHECK(enumerate_all(7).size() == 1044);
  }

  TEST_CASE("enumerated graphs are pairwise non-isomorphic and connected")
  {
    for (int n = 2; n <= 6; ++n) {
      std::set<std::string> forms;
      for (const auto& g : enumerate_connected(n)) {
        CHECK(is_connected(g));
        forms.insert(canonical_form(g));
      }
      CHECK(forms.size() == enumerate_connected(n).size());
    }
  }

  TEST_CASE("graph6")
  {
    CHECK(emit_graph6(complete_graph(4)) == "C~");
    CHECK(emit_graph6(parse_graph6("C~")) == "C~");
    CHECK(parse_graph6(">>graph6<<C~") == complete_graph(4));
    CHECK(parse_graph6("Bw") == complete_graph(3));
    CHECK(parse_edgelist("2\n0 1") == path_graph(2));
    CHECK(parse_edgelist("# comment\n3\n\n0 1 2\n1 2\n").weight(0, 1) == 2);

    CHECK_THROWS_AS(parse_graph6("C"), ParseError);
    CHECK_THROWS_AS(parse_graph6("C~~"), ParseError);
    CHECK_THROWS_AS(parse_edgelist("2\n0 5"), ParseError);
    CHECK_THROWS_AS(parse_edgelist("x"), ParseError);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 20);
      const Graph g = random_graph(rng, n, 0.3);
      CHECK(parse_graph6(emit_graph6(g)) == g);
      CHECK(parse_edgelist(emit_edgelist(g)) == g);
    }
    const Graph big = random_graph(rng, 70, 0.1);
    CHECK(parse_graph6(emit_graph6(big)) == big);
  }

  TEST_CASE("graph mini-language")
  {
    CHECK(parse_graph_spec("path:5") == path_graph(5));
    CHECK(parse_graph_spec("cycle:7") == cycle_graph(7));
    CHECK(parse_graph_spec("complete:4") == complete_graph(4));
    CHECK(parse_graph_spec("kbip:3,4") == complete_bipartite(3, 4));
    CHECK(parse_graph_spec("petersen") == petersen_graph());
    CHECK(parse_graph_spec("dring:3") == diamond_ring(3));
    CHECK(parse_graph_spec("grid:9,9!sink") == grid_graph(9, 9, true));
    CHECK(parse_graph_spec("sp(path:2, path:7)") == strong_product(path_graph(2), path_graph(7)));
    CHECK(parse_graph_spec("cp(complete:4,path:2)") == cartesian_product(complete_graph(4), path_graph(2)));
    CHECK(parse_graph_spec("tp(path:3,path:3)") == tensor_product(path_graph(3), path_graph(3)));
    CHECK(parse_graph_spec("leaf(cycle:6,0)") == attach_leaf(cycle_graph(6), 0));
    CHECK(parse_graph_spec("g6:C~") == complete_graph(4));
    CHECK_THROWS_AS(parse_graph_spec("cycle:"), GraphError);
    CHECK_THROWS_AS(parse_graph_spec("blob:3"), GraphError);
    CHECK_THROWS_AS(parse_graph_spec("sp(path:2"), GraphError);
  }

  TEST_CASE("load_graph reads files")
  {
    const std::string g6 = "graph_test_k4.g6";
    const std::string el = "graph_test_p3.txt";
    {
      std::ofstream(g6) << "C~\n";
      std::ofstream(el) << "3\n0 1\n1 2\n";
    }
    CHECK(load_graph(g6) == complete_graph(4));
    CHECK(load_graph(el) == path_graph(3));
    CHECK(load_graph("cycle:5") == cycle_graph(5));
    std::remove(g6.c_str());
    std::remove(el.c_str());
  }
}
