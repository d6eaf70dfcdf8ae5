#include "sandpile/canonical.hpp"
#include "sandpile/cli.hpp"
#include "sandpile/graph_io.hpp"
#include "sandpile/grid_image.hpp"
#include "sandpile/scan.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace sandpile;
using Json = nlohmann::json;

namespace {

struct CliRun
{
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args)
{
  args.insert(args.begin(), "sandpile");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<int>> positive_params(const ScanReport& r)
{
  std::vector<std::vector<int>> out;
  for (const auto& rec : r.records)
    if (rec.verdict)
      out.push_back(rec.params);
  return out;
}

bool tagged(const ScanRecord& rec, const std::string& t)
{
  for (const auto& x : rec.tags)
    if (x == t)
      return true;
  return false;
}

std::set<std::string> positive_forms(const ScanReport& r, int n)
{
  std::set<std::string> out;
  for (const auto& rec : r.records)
    if (rec.verdict && rec.params[0] == n)
      out.insert(canonical_form(parse_graph6(rec.graph.substr(3))));
  return out;
}

std::string data(const std::string& name)
{
  return std::string(SANDPILE_TEST_DATA) + "/" + name;
}

} // namespace

TEST_SUITE("harness")
{
  TEST_CASE("strong path scan")
  {
    const ScanReport r = scan_strong_paths(10);
    CHECK(r.records.size() == 45);
    CHECK(positive_params(r) == std::vector<std::vector<int>>{{2, 2}, {2, 4}, {2, 7}, {2, 10}});
    CHECK(r.ok);
    CHECK(r.counterexamples.empty());

    const ScanReport small = scan_strong_paths(2);
    CHECK(positive_params(small) == std::vector<std::vector<int>>{{2, 2}});
    CHECK_THROWS_AS(scan_strong_paths(1), std::invalid_argument);
  }

  TEST_CASE("Cartesian complete scan")
  {
    const ScanReport r = scan_cartesian_complete(12, 8);
    CHECK(r.records.size() == 77);
    CHECK(positive_params(r) == std::vector<std::vector<int>>{{4, 2}});
    CHECK(r.ok);
    std::vector<int> sieve;
    for (const auto& rec : r.records) {
      if (rec.params[1] == 3)
        CHECK_FALSE(rec.verdict);
      if (tagged(rec, "sieve"))
        sieve.push_back(rec.params[0]);
      CHECK(rec.denominators.size() == static_cast<std::size_t>(rec.params[1] * 2 - 1));
    }
    CHECK(sieve == std::vector<int>{4, 7});
  }

  TEST_CASE("biconnected scan")
  {
    const ScanReport r = scan_biconnected_cmip(7);
    CHECK(r.ok);
    CHECK(positive_forms(r, 3) == std::set<std::string>{canonical_form(cycle_graph(3))});
    CHECK(positive_forms(r, 4) == std::set<std::string>{canonical_form(complete_graph(4))});
    CHECK(positive_forms(r, 5) ==
          std::set<std::string>{canonical_form(cycle_graph(5)), canonical_form(complete_graph(5))});
    CHECK(positive_forms(r, 6) == std::set<std::string>{canonical_form(complete_graph(6))});
    CHECK(positive_forms(r, 7) ==
          std::set<std::string>{canonical_form(cycle_graph(7)), canonical_form(complete_graph(7))});

    const auto from_list = scan_biconnected_cmip({complete_graph(4), path_graph(4), cycle_graph(5)});
    CHECK(from_list.records.size() == 2);
    CHECK(from_list.positives.size() == 2);
  }

  TEST_CASE("cip-leaf scan")
  {
    const ScanReport r = scan_cip_leaf_bipartite(7);
    CHECK(r.ok);
    CHECK(r.counterexamples.empty());
    int cube = 0;
    for (const auto& rec : r.records) {
      if (tagged(rec, "hypercube")) {
        ++cube;
        CHECK_FALSE(rec.verdict);
        CHECK(tagged(rec, "bipartite"));
      }
      if (rec.verdict)
        CHECK(tagged(rec, "bipartite"));
      if (tagged(rec, "cycle") || tagged(rec, "complete_bipartite"))
        CHECK(rec.verdict);
    }
    CHECK(cube == 1);
    CHECK(r.records.size() == 1 + 1 + 2 + 6 + 21 + 112 + 853 + 1);
  }

  TEST_CASE("parallel scans give the same report")
  {
    CHECK(to_json(scan_strong_paths(9, {1}), false) == to_json(scan_strong_paths(9, {2}), false));
    CHECK(to_json(scan_cartesian_complete(6, 5, {1}), false) == to_json(scan_cartesian_complete(6, 5, {3}), false));
    CHECK(to_csv(scan_cip_leaf_bipartite(5, {1})) == to_csv(scan_cip_leaf_bipartite(5, {2})));
  }

  TEST_CASE("report formats")
  {
    const ScanReport r = scan_strong_paths(4);
    const Json j = Json::parse(to_json(r));
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["scan"] == "sp-paths");
    CHECK(j["parameters"]["max_k"] == 4);
    CHECK(j["records"].size() == 6);
    CHECK(j["positives"] == Json::array({"sp(path:2,path:2)", "sp(path:2,path:4)"}));
    CHECK(j.contains("wall_seconds"));
    CHECK_FALSE(Json::parse(to_json(r, false)).contains("wall_seconds"));
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it)
      keys.push_back(it.key());
    CHECK(keys.size() == 9);

    const std::string csv = to_csv(r);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "graph,params,verdict,expected,denominators,tags");
    std::getline(lines, line);
    CHECK(line == "\"sp(path:2,path:2)\",2;2,true,true,,");
    int rows = 1;
    while (std::getline(lines, line))
      ++rows;
    CHECK(rows == 6);

    const std::string text = to_text(r);
    CHECK(text.find("positives: 2") != std::string::npos);
    CHECK(text.find("result: ok") != std::string::npos);
  }

  TEST_CASE("grid identity")
  {
    const int n = 8;
    const ChipConfig e = grid_identity(n);
    const Sandpile sp(grid_graph(n, n, true), n * n);
    CHECK(e.size() == n * n);
    CHECK(sp.is_recurrent(e));
    CHECK(sp.add(e, e) == e);
    CHECK(e == sp.recurrent_identity());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        CHECK(e[r * n + c] == e[c * n + r]);
        CHECK(e[r * n + c] == e[(n - 1 - r) * n + c]);
      }

    const ChipConfig big = grid_identity(32);
    for (Eigen::Index i = 0; i < big.size(); ++i) {
      CHECK(big[i] >= 0);
      CHECK(big[i] <= 3);
    }

    const std::string ppm = grid_ppm(n, e, 2);
    const std::string head = "P6\n16 16\n255\n";
    CHECK(ppm.substr(0, head.size()) == head);
    CHECK(ppm.size() == head.size() + 16 * 16 * 3);
    const auto colour = kGridPalette[static_cast<std::size_t>(e[0])];
    CHECK(static_cast<std::uint8_t>(ppm[head.size()]) == colour[0]);
    CHECK_THROWS_AS(grid_identity_image(0, "unused.ppm"), std::invalid_argument);
  }

  TEST_CASE("cli exit codes and reports")
  {
    CHECK(run({"check-cmip", "complete:4"}).code == kExitOk);
    CHECK(run({"check-cmip", "cycle:6"}).code == kExitPropertyFalse);
    CHECK(run({"check-mip", "cycle:5", "--sink", "2"}).code == kExitOk);
    CHECK(run({"check-mip", "cycle:5", "--sink", "9"}).code == kExitUsage);
    CHECK(run({"check-cip", "cycle:4"}).code == kExitPropertyFalse);
    CHECK(run({"check-cip", "cycle:5"}).code == kExitOk);

    const CliRun mc = run({"min-compat", "cycle:7", "--format", "json"});
    CHECK(mc.code == kExitOk);
    CHECK(Json::parse(mc.out) == Json{{"x", 7}, {"k", 7}});

    const CliRun ident = run({"--format", "json", "identity", "complete:3"});
    CHECK(ident.code == kExitOk);
    CHECK(Json::parse(ident.out)["identity"] == Json::array({1, 1}));

    const CliRun st = run({"stabilize", "cycle:4", "--config", "2,2,0", "--format", "json"});
    CHECK(st.code == kExitOk);
    const Json sj = Json::parse(st.out);
    CHECK(sj["stable"] == Json::array({1, 1, 1}));
    CHECK(sj["odometer"] == Json::array({1, 1, 0}));

    const CliRun comp = run({"compatible", "cycle:5", "--config", "1,1,1,1,1", "--format", "csv"});
    CHECK(comp.code == kExitOk);
    CHECK(comp.out == "graph,config,compatible\ncycle:5,1;1;1;1;1,true\n");

    CHECK(run({}).code == kExitUsage);
    CHECK(run({"no-such-command"}).code == kExitUsage);
    CHECK(run({"check-cmip"}).code == kExitUsage);
    CHECK(run({"check-cmip", "blob:3"}).code == kExitUsage);
    CHECK(run({"stabilize", "cycle:4", "--config", "1,x"}).code == kExitUsage);
    CHECK(run({"--version"}).code == kExitOk);

    const CliRun scan = run({"scan", "sp-paths", "--max", "7", "--no-timing", "--format", "json"});
    CHECK(scan.code == kExitOk);
    CHECK(scan.out == to_json(scan_strong_paths(7), false));
  }

  TEST_CASE("cli replays the table scripts")
  {
    for (const char* t : {"a", "b", "c", "d"}) {
      CAPTURE(t);
      const CliRun r = run({"replay", "leaf(kbip:3,4,0)", data(std::string("k34_table_") + t + ".script"), "--format",
                            "json"});
      CHECK(r.code == kExitOk);
      const Json j = Json::parse(r.out);
      CHECK(j["ok"] == true);
      CHECK(j["final"] == Json::array({0, 0, 0, 0, 0, 0, 0}));
    }
    const std::string bad = "harness_bad.script";
    std::ofstream(bad) << "start 1,1\nassert 0,0\n";
    CHECK(run({"replay", "complete:3", bad}).code == kExitPropertyFalse);
    std::remove(bad.c_str());
  }

  TEST_CASE("cli flowfire")
  {
    const CliRun u = run({"flowfire", "unidir", "--force", "4", "--count", "3", "--format", "json"});
    CHECK(u.code == kExitOk);
    CHECK(Json::parse(u.out)["matches_closed_form"] == true);

    const CliRun p = run({"flowfire", "pulse", "--force", "2", "--radius", "0", "--format", "json"});
    CHECK(p.code == kExitOk);
    const Json pj = Json::parse(p.out);
    CHECK(pj["verdict"] == "confluent");
    CHECK(pj["terminal_is_aztec"] == true);

    const CliRun q = run({"flowfire", "pulse", "--force", "2", "--radius", "2", "--format", "json"});
    CHECK(q.code == kExitOk);
    CHECK(Json::parse(q.out)["verdict"] == "not_confluent");
  }

  TEST_CASE("cli binary")
  {
    const std::string out = "harness_cli_out.txt";
    const std::string cli = SANDPILE_CLI;
    CHECK(std::system((cli + " check-cmip complete:5 > " + out).c_str()) == 0);
    CHECK(std::system((cli + " check-cmip cycle:8 > " + out).c_str()) != 0);
    const std::string img = "harness_grid.ppm";
    CHECK(std::system((cli + " grid-identity --n 4 --out " + img + " > " + out).c_str()) == 0);
    std::ifstream in(img, std::ios::binary);
    std::string magic;
    in >> magic;
    CHECK(magic == "P6");
    std::remove(img.c_str());
    std::remove(out.c_str());
  }
}
