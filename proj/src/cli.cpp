#include "sandpile/cli.hpp"

#include "sandpile/flowfire.hpp"
#include "sandpile/graph_io.hpp"
#include "sandpile/graph_spec.hpp"
#include "sandpile/grid_image.hpp"
#include "sandpile/identity.hpp"
#include "sandpile/scan.hpp"
#include "sandpile/script.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace sandpile {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Output
{
  std::string format = "text";
  bool timing = true;
};

Json integer_json(const Integer& v)
{
  if (v >= Integer(std::numeric_limits<std::int64_t>::min()) && v <= Integer(std::numeric_limits<std::int64_t>::max()))
    return v.convert_to<std::int64_t>();
  return v.str();
}

Json rational_json(const Rational& v)
{
  if (denominator(v) == 1)
    return integer_json(numerator(v));
  return v.str();
}

template<typename Vec>
Json vector_json(const Vec& v)
{
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(v[i]);
  return a;
}

Json exact_vector_json(const ExactVector& v)
{
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(rational_json(v[i]));
  return a;
}

std::string scalar_text(const Json& v)
{
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + scalar_text(v[i]);
    return s;
  }
  return v.dump();
}

std::string csv_cell(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

/// Flat objects only: arrays are joined with ';' (CSV) or ',' (text);
/// multi-line strings are printed as indented blocks in text.
void emit(std::ostream& out, const Output& fmt, const Json& j)
{
  if (fmt.format == "json") {
    out << j.dump() << '\n';
    return;
  }
  if (fmt.format == "csv") {
    std::string head;
    std::string row;
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      std::string cell = scalar_text(v);
      if (v.is_array()) {
        cell.clear();
        for (std::size_t i = 0; i < v.size(); ++i)
          cell += (i ? ";" : "") + scalar_text(v[i]);
      }
      head += (first ? "" : ",") + csv_cell(k);
      row += (first ? "" : ",") + csv_cell(cell);
      first = false;
    }
    out << head << '\n' << row << '\n';
    return;
  }
  for (const auto& [k, v] : j.items()) {
    if (v.is_array() && !v.empty() && v[0].is_string() && v[0].get<std::string>().find('\n') != std::string::npos) {
      out << k << ":\n";
      for (const auto& block : v) {
        std::istringstream lines(block.get<std::string>());
        std::string line;
        while (std::getline(lines, line))
          out << "  " << line << '\n';
        out << '\n';
      }
      continue;
    }
    out << k << ": " << scalar_text(v) << '\n';
  }
}

void emit_scan(std::ostream& out, const Output& fmt, const ScanReport& r)
{
  if (fmt.format == "json")
    out << to_json(r, fmt.timing);
  else if (fmt.format == "csv")
    out << to_csv(r);
  else
    out << to_text(r);
}

std::vector<std::int64_t> parse_values(const std::string& text)
{
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size())
        throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad integer '" + tok + "' in value list");
    }
  }
  if (out.empty())
    throw UsageError("empty value list");
  return out;
}

ChipConfig parse_config(const Sandpile& sp, const std::string& text)
{
  const auto v = parse_values(text);
  ChipConfig c(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    c[static_cast<Eigen::Index>(i)] = v[i];
  if (c.size() == sp.graph().order())
    return sp.restrict(c);
  if (c.size() == sp.dim())
    return c;
  throw UsageError("configuration needs " + std::to_string(sp.dim()) + " non-sink values or " +
                   std::to_string(sp.graph().order()) + " values");
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Graph> read_graph6_lines(const std::string& path)
{
  std::vector<Graph> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty())
      out.push_back(parse_graph6(line));
  }
  return out;
}

Vertex check_sink(const Graph& g, int sink)
{
  if (sink < 0 || sink >= g.order())
    throw UsageError("sink " + std::to_string(sink) + " out of range");
  return sink;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Exact chip-firing toolkit"};
  app.name("sandpile");
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);
  Output fmt;
  app.add_option("--format", fmt.format, "Output format")
    ->check(CLI::IsMember({"json", "csv", "text"}))
    ->capture_default_str();

  std::string graph_arg;
  int sink = 0;
  std::string config_arg;
  std::function<int()> action;

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("graph", graph_arg, "Graph spec, .g6 file or edge-list file")->required();
  };
  auto add_sink = [&](CLI::App* sub) { sub->add_option("--sink", sink, "Sink vertex")->capture_default_str(); };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", fmt.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  };

  // check-mip
  auto* mip = app.add_subcommand("check-mip", "Maximal identity property at one sink");
  add_graph(mip);
  add_sink(mip);
  add_format(mip);
  mip->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const bool v = has_mip(g, check_sink(g, sink));
      emit(out, fmt, Json{{"graph", graph_arg}, {"property", "mip"}, {"sink", sink}, {"verdict", v}});
      return v ? kExitOk : kExitPropertyFalse;
    };
  });

  // check-cmip
  auto* cmip = app.add_subcommand("check-cmip", "Maximal identity property at every sink");
  add_graph(cmip);
  add_format(cmip);
  cmip->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const CmipReport r = has_cmip(g);
      Json per = Json::array();
      for (bool b : r.per_sink)
        per.push_back(b);
      emit(out, fmt,
           Json{{"graph", graph_arg},
                {"property", "cmip"},
                {"verdict", r.overall},
                {"per_sink", per},
                {"firing_vector_sink0", exact_vector_json(r.firing_vectors.front())}});
      return r.overall ? kExitOk : kExitPropertyFalse;
    };
  });

  // check-cip
  auto* cip = app.add_subcommand("check-cip", "Complete identity property");
  add_graph(cip);
  add_format(cip);
  cip->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const CipReport r = has_cip(g);
      Json j{{"graph", graph_arg}, {"property", "cip"}, {"verdict", r.holds}};
      j["witness"] = r.witness ? vector_json(*r.witness) : Json::array();
      emit(out, fmt, j);
      return r.holds ? kExitOk : kExitPropertyFalse;
    };
  });

  // min-compat
  bool no_verify = false;
  auto* mc = app.add_subcommand("min-compat", "Minimal compatibility number x and group order k");
  add_graph(mc);
  add_format(mc);
  mc->add_flag("--no-verify", no_verify, "Skip the least-d search cross-check");
  mc->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const CompatibilityIdeal c = minimal_compatibility_number(g, !no_verify);
      emit(out, fmt, Json{{"x", integer_json(c.x)}, {"k", integer_json(c.k)}});
      return kExitOk;
    };
  });

  // compatible
  auto* compat = app.add_subcommand("compatible", "Whether a configuration on all vertices is compatible");
  add_graph(compat);
  add_format(compat);
  compat->add_option("--config", config_arg, "Comma-separated chips on every vertex")->required();
  compat->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const auto v = parse_values(config_arg);
      if (static_cast<int>(v.size()) != g.order())
        throw UsageError("configuration needs " + std::to_string(g.order()) + " values");
      FullConfig c(g.order());
      for (int i = 0; i < g.order(); ++i)
        c[i] = v[i];
      const bool fast = is_compatible(g, c);
      if (fast != is_compatible_by_sinks(g, c))
        throw CrossCheckFault("compatibility routes disagree");
      emit(out, fmt, Json{{"graph", graph_arg}, {"config", vector_json(c)}, {"compatible", fast}});
      return kExitOk;
    };
  });

  // identity
  auto* ident = app.add_subcommand("identity", "Recurrent identity at a sink");
  add_graph(ident);
  add_sink(ident);
  add_format(ident);
  ident->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const Sandpile sp(g, check_sink(g, sink));
      const ChipConfig e = sp.recurrent_identity();
      emit(out, fmt, Json{{"graph", graph_arg}, {"sink", sink}, {"identity", vector_json(e)}});
      return kExitOk;
    };
  });

  // stabilize
  auto* stab = app.add_subcommand("stabilize", "Stabilize a configuration");
  add_graph(stab);
  add_sink(stab);
  add_format(stab);
  stab->add_option("--config", config_arg, "Chips on the non-sink vertices (or on all vertices)")->required();
  stab->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const Sandpile sp(g, check_sink(g, sink));
      const ChipConfig c = parse_config(sp, config_arg);
      if (!sp.is_nonnegative(c))
        throw UsageError("stabilization needs nonnegative chips");
      const Stabilization s = sp.stabilize(c);
      emit(out, fmt,
           Json{{"graph", graph_arg},
                {"sink", sink},
                {"stable", vector_json(s.config)},
                {"odometer", vector_json(s.odometer)},
                {"firings", s.firings}});
      return kExitOk;
    };
  });

  // replay
  std::string script_path;
  auto* replay = app.add_subcommand("replay", "Run a firing script");
  add_graph(replay);
  add_sink(replay);
  add_format(replay);
  replay->add_option("script", script_path, "Script file")->required();
  replay->add_option("--config", config_arg, "Start configuration when the script has no 'start'");
  replay->callback([&] {
    action = [&] {
      const Graph g = load_graph(graph_arg);
      const FiringScript script = FiringScript::parse(read_file(script_path));
      const Vertex s = check_sink(g, script.sink.value_or(sink));
      const Sandpile sp(g, s);
      const ChipConfig start = config_arg.empty() ? sp.zero() : parse_config(sp, config_arg);
      try {
        const ScriptRun run = run_script(sp, start, script);
        Json odo = Json::array();
        for (auto v : run.odometer)
          odo.push_back(v);
        emit(out, fmt,
             Json{{"graph", graph_arg}, {"sink", s}, {"steps", run.steps}, {"final", vector_json(run.final)},
                  {"odometer", odo}, {"ok", true}});
        return kExitOk;
      } catch (const ScriptAssertionError& e) {
        emit(out, fmt, Json{{"graph", graph_arg}, {"sink", s}, {"ok", false}, {"error", e.what()}});
        return kExitPropertyFalse;
      }
    };
  });

  // scan
  auto* scan = app.add_subcommand("scan", "Conjecture scans");
  scan->require_subcommand(1);
  ScanOptions sopts;
  bool no_timing = false;
  auto scan_common = [&](CLI::App* sub) {
    add_format(sub);
    sub->add_option("--jobs", sopts.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--no-timing", no_timing, "Omit wall_seconds from JSON");
  };
  auto finish_scan = [&](const ScanReport& r) {
    fmt.timing = !no_timing;
    emit_scan(out, fmt, r);
    return r.ok ? kExitOk : kExitPropertyFalse;
  };

  int max_k = 20;
  auto* sp_scan = scan->add_subcommand("sp-paths", "P_i strong P_j, 2 <= i <= j <= max");
  sp_scan->add_option("--max", max_k, "Largest path order")->check(CLI::Range(2, 1000))->capture_default_str();
  scan_common(sp_scan);
  sp_scan->callback([&] { action = [&] { return finish_scan(scan_strong_paths(max_k, sopts)); }; });

  int max_i = 12;
  int max_j = 8;
  auto* cp_scan = scan->add_subcommand("cp-complete", "K_i Cartesian P_j");
  cp_scan->add_option("--max-i", max_i, "Largest complete graph order")->check(CLI::Range(2, 1000))->capture_default_str();
  cp_scan->add_option("--max-j", max_j, "Largest path order")->check(CLI::Range(2, 1000))->capture_default_str();
  scan_common(cp_scan);
  cp_scan->callback([&] { action = [&] { return finish_scan(scan_cartesian_complete(max_i, max_j, sopts)); }; });

  int max_n = 7;
  auto* cip_scan = scan->add_subcommand("cip-leaf", "All-leaf CIP against bipartiteness");
  cip_scan->add_option("--max-n", max_n, "Largest order")->check(CLI::Range(1, 7))->capture_default_str();
  scan_common(cip_scan);
  cip_scan->callback([&] { action = [&] { return finish_scan(scan_cip_leaf_bipartite(max_n, sopts)); }; });

  int bic_n = 7;
  std::string g6_path;
  auto* bic_scan = scan->add_subcommand("biconnected", "Biconnected CMIP graphs");
  bic_scan->add_option("--max-n", bic_n, "Largest order")->check(CLI::Range(3, 7))->capture_default_str();
  bic_scan->add_option("--graphs", g6_path, "graph6 file, one graph per line, instead of enumeration");
  scan_common(bic_scan);
  bic_scan->callback([&] {
    action = [&] {
      if (!g6_path.empty())
        return finish_scan(scan_biconnected_cmip(read_graph6_lines(g6_path), sopts));
      return finish_scan(scan_biconnected_cmip(bic_n, sopts));
    };
  });

  // flowfire
  auto* ff = app.add_subcommand("flowfire", "Flow-firing on the square lattice");
  ff->require_subcommand(1);
  int force = 0;
  int radius = 0;
  int window = 0;
  std::size_t explore_limit = flow::ExploreLimits{}.max_states;
  bool no_certificate = false;

  auto* pulse = ff->add_subcommand("pulse", "Confluence of a pulse");
  pulse->add_option("--force", force, "Flow on the hole and the pulse faces")->required();
  pulse->add_option("--radius", radius, "Pulse radius")->check(CLI::NonNegativeNumber)->capture_default_str();
  pulse->add_option("--window", window, "Window side (0 = automatic)")->capture_default_str();
  pulse->add_option("--explore-limit", explore_limit, "State budget for exhaustive search")->capture_default_str();
  pulse->add_flag("--no-certificate", no_certificate, "Decide by search alone");
  add_format(pulse);
  pulse->callback([&] {
    action = [&] {
      flow::ExploreLimits lim;
      lim.max_states = explore_limit;
      lim.allow_certificate = !no_certificate;
      const flow::FlowField start = flow::pulse_config({force, radius}, window);
      const flow::ConfluenceResult r = flow::check_global_confluence(start, lim);
      const int crop = std::abs(force) + radius + 1;
      Json grids = Json::array();
      for (std::size_t k = 0; k < std::min<std::size_t>(r.terminals.size(), 4); ++k)
        grids.push_back(flow::format_grid(r.terminals[k], crop));
      const bool aztec = r.verdict == flow::Confluence::confluent &&
                         r.terminals.front() == flow::aztec_pyramid(force, start.rows());
      emit(out, fmt,
           Json{{"force", force},
                {"radius", radius},
                {"verdict", flow::to_string(r.verdict)},
                {"evidence", flow::to_string(r.evidence)},
                {"states", r.states},
                {"terminals_shown", grids.size()},
                {"terminal_is_aztec", aztec},
                {"terminals", grids}});
      return kExitOk;
    };
  });

  std::string scenario_path;
  auto* explore = ff->add_subcommand("explore", "All terminal fields reachable from a scenario");
  explore->add_option("scenario", scenario_path, "Scenario file")->required();
  explore->add_option("--explore-limit", explore_limit, "State budget")->capture_default_str();
  add_format(explore);
  explore->callback([&] {
    action = [&] {
      const flow::FlowField start = flow::parse_scenario(read_file(scenario_path));
      flow::ExploreLimits lim;
      lim.max_states = explore_limit;
      const flow::ExploreResult r = flow::explore_terminals(start, lim);
      Json grids = Json::array();
      for (std::size_t k = 0; k < std::min<std::size_t>(r.terminals.size(), 16); ++k)
        grids.push_back(flow::format_grid(r.terminals[k]));
      emit(out, fmt,
           Json{{"exhaustive", r.exhaustive},
                {"states", r.states},
                {"terminal_count", r.terminals.size()},
                {"terminals", grids}});
      return kExitOk;
    };
  });

  std::string values_arg;
  int copies = 0;
  auto* unidir = ff->add_subcommand("unidir", "Stabilize a strip against a wall");
  unidir->add_option("--values", values_arg, "Comma-separated strip values");
  unidir->add_option("--force", force, "Value repeated --count times");
  unidir->add_option("--count", copies, "Number of copies of --force");
  add_format(unidir);
  unidir->callback([&] {
    action = [&] {
      std::vector<std::int64_t> values;
      if (!values_arg.empty())
        values = parse_values(values_arg);
      else if (copies > 0)
        values.assign(static_cast<std::size_t>(copies), force);
      else
        throw UsageError("give --values or --force with --count");
      const flow::StabilizeOutcome s = flow::stabilize_policy(flow::unidirectional_config(values), {});
      if (!s.terminated)
        throw UsageError("strip did not stabilize within the step limit");
      const auto profile = flow::strip_profile(s.field);
      Json j{{"start", values}, {"stable", profile}, {"steps", s.steps}};
      bool uniform = true;
      for (auto v : values)
        uniform = uniform && v == values.front();
      if (uniform && values.front() > 0) {
        const auto pred = flow::unidirectional_predicted(values);
        if (pred != profile)
          throw CrossCheckFault("strip stabilization differs from the closed form");
        j["matches_closed_form"] = true;
      }
      emit(out, fmt, j);
      return kExitOk;
    };
  });

  // grid-identity
  int side = 32;
  int scale = 1;
  std::string image_path;
  auto* grid = app.add_subcommand("grid-identity", "Recurrent identity of the n x n grid as a P6 image");
  grid->add_option("--n", side, "Grid side")->check(CLI::Range(1, kGridImageMaxSide))->capture_default_str();
  grid->add_option("--out", image_path, "Output .ppm path")->required();
  grid->add_option("--scale", scale, "Pixels per cell")->check(CLI::Range(1, 64))->capture_default_str();
  add_format(grid);
  grid->callback([&] {
    action = [&] {
      const ChipConfig e = grid_identity_image(side, image_path, scale);
      std::array<std::int64_t, 4> counts{};
      for (Eigen::Index i = 0; i < e.size(); ++i)
        ++counts[static_cast<std::size_t>(e[i])];
      emit(out, fmt,
           Json{{"n", side},
                {"path", image_path},
                {"recurrent", true},
                {"idempotent", true},
                {"cells_by_chips", Json(counts)}});
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!action)
    return kExitUsage;
  try {
    return action();
  } catch (const CrossCheckFault& e) {
    err << "internal cross-check fault: " << e.what() << '\n';
    return kExitCrossCheck;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScriptError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitCrossCheck;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cli_main(int argc, const char* const* argv)
{
  return cli_main(argc, argv, std::cout, std::cerr);
}

} // namespace sandpile
