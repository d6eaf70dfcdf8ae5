#include "sandpile/script.hpp"

#include <charconv>
#include <sstream>

namespace sandpile {

namespace {

std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
      ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t')
      ++i;
    if (i > b)
      out.push_back(s.substr(b, i - b));
  }
  return out;
}

std::int64_t parse_int(std::string_view tok, int line)
{
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ScriptError(-1, line, "line " + std::to_string(line) + ": bad integer '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split_commas(std::string_view s)
{
  std::vector<std::string_view> out;
  std::size_t b = 0;
  while (true) {
    const auto e = s.find(',', b);
    out.push_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    if (e == std::string_view::npos)
      break;
    b = e + 1;
  }
  return out;
}

Vertex parse_vertex(std::string_view tok, int line)
{
  if (!tok.empty() && tok.front() == 'v')
    tok.remove_prefix(1);
  const std::int64_t v = parse_int(tok, line);
  if (v < 0)
    throw ScriptError(-1, line, "line " + std::to_string(line) + ": negative vertex");
  return static_cast<Vertex>(v);
}

std::int64_t parse_repeat(std::string_view tok, int line)
{
  if (tok.empty() || tok.front() != 'x')
    throw ScriptError(-1, line, "line " + std::to_string(line) + ": expected a repeat count 'xN'");
  const std::int64_t r = parse_int(tok.substr(1), line);
  if (r < 0)
    throw ScriptError(-1, line, "line " + std::to_string(line) + ": negative repeat count");
  return r;
}

} // namespace

FiringScript FiringScript::parse(std::string_view text)
{
  FiringScript script;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
      eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    const auto toks = split_ws(line);
    const std::string_view verb = toks[0];
    auto fail = [&](const std::string& what) {
      throw ScriptError(-1, line_no, "line " + std::to_string(line_no) + ": " + what);
    };

    if (verb == "sink") {
      if (toks.size() != 2)
        fail("usage: sink V");
      script.sink = parse_vertex(toks[1], line_no);
      continue;
    }
    if (verb == "start") {
      if (toks.size() != 2)
        fail("usage: start c0,c1,...");
      std::vector<std::int64_t> values;
      for (auto t : split_commas(toks[1]))
        values.push_back(parse_int(t, line_no));
      script.start = std::move(values);
      continue;
    }

    ScriptStep step;
    step.line = line_no;
    std::size_t next = 1;
    if (verb == "fire" || verb == "backfire") {
      step.kind = verb == "fire" ? ScriptStep::Kind::fire : ScriptStep::Kind::backfire;
      if (toks.size() < 2)
        fail("missing vertex list");
      for (auto t : split_commas(toks[1]))
        step.vertices.push_back(parse_vertex(t, line_no));
      next = 2;
    } else if (verb == "firesink") {
      step.kind = ScriptStep::Kind::fire_sink;
    } else if (verb == "backfiresink") {
      step.kind = ScriptStep::Kind::backfire_sink;
    } else if (verb == "stabilize") {
      step.kind = ScriptStep::Kind::stabilize;
    } else if (verb == "assert") {
      step.kind = ScriptStep::Kind::check;
      if (toks.size() != 2)
        fail("usage: assert c0,c1,...");
      for (auto t : split_commas(toks[1])) {
        if (t == "*")
          step.expected.emplace_back(std::nullopt);
        else
          step.expected.emplace_back(parse_int(t, line_no));
      }
      next = 2;
    } else {
      fail("unknown directive '" + std::string(verb) + "'");
    }
    if (next < toks.size()) {
      if (step.kind == ScriptStep::Kind::stabilize || step.kind == ScriptStep::Kind::check)
        fail("unexpected trailing token");
      step.repeat = parse_repeat(toks[next], line_no);
      ++next;
    }
    if (next != toks.size())
      fail("unexpected trailing token");
    script.steps.push_back(std::move(step));
  }
  return script;
}

FiringScript& FiringScript::fire(std::vector<Vertex> vs, std::int64_t repeat)
{
  steps.push_back({ScriptStep::Kind::fire, std::move(vs), repeat, {}, 0});
  return *this;
}

FiringScript& FiringScript::backfire(std::vector<Vertex> vs, std::int64_t repeat)
{
  steps.push_back({ScriptStep::Kind::backfire, std::move(vs), repeat, {}, 0});
  return *this;
}

FiringScript& FiringScript::fire_sink(std::int64_t repeat)
{
  steps.push_back({ScriptStep::Kind::fire_sink, {}, repeat, {}, 0});
  return *this;
}

FiringScript& FiringScript::backfire_sink(std::int64_t repeat)
{
  steps.push_back({ScriptStep::Kind::backfire_sink, {}, repeat, {}, 0});
  return *this;
}

FiringScript& FiringScript::stabilize()
{
  steps.push_back({ScriptStep::Kind::stabilize, {}, 1, {}, 0});
  return *this;
}

FiringScript& FiringScript::expect(const ChipConfig& c)
{
  ScriptStep step{ScriptStep::Kind::check, {}, 1, {}, 0};
  for (Eigen::Index i = 0; i < c.size(); ++i)
    step.expected.emplace_back(c[i]);
  steps.push_back(std::move(step));
  return *this;
}

std::string format_config(const ChipConfig& c)
{
  std::ostringstream out;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    out << (i ? "," : "") << c[i];
  return out.str();
}

ScriptAssertionError::ScriptAssertionError(int step, int line, ChipConfig expected, ChipConfig actual)
  : ScriptError(step, line,
                "step " + std::to_string(step) + (line > 0 ? " (line " + std::to_string(line) + ")" : "") +
                  ": expected " + format_config(expected) + ", got " + format_config(actual))
  , expected_(std::move(expected))
  , actual_(std::move(actual))
{
}

ScriptRun run_script(const Sandpile& sp, const ChipConfig& start, const FiringScript& script)
{
  const int n = sp.graph().order();
  if (script.sink && *script.sink != sp.sink())
    throw ScriptError(-1, 0, "script sink " + std::to_string(*script.sink) + " differs from sandpile sink " +
                               std::to_string(sp.sink()));
  ScriptRun run;
  if (script.start) {
    const auto& v = *script.start;
    ChipConfig c(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      c[static_cast<Eigen::Index>(i)] = v[i];
    if (c.size() == n)
      run.final = sp.restrict(c);
    else if (c.size() == sp.dim())
      run.final = c;
    else
      throw ScriptError(-1, 0, "start configuration has the wrong length");
  } else {
    run.final = start;
  }
  if (run.final.size() != sp.dim())
    throw ScriptError(-1, 0, "start configuration has the wrong length");
  run.odometer.assign(n, 0);

  for (std::size_t k = 0; k < script.steps.size(); ++k) {
    const ScriptStep& step = script.steps[k];
    const int idx = static_cast<int>(k);
    switch (step.kind) {
    case ScriptStep::Kind::fire:
    case ScriptStep::Kind::backfire: {
      const std::int64_t sign = step.kind == ScriptStep::Kind::fire ? 1 : -1;
      for (Vertex v : step.vertices) {
        if (v < 0 || v >= n)
          throw ScriptError(idx, step.line, "step " + std::to_string(idx) + ": vertex " + std::to_string(v) + " out of range");
        sp.fire(run.final, v, sign * step.repeat);
        run.odometer[v] += sign * step.repeat;
      }
      break;
    }
    case ScriptStep::Kind::fire_sink:
      sp.fire_sink(run.final, step.repeat);
      run.odometer[sp.sink()] += step.repeat;
      break;
    case ScriptStep::Kind::backfire_sink:
      sp.backfire_sink(run.final, step.repeat);
      run.odometer[sp.sink()] -= step.repeat;
      break;
    case ScriptStep::Kind::stabilize: {
      if (!sp.is_nonnegative(run.final))
        throw ScriptError(idx, step.line, "step " + std::to_string(idx) + ": cannot stabilize negative chips");
      const Stabilization s = sp.stabilize(run.final);
      for (int i = 0; i < sp.dim(); ++i)
        run.odometer[sp.vertex_at(i)] += s.odometer[i];
      run.final = s.config;
      break;
    }
    case ScriptStep::Kind::check: {
      if (static_cast<int>(step.expected.size()) != sp.dim())
        throw ScriptError(idx, step.line, "step " + std::to_string(idx) + ": assertion has the wrong length");
      ChipConfig expected = run.final;
      bool ok = true;
      for (int i = 0; i < sp.dim(); ++i) {
        if (step.expected[i]) {
          expected[i] = *step.expected[i];
          ok = ok && expected[i] == run.final[i];
        }
      }
      if (!ok)
        throw ScriptAssertionError(idx, step.line, expected, run.final);
      break;
    }
    }
    ++run.steps;
  }
  return run;
}

} // namespace sandpile
