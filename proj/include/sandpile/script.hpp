#pragma once

#include "sandpile/engine.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sandpile {

struct ScriptStep
{
  enum class Kind
  {
    fire,
    backfire,
    fire_sink,
    backfire_sink,
    stabilize,
    check,
  };

  Kind kind = Kind::fire;
  std::vector<Vertex> vertices;
  std::int64_t repeat = 1;
  /// For `check`: one entry per non-sink vertex, nullopt for a `*` wildcard.
  std::vector<std::optional<std::int64_t>> expected;
  int line = 0;
};

/**
 * Unrestricted firing sequence with intermediate assertions.
 *
 * Text form, one directive per line ('#' starts a comment):
 *
 *   sink 0
 *   start 0,2,2,2,2,4,4,4
 *   fire v5,v6,v7 x3
 *   backfire 2
 *   firesink x2
 *   backfiresink
 *   stabilize
 *   assert 0,4,4,4,4,0,0,0
 *
 * `fire S xN` fires every vertex of S, N times. Configurations are listed
 * over the non-sink vertices in vertex order; `start` also accepts a full
 * configuration, whose sink entry is dropped.
 */
struct FiringScript
{
  std::optional<Vertex> sink;
  std::optional<std::vector<std::int64_t>> start;
  std::vector<ScriptStep> steps;

  static FiringScript parse(std::string_view text);

  FiringScript& fire(std::vector<Vertex> vs, std::int64_t repeat = 1);
  FiringScript& backfire(std::vector<Vertex> vs, std::int64_t repeat = 1);
  FiringScript& fire_sink(std::int64_t repeat = 1);
  FiringScript& backfire_sink(std::int64_t repeat = 1);
  FiringScript& stabilize();
  FiringScript& expect(const ChipConfig& c);
};

class ScriptError : public std::runtime_error
{
public:
  ScriptError(int step, int line, const std::string& what)
    : std::runtime_error(what)
    , step_(step)
    , line_(line)
  {
  }

  /// Zero-based index of the failing step.
  int step() const { return step_; }
  int line() const { return line_; }

private:
  int step_;
  int line_;
};

class ScriptAssertionError : public ScriptError
{
public:
  ScriptAssertionError(int step, int line, ChipConfig expected, ChipConfig actual);

  const ChipConfig& expected() const { return expected_; }
  const ChipConfig& actual() const { return actual_; }

private:
  ChipConfig expected_;
  ChipConfig actual_;
};

struct ScriptRun
{
  ChipConfig final;
  /// Net firings per vertex over the whole graph; the sink entry counts
  /// sink firings.
  std::vector<std::int64_t> odometer;
  int steps = 0;
};

/// The script's `start` line, when present, overrides `start`.
ScriptRun run_script(const Sandpile& sp, const ChipConfig& start, const FiringScript& script);

std::string format_config(const ChipConfig& c);

} // namespace sandpile
