#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sandpile::flow {

class FlowError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Flow reached the outermost ring of the window.
class WindowError : public FlowError
{
public:
  using FlowError::FlowError;
};

/**
 * Integer face flows on a rows x cols window of the square lattice.
 *
 * Hole faces keep their flow forever. A one-row window is a strip whose
 * face 0 sits against a wall; its guard is the last face only. Otherwise the
 * guard is the whole outermost ring. Any move that leaves a guard face
 * nonzero throws WindowError.
 */
class FlowField
{
public:
  FlowField() = default;
  FlowField(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int faces() const { return rows_ * cols_; }
  int index(int r, int c) const { return r * cols_ + c; }
  int row_of(int idx) const { return idx / cols_; }
  int col_of(int idx) const { return idx % cols_; }

  std::int64_t at(int idx) const { return flow_[idx]; }
  std::int64_t at(int r, int c) const { return flow_[index(r, c)]; }
  void set(int r, int c, std::int64_t v);
  void add_hole(int r, int c, std::int64_t v);
  bool is_hole(int idx) const { return hole_[idx] != 0; }
  std::vector<int> holes() const;

  bool is_strip() const { return rows_ == 1; }
  bool is_guard(int idx) const;
  /// Edge-adjacent faces in increasing index order.
  std::vector<int> neighbors(int idx) const;

  const std::vector<std::int64_t>& values() const { return flow_; }
  /// Sum of flow over faces that are not holes.
  std::int64_t free_total() const;

  friend bool operator==(const FlowField& a, const FlowField& b)
  {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.flow_ == b.flow_ && a.hole_ == b.hole_;
  }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::int64_t> flow_;
  std::vector<char> hole_;
};

/**
 * One unit of flow crossing the edge between src and dst.
 *
 * Between two ordinary faces the move needs flow(src) - flow(dst) >= 2 and
 * shifts one unit. A hole acts as a reservoir: its neighbor is raised by one
 * while below the hole's flow (src is the hole) and lowered by one while above
 * it (dst is the hole); the hole's own flow never changes. Edges between two
 * holes never fire.
 */
struct Move
{
  int src = 0;
  int dst = 0;

  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};

struct PulseSpec
{
  int force = 0;
  int radius = 0;
};

/// 2(|f| + r) + 5, the default window side for a pulse.
int default_window(int force, int radius);

/// Hole at the centre with flow p; face at distance d carries
/// sign(p) * max(|p| - d + 1, 0). window = 0 picks default_window(p, 0).
FlowField aztec_pyramid(int p, int window = 0);
/// Flow f on the hole and on every face within distance r of it.
FlowField pulse_config(const PulseSpec& spec, int window = 0);
/// 1 x length strip holding `values`, then zeros. length = 0 sizes the strip
/// so that any stabilization fits.
FlowField unidirectional_config(const std::vector<std::int64_t>& values, int length = 0);

/// (row, col) of the pulse hole in a default-sized window.
int window_centre(int window);

std::vector<Move> legal_moves(const FlowField& f);
bool is_legal(const FlowField& f, const Move& m);
/// Throws FlowError for an illegal move, WindowError on a guard trip.
FlowField apply_move(const FlowField& f, const Move& m);
void apply_move_in_place(FlowField& f, const Move& m);
bool is_stable(const FlowField& f);

struct Policy
{
  enum class Kind
  {
    lowest_index,
    random,
  };
  Kind kind = Kind::lowest_index;
  std::uint64_t seed = 0;
};

struct StabilizeOutcome
{
  FlowField field;
  bool terminated = false;
  std::int64_t steps = 0;
};

StabilizeOutcome stabilize_policy(const FlowField& f, const Policy& policy, std::int64_t step_limit = 10'000'000);

/// Stabilization of f repeated n times then zeros, by the conserved-mass
/// construction: unused copies of f, then a staircase down to 0 with at most
/// one repeated level. Ends with a single 0.
std::vector<std::int64_t> unidirectional_predicted(std::int64_t f, std::int64_t n);
/// Same, taking the strip's starting values (validated to be f^n 0...).
std::vector<std::int64_t> unidirectional_predicted(const std::vector<std::int64_t>& values);
/// Strip values up to the last nonzero face, plus one 0.
std::vector<std::int64_t> strip_profile(const FlowField& f);

struct ExploreLimits
{
  std::size_t max_states = 60'000'000;
  /// Stop once this many distinct terminals are known (0 = never).
  std::size_t stop_after_terminals = 0;
  /// Let check_global_confluence settle a verdict with certify_by_box before
  /// searching.
  bool allow_certificate = true;
};

struct ExploreResult
{
  /// Distinct stable fields, ordered by their flow arrays.
  std::vector<FlowField> terminals;
  /// True when the whole reachable set was visited.
  bool exhaustive = false;
  std::size_t states = 0;
};

/// Breadth-first closure under the move relation. States are bit-packed over
/// the faces that are neither holes nor guards.
ExploreResult explore_terminals(const FlowField& f, const ExploreLimits& limits = {});

/// Per-face flow bounds, indexed like FlowField faces.
struct FlowBox
{
  std::vector<std::int64_t> lower;
  std::vector<std::int64_t> upper;
};

/// 0 <= sign(H) x <= max(|H| - d + 1, 0) with d the distance to the nearest
/// hole; holes pinned to H. Requires every hole to carry the same flow H.
FlowBox aztec_box(const FlowField& f);

struct BoxCertificate
{
  bool holds = false;
  /// The only field any run can end in, when the certificate holds.
  std::optional<FlowField> terminal;
  /// First failed check otherwise.
  std::string reason;
};

/**
 * Sufficient test for confluence. Requires all holes to share one flow H, so
 * that sum (x - H)^2 over free faces drops with every move and runs terminate.
 * Then checks that the start lies in the box, that every legal move from any
 * field in the box stays inside it (edge by edge over all value pairs, guards
 * pinned to 0), and that the stability constraints |x_a - x_b| <= 1 and
 * x = H next to a hole shrink the box to a single stable field.
 */
BoxCertificate certify_by_box(const FlowField& f, const FlowBox& box);
BoxCertificate certify_by_box(const FlowField& f);

enum class Confluence
{
  confluent,
  not_confluent,
  inconclusive,
};

std::string to_string(Confluence c);

/// How a verdict was reached.
enum class Evidence
{
  none,
  random_trajectories,
  box_certificate,
  exhaustive_search,
};

std::string to_string(Evidence e);

struct ConfluenceResult
{
  Confluence verdict = Confluence::inconclusive;
  Evidence evidence = Evidence::none;
  std::vector<FlowField> terminals;
  std::size_t states = 0;
};

/// Random trajectories first (two distinct terminals settle non-confluence),
/// then the box certificate, then exhaustive exploration.
ConfluenceResult check_global_confluence(const PulseSpec& spec, const ExploreLimits& limits = {});
ConfluenceResult check_global_confluence(const FlowField& f, const ExploreLimits& limits = {});

/// Rows of space-separated flows, holes written as [v]. With crop > 0 only the
/// (2 crop + 1)-square around the first hole is printed.
std::string format_grid(const FlowField& f, int crop = 0);

/**
 * Scenario text:
 *
 *   window R C          optional when rows are given
 *   hole r c v
 *   face r c v
 *   row 0 0 [3] 1 0     consecutive rows from the top; [v] marks a hole
 *
 * '#' starts a comment.
 */
FlowField parse_scenario(std::string_view text);

} // namespace sandpile::flow
