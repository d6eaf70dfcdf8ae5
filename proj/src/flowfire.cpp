#include "sandpile/flowfire.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <random>
#include <optional>
#include <set>
#include <sstream>

namespace sandpile::flow {

FlowField::FlowField(int rows, int cols)
  : rows_(rows)
  , cols_(cols)
{
  if (rows < 1 || cols < 1)
    throw FlowError("window must be at least 1 x 1");
  flow_.assign(static_cast<std::size_t>(rows) * cols, 0);
  hole_.assign(flow_.size(), 0);
}

void FlowField::set(int r, int c, std::int64_t v)
{
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw FlowError("face outside the window");
  if (is_hole(index(r, c)))
    throw FlowError("hole flow is frozen");
  flow_[index(r, c)] = v;
}

void FlowField::add_hole(int r, int c, std::int64_t v)
{
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw FlowError("hole outside the window");
  flow_[index(r, c)] = v;
  hole_[index(r, c)] = 1;
}

std::vector<int> FlowField::holes() const
{
  std::vector<int> out;
  for (int i = 0; i < faces(); ++i)
    if (hole_[i])
      out.push_back(i);
  return out;
}

bool FlowField::is_guard(int idx) const
{
  const int r = row_of(idx);
  const int c = col_of(idx);
  if (is_strip())
    return c == cols_ - 1;
  return r == 0 || c == 0 || r == rows_ - 1 || c == cols_ - 1;
}

std::vector<int> FlowField::neighbors(int idx) const
{
  const int r = row_of(idx);
  const int c = col_of(idx);
  std::vector<int> out;
  if (r > 0)
    out.push_back(index(r - 1, c));
  if (c > 0)
    out.push_back(index(r, c - 1));
  if (c + 1 < cols_)
    out.push_back(index(r, c + 1));
  if (r + 1 < rows_)
    out.push_back(index(r + 1, c));
  return out;
}

std::int64_t FlowField::free_total() const
{
  std::int64_t t = 0;
  for (int i = 0; i < faces(); ++i)
    if (!hole_[i])
      t += flow_[i];
  return t;
}

int default_window(int force, int radius)
{
  return 2 * (std::abs(force) + radius) + 5;
}

int window_centre(int window)
{
  return window / 2;
}

namespace {

FlowField centred(int window, int force)
{
  if (window % 2 == 0)
    throw FlowError("window side must be odd so the hole sits at the centre");
  FlowField f(window, window);
  f.add_hole(window_centre(window), window_centre(window), force);
  return f;
}

int taxicab(int r0, int c0, int r1, int c1)
{
  return std::abs(r0 - r1) + std::abs(c0 - c1);
}

void require_fit(int window, int reach)
{
  // Faces up to distance `reach` must stay off the guard ring.
  if (window / 2 < reach + 1)
    throw WindowError("window too small for the requested support");
}

} // namespace

FlowField aztec_pyramid(int p, int window)
{
  if (window == 0)
    window = default_window(p, 0);
  require_fit(window, std::abs(p));
  FlowField f = centred(window, p);
  const int h = window_centre(window);
  const int sign = p < 0 ? -1 : 1;
  for (int r = 0; r < window; ++r)
    for (int c = 0; c < window; ++c) {
      const int d = taxicab(r, c, h, h);
      if (d > 0)
        f.set(r, c, sign * std::max(std::abs(p) - d + 1, 0));
    }
  return f;
}

FlowField pulse_config(const PulseSpec& spec, int window)
{
  if (spec.radius < 0)
    throw FlowError("radius must be nonnegative");
  if (window == 0)
    window = default_window(spec.force, spec.radius);
  require_fit(window, spec.radius);
  FlowField f = centred(window, spec.force);
  const int h = window_centre(window);
  for (int r = 0; r < window; ++r)
    for (int c = 0; c < window; ++c) {
      const int d = taxicab(r, c, h, h);
      if (d > 0 && d <= spec.radius)
        f.set(r, c, spec.force);
    }
  return f;
}

FlowField unidirectional_config(const std::vector<std::int64_t>& values, int length)
{
  std::int64_t peak = 0;
  for (auto v : values)
    peak = std::max(peak, std::abs(v));
  if (length == 0)
    length = static_cast<int>(values.size() + peak + 3);
  if (length < static_cast<int>(values.size()) + 1)
    throw WindowError("strip too short for its values");
  FlowField f(1, length);
  for (std::size_t i = 0; i < values.size(); ++i)
    f.set(0, static_cast<int>(i), values[i]);
  if (f.at(length - 1) != 0)
    throw WindowError("last strip face must start at zero");
  return f;
}

bool is_legal(const FlowField& f, const Move& m)
{
  if (m.src < 0 || m.src >= f.faces() || m.dst < 0 || m.dst >= f.faces())
    return false;
  const auto nb = f.neighbors(m.src);
  if (std::find(nb.begin(), nb.end(), m.dst) == nb.end())
    return false;
  const bool hs = f.is_hole(m.src);
  const bool hd = f.is_hole(m.dst);
  if (hs && hd)
    return false;
  if (hs)
    return f.at(m.dst) < f.at(m.src);
  if (hd)
    return f.at(m.src) > f.at(m.dst);
  return f.at(m.src) - f.at(m.dst) >= 2;
}

std::vector<Move> legal_moves(const FlowField& f)
{
  std::vector<Move> out;
  for (int a = 0; a < f.faces(); ++a) {
    if (f.is_hole(a))
      continue;
    for (int b : f.neighbors(a)) {
      if (f.is_hole(b)) {
        if (f.at(a) > f.at(b))
          out.push_back({a, b});
        else if (f.at(a) < f.at(b))
          out.push_back({b, a});
      } else if (f.at(a) - f.at(b) >= 2) {
        out.push_back({a, b});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void apply_move_in_place(FlowField& f, const Move& m)
{
  if (!is_legal(f, m))
    throw FlowError("illegal move " + std::to_string(m.src) + " -> " + std::to_string(m.dst));
  if (!f.is_hole(m.src))
    f.set(f.row_of(m.src), f.col_of(m.src), f.at(m.src) - 1);
  if (!f.is_hole(m.dst))
    f.set(f.row_of(m.dst), f.col_of(m.dst), f.at(m.dst) + 1);
  for (int idx : {m.src, m.dst})
    if (!f.is_hole(idx) && f.is_guard(idx) && f.at(idx) != 0)
      throw WindowError("flow reached the window boundary; enlarge the window");
}

FlowField apply_move(const FlowField& f, const Move& m)
{
  FlowField out = f;
  apply_move_in_place(out, m);
  return out;
}

bool is_stable(const FlowField& f)
{
  return legal_moves(f).empty();
}

StabilizeOutcome stabilize_policy(const FlowField& f, const Policy& policy, std::int64_t step_limit)
{
  StabilizeOutcome out{f, false, 0};
  std::mt19937_64 rng(policy.seed);
  while (out.steps < step_limit) {
    const auto moves = legal_moves(out.field);
    if (moves.empty()) {
      out.terminated = true;
      return out;
    }
    std::size_t pick = 0;
    if (policy.kind == Policy::Kind::random)
      pick = std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng);
    apply_move_in_place(out.field, moves[pick]);
    ++out.steps;
  }
  out.terminated = is_stable(out.field);
  return out;
}

std::vector<std::int64_t> unidirectional_predicted(std::int64_t f, std::int64_t n)
{
  if (f < 0 || n < 0)
    throw std::invalid_argument("unidirectional prediction needs f >= 0 and n >= 0");
  std::vector<std::int64_t> out;
  const std::int64_t mass = f * n;
  const std::int64_t stair = f * (f - 1) / 2;
  auto staircase = [&](std::int64_t top, std::int64_t dup) {
    for (std::int64_t v = top; v >= 1; --v) {
      out.push_back(v);
      if (v == dup)
        out.push_back(v);
    }
  };
  if (f == 0 || n == 0) {
    out.push_back(0);
    return out;
  }
  if (mass >= stair) {
    const std::int64_t rest = mass - stair;
    out.assign(static_cast<std::size_t>(rest / f), f);
    staircase(f - 1, rest % f);
  } else {
    std::int64_t h = 0;
    while ((h + 1) * (h + 2) / 2 <= mass)
      ++h;
    staircase(h, mass - h * (h + 1) / 2);
  }
  out.push_back(0);
  return out;
}

std::vector<std::int64_t> unidirectional_predicted(const std::vector<std::int64_t>& values)
{
  std::size_t n = 0;
  while (n < values.size() && values[n] != 0)
    ++n;
  for (std::size_t i = n; i < values.size(); ++i)
    if (values[i] != 0)
      throw std::invalid_argument("values must be a constant block followed by zeros");
  const std::int64_t f = n ? values[0] : 0;
  for (std::size_t i = 0; i < n; ++i)
    if (values[i] != f)
      throw std::invalid_argument("values must be a constant block followed by zeros");
  return unidirectional_predicted(f, static_cast<std::int64_t>(n));
}

std::vector<std::int64_t> strip_profile(const FlowField& f)
{
  int last = -1;
  for (int c = 0; c < f.cols(); ++c)
    if (f.at(0, c) != 0)
      last = c;
  std::vector<std::int64_t> out;
  for (int c = 0; c <= last; ++c)
    out.push_back(f.at(0, c));
  out.push_back(0);
  return out;
}

namespace {

/// Breadth-first explorer over bit-packed states. Only faces that are neither
/// holes nor guards are stored; every move keeps flows within the initial
/// [min, max] range, which fixes the field width.
class Explorer
{
public:
  explicit Explorer(const FlowField& f)
    : proto_(f)
  {
    const int n = f.faces();
    slot_of_.assign(n, -1);
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    offsets_.push_back(0);
    for (int a = 0; a < n; ++a) {
      for (int b : f.neighbors(a))
        nbr_.push_back(b);
      offsets_.push_back(static_cast<int>(nbr_.size()));
      hole_.push_back(f.is_hole(a));
      guard_.push_back(!f.is_hole(a) && f.is_guard(a));
      lo = std::min(lo, f.at(a));
      hi = std::max(hi, f.at(a));
      if (guard_[a] && f.at(a) != 0)
        throw WindowError("initial flow touches the window boundary");
      if (!hole_[a] && !guard_[a]) {
        slot_of_[a] = static_cast<int>(face_of_.size());
        face_of_.push_back(a);
      }
    }
    if (hi - lo > 255)
      throw FlowError("flow values outside the explorable range");
    lo_ = lo;
    bits_ = 1;
    while ((std::int64_t{1} << bits_) <= hi - lo)
      ++bits_;
    per_word_ = 64 / bits_;
    words_ = std::max<std::size_t>(1, (face_of_.size() + per_word_ - 1) / per_word_);
    mask_ = (std::uint64_t{1} << bits_) - 1;
    cur_.assign(n, 0);
    for (int a = 0; a < n; ++a)
      if (hole_[a])
        cur_[a] = static_cast<int>(f.at(a));
  }

  std::size_t words() const { return words_; }

  void encode(const FlowField& f, std::uint64_t* out) const
  {
    std::fill(out, out + words_, 0);
    for (std::size_t k = 0; k < face_of_.size(); ++k)
      put(out, k, static_cast<int>(f.at(face_of_[k])));
  }

  FlowField decode(const std::uint64_t* key) const
  {
    FlowField f = proto_;
    for (std::size_t k = 0; k < face_of_.size(); ++k) {
      const int a = face_of_[k];
      f.set(f.row_of(a), f.col_of(a), get(key, k));
    }
    return f;
  }

  /// Calls emit(next) for every successor key. Returns the number of enabled
  /// moves in the state.
  template<typename Emit>
  int successors(const std::uint64_t* key, Emit&& emit) const
  {
    for (std::size_t w = 0, k = 0; w < words_; ++w) {
      std::uint64_t word = key[w];
      for (std::size_t j = 0; j < per_word_ && k < face_of_.size(); ++j, ++k, word >>= bits_)
        cur_[face_of_[k]] = static_cast<int>(word & mask_) + static_cast<int>(lo_);
    }
    moves_.clear();
    for (const int a : face_of_) {
      const int va = cur_[a];
      for (int k = offsets_[a]; k < offsets_[a + 1]; ++k) {
        const int b = nbr_[k];
        if (hole_[b]) {
          if (va > cur_[b])
            moves_.push_back({a, b});
          else if (va < cur_[b])
            moves_.push_back({b, a});
        } else if (va - cur_[b] >= 2) {
          moves_.push_back({a, b});
        } else if (guard_[b] && cur_[b] - va >= 2) {
          moves_.push_back({b, a});
        }
      }
    }
    const int count = static_cast<int>(moves_.size());
    if (count == 0)
      return 0;

    next_.resize(words_);
    auto bump = [&](int face, int delta) {
      if (hole_[face])
        return;
      if (guard_[face])
        throw WindowError("flow reached the window boundary; enlarge the window");
      const auto k = static_cast<std::size_t>(slot_of_[face]);
      put(next_.data(), k, cur_[face] + delta);
    };
    for (std::size_t k = 0; k < moves_.size(); ++k) {
      std::copy(key, key + words_, next_.begin());
      bump(moves_[k].src, -1);
      bump(moves_[k].dst, +1);
      emit(next_.data());
    }
    return count;
  }

private:
  int get(const std::uint64_t* key, std::size_t k) const
  {
    const std::size_t w = k / per_word_;
    const unsigned sh = static_cast<unsigned>((k % per_word_) * bits_);
    return static_cast<int>((key[w] >> sh) & mask_) + static_cast<int>(lo_);
  }

  void put(std::uint64_t* key, std::size_t k, int v) const
  {
    const std::size_t w = k / per_word_;
    const unsigned sh = static_cast<unsigned>((k % per_word_) * bits_);
    key[w] = (key[w] & ~(mask_ << sh)) | (static_cast<std::uint64_t>(v - lo_) << sh);
  }

  FlowField proto_;
  std::vector<int> offsets_;
  std::vector<int> nbr_;
  std::vector<char> hole_;
  std::vector<char> guard_;
  std::vector<int> slot_of_;
  std::vector<int> face_of_;
  std::int64_t lo_ = 0;
  int bits_ = 1;
  std::size_t per_word_ = 64;
  std::size_t words_ = 1;
  std::uint64_t mask_ = 1;
  mutable std::vector<int> cur_;
  mutable std::vector<Move> moves_;
  mutable std::vector<std::uint64_t> next_;
};

/// Keys stored back to back in one arena, indexed by an open-addressing table
/// whose slots hold a hash tag and the arena position.
class StateSet
{
public:
  explicit StateSet(std::size_t words)
    : words_(words)
  {
    slots_.assign(std::size_t{1} << 16, 0);
  }

  std::size_t size() const { return count_; }
  const std::uint64_t* key(std::size_t i) const { return arena_.data() + i * words_; }

  bool contains(const std::uint64_t* k) const { return slots_[probe(k, hash(k))] != 0; }

  /// Inserts k; true if it was new.
  bool insert(const std::uint64_t* k)
  {
    const std::uint64_t h = hash(k);
    const std::size_t p = probe(k, h);
    if (slots_[p] != 0)
      return false;
    arena_.insert(arena_.end(), k, k + words_);
    ++count_;
    slots_[p] = tag(h) | count_;
    if (count_ * 10 > slots_.size() * 7)
      grow();
    return true;
  }

private:
  static std::uint64_t tag(std::uint64_t h) { return h & 0xFFFFFFFF00000000ull; }

  std::uint64_t hash(const std::uint64_t* k) const
  {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::size_t w = 0; w < words_; ++w) {
      h ^= k[w] + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
    }
    return h ^ (h >> 31);
  }

  std::size_t probe(const std::uint64_t* k, std::uint64_t h) const
  {
    const std::size_t mask = slots_.size() - 1;
    std::size_t p = h & mask;
    while (slots_[p] != 0) {
      if (tag(slots_[p]) == tag(h) && std::equal(k, k + words_, key((slots_[p] & 0xFFFFFFFFull) - 1)))
        break;
      p = (p + 1) & mask;
    }
    return p;
  }

  void grow()
  {
    std::vector<std::uint64_t> old(slots_.size() * 2, 0);
    old.swap(slots_);
    const std::size_t mask = slots_.size() - 1;
    for (std::uint64_t s : old) {
      if (s == 0)
        continue;
      std::size_t p = hash(key((s & 0xFFFFFFFFull) - 1)) & mask;
      while (slots_[p] != 0)
        p = (p + 1) & mask;
      slots_[p] = s;
    }
  }

  std::size_t words_;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> arena_;
  std::vector<std::uint64_t> slots_;
};

} // namespace

ExploreResult explore_terminals(const FlowField& f, const ExploreLimits& limits)
{
  if (limits.max_states > std::numeric_limits<std::uint32_t>::max() - 1)
    throw FlowError("state limit too large");
  const Explorer ex(f);
  StateSet seen(ex.words());
  {
    std::vector<std::uint64_t> start(ex.words());
    ex.encode(f, start.data());
    seen.insert(start.data());
  }
  std::vector<std::size_t> terminals;
  bool truncated = false;
  std::size_t head = 0;
  std::vector<std::uint64_t> cur(ex.words());
  for (; head < seen.size(); ++head) {
    // The arena may reallocate during emission.
    std::copy(seen.key(head), seen.key(head) + ex.words(), cur.begin());
    const int moves = ex.successors(cur.data(), [&](const std::uint64_t* next) {
      if (seen.size() >= limits.max_states) {
        if (!seen.contains(next))
          truncated = true;
        return;
      }
      seen.insert(next);
    });
    if (moves == 0) {
      terminals.push_back(head);
      if (limits.stop_after_terminals && terminals.size() >= limits.stop_after_terminals) {
        truncated = truncated || head + 1 < seen.size();
        break;
      }
    }
  }
  ExploreResult out;
  out.exhaustive = !truncated;
  out.states = seen.size();
  for (std::size_t t : terminals)
    out.terminals.push_back(ex.decode(seen.key(t)));
  std::sort(out.terminals.begin(), out.terminals.end(),
            [](const FlowField& a, const FlowField& b) { return a.values() < b.values(); });
  return out;
}

std::string to_string(Confluence c)
{
  switch (c) {
  case Confluence::confluent:
    return "confluent";
  case Confluence::not_confluent:
    return "not_confluent";
  case Confluence::inconclusive:
    return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Evidence e)
{
  switch (e) {
  case Evidence::none:
    return "none";
  case Evidence::random_trajectories:
    return "random_trajectories";
  case Evidence::box_certificate:
    return "box_certificate";
  case Evidence::exhaustive_search:
    return "exhaustive_search";
  }
  return "none";
}

namespace {

std::optional<std::int64_t> common_hole_flow(const FlowField& f)
{
  std::optional<std::int64_t> h;
  for (int i : f.holes()) {
    if (h && *h != f.at(i))
      return std::nullopt;
    h = f.at(i);
  }
  return h;
}

} // namespace

FlowBox aztec_box(const FlowField& f)
{
  const auto h = common_hole_flow(f);
  if (!h)
    throw FlowError("the box needs at least one hole and a common hole flow");
  const std::vector<int> holes = f.holes();
  const std::int64_t mag = std::abs(*h);
  FlowBox box;
  box.lower.assign(f.faces(), 0);
  box.upper.assign(f.faces(), 0);
  for (int i = 0; i < f.faces(); ++i) {
    int d = std::numeric_limits<int>::max();
    for (int q : holes)
      d = std::min(d, std::abs(f.row_of(i) - f.row_of(q)) + std::abs(f.col_of(i) - f.col_of(q)));
    const std::int64_t top = f.is_hole(i) ? mag : std::max<std::int64_t>(mag - d + 1, 0);
    if (*h >= 0)
      box.upper[i] = top;
    else
      box.lower[i] = -top;
    if (f.is_hole(i))
      box.lower[i] = box.upper[i] = *h;
  }
  return box;
}

BoxCertificate certify_by_box(const FlowField& f)
{
  if (!common_hole_flow(f)) {
    BoxCertificate out;
    out.reason = f.holes().empty() ? "no hole" : "holes carry different flows";
    return out;
  }
  return certify_by_box(f, aztec_box(f));
}

BoxCertificate certify_by_box(const FlowField& f, const FlowBox& box)
{
  BoxCertificate out;
  const int n = f.faces();
  if (static_cast<int>(box.lower.size()) != n || static_cast<int>(box.upper.size()) != n)
    throw FlowError("box size differs from the window");
  const auto h = common_hole_flow(f);
  if (!h) {
    out.reason = f.holes().empty() ? "no hole" : "holes carry different flows";
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (box.lower[i] > box.upper[i]) {
      out.reason = "empty box";
      return out;
    }
    if (f.at(i) < box.lower[i] || f.at(i) > box.upper[i]) {
      out.reason = "start lies outside the box";
      return out;
    }
    if (f.is_hole(i) && (box.lower[i] != f.at(i) || box.upper[i] != f.at(i))) {
      out.reason = "box does not pin a hole";
      return out;
    }
    if (!f.is_hole(i) && f.is_guard(i) && (box.lower[i] != 0 || box.upper[i] != 0)) {
      out.reason = "box does not pin a guard face to 0";
      return out;
    }
  }

  // Closure: a move changes two faces (or one next to a hole), so it suffices
  // to check each edge over every value pair the box allows.
  for (int a = 0; a < n; ++a) {
    if (f.is_hole(a))
      continue;
    for (int b : f.neighbors(a)) {
      if (f.is_hole(b)) {
        const std::int64_t hv = f.at(b);
        for (std::int64_t va = box.lower[a]; va <= box.upper[a]; ++va)
          if ((va < hv && va + 1 > box.upper[a]) || (va > hv && va - 1 < box.lower[a])) {
            out.reason = "a reservoir move leaves the box";
            return out;
          }
        continue;
      }
      for (std::int64_t va = box.lower[a]; va <= box.upper[a]; ++va)
        for (std::int64_t vb = box.lower[b]; vb <= box.upper[b] && vb <= va - 2; ++vb)
          if (va - 1 < box.lower[a] || vb + 1 > box.upper[b]) {
            out.reason = "an exchange move leaves the box";
            return out;
          }
    }
  }

  // Stable fields in the box.
  std::vector<std::int64_t> lo = box.lower;
  std::vector<std::int64_t> hi = box.upper;
  for (int a = 0; a < n; ++a) {
    if (f.is_hole(a))
      continue;
    for (int b : f.neighbors(a))
      if (f.is_hole(b)) {
        lo[a] = std::max(lo[a], f.at(b));
        hi[a] = std::min(hi[a], f.at(b));
      }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a) {
      if (f.is_hole(a))
        continue;
      if (lo[a] > hi[a]) {
        out.reason = "no stable field in the box";
        return out;
      }
      for (int b : f.neighbors(a)) {
        if (f.is_hole(b))
          continue;
        if (lo[b] - 1 > lo[a]) {
          lo[a] = lo[b] - 1;
          changed = true;
        }
        if (hi[b] + 1 < hi[a]) {
          hi[a] = hi[b] + 1;
          changed = true;
        }
      }
    }
  }
  FlowField end = f;
  for (int a = 0; a < n; ++a) {
    if (f.is_hole(a))
      continue;
    if (lo[a] > hi[a]) {
      out.reason = "no stable field in the box";
      return out;
    }
    if (lo[a] != hi[a]) {
      out.reason = "the box may hold several stable fields";
      return out;
    }
    end.set(end.row_of(a), end.col_of(a), lo[a]);
  }
  if (!is_stable(end)) {
    out.reason = "the pinned field is not stable";
    return out;
  }
  out.holds = true;
  out.terminal = std::move(end);
  return out;
}

ConfluenceResult check_global_confluence(const FlowField& f, const ExploreLimits& limits)
{
  ConfluenceResult out;
  std::vector<FlowField> found;
  for (std::uint64_t seed = 1; seed <= 32; ++seed) {
    const StabilizeOutcome s = stabilize_policy(f, {Policy::Kind::random, seed}, 1'000'000);
    if (!s.terminated)
      continue;
    if (std::find(found.begin(), found.end(), s.field) == found.end())
      found.push_back(s.field);
    if (found.size() >= 2) {
      out.verdict = Confluence::not_confluent;
      out.evidence = Evidence::random_trajectories;
      out.terminals = std::move(found);
      return out;
    }
  }
  if (limits.allow_certificate) {
    BoxCertificate cert = certify_by_box(f);
    if (cert.holds) {
      if (!found.empty() && !(found.front() == *cert.terminal))
        throw std::logic_error("box certificate contradicts a random trajectory");
      out.verdict = Confluence::confluent;
      out.evidence = Evidence::box_certificate;
      out.terminals.push_back(std::move(*cert.terminal));
      return out;
    }
  }
  const ExploreResult r = explore_terminals(f, limits);
  out.states = r.states;
  out.terminals = r.terminals;
  if (r.terminals.size() >= 2) {
    out.verdict = Confluence::not_confluent;
    out.evidence = Evidence::exhaustive_search;
  } else if (r.exhaustive && r.terminals.size() == 1) {
    out.verdict = Confluence::confluent;
    out.evidence = Evidence::exhaustive_search;
  } else {
    out.verdict = Confluence::inconclusive;
  }
  return out;
}

ConfluenceResult check_global_confluence(const PulseSpec& spec, const ExploreLimits& limits)
{
  return check_global_confluence(pulse_config(spec), limits);
}

std::string format_grid(const FlowField& f, int crop)
{
  int r0 = 0, r1 = f.rows() - 1, c0 = 0, c1 = f.cols() - 1;
  if (crop > 0) {
    const auto hs = f.holes();
    if (hs.empty())
      throw FlowError("crop needs a hole to centre on");
    const int hr = f.row_of(hs.front());
    const int hc = f.col_of(hs.front());
    r0 = std::max(0, hr - crop);
    r1 = std::min(f.rows() - 1, hr + crop);
    c0 = std::max(0, hc - crop);
    c1 = std::min(f.cols() - 1, hc + crop);
  }
  std::ostringstream out;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (c > c0)
        out << ' ';
      if (f.is_hole(f.index(r, c)))
        out << '[' << f.at(r, c) << ']';
      else
        out << f.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

FlowField parse_scenario(std::string_view text)
{
  struct Cell
  {
    int r, c;
    std::int64_t v;
    bool hole;
  };
  std::vector<Cell> cells;
  int rows = -1, cols = -1;
  int next_row = 0;
  int row_width = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw FlowError("scenario line " + std::to_string(line_no) + ": " + what);
  };
  auto number = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size())
        fail("bad number '" + tok + "'");
      return static_cast<std::int64_t>(v);
    } catch (const std::logic_error&) {
      fail("bad number '" + tok + "'");
    }
    return std::int64_t{0};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;)
      toks.push_back(t);
    if (toks.empty())
      continue;
    if (toks[0] == "window") {
      if (toks.size() != 3)
        fail("usage: window R C");
      rows = static_cast<int>(number(toks[1]));
      cols = static_cast<int>(number(toks[2]));
    } else if (toks[0] == "hole" || toks[0] == "face") {
      if (toks.size() != 4)
        fail("usage: " + toks[0] + " r c v");
      cells.push_back({static_cast<int>(number(toks[1])), static_cast<int>(number(toks[2])), number(toks[3]),
                       toks[0] == "hole"});
    } else if (toks[0] == "row") {
      const int width = static_cast<int>(toks.size()) - 1;
      if (row_width >= 0 && width != row_width)
        fail("rows have different widths");
      row_width = width;
      for (int c = 0; c < width; ++c) {
        std::string t = toks[c + 1];
        bool hole = false;
        if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
          hole = true;
          t = t.substr(1, t.size() - 2);
        }
        cells.push_back({next_row, c, number(t), hole});
      }
      ++next_row;
    } else {
      fail("unknown directive '" + toks[0] + "'");
    }
  }
  if (rows < 0) {
    if (next_row == 0)
      throw FlowError("scenario gives neither a window nor rows");
    rows = next_row;
    cols = row_width;
  }
  FlowField f(rows, cols);
  for (const Cell& cell : cells) {
    if (cell.r < 0 || cell.r >= rows || cell.c < 0 || cell.c >= cols)
      throw FlowError("scenario face outside the window");
    if (cell.hole)
      f.add_hole(cell.r, cell.c, cell.v);
  }
  for (const Cell& cell : cells)
    if (!cell.hole)
      f.set(cell.r, cell.c, cell.v);
  return f;
}

} // namespace sandpile::flow
