#pragma once

#include "sandpile/graph.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace sandpile {

class ParseError : public std::runtime_error
{
public:
  enum class Kind
  {
    malformed_header,
    invalid_byte,
    length_mismatch,
    vertex_out_of_range,
    malformed_line,
  };

  ParseError(Kind kind, std::size_t offset, const std::string& what);

  Kind kind() const { return kind_; }
  /// Byte offset into the input where the problem was detected.
  std::size_t offset() const { return offset_; }

private:
  Kind kind_;
  std::size_t offset_;
};

/// graph6: N(n) followed by the upper triangle in column order, six bits per
/// byte, each byte offset by 63. An optional ">>graph6<<" prefix is skipped.
Graph parse_graph6(std::string_view text);
std::string emit_graph6(const Graph& g);

/// Edge list: first line "n", then one "u v [w]" per line. Blank lines and
/// lines starting with '#' are ignored.
Graph parse_edgelist(std::string_view text);
std::string emit_edgelist(const Graph& g);

} // namespace sandpile
