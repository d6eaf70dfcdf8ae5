#include "sandpile/graph_io.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace sandpile {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& what)
  : std::runtime_error(what + " (byte " + std::to_string(offset) + ")")
  , kind_(kind)
  , offset_(offset)
{
}

namespace {

constexpr std::string_view kGraph6Prefix = ">>graph6<<";

} // namespace

Graph parse_graph6(std::string_view text)
{
  std::size_t base = 0;
  if (text.substr(0, kGraph6Prefix.size()) == kGraph6Prefix)
    base = kGraph6Prefix.size();
  std::size_t end = text.size();
  while (end > base && (text[end - 1] == '\n' || text[end - 1] == '\r' || text[end - 1] == ' '))
    --end;

  std::size_t pos = base;
  auto byte_at = [&](std::size_t i) -> unsigned {
    if (i >= end)
      throw ParseError(ParseError::Kind::malformed_header, i, "graph6 header truncated");
    const unsigned b = static_cast<unsigned char>(text[i]);
    if (b < 63 || b > 126)
      throw ParseError(ParseError::Kind::invalid_byte, i, "graph6 byte outside 63..126");
    return b - 63;
  };

  if (pos >= end)
    throw ParseError(ParseError::Kind::malformed_header, pos, "empty graph6 string");
  std::uint64_t n = 0;
  const unsigned first = byte_at(pos);
  if (first < 63) {
    n = first;
    pos += 1;
  } else {
    const unsigned second = byte_at(pos + 1);
    const int groups = second == 63 ? 6 : 3;
    const std::size_t start = pos + (second == 63 ? 2 : 1);
    for (int k = 0; k < groups; ++k) {
      n = (n << 6) | byte_at(start + k);
    }
    pos = start + groups;
    if (n < 63)
      throw ParseError(ParseError::Kind::malformed_header, base, "graph6 long header used for small n");
  }
  if (n < 1 || n > 100000)
    throw ParseError(ParseError::Kind::malformed_header, base, "graph6 order out of supported range");

  const std::uint64_t bits = n * (n - 1) / 2;
  const std::uint64_t bytes = (bits + 5) / 6;
  if (end - pos != bytes)
    throw ParseError(ParseError::Kind::length_mismatch, pos,
                     "graph6 body has " + std::to_string(end - pos) + " bytes, expected " + std::to_string(bytes));

  std::vector<Edge> edges;
  std::uint64_t k = 0;
  for (int j = 1; j < static_cast<int>(n); ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const unsigned b = byte_at(pos + k / 6);
      if ((b >> (5 - k % 6)) & 1u)
        edges.push_back({i, j});
    }
  }
  for (; k < bytes * 6; ++k) {
    const unsigned b = byte_at(pos + k / 6);
    if ((b >> (5 - k % 6)) & 1u)
      throw ParseError(ParseError::Kind::invalid_byte, pos + k / 6, "graph6 padding bits must be zero");
  }
  return Graph(static_cast<int>(n), std::move(edges));
}

std::string emit_graph6(const Graph& g)
{
  if (!g.unit_weights())
    throw GraphError("graph6 cannot encode weighted graphs");
  const std::uint64_t n = g.order();
  std::string out;
  if (n < 63) {
    out.push_back(static_cast<char>(63 + n));
  } else if (n < 258048) {
    out.push_back(126);
    for (int shift = 12; shift >= 0; shift -= 6)
      out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
  } else {
    out.push_back(126);
    out.push_back(126);
    for (int shift = 30; shift >= 0; shift -= 6)
      out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
  }
  unsigned acc = 0;
  int count = 0;
  for (int j = 1; j < g.order(); ++j) {
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, j) ? 1u : 0u);
      if (++count == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = 0;
        count = 0;
      }
    }
  }
  if (count > 0)
    out.push_back(static_cast<char>(63 + (acc << (6 - count))));
  return out;
}

Graph parse_edgelist(std::string_view text)
{
  std::size_t pos = 0;
  int n = -1;
  std::vector<Edge> edges;

  auto parse_fields = [](std::string_view line, std::size_t line_offset, std::vector<std::int64_t>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
        ++i;
      if (i >= line.size())
        break;
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
      if (ec != std::errc())
        throw ParseError(ParseError::Kind::malformed_line, line_offset + i, "expected an integer");
      i = static_cast<std::size_t>(ptr - line.data());
      if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
        throw ParseError(ParseError::Kind::malformed_line, line_offset + i, "unexpected character");
      out.push_back(value);
    }
  };

  std::vector<std::int64_t> fields;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
      eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    const std::size_t line_offset = pos;
    pos = eol + 1;

    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#')
      continue;
    parse_fields(line, line_offset, fields);
    if (n < 0) {
      if (fields.size() != 1 || fields[0] < 1 || fields[0] > 1000000)
        throw ParseError(ParseError::Kind::malformed_header, line_offset, "first line must be the vertex count");
      n = static_cast<int>(fields[0]);
      continue;
    }
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(ParseError::Kind::malformed_line, line_offset, "edge line must be 'u v [w]'");
    for (int k = 0; k < 2; ++k)
      if (fields[k] < 0 || fields[k] >= n)
        throw ParseError(ParseError::Kind::vertex_out_of_range, line_offset, "vertex " + std::to_string(fields[k]) + " out of range");
    const std::int64_t w = fields.size() == 3 ? fields[2] : 1;
    if (w < 1)
      throw ParseError(ParseError::Kind::malformed_line, line_offset, "edge weight must be positive");
    if (fields[0] == fields[1])
      throw ParseError(ParseError::Kind::malformed_line, line_offset, "loops are not allowed");
    edges.push_back({static_cast<Vertex>(fields[0]), static_cast<Vertex>(fields[1]), w});
  }
  if (n < 0)
    throw ParseError(ParseError::Kind::malformed_header, 0, "missing vertex count line");
  try {
    return Graph(n, std::move(edges));
  } catch (const GraphError& e) {
    throw ParseError(ParseError::Kind::malformed_line, text.size(), e.what());
  }
}

std::string emit_edgelist(const Graph& g)
{
  std::ostringstream out;
  out << g.order() << "\n";
  for (const auto& e : g.edges()) {
    out << e.u << " " << e.v;
    if (e.weight != 1)
      out << " " << e.weight;
    out << "\n";
  }
  return out.str();
}

} // namespace sandpile
