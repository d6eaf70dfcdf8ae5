#pragma once

#include "sandpile/graph.hpp"

#include <string>
#include <string_view>

namespace sandpile {

/**
 * Graph mini-language used on the command line.
 *
 *   spec    := family | combine '(' spec ',' spec ')' | 'leaf(' spec ',' int ')'
 *   family  := 'path:' int | 'cycle:' int | 'complete:' int | 'kbip:' int ',' int
 *            | 'star:' int | 'grid:' int ',' int ['!sink'] | 'dring:' int
 *            | 'petersen' | 'diamond' | 'g6:' graph6-string
 *   combine := 'sp' | 'cp' | 'tp'          (strong, Cartesian, tensor)
 *
 * Whitespace is not significant. Errors are reported as GraphError with the
 * column of the offending character.
 */
Graph parse_graph_spec(std::string_view spec);

/// Accepts the mini-language, or a path to a graph6 (.g6) / edge-list file.
Graph load_graph(const std::string& arg);

} // namespace sandpile
