#pragma once

#include "sandpile/engine.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace sandpile {

inline constexpr int kGridImageMaxSide = 48;

/// RGB for 0, 1, 2, 3 chips: orange, red, green, blue.
inline constexpr std::array<std::array<std::uint8_t, 3>, 4> kGridPalette{{
  {255, 165, 0},
  {255, 0, 0},
  {0, 160, 0},
  {0, 0, 255},
}};

/// Recurrent identity of the n x n grid whose boundary edges go to one sink,
/// cell (r, c) at index r n + c. Throws CrossCheckFault unless the result is
/// recurrent and idempotent under sandpile addition (hence the identity).
ChipConfig grid_identity(int n);

/// Binary P6 image, each cell drawn as a scale x scale block.
std::string grid_ppm(int n, const ChipConfig& cells, int scale = 1);

/// grid_identity(n) written to path as P6. Throws std::runtime_error on I/O
/// failure, std::invalid_argument for n outside 1..kGridImageMaxSide.
ChipConfig grid_identity_image(int n, const std::string& path, int scale = 1);

} // namespace sandpile
