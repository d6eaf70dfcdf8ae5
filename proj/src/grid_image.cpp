#include "sandpile/grid_image.hpp"

#include "sandpile/identity.hpp"

#include <fstream>
#include <stdexcept>

namespace sandpile {

ChipConfig grid_identity(int n)
{
  if (n < 1 || n > kGridImageMaxSide)
    throw std::invalid_argument("grid side must be between 1 and " + std::to_string(kGridImageMaxSide));
  const Sandpile sp(grid_graph(n, n, true), n * n);
  const ChipConfig e = sp.recurrent_identity();
  if (!sp.is_recurrent(e))
    throw CrossCheckFault("grid identity is not recurrent");
  if (sp.add(e, e) != e)
    throw CrossCheckFault("grid identity is not idempotent");
  return e;
}

std::string grid_ppm(int n, const ChipConfig& cells, int scale)
{
  if (cells.size() != static_cast<Eigen::Index>(n) * n)
    throw std::invalid_argument("cell count does not match the grid");
  if (scale < 1)
    throw std::invalid_argument("scale must be positive");
  const int side = n * scale;
  std::string out = "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(side) * side * 3);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const std::int64_t v = cells[(y / scale) * n + x / scale];
      if (v < 0 || v > 3)
        throw std::invalid_argument("cell value outside 0..3");
      for (std::uint8_t c : kGridPalette[v])
        out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

ChipConfig grid_identity_image(int n, const std::string& path, int scale)
{
  const ChipConfig e = grid_identity(n);
  const std::string bytes = grid_ppm(n, e, scale);
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open " + path + " for writing");
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file)
    throw std::runtime_error("write to " + path + " failed");
  return e;
}

} // namespace sandpile
