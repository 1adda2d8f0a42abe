#pragma once
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "picwb/picture.hpp"

namespace picwb {

using Tile = std::pair<std::string, std::string>;  // (cell, its j-successor); "#" for the border

struct TileSet {
  int j = 1;
  std::set<Tile> tiles;
};
using Deltas = std::vector<TileSet>;

struct TilingSystem {
  Alphabet sigma, gamma;
  std::map<std::string, std::string> pi;
  Deltas deltas;
  int dim() const { return static_cast<int>(deltas.size()); }
};

void validate(const TilingSystem& ts);
bool is_locally_tiled(const Picture& p, const Deltas& deltas);
bool recognizes(const TilingSystem& ts, const Picture& p);
std::optional<Picture> tiling_witness(const TilingSystem& ts, const Picture& p);

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 22;
std::vector<Picture> enumerate_local_members(const Deltas& deltas, const Alphabet& gamma, int n,
                                             std::size_t cap = kDefaultEnumerationCap);

std::string tiling_to_json(const TilingSystem& ts);
TilingSystem tiling_from_json(const std::string& text);

}  // namespace picwb
