#pragma once

#include <string>
#include <vector>

#include "delone/exact.hpp"
#include "delone/pointset.hpp"
#include "delone/subst.hpp"

namespace delone {

/// Per-prototile point sets in the prototile frame (y_i at the origin).
struct Decoration {
  std::vector<std::vector<Gaussian>> points;  // Phi({S_i})
  Gaussian D;                                 // inscribed-ball bound at y_i
  Gaussian scale;                             // D / 2m
  double radius = 0.0;                        // uniform discreteness radius
  std::vector<bool> marked;                   // chirality marker added
  double cluster_threshold = 0.0;             // separates tiles when clustering
};

Decoration build_decoration(const SubstitutionRule& rule);

/// Union of g.Phi({S_j}) over the packing (unsorted, tile by tile).
std::vector<Gaussian> decorate_points(const Decoration& dec, const std::vector<Tile>& packing);
PointSetWindow decorate(const Decoration& dec, const std::vector<Tile>& packing);

/// Recovers the packing (tiles in canonical form, sorted). Throws
/// std::domain_error naming the first cluster that does not decode.
std::vector<Tile> undecorate(const SubstitutionRule& rule, const Decoration& dec, const PointSetWindow& p);

/// Sorted canonical form, for comparing packings.
std::vector<Tile> canonical_packing(const SubstitutionRule& rule, std::vector<Tile> packing);

/// Leaves of sigma^level({S_0}) translated by `offset` whose support may meet
/// `region`; subtrees far from it are never expanded.
std::vector<Tile> tiles_near(const SubstitutionRule& rule, int level, const Gaussian& offset, const Box& region);
/// Gaussian-integer offset that brings a deep interior point of the level-L
/// supertile to the origin.
Gaussian supertile_offset(const SubstitutionRule& rule, int level);

/// Decorated level-L supertile recentred by supertile_offset, clipped to window.
PointSetWindow decorated_tiling(const std::string& rule, int level, bool exact, const Box& window);

}  // namespace delone
