#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delone/pointset.hpp"
#include "delone/subst.hpp"

namespace delone {

struct RenderStyle {
  double width = 800.0;            // pixels
  double stroke = 0.0;             // world units, 0 means auto
  double point_radius = 0.0;       // 0 means half the discreteness radius
  std::optional<Box> view;         // default: bounding box of the scene
  int orientation_buckets = 8;
};

/// Prototile type picks the hue, the orientation bucket the lightness.
int orientation_bucket(const ExactMotion& g, int buckets);

/// One <polygon> per tile.
std::string render_tiles_svg(const SubstitutionRule& rule, const std::vector<Tile>& tiles, const RenderStyle& style = {});
/// Circles in 2D, ticks on a number line in 1D.
std::string render_points_svg(const PointSetWindow& p, const RenderStyle& style = {});

}  // namespace delone
