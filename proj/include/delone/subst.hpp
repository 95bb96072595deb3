#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "delone/exact.hpp"
#include "delone/geom.hpp"

namespace delone {

struct Prototile {
  int index = 0;
  Polygon outline;              // ccw boundary
  std::vector<Polygon> pieces;  // convex ccw pieces whose union is the support
  std::vector<ExactMotion> symmetries;  // H_i, identity first
  Gaussian y;                   // interior point fixed by H_i
};

/// The tile g.S_type.
struct Tile {
  int type = 0;
  ExactMotion g;

  friend bool operator==(const Tile& a, const Tile& b) { return a.type == b.type && a.g == b.g; }
};

/// Expansion Lambda(z) = mult * z combines lambda and r0. dissection[j]
/// lists the tiles of sigma({S_j}), whose support is Lambda(S_j).
struct SubstitutionRule {
  std::string name;
  std::vector<Prototile> prototiles;
  std::vector<std::vector<Tile>> dissection;
  Gaussian mult{1};
  std::string group;  // orientation group tag, e.g. "O(2)" or "D4"

  double lambda() const;
  /// Rotation angle of r0.
  double r0_angle() const;
};

/// "pinwheel" or "chair"; throws std::invalid_argument otherwise.
SubstitutionRule builtin_rule(const std::string& name);

/// Checks prototile symmetries and the dissection support equality; throws
/// std::domain_error describing the first failure.
void verify_rule(const SubstitutionRule& rule);

/// Lambda o g o Lambda^-1.
ExactMotion conjugate_by_expansion(const Gaussian& mult, const ExactMotion& g);
/// Placement of a prototile with g(a0) = a, g(b0) = b, g(c0) = c, if one exists.
std::optional<ExactMotion> solve_placement(const Gaussian& a0, const Gaussian& b0, const Gaussian& c0,
                                           const Gaussian& a, const Gaussian& b, const Gaussian& c);

std::vector<Polygon> tile_pieces(const SubstitutionRule& rule, const Tile& t);
/// Pieces scaled by mult^power after placement (supertile supports).
std::vector<Polygon> scaled_pieces(const SubstitutionRule& rule, const Tile& t, int power);
Gaussian tile_area2(const SubstitutionRule& rule, const Tile& t);

/// Canonical representative of t modulo the symmetries of its prototile.
Tile canonical_tile(const SubstitutionRule& rule, const Tile& t);
bool same_tile(const SubstitutionRule& rule, const Tile& a, const Tile& b);

/// sigma(C). Pairwise disjoint interiors are required (checked when verify).
std::vector<Tile> substitute(const SubstitutionRule& rule, const std::vector<Tile>& packing, bool verify = false);

/// Pairwise intersection areas all zero (exact).
bool interiors_disjoint(const std::vector<std::vector<Polygon>>& supports);
/// Union of `parts` equals union of `target`, given disjoint part interiors.
bool support_equals(const std::vector<std::vector<Polygon>>& parts, const std::vector<Polygon>& target);

/// sigma^k({S_j}) with every level kept. levels[n] lives in Lambda^n
/// coordinates; children of levels[n][i] are levels[n+1][child_begin[n][i] ..
/// child_begin[n][i+1]).
struct SupertileTree {
  int root_type = 0;
  int depth = 0;
  std::vector<std::vector<Tile>> levels;
  std::vector<std::vector<std::uint32_t>> child_begin;
  std::vector<std::vector<std::uint32_t>> parent;

  const std::vector<Tile>& leaves() const { return levels.back(); }
  /// Leaf index range under node i of level n.
  std::pair<std::size_t, std::size_t> leaf_range(int n, std::size_t i) const;
};

SupertileTree supertile(const SubstitutionRule& rule, int j, int k);

using IntMatrix = std::vector<std::vector<std::int64_t>>;
IntMatrix substitution_matrix(const SubstitutionRule& rule);
IntMatrix matrix_power(const IntMatrix& m, int p);
struct Primitivity {
  bool primitive = false;
  int power = 0;  // first positive power, 0 if none
};
Primitivity is_primitive(const IntMatrix& m);

struct FixedPointPatch {
  std::vector<Tile> tiles;   // n-th member, final coordinates
  int order = 0;             // k used
  Tile seed;                 // tile S of type j in sigma^k({S_j})
  ExactMotion g;             // S_j = g S
  Gaussian center;           // fixed point of z -> g(mult^k z)
  std::vector<double> agreement_radius;  // per member m = 0..n
  bool nested = true;        // every member contained in the next
};

/// Searches orders 1..max_order for a seed whose expansion fixes an interior
/// point of S_j. Throws std::domain_error if none is found.
FixedPointPatch fixed_point_patch(const SubstitutionRule& rule, int j, int n, int max_order = 3);

struct Partition {
  int order = 0;
  int level = 0;                    // tree level that was cut
  std::vector<std::vector<Polygon>> supports;  // leaf coordinates
  std::vector<std::pair<std::size_t, std::size_t>> leaves;  // leaf index ranges
};

Partition partition_into_supertiles(const SupertileTree& tree, const SubstitutionRule& rule, int k);
/// Cells (indices) whose closed support meets the cell's support, ascending.
std::vector<std::size_t> supertile_corona(const Partition& part, std::size_t cell);
/// Tiles of the corona (leaves of all its cells).
std::vector<Tile> corona_tiles(const SupertileTree& tree, const Partition& part, std::size_t cell);
/// Smallest distance between a cell and any cell outside its corona, over
/// all cells: every ball of that radius about a point of a cell lies in the
/// corona.
double corona_radius(const Partition& part);

enum class DtoVerdict { CertifiedIrrational, NoneFound, HeuristicIrrational };

struct DtoWitness {
  DtoVerdict verdict = DtoVerdict::NoneFound;
  int order = 0;
  Tile first;
  Tile second;
  Gaussian relative;  // unit of second relative to first
};

DtoWitness dto_witness(const SubstitutionRule& rule, int max_order);
/// Continued-fraction test on an angle (radians): true when theta/pi has no
/// convergent with denominator <= max_den within tol.
bool angle_looks_irrational(double theta, std::int64_t max_den = 10000, double tol = 1e-9);

}  // namespace delone
