#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bmolab/errors.hpp"
#include "bmolab/rational.hpp"

namespace bmolab {

/// Dyadic grid on the unit cube: each axis split into 2^level cells.
/// The ambient cube is always [0,1]^dim; other cubes are reached through the
/// affine covariance of the J functional.
struct GridSpec {
    int dim = 1;
    int level = 0;

    GridSpec() = default;
    GridSpec(int d, int L);

    long long cells_per_axis() const { return 1LL << level; }
    long long cell_count() const;
    Rational cell_measure() const;  // 2^(-dim*level), exact

    void cell_coords(long long index, long long* out) const;
    long long cell_index(const long long* coords) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Measurable set as a union of grid cells; measure is popcount * 2^(-dL).
class CellSet {
  public:
    CellSet() = default;
    explicit CellSet(const GridSpec& spec) : spec_(spec), bits_((spec.cell_count() + 63) / 64, 0) {}

    static CellSet full(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }

    bool contains(long long cell) const { return (bits_[cell >> 6] >> (cell & 63)) & 1; }
    void insert(long long cell) { bits_[cell >> 6] |= 1ULL << (cell & 63); }
    void erase(long long cell) { bits_[cell >> 6] &= ~(1ULL << (cell & 63)); }

    long long popcount() const;
    bool empty() const { return popcount() == 0; }
    Rational measure() const { return Rational(popcount()) * spec_.cell_measure(); }

    CellSet operator&(const CellSet& o) const;
    CellSet operator|(const CellSet& o) const;
    CellSet operator-(const CellSet& o) const;  // set difference
    CellSet complement() const;

    bool intersects(const CellSet& o) const;
    bool operator==(const CellSet& o) const { return spec_ == o.spec_ && bits_ == o.bits_; }

    std::vector<long long> cells() const;

    std::string to_hex() const;
    static CellSet from_hex(const GridSpec& spec, const std::string& hex);

  private:
    void check_same_spec(const CellSet& o) const;
    void clear_padding();

    GridSpec spec_;
    std::vector<uint64_t> bits_;
};

/// Piecewise-constant function on the grid, one exact rational value per cell.
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(const GridSpec& spec, std::vector<Rational> values, bool integer_valued = false);
    static GridFunction constant(const GridSpec& spec, const Rational& c);

    const GridSpec& spec() const { return spec_; }
    const std::vector<Rational>& values() const { return values_; }
    const Rational& value(long long cell) const { return values_[cell]; }
    bool integer_valued() const { return integer_valued_; }

    GridFunction map(const std::function<Rational(const Rational&)>& fn) const;
    GridFunction operator-(const Rational& c) const;
    GridFunction operator*(const Rational& c) const;

    /// Same function, one level finer (every cell becomes 2^dim copies).
    GridFunction refine() const;

  private:
    GridSpec spec_;
    std::vector<Rational> values_;
    bool integer_valued_ = false;
};

/// Axis-aligned cube with integer corner/side at a refinement level >= the
/// grid level. side is counted in cells of the refined grid.
struct AxisCube {
    int level = 0;                    // refinement level of the coordinates
    std::vector<long long> corner;    // dim entries in [0, 2^level)
    long long side = 1;

    AxisCube() = default;
    AxisCube(int lvl, std::vector<long long> c, long long s);

    static AxisCube whole(int dim) { return AxisCube(0, std::vector<long long>(dim, 0), 1); }

    int dim() const { return static_cast<int>(corner.size()); }
    Rational measure() const;
    bool contains(const AxisCube& inner) const;
    bool is_dyadic() const;  // corner divisible by side, side a power of two
};

/// Wik's "false cube": every side equals m or 2m for the common minimum m.
struct SpecialRectangle {
    int level = 0;
    std::vector<long long> corner;
    std::vector<long long> sides;

    SpecialRectangle() = default;
    SpecialRectangle(int lvl, std::vector<long long> c, std::vector<long long> s);

    int dim() const { return static_cast<int>(corner.size()); }
    long long min_side() const;
    Rational measure() const;
};

/// Region of integration: a box at some refinement level. Cubes, dyadic
/// cubes, special rectangles and intervals all reduce to this.
struct Region {
    int level = 0;
    std::vector<long long> corner;
    std::vector<long long> sides;

    Region() = default;
    Region(const AxisCube& c) : level(c.level), corner(c.corner), sides(c.corner.size(), c.side) {}
    Region(const SpecialRectangle& r) : level(r.level), corner(r.corner), sides(r.sides) {}
    Region(int lvl, std::vector<long long> c, std::vector<long long> s)
        : level(lvl), corner(std::move(c)), sides(std::move(s)) {}

    int dim() const { return static_cast<int>(corner.size()); }
    Rational measure() const;
    bool is_cube() const;

    /// Same region expressed at a finer coordinate level.
    Region at_level(int lvl) const;

    /// Measure of the overlap with one grid cell, exact.
    Rational cell_overlap(const GridSpec& spec, long long cell) const;

    /// lambda(R intersect S) for a cell set S on the grid, exact.
    Rational intersection_measure(const CellSet& s) const;

    /// Cells of `spec` the region touches with positive measure.
    std::vector<long long> touched_cells(const GridSpec& spec) const;

    friend bool operator==(const Region&, const Region&) = default;
};

enum class CollectionKind {
    Cubes,
    DyadicCubes,
    SpecialRectangles,
    Intervals,
    ConvexBodies,  // named stub: rejected everywhere, kept for the record
};

CollectionKind parse_collection_kind(const std::string& name);
std::string to_string(CollectionKind kind);

/// One (value, weight) atom of a restricted function.
struct WeightedValue {
    Rational value;
    Rational weight;
};

/// Sorted-by-value, equal-values-merged restriction of f to a region.
/// This is the common currency of every functional below.
struct WeightedValues {
    std::vector<WeightedValue> atoms;  // strictly increasing values
    Rational total;                    // sum of weights = measure of the region

    bool empty() const { return atoms.empty(); }
    size_t size() const { return atoms.size(); }
};

WeightedValues sort_and_merge(std::vector<WeightedValue> raw);

/// Weighted value list of f on R; weights sum exactly to measure(R).
/// Throws EmptyRegion when measure(R) = 0.
WeightedValues restrict(const GridFunction& f, const Region& r);
WeightedValues restrict(const GridFunction& f, const CellSet& s);

/// All regions of the collection, deterministic order.
///  - Cubes: every axis cube at level L+refine (side desc, corner asc).
///  - DyadicCubes: the dyadic tree down to level L (refine ignored).
///  - SpecialRectangles: every false cube at level L+refine.
///  - Intervals: dim must be 1; same as Cubes.
/// `within` restricts to subregions of the given cube.
std::vector<Region> enumerate_regions(CollectionKind kind, const GridSpec& spec, int refine = 0,
                                      const std::optional<AxisCube>& within = std::nullopt);

}  // namespace bmolab
