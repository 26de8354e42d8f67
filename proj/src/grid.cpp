#include "bmolab/grid.hpp"

#include <algorithm>
#include <bit>

namespace bmolab {

GridSpec::GridSpec(int d, int L) : dim(d), level(L) {
    if (d < 1) throw DimMismatch("dim must be positive");
    if (L < 0) throw Error("level must be non-negative");
    if (d * L > 26) throw Error("grid too large: dim*level > 26");
}

long long GridSpec::cell_count() const { return 1LL << (dim * level); }

Rational GridSpec::cell_measure() const { return Rational::pow2(-dim * level); }

void GridSpec::cell_coords(long long index, long long* out) const {
    long long n = cells_per_axis();
    for (int a = 0; a < dim; ++a) {
        out[a] = index % n;
        index /= n;
    }
}

long long GridSpec::cell_index(const long long* coords) const {
    long long n = cells_per_axis();
    long long idx = 0;
    for (int a = dim - 1; a >= 0; --a) idx = idx * n + coords[a];
    return idx;
}

CellSet CellSet::full(const GridSpec& spec) {
    CellSet s(spec);
    for (auto& w : s.bits_) w = ~0ULL;
    s.clear_padding();
    return s;
}

void CellSet::clear_padding() {
    long long n = spec_.cell_count();
    if (n % 64 != 0 && !bits_.empty()) bits_.back() &= (1ULL << (n % 64)) - 1;
}

long long CellSet::popcount() const {
    long long c = 0;
    for (uint64_t w : bits_) c += std::popcount(w);
    return c;
}

void CellSet::check_same_spec(const CellSet& o) const {
    if (!(spec_ == o.spec_)) throw DimMismatch("cell sets live on different grids");
}

CellSet CellSet::operator&(const CellSet& o) const {
    check_same_spec(o);
    CellSet r(spec_);
    for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] & o.bits_[i];
    return r;
}

CellSet CellSet::operator|(const CellSet& o) const {
    check_same_spec(o);
    CellSet r(spec_);
    for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] | o.bits_[i];
    return r;
}

CellSet CellSet::operator-(const CellSet& o) const {
    check_same_spec(o);
    CellSet r(spec_);
    for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] & ~o.bits_[i];
    return r;
}

CellSet CellSet::complement() const {
    CellSet r(spec_);
    for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = ~bits_[i];
    r.clear_padding();
    return r;
}

bool CellSet::intersects(const CellSet& o) const {
    check_same_spec(o);
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & o.bits_[i]) return true;
    return false;
}

std::vector<long long> CellSet::cells() const {
    std::vector<long long> out;
    for (long long i = 0; i < spec_.cell_count(); ++i)
        if (contains(i)) out.push_back(i);
    return out;
}

std::string CellSet::to_hex() const {
    static const char* digits = "0123456789abcdef";
    long long n = spec_.cell_count();
    long long nibbles = (n + 3) / 4;
    std::string out;
    for (long long i = nibbles - 1; i >= 0; --i) {
        int v = 0;
        for (int b = 0; b < 4; ++b) {
            long long cell = i * 4 + b;
            if (cell < n && contains(cell)) v |= 1 << b;
        }
        out += digits[v];
    }
    return out;
}

CellSet CellSet::from_hex(const GridSpec& spec, const std::string& hex) {
    CellSet s(spec);
    long long n = spec.cell_count();
    long long nibbles = (n + 3) / 4;
    if (static_cast<long long>(hex.size()) != nibbles)
        throw ParseError("bitmap length mismatch: expected " + std::to_string(nibbles) + " hex digits");
    for (long long i = 0; i < nibbles; ++i) {
        char c = hex[hex.size() - 1 - i];
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw ParseError("bad hex digit in bitmap");
        for (int b = 0; b < 4; ++b) {
            long long cell = i * 4 + b;
            if ((v >> b) & 1) {
                if (cell >= n) throw ParseError("bitmap sets bit outside grid");
                s.insert(cell);
            }
        }
    }
    return s;
}

GridFunction::GridFunction(const GridSpec& spec, std::vector<Rational> values, bool integer_valued)
    : spec_(spec), values_(std::move(values)), integer_valued_(integer_valued) {
    if (static_cast<long long>(values_.size()) != spec.cell_count())
        throw Error("value array length must equal cell count");
    if (integer_valued_) {
        for (const auto& v : values_)
            if (!v.is_integer() || v.is_negative())
                throw Error("integer-valued flag set but values are not in N united {0}");
    }
}

GridFunction GridFunction::constant(const GridSpec& spec, const Rational& c) {
    return GridFunction(spec, std::vector<Rational>(spec.cell_count(), c),
                        c.is_integer() && !c.is_negative());
}

GridFunction GridFunction::map(const std::function<Rational(const Rational&)>& fn) const {
    std::vector<Rational> vals;
    vals.reserve(values_.size());
    for (const auto& v : values_) vals.push_back(fn(v));
    return GridFunction(spec_, std::move(vals));
}

GridFunction GridFunction::operator-(const Rational& c) const {
    return map([&](const Rational& v) { return v - c; });
}

GridFunction GridFunction::operator*(const Rational& c) const {
    return map([&](const Rational& v) { return v * c; });
}

GridFunction GridFunction::refine() const {
    GridSpec fine(spec_.dim, spec_.level + 1);
    std::vector<Rational> vals(fine.cell_count());
    std::vector<long long> fc(spec_.dim), cc(spec_.dim);
    for (long long i = 0; i < fine.cell_count(); ++i) {
        fine.cell_coords(i, fc.data());
        for (int a = 0; a < spec_.dim; ++a) cc[a] = fc[a] / 2;
        vals[i] = values_[spec_.cell_index(cc.data())];
    }
    return GridFunction(fine, std::move(vals), integer_valued_);
}

AxisCube::AxisCube(int lvl, std::vector<long long> c, long long s)
    : level(lvl), corner(std::move(c)), side(s) {
    if (side < 1) throw Error("cube side must be positive");
    long long n = 1LL << level;
    for (long long x : corner)
        if (x < 0 || x + side > n) throw Error("cube must lie inside the unit cube");
}

Rational AxisCube::measure() const {
    Rational edge = Rational(side) * Rational::pow2(-level);
    Rational m(1);
    for (int a = 0; a < dim(); ++a) m *= edge;
    return m;
}

bool AxisCube::contains(const AxisCube& inner) const {
    // Compare at the finer of the two coordinate levels.
    int lvl = std::max(level, inner.level);
    long long so = side << (lvl - level), si = inner.side << (lvl - inner.level);
    for (int a = 0; a < dim(); ++a) {
        long long co = corner[a] << (lvl - level), ci = inner.corner[a] << (lvl - inner.level);
        if (ci < co || ci + si > co + so) return false;
    }
    return true;
}

bool AxisCube::is_dyadic() const {
    if ((side & (side - 1)) != 0) return false;
    for (long long x : corner)
        if (x % side != 0) return false;
    return true;
}

SpecialRectangle::SpecialRectangle(int lvl, std::vector<long long> c, std::vector<long long> s)
    : level(lvl), corner(std::move(c)), sides(std::move(s)) {
    if (corner.size() != sides.size()) throw DimMismatch("corner/sides size mismatch");
    long long m = min_side();
    long long n = 1LL << level;
    for (size_t a = 0; a < sides.size(); ++a) {
        if (sides[a] != m && sides[a] != 2 * m)
            throw Error("false-cube condition violated: side not in {m, 2m}");
        if (corner[a] < 0 || corner[a] + sides[a] > n)
            throw Error("special rectangle must lie inside the unit cube");
    }
}

long long SpecialRectangle::min_side() const {
    long long m = sides[0];
    for (long long s : sides) m = std::min(m, s);
    if (m < 1) throw Error("sides must be positive");
    return m;
}

Rational SpecialRectangle::measure() const { return Region(*this).measure(); }

Rational Region::measure() const {
    Rational m(1);
    for (int a = 0; a < dim(); ++a) m *= Rational(sides[a]) * Rational::pow2(-level);
    return m;
}

bool Region::is_cube() const {
    for (int a = 1; a < dim(); ++a)
        if (sides[a] != sides[0]) return false;
    return true;
}

Region Region::at_level(int lvl) const {
    if (lvl < level) throw GridIncompatible("cannot coarsen a region");
    int shift = lvl - level;
    std::vector<long long> c(corner), s(sides);
    for (auto& x : c) x <<= shift;
    for (auto& x : s) x <<= shift;
    return Region(lvl, std::move(c), std::move(s));
}

Rational Region::cell_overlap(const GridSpec& spec, long long cell) const {
    if (dim() != spec.dim) throw DimMismatch();
    if (level < spec.level) return at_level(spec.level).cell_overlap(spec, cell);
    int shift = level - spec.level;
    std::vector<long long> cc(spec.dim);
    spec.cell_coords(cell, cc.data());
    // Per-axis overlap length in refined units; the product is exact.
    Rational w(1);
    for (int a = 0; a < spec.dim; ++a) {
        long long cell_lo = cc[a] << shift, cell_hi = (cc[a] + 1) << shift;
        long long lo = std::max(corner[a], cell_lo);
        long long hi = std::min(corner[a] + sides[a], cell_hi);
        if (hi <= lo) return Rational(0);
        w *= Rational(hi - lo) * Rational::pow2(-level);
    }
    return w;
}

std::vector<long long> Region::touched_cells(const GridSpec& spec) const {
    if (dim() != spec.dim) throw DimMismatch();
    if (level < spec.level) return at_level(spec.level).touched_cells(spec);
    int shift = level - spec.level;
    std::vector<long long> lo(spec.dim), hi(spec.dim);
    for (int a = 0; a < spec.dim; ++a) {
        lo[a] = corner[a] >> shift;
        hi[a] = (corner[a] + sides[a] - 1) >> shift;  // inclusive
    }
    std::vector<long long> cells;
    std::vector<long long> cur(lo);
    while (true) {
        cells.push_back(spec.cell_index(cur.data()));
        int a = 0;
        while (a < spec.dim) {
            if (++cur[a] <= hi[a]) break;
            cur[a] = lo[a];
            ++a;
        }
        if (a == spec.dim) break;
    }
    return cells;
}

Rational Region::intersection_measure(const CellSet& s) const {
    Rational m(0);
    for (long long cell : touched_cells(s.spec()))
        if (s.contains(cell)) m += cell_overlap(s.spec(), cell);
    return m;
}

CollectionKind parse_collection_kind(const std::string& name) {
    if (name == "cubes") return CollectionKind::Cubes;
    if (name == "dyadic") return CollectionKind::DyadicCubes;
    if (name == "special") return CollectionKind::SpecialRectangles;
    if (name == "intervals") return CollectionKind::Intervals;
    if (name == "convex") return CollectionKind::ConvexBodies;
    throw ParseError("unknown collection kind '" + name + "'");
}

std::string to_string(CollectionKind kind) {
    switch (kind) {
        case CollectionKind::Cubes: return "cubes";
        case CollectionKind::DyadicCubes: return "dyadic";
        case CollectionKind::SpecialRectangles: return "special";
        case CollectionKind::Intervals: return "intervals";
        case CollectionKind::ConvexBodies: return "convex";
    }
    return "?";
}

WeightedValues sort_and_merge(std::vector<WeightedValue> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });
    WeightedValues out;
    out.total = Rational(0);
    for (auto& wv : raw) {
        if (wv.weight.is_zero()) continue;
        out.total += wv.weight;
        if (!out.atoms.empty() && out.atoms.back().value == wv.value)
            out.atoms.back().weight += wv.weight;
        else
            out.atoms.push_back(wv);
    }
    return out;
}

WeightedValues restrict(const GridFunction& f, const Region& r) {
    std::vector<WeightedValue> raw;
    for (long long cell : r.touched_cells(f.spec())) {
        Rational w = r.cell_overlap(f.spec(), cell);
        if (!w.is_zero()) raw.push_back({f.value(cell), w});
    }
    WeightedValues out = sort_and_merge(std::move(raw));
    if (out.total.is_zero()) throw EmptyRegion();
    return out;
}

WeightedValues restrict(const GridFunction& f, const CellSet& s) {
    if (!(s.spec() == f.spec())) throw DimMismatch("set and function live on different grids");
    Rational w = f.spec().cell_measure();
    std::vector<WeightedValue> raw;
    for (long long cell : s.cells()) raw.push_back({f.value(cell), w});
    WeightedValues out = sort_and_merge(std::move(raw));
    if (out.total.is_zero()) throw EmptyRegion();
    return out;
}

namespace {

// All corners in [0, n-side] per axis restricted to [lo, lo+extent-side],
// in ascending lexicographic order (axis 0 slowest for stable ordering).
void emit_corners(int dim, const std::vector<long long>& lo, const std::vector<long long>& extent,
                  const std::vector<long long>& sides, const std::function<void(const std::vector<long long>&)>& emit) {
    std::vector<long long> cur(dim);
    for (int a = 0; a < dim; ++a) {
        if (extent[a] < sides[a]) return;  // does not fit
        cur[a] = lo[a];
    }
    while (true) {
        emit(cur);
        int a = dim - 1;
        while (a >= 0) {
            if (++cur[a] <= lo[a] + extent[a] - sides[a]) break;
            cur[a] = lo[a];
            --a;
        }
        if (a < 0) break;
    }
}

void enumerate_cubes(const GridSpec& spec, int lvl, const std::optional<AxisCube>& within,
                     std::vector<Region>& out) {
    long long n = 1LL << lvl;
    std::vector<long long> lo(spec.dim, 0), extent(spec.dim, n);
    if (within) {
        if (within->level > lvl) throw GridIncompatible("within-cube finer than enumeration level");
        int shift = lvl - within->level;
        for (int a = 0; a < spec.dim; ++a) {
            lo[a] = within->corner[a] << shift;
            extent[a] = within->side << shift;
        }
    }
    long long max_side = *std::min_element(extent.begin(), extent.end());
    for (long long side = max_side; side >= 1; --side) {
        std::vector<long long> sides(spec.dim, side);
        emit_corners(spec.dim, lo, extent, sides,
                     [&](const std::vector<long long>& c) { out.emplace_back(lvl, c, sides); });
    }
}

void enumerate_dyadic(const GridSpec& spec, const std::optional<AxisCube>& within,
                      std::vector<Region>& out) {
    // Tree of dyadic subcubes down to the grid level, level ascending.
    AxisCube root = within.value_or(AxisCube::whole(spec.dim));
    if (!root.is_dyadic()) throw GridIncompatible("within-cube is not dyadic");
    int side_bits = 0;
    while ((1LL << side_bits) < root.side) ++side_bits;
    int root_level = root.level - side_bits;  // the root as a side-1 cube
    std::vector<long long> root_corner(spec.dim);
    for (int a = 0; a < spec.dim; ++a) root_corner[a] = root.corner[a] >> side_bits;

    for (int depth = 0; root_level + depth <= spec.level; ++depth) {
        int lvl = root_level + depth;
        long long per_axis = 1LL << depth;
        std::vector<long long> cur(spec.dim, 0);
        while (true) {
            std::vector<long long> c(spec.dim);
            for (int a = 0; a < spec.dim; ++a) c[a] = (root_corner[a] << depth) + cur[a];
            out.emplace_back(lvl, c, std::vector<long long>(spec.dim, 1));
            int a = spec.dim - 1;
            while (a >= 0) {
                if (++cur[a] < per_axis) break;
                cur[a] = 0;
                --a;
            }
            if (a < 0) break;
        }
    }
}

void enumerate_special(const GridSpec& spec, int lvl, const std::optional<AxisCube>& within,
                       std::vector<Region>& out) {
    long long n = 1LL << lvl;
    std::vector<long long> lo(spec.dim, 0), extent(spec.dim, n);
    if (within) {
        if (within->level > lvl) throw GridIncompatible("within-cube finer than enumeration level");
        int shift = lvl - within->level;
        for (int a = 0; a < spec.dim; ++a) {
            lo[a] = within->corner[a] << shift;
            extent[a] = within->side << shift;
        }
    }
    long long max_m = *std::max_element(extent.begin(), extent.end());
    // m desc, then doubled-axis mask asc, then corner asc. The all-doubled
    // mask is skipped: that shape is the cube counted at 2m.
    for (long long m = max_m; m >= 1; --m) {
        for (unsigned mask = 0; mask + 1 < (1u << spec.dim); ++mask) {
            std::vector<long long> sides(spec.dim);
            for (int a = 0; a < spec.dim; ++a) sides[a] = (mask >> a) & 1 ? 2 * m : m;
            emit_corners(spec.dim, lo, extent, sides,
                         [&](const std::vector<long long>& c) { out.emplace_back(lvl, c, sides); });
        }
    }
}

}  // namespace

std::vector<Region> enumerate_regions(CollectionKind kind, const GridSpec& spec, int refine,
                                      const std::optional<AxisCube>& within) {
    if (refine < 0) throw Error("refine must be non-negative");
    std::vector<Region> out;
    switch (kind) {
        case CollectionKind::Cubes:
            enumerate_cubes(spec, spec.level + refine, within, out);
            break;
        case CollectionKind::DyadicCubes:
            enumerate_dyadic(spec, within, out);
            break;
        case CollectionKind::SpecialRectangles:
            enumerate_special(spec, spec.level + refine, within, out);
            break;
        case CollectionKind::Intervals:
            if (spec.dim != 1) throw DimMismatch("Intervals require dim = 1");
            enumerate_cubes(spec, spec.level + refine, within, out);
            break;
        case CollectionKind::ConvexBodies:
            throw UnsupportedKind("K(D) is out of scope");
    }
    return out;
}

}  // namespace bmolab
