#include "bmolab/decomposition.hpp"

#include <algorithm>
#include <deque>

namespace bmolab {

Rational DecompositionSpec::tree_delta(int dim) const {
    Rational m(multiplicity(dim));
    return (Rational(1) / m) * (Rational(1) - Rational(1) / m);
}

std::vector<Region> children(const Region& r, DecompositionSpec::Rule rule) {
    std::vector<Region> out;
    if (rule == DecompositionSpec::Rule::Dyadic) {
        if (!r.is_cube()) throw Error("dyadic rule needs a cube");
        Region fine = r.at_level(r.level + 1);
        long long half = fine.sides[0] / 2;
        if (half * 2 != fine.sides[0]) throw Error("internal: refined side not even");
        int d = r.dim();
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            std::vector<long long> c(fine.corner);
            for (int a = 0; a < d; ++a)
                if ((mask >> a) & 1) c[a] += half;
            out.emplace_back(fine.level, c, std::vector<long long>(d, half));
        }
        return out;
    }
    // False-cube rule: split the lowest doubled axis, else axis 0; the halves
    // of a cube's axis-0 side still satisfy the {m, 2m} condition.
    long long m = *std::min_element(r.sides.begin(), r.sides.end());
    int axis = 0;
    for (int a = 0; a < r.dim(); ++a)
        if (r.sides[a] == 2 * m) { axis = a; break; }
    Region base = r.sides[axis] % 2 == 0 ? r : r.at_level(r.level + 1);
    long long half = base.sides[axis] / 2;
    Region left = base, right = base;
    left.sides[axis] = half;
    right.sides[axis] = half;
    right.corner[axis] += half;
    out.push_back(left);
    out.push_back(right);
    return out;
}

TriPartition::TriPartition(CellSet p, CellSet m, CellSet g)
    : eplus(std::move(p)), eminus(std::move(m)), gap(std::move(g)) {
    if (!(eplus.spec() == eminus.spec()) || !(eplus.spec() == gap.spec()))
        throw DimMismatch("partition parts live on different grids");
    if (eplus.intersects(eminus) || eplus.intersects(gap) || eminus.intersects(gap))
        throw Error("partition parts must be pairwise disjoint");
    if (!((eplus | eminus | gap) == CellSet::full(eplus.spec())))
        throw Error("partition must cover the grid");
}

namespace {

Rational fraction_of(const CellSet& e, const Region& w) {
    return w.intersection_measure(e) / w.measure();
}

// Breadth-first tree walk down to single grid cells, canonical child order.
template <typename Visit>
void walk_tree(const Region& root, DecompositionSpec::Rule rule, const GridSpec& spec,
               Visit&& visit) {
    std::deque<Region> queue{root};
    Rational cell = spec.cell_measure();
    while (!queue.empty()) {
        Region r = queue.front();
        queue.pop_front();
        if (!visit(r)) continue;  // visit returns false to stop descending here
        if (r.measure() <= cell) continue;
        for (Region& c : children(r, rule)) queue.push_back(std::move(c));
    }
}

}  // namespace

Region bidensity_tree(const CellSet& e, const Region& root, DecompositionSpec::Rule rule) {
    const GridSpec& spec = e.spec();
    Rational root_meas = root.measure();
    Rational root_in = root.intersection_measure(e);
    if (root_in.is_zero() || root_in == root_meas)
        throw DegenerateSet("bidensity needs 0 < lambda(Q cap E) < lambda(Q)");

    DecompositionSpec ds{rule};
    int mult = ds.multiplicity(spec.dim);
    Rational beta = Rational(1) / Rational(mult);

    // Pre-pass: any tree node with beta <= fraction <= 1-beta already works.
    std::optional<Region> two_sided;
    walk_tree(root, rule, spec, [&](const Region& r) {
        if (two_sided) return false;
        Rational frac = fraction_of(e, r);
        if (frac >= beta && frac <= Rational(1) - beta) {
            two_sided = r;
            return false;
        }
        return true;
    });
    if (two_sided) return *two_sided;

    // No two-sided node. Orient so the root fraction is < beta, find a leaf
    // buried in the dense side, and walk its ancestor chain upward until the
    // fraction first drops below 1-beta.
    bool swapped = fraction_of(e, root) > Rational(1) - beta;
    CellSet dense = swapped ? e.complement() : e;

    std::optional<Region> leaf;
    walk_tree(root, rule, spec, [&](const Region& r) {
        if (leaf) return false;
        Rational frac = fraction_of(dense, r);
        if (frac.is_zero()) return false;  // nothing of the dense side below here
        if (r.measure() <= spec.cell_measure() && frac == Rational(1)) {
            leaf = r;
            return false;
        }
        return true;
    });
    if (!leaf) throw Error("internal: no pure leaf found");

    // Ancestor chain root = A_0 superset ... superset A_n = leaf.
    std::vector<Region> chain{root};
    while (!(chain.back() == *leaf)) {
        bool advanced = false;
        for (Region& c : children(chain.back(), rule)) {
            Region lf = leaf->at_level(std::max(leaf->level, c.level));
            Region cf = c.at_level(std::max(leaf->level, c.level));
            bool contains = true;
            for (int a = 0; a < spec.dim; ++a) {
                if (lf.corner[a] < cf.corner[a] ||
                    lf.corner[a] + lf.sides[a] > cf.corner[a] + cf.sides[a]) {
                    contains = false;
                    break;
                }
            }
            if (contains) {
                chain.push_back(c);
                advanced = true;
                break;
            }
        }
        if (!advanced) throw Error("internal: broken decomposition chain");
    }

    // From the leaf upward: fractions start at 1 and the root is < beta, so
    // there is a first ancestor below 1-beta; it satisfies the bound.
    for (size_t i = chain.size(); i-- > 1;) {
        Rational parent_frac = fraction_of(dense, chain[i - 1]);
        Rational child_frac = fraction_of(dense, chain[i]);
        if (child_frac >= Rational(1) - beta && parent_frac < Rational(1) - beta) {
            const Region& w = chain[i - 1];
            Rational in = fraction_of(e, w);
            Rational lo = std::min(in, Rational(1) - in);
            if (lo < beta * (Rational(1) - beta))
                throw Error("internal: bidensity bound violated");
            return w;
        }
    }
    throw Error("internal: ancestor walk found no crossing");
}

Region bidensity_dyadic(const CellSet& e, const AxisCube& q) {
    if (!q.is_dyadic()) throw Error("bidensity_dyadic needs a dyadic cube");
    return bidensity_tree(e, Region(q), DecompositionSpec::Rule::Dyadic);
}

ContinuousBidensityResult bidensity_continuous(const CellSet& e, const AxisCube& q,
                                               const Rational& target, int refine) {
    if (target.sign() <= 0 || target >= Rational(1)) throw Error("target must lie in (0,1)");
    const GridSpec& spec = e.spec();
    Region qr(q);
    Rational q_meas = qr.measure();
    Rational q_in = qr.intersection_measure(e);
    if (q_in.is_zero() || q_in == q_meas) throw DegenerateSet();

    // First cell of Q inside E and first outside, in canonical order.
    std::optional<long long> cell_in, cell_out;
    for (long long cell : qr.touched_cells(spec)) {
        if (e.contains(cell)) {
            if (!cell_in) cell_in = cell;
        } else if (!cell_out) {
            cell_out = cell;
        }
        if (cell_in && cell_out) break;
    }

    int lvl = spec.level + refine;
    long long n = 1LL << refine;  // cube side in refined cells = one grid cell
    std::vector<long long> ca(spec.dim), cb(spec.dim);
    spec.cell_coords(*cell_in, ca.data());
    spec.cell_coords(*cell_out, cb.data());
    for (int a = 0; a < spec.dim; ++a) { ca[a] <<= refine; cb[a] <<= refine; }

    ContinuousBidensityResult best;
    best.region = qr;
    best.fraction = q_in / q_meas;
    auto consider = [&](const Region& w) {
        Rational frac = w.intersection_measure(e) / w.measure();
        if ((frac - target).abs() < (best.fraction - target).abs()) {
            best.region = w;
            best.fraction = frac;
        }
    };

    // Translate one refined cell at a time, axis by axis. Each step moves the
    // fraction by at most 1/n, so the best intermediate lands within 1/(2n)
    // of the crossing, inside the advertised tolerance.
    std::vector<long long> cur(ca);
    consider(Region(lvl, cur, std::vector<long long>(spec.dim, n)));
    for (int a = 0; a < spec.dim; ++a) {
        long long step = cb[a] > cur[a] ? 1 : -1;
        while (cur[a] != cb[a]) {
            cur[a] += step;
            consider(Region(lvl, cur, std::vector<long long>(spec.dim, n)));
        }
    }

    // tolerance = 1 - (n/(n+1))^d
    Rational ratio = Rational(n) / Rational(n + 1);
    Rational pow(1);
    for (int a = 0; a < spec.dim; ++a) pow *= ratio;
    best.tolerance = Rational(1) - pow;
    return best;
}

BalanceCertificate chain_descent(const TriPartition& part, DecompositionSpec rule,
                                 const QuadReal& tau) {
    const GridSpec& spec = part.spec();
    if (tau.sign() <= 0) throw HypothesisViolated("tau must be positive");

    Rational lp = part.eplus.measure(), lm = part.eminus.measure(), lg = part.gap.measure();
    QuadReal min_pm(std::min(lp, lm));
    if (!(min_pm > tau * QuadReal(lg)))
        throw HypothesisViolated("min{lambda(E+),lambda(E-)} > tau lambda(G) fails");

    // The proof only improves as tau shrinks, so clamp above sqrt2 - 1.
    QuadReal tau_used = tau > tau_sqrt2_minus_1() ? tau_sqrt2_minus_1() : tau;

    int mult = rule.multiplicity(spec.dim);
    Rational delta = rule.tree_delta(spec.dim);
    QuadReal formula = (tau_used - tau_used * tau_used) /
                       (QuadReal(Rational(mult)) * (QuadReal(Rational(1)) + tau_used));
    QuadReal s = formula < QuadReal(delta) ? formula : QuadReal(delta);

    auto is_good = [&](const Region& r) {
        Rational gp = r.intersection_measure(part.eplus);
        Rational gm = r.intersection_measure(part.eminus);
        Rational gg = r.intersection_measure(part.gap);
        return QuadReal(std::min(gp, gm)) > tau_used * QuadReal(gg);
    };

    Region root = rule.rule == DecompositionSpec::Rule::Dyadic
                      ? Region(AxisCube::whole(spec.dim))
                      : Region(0, std::vector<long long>(spec.dim, 0),
                               std::vector<long long>(spec.dim, 1));

    // Descend through good children while one exists; finest cells are pure
    // and never good, so this stops within the grid depth.
    Region current = root;
    while (true) {
        std::optional<Region> good_child;
        for (const Region& c : children(current, rule.rule)) {
            if (is_good(c)) { good_child = c; break; }
        }
        if (!good_child) break;
        current = *good_child;
    }

    Rational cp = current.intersection_measure(part.eplus);
    Rational cm = current.intersection_measure(part.eminus);
    Rational cg = current.intersection_measure(part.gap);
    const CellSet& small = cm <= cp ? part.eminus : part.eplus;

    BalanceCertificate cert;
    cert.tau_used = tau_used;
    cert.delta = delta;
    cert.multiplicity = mult;
    cert.certified_s = s;

    auto finish = [&](const Region& w, const std::string& tag) {
        cert.region = w;
        cert.case_tag = tag;
        cert.frac_plus = w.intersection_measure(part.eplus) / w.measure();
        cert.frac_minus = w.intersection_measure(part.eminus) / w.measure();
        if (!(QuadReal(cert.min_fraction()) >= cert.certified_s))
            throw Error("internal: certificate violates its own bound");
        return cert;
    };

    if (cg.is_zero())  // case (i): pure bi-density inside the good set
        return finish(bidensity_tree(part.eplus, current, rule.rule), "bidensity");

    std::vector<Region> kids = children(current, rule.rule);
    for (const Region& w : kids)  // case (ii): a child filled by the smaller set
        if (w.intersection_measure(small) == w.measure()) return finish(current, "full-child");

    // case (iii): children with no gap mass but some small-set mass admit a
    // bi-density cube; otherwise some child is unbalanced enough on its own.
    for (const Region& w : kids) {
        if (w.intersection_measure(part.gap).is_zero() &&
            w.intersection_measure(small).sign() > 0)
            return finish(bidensity_tree(small, w, rule.rule), "bidensity");
    }
    for (const Region& w : kids) {
        Rational ws = w.intersection_measure(small);
        Rational wg = w.intersection_measure(part.gap);
        if (wg.sign() > 0 && QuadReal(ws) > tau_used * QuadReal(wg))
            return finish(current, "unbalanced-child");
    }
    throw Error("internal: chain descent case analysis failed");
}

CertifiedPair certified_pair(int dim, CollectionKind kind) {
    CertifiedPair p;
    p.tau = tau_sqrt2_minus_1();
    switch (kind) {
        case CollectionKind::Cubes:
        case CollectionKind::DyadicCubes:
            p.s = QuadReal(Rational::pow2(-dim)) * three_minus_2sqrt2();
            break;
        case CollectionKind::Intervals:
            if (dim != 1) throw DimMismatch("Intervals require dim = 1");
            p.s = QuadReal(Rational(1, 2)) * three_minus_2sqrt2();
            break;
        case CollectionKind::SpecialRectangles:
            p.s = QuadReal(Rational(1, 2)) * three_minus_2sqrt2();
            break;
        case CollectionKind::ConvexBodies:
            throw UnsupportedKind("no certified pair for K(D)");
    }
    return p;
}

}  // namespace bmolab
