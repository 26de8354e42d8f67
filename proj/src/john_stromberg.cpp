#include "bmolab/john_stromberg.hpp"

#include <algorithm>
#include <cmath>

namespace bmolab {

Rational j_functional_def(const WeightedValues& wv, const Rational& s) {
    if (wv.empty()) throw EmptyRegion();
    if (s.sign() <= 0 || s >= Rational(1)) throw Error("s must lie in (0,1)");
    Rational need = (Rational(1) - s) * wv.total;  // window mass must exceed this strictly

    // Two-pointer sweep: for each lowest value i, the smallest j with
    // cumulative weight(i..j) > need gives the candidate half-width.
    size_t n = wv.size();
    Rational best;
    bool have_best = false;
    size_t j = 0;
    Rational window(0);  // weight of atoms [i, j)
    for (size_t i = 0; i < n; ++i) {
        if (j < i) { j = i; window = Rational(0); }
        while (j < n && window + wv.atoms[j].weight <= need) {
            window += wv.atoms[j].weight;
            ++j;
        }
        if (j == n) break;  // even the full suffix fails: no window from i
        Rational alpha = (wv.atoms[j].value - wv.atoms[i].value) / Rational(2);
        if (!have_best || alpha < best) { best = alpha; have_best = true; }
        if (j > i) window -= wv.atoms[i].weight;  // j == i resets at loop head
    }
    if (!have_best) throw Error("internal: no qualifying window");
    return best;
}

Rational j_functional_def(const GridFunction& f, const CellSet& e, const Rational& s) {
    return j_functional_def(restrict(f, e), s);
}

Rational j_functional_step(const StepFunction& h, const Rational& s) {
    if (s.sign() <= 0 || s >= Rational(1)) throw Error("s must lie in (0,1)");
    Rational q = h.domain_length();
    Rational w = (Rational(1) - s) * q;
    Rational s_q = s * q;

    // u -> h(u) - h(u+w) is right-continuous piecewise constant on (0, sq)
    // with pieces starting at 0, at breakpoints t_i, and at t_i - w. The
    // infimum is the minimum over piece-start right limits; pointwise
    // evaluation at each start (0 handled as 0+) gives exactly those.
    std::vector<Rational> candidates;
    for (const Rational& t : h.breaks()) {
        if (t.sign() > 0 && t < s_q) candidates.push_back(t);
        Rational shifted = t - w;
        if (shifted.sign() > 0 && shifted < s_q) candidates.push_back(shifted);
    }
    Rational best = h.values().front() - h.at(w);  // the u -> 0+ piece
    for (const Rational& u : candidates)
        best = std::min(best, h.at(u) - h.at(u + w));
    return best / Rational(2);
}

Rational j_functional_rearr(const GridFunction& f, const CellSet& e, const Rational& s) {
    WeightedValues wv = restrict(f, e);
    for (const auto& a : wv.atoms)
        if (a.value.is_negative())
            throw NegativeValues("j_functional_rearr requires f >= 0; use j_functional_def");
    return j_functional_step(rearrange(wv), s);
}

Rational j_seminorm(const GridFunction& f, CollectionKind kind, const Rational& s, int refine) {
    Rational best(0);
    for (const Region& r : enumerate_regions(kind, f.spec(), refine))
        best = std::max(best, j_functional_def(restrict(f, r), s));
    return best;
}

namespace {

// Linear constraint A*a + B*b <= C.
struct HalfPlane {
    Rational a_coeff, b_coeff, bound;
    bool holds(const Rational& a, const Rational& b) const {
        return a_coeff * a + b_coeff * b <= bound;
    }
};

// Maximal achievable (b - a) over the polygon, or nullopt when empty.
// Vertex enumeration; the box constraints keep the region bounded.
std::optional<Rational> max_gap(const std::vector<HalfPlane>& cs) {
    std::optional<Rational> best;
    size_t n = cs.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            Rational det = cs[i].a_coeff * cs[j].b_coeff - cs[j].a_coeff * cs[i].b_coeff;
            if (det.is_zero()) continue;
            Rational a = (cs[i].bound * cs[j].b_coeff - cs[j].bound * cs[i].b_coeff) / det;
            Rational b = (cs[i].a_coeff * cs[j].bound - cs[j].a_coeff * cs[i].bound) / det;
            bool ok = true;
            for (const auto& c : cs)
                if (!c.holds(a, b)) { ok = false; break; }
            if (!ok) continue;
            Rational gap = b - a;
            if (!best || gap > *best) best = gap;
        }
    }
    return best;
}

}  // namespace

Rational step_interval_j_seminorm(const StepFunction& h, const Rational& s) {
    if (s.sign() <= 0 || s >= Rational(1)) throw Error("s must lie in (0,1)");
    const auto& brk = h.breaks();
    const auto& val = h.values();
    size_t k = val.size();
    if (k == 1) return Rational(0);

    // Candidate levels: half of every distinct drop, descending. The first
    // level admitting a witness interval is the exact supremum.
    std::vector<Rational> drops;
    for (size_t p = 0; p < k; ++p)
        for (size_t q = p + 1; q < k; ++q) drops.push_back(val[p] - val[q]);
    std::sort(drops.begin(), drops.end());
    drops.erase(std::unique(drops.begin(), drops.end()), drops.end());

    Rational one_minus_s = Rational(1) - s;

    auto feasible = [&](const Rational& two_alpha) {
        // For every maximal piece run p..q(p) with drop < 2*alpha the witness
        // (a,b) must satisfy |[t_{p-1}, t_{q}] cap (a,b)| <= (1-s)(b-a).
        std::vector<size_t> qmax(k);
        for (size_t p = 0; p < k; ++p) {
            size_t q = p;
            while (q + 1 < k && val[p] - val[q + 1] < two_alpha) ++q;
            qmax[p] = q;
        }
        // Cells: a in [t_{i-1}, t_i], b in [t_{j-1}, t_j], i < j (an interval
        // within one piece has J = 0 and cannot witness a positive level).
        for (size_t i = 1; i <= k; ++i) {
            for (size_t j = i + 1; j <= k; ++j) {
                std::vector<HalfPlane> cs;
                cs.push_back({Rational(-1), Rational(0), -brk[i - 1]});  // a >= t_{i-1}
                cs.push_back({Rational(1), Rational(0), brk[i]});        // a <= t_i
                cs.push_back({Rational(0), Rational(-1), -brk[j - 1]});  // b >= t_{j-1}
                cs.push_back({Rational(0), Rational(1), brk[j]});        // b <= t_j
                bool impossible = false;
                for (size_t p = 1; p <= k && !impossible; ++p) {
                    size_t q = qmax[p - 1] + 1;  // 1-based piece index of run end
                    // Window [x, y] = [t_{p-1}, t_q]; resolve min/max by cell.
                    bool x_below_a = p <= i;   // t_{p-1} <= t_{i-1} <= a
                    bool y_above_b = q >= j;   // t_q >= t_j >= b
                    if (x_below_a && y_above_b) {
                        impossible = true;  // forces b <= a
                    } else if (x_below_a) {
                        // t_q - a <= (1-s)(b-a)  <=>  -s a - (1-s) b <= -t_q
                        cs.push_back({-s, -one_minus_s, -brk[q]});
                    } else if (y_above_b) {
                        // b - t_{p-1} <= (1-s)(b-a)  <=>  (1-s) a + s b <= t_{p-1}
                        cs.push_back({one_minus_s, s, brk[p - 1]});
                    } else {
                        // t_q - t_{p-1} <= (1-s)(b-a)
                        cs.push_back({one_minus_s, -one_minus_s, brk[p - 1] - brk[q]});
                    }
                }
                if (impossible) continue;
                auto gap = max_gap(cs);
                if (gap && gap->sign() > 0) return true;
            }
        }
        return false;
    };

    for (auto it = drops.rbegin(); it != drops.rend(); ++it)
        if (feasible(*it)) return *it / Rational(2);
    return Rational(0);
}

SlackReport chebyshev_bound_check(const GridFunction& f, CollectionKind kind, const Rational& s,
                                  int refine) {
    JsParams params(s);
    params.require_at_most_half();
    SlackReport rep;
    rep.lhs = j_seminorm(f, kind, s, refine);
    rep.rhs = bmo_seminorm(f, kind, OscFlavor::O, refine) / s;
    rep.slack = rep.rhs - rep.lhs;
    rep.pass = rep.slack.sign() >= 0;
    return rep;
}

SlackReport lipschitz_j_check(const GridFunction& f, const PiecewiseLinear& phi, const CellSet& e,
                              const Rational& s) {
    GridFunction composed = f.map([&](const Rational& v) { return phi(v); });
    SlackReport rep;
    rep.lhs = j_functional_def(composed, e, s);
    rep.rhs = j_functional_def(f, e, s);
    rep.slack = rep.rhs - rep.lhs;
    rep.pass = rep.slack.sign() >= 0;
    return rep;
}

AffinePullback make_affine_pullback(const GridFunction& f, const AffineMap& map) {
    const GridSpec& spec = f.spec();
    if (static_cast<int>(map.shift.size()) != spec.dim) throw DimMismatch("shift size");

    // Alignment level: shifts must be integer multiples of the cell size.
    int align = spec.level;
    for (const Rational& x : map.shift) {
        long long den = x.den();
        int bits = 0;
        while ((1LL << bits) < den) ++bits;
        if ((1LL << bits) != den)
            throw GridIncompatible("shift is not dyadic");
        align = std::max(align, bits);
    }
    if (align + map.log2_scale < 0) align = -map.log2_scale;

    GridFunction f_ref = f;
    for (int l = spec.level; l < align; ++l) f_ref = f_ref.refine();
    const GridSpec& fs = f_ref.spec();

    int g_level = align + map.log2_scale;
    if (g_level < 0 || spec.dim * g_level > 26)
        throw GridIncompatible("pullback grid level out of range");
    GridSpec gs(spec.dim, g_level);

    std::vector<long long> shift_cells(spec.dim);
    for (int a = 0; a < spec.dim; ++a)
        shift_cells[a] = (map.shift[a] * Rational::pow2(align)).num();  // integer by alignment

    long long fn = fs.cells_per_axis();
    std::vector<Rational> values(gs.cell_count(), Rational(0));
    std::vector<long long> g_to_f(gs.cell_count(), -1);
    std::vector<long long> gc(spec.dim), fc(spec.dim);
    for (long long i = 0; i < gs.cell_count(); ++i) {
        gs.cell_coords(i, gc.data());
        bool inside = true;
        for (int a = 0; a < spec.dim; ++a) {
            long long idx = map.negate ? shift_cells[a] - gc[a] - 1 : gc[a] + shift_cells[a];
            if (idx < 0 || idx >= fn) { inside = false; break; }
            fc[a] = idx;
        }
        if (!inside) continue;
        long long fi = fs.cell_index(fc.data());
        g_to_f[i] = fi;
        values[i] = f_ref.value(fi);
    }

    AffinePullback out{GridFunction(gs, std::move(values)), std::move(f_ref), std::move(g_to_f)};
    return out;
}

CellSet AffinePullback::map_set(const CellSet& e_on_g) const {
    CellSet out(f_refined.spec());
    for (long long cell : e_on_g.cells()) {
        if (g_to_f[cell] < 0) throw GridIncompatible("set leaves the domain of the transform");
        out.insert(g_to_f[cell]);
    }
    return out;
}

AffineCheckReport affine_covariance_check(const GridFunction& f, const AffineMap& map,
                                          const CellSet& e_on_g, const Rational& s) {
    AffinePullback pb = make_affine_pullback(f, map);
    if (!(e_on_g.spec() == pb.g.spec())) throw DimMismatch("set must live on the pullback grid");
    AffineCheckReport rep;
    rep.j_pullback = j_functional_def(pb.g, e_on_g, s);
    rep.j_image = j_functional_def(pb.f_refined, pb.map_set(e_on_g), s);
    rep.equal = rep.j_pullback == rep.j_image;
    return rep;
}

MonotoneDifferenceReport monotone_difference_bound(const StepFunction& h, const Rational& s) {
    if (s.sign() <= 0 || s >= Rational(1, 2)) throw Error("s must lie in (0,1/2)");
    if (h.domain_length() != Rational(1)) throw Error("h must live on (0,1)");
    Rational rho = s / (Rational(1) - s);
    Rational half(1, 2);

    // Candidate t: piece starts of t -> h(rho t) - h(t), plus 1/2 itself.
    std::vector<Rational> ts;
    ts.push_back(half);
    for (const Rational& t : h.breaks()) {
        if (t.sign() > 0 && t <= half) ts.push_back(t);
        Rational scaled = t / rho;
        if (scaled.sign() > 0 && scaled <= half) ts.push_back(scaled);
    }
    Rational sup(0);  // the t -> 0+ piece contributes 0
    for (const Rational& t : ts) sup = std::max(sup, h.at(rho * t) - h.at(t));

    MonotoneDifferenceReport rep;
    rep.sup_difference = sup;
    rep.twice_j_seminorm = Rational(2) * step_interval_j_seminorm(h, s);
    rep.pass = rep.sup_difference <= rep.twice_j_seminorm;
    return rep;
}

MarginReport monotone_tail_bound(const StepFunction& h, const Rational& s,
                                 const std::vector<Rational>& alphas) {
    JsParams params(s);
    params.require_at_most_half();
    Rational m = h.domain_length();
    Rational mid = m / Rational(2);
    Rational h_mid = h.at(mid);
    Rational seminorm = step_interval_j_seminorm(h, s);

    double log_ratio = std::log((Rational(1) / s - Rational(1)).to_double());  // >= 0 for s <= 1/2
    double prefactor = ((Rational(1) - s) / (Rational(2) * s) * m).to_double();

    MarginReport rep;
    rep.name = "monotone tail bound";
    for (const Rational& alpha : alphas) {
        if (alpha.is_negative()) throw Error("alpha must be non-negative");
        MarginRow row;
        row.alpha = alpha;
        if (alpha.is_zero()) {
            // Only the part left of the midpoint is an initial interval here;
            // the bound is >= |I|/2 so the clipped check is the meaningful one.
            row.lhs = mid;
            row.rhs = prefactor;
            row.note = "alpha=0: set clipped to (0, m/2]";
        } else {
            row.lhs = h.measure_at_least(h_mid + alpha);
            if (seminorm.is_zero()) {
                row.rhs = 0.0;  // exponent -infinity; LHS is 0 for constant h
            } else {
                double expo = -(alpha.to_double() * log_ratio) / (2.0 * seminorm.to_double());
                row.rhs = prefactor * std::exp(expo);
            }
        }
        row.slack = row.rhs - row.lhs.to_double();
        row.pass = row.slack >= -kRhsSlack;
        rep.add(row);
    }
    return rep;
}

}  // namespace bmolab
