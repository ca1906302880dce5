#include "mdcol/collocation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

namespace mdcol {

const char* tag_name(PointTag t) {
    switch (t) {
        case PointTag::interior: return "interior";
        case PointTag::dirichlet: return "dirichlet";
        case PointTag::neumann: return "neumann";
    }
    return "?";
}

const char* scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::greville: return "greville";
        case SchemeKind::superconvergent: return "superconvergent";
        case SchemeKind::set2: return "set2";
        case SchemeKind::set3: return "set3";
    }
    return "?";
}

DirectionTables greville_tables(int s, int k) {
    UnivariateSpace sp1(s + 1, s, k), sp2(2 * s + 1, s, k);
    DirectionTables t;
    t.p1.resize(sp1.dim());
    t.p2.resize(sp2.dim());
    for (int j = 0; j < sp1.dim(); ++j) t.p1[j] = sp1.greville_d(j);
    for (int j = 0; j < sp2.dim(); ++j) t.p2[j] = sp2.greville_d(j);
    // indices where the truncation does not bite keep the plain abscissa
    t.trunc = t.p1;
    for (int i = 1; i <= s / 2; ++i) {
        t.trunc[i] = sp2.greville_d(s + i);
        t.trunc[sp1.dim() - 1 - i] = 1.0 - t.trunc[i];
    }
    return t;
}

namespace {

// superconvergent roots per knot span on the reference interval [-1, 1]
std::vector<double> p1_span_roots() { return {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}; }

std::vector<double> p2_span_roots(int s) {
    if (s == 2) {
        double a = std::sqrt((6.0 - std::sqrt(21.0)) / 15.0);
        double b = std::sqrt((6.0 + std::sqrt(21.0)) / 15.0);
        return {-b, -a, a, b};
    }
    // roots of 4823 x^6 - 5915 x^4 + 1665 x^2 - 61
    return {-0.9098737952346008, -0.5963052503103114, -0.2072795685478027,
            0.2072795685478027,  0.5963052503103114,  0.9098737952346008};
}

double span_point(double root, int span, int k) {
    double h = 1.0 / (k + 1);
    return (span + 0.5 * (1.0 + root)) * h;
}

// Interior selection on [h, 1-h]: both roots of every other span starting
// with the first, clusters of two separated by an empty span. For odd k this
// yields k-1 points; the remaining one moves into the right boundary strip
// (see extra_strip_coord).
std::vector<double> interior_pairs(int k) {
    std::vector<double> roots = p1_span_roots();
    std::vector<double> out;
    for (int m = 1; m <= k - 1; m += 2) {
        out.push_back(span_point(roots[0], m, k));
        out.push_back(span_point(roots[1], m, k));
    }
    return out;
}

// odd-count compensation point next to the right boundary: the mirrored
// smallest strip root for s=2 (dropped from the left strip), half of it for
// s=4 where every strip root is already in use
double extra_strip_coord(int s, int k) {
    double r0 = (1.0 - std::abs(p2_span_roots(s)[0])) / 2.0;
    double off = (s == 2) ? r0 : 0.5 * r0;
    return 1.0 - off / (k + 1);
}

// interior part of the degree-(2s+1) sequence on [h, 1-h]: all but one root
// per span, the dropped position alternating around the middle, the central
// span keeping all
std::vector<double> p2_interior_clustered(int s, int k) {
    std::vector<double> roots = p2_span_roots(s);
    const int per_span = static_cast<int>(roots.size());
    std::vector<double> out;
    const int extra = k / 2;
    for (int m = 1; m <= k - 1; ++m) {
        int drop;
        if (m == extra) drop = -1;
        else if (m < extra) drop = (m % 2) ? per_span / 2 - 1 : per_span / 2;
        else drop = (per_span - 1) - (((k - m) % 2) ? per_span / 2 - 1 : per_span / 2);
        for (int i = 0; i < per_span; ++i) {
            if (i == drop) continue;
            out.push_back(span_point(roots[i], m, k));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

DirectionTables superconvergent_tables(int s, int k) {
    if (k < s + 2) throw std::invalid_argument("superconvergent points need k >= s+2");
    UnivariateSpace sp1(s + 1, s, k), sp2(2 * s + 1, s, k);
    const int n1 = sp1.dim(), n2 = sp2.dim();
    const double h = 1.0 / (k + 1);
    DirectionTables t;

    // sorted first-span roots of the degree-(2s+1) space, in units of h
    std::vector<double> roots;
    for (double r : p2_span_roots(s)) roots.push_back((1.0 + r) / 2.0);
    std::sort(roots.begin(), roots.end());
    const int R = static_cast<int>(roots.size());
    const int dropped = R - (s + s / 2); // smallest roots unused on the left
    std::vector<double> L(roots.begin() + dropped, roots.end());

    std::vector<double> q = interior_pairs(k);
    const double extra = extra_strip_coord(s, k);
    if (static_cast<int>(q.size()) < k) q.push_back(extra);
    if (static_cast<int>(q.size()) != k)
        throw std::logic_error("interior selection has wrong cardinality");

    t.p2.resize(n2);
    t.p2[0] = 0.0;
    for (int i = 0; i < s; ++i) t.p2[1 + i] = L[i] * h;
    for (int i = 0; i < s / 2; ++i) t.p2[s + 1 + i] = L[s + i] * h;
    std::vector<double> mid = p2_interior_clustered(s, k);
    if (static_cast<int>(mid.size()) != n2 - 2 * (s + s / 2) - 2)
        throw std::logic_error("degree-(2s+1) interior sequence has wrong cardinality");
    for (std::size_t i = 0; i < mid.size(); ++i)
        t.p2[s + s / 2 + 1 + static_cast<int>(i)] = mid[i];
    for (int i = 0; i < s / 2; ++i) t.p2[n2 - s - 2 - i] = 1.0 - L[s + i] * h;
    // asymmetric tail: the s-1 smallest kept roots mirrored, then the
    // compensation point next to the boundary
    for (int i = 0; i < s - 1; ++i) t.p2[n2 - s - 1 + i] = 1.0 - L[s - 2 - i] * h;
    t.p2[n2 - 2] = extra;
    t.p2[n2 - 1] = 1.0;

    std::vector<double> p1roots = p1_span_roots();
    t.p1.resize(n1);
    t.p1[0] = 0.0;
    t.p1[n1 - 1] = 1.0;
    for (int i = 1; i <= s / 2; ++i) {
        t.p1[i] = span_point(p1roots[(s == 2) ? 0 : i - 1], 0, k);
        t.p1[n1 - 1 - i] = 1.0 - t.p1[i];
    }
    for (int i = 0; i < k; ++i) t.p1[s / 2 + 1 + i] = q[i];

    // truncated-function table: plain coordinates by default, strip roots
    // at the truncated ends
    t.trunc = t.p1;
    for (int i = 1; i <= s / 2; ++i) t.trunc[i] = t.p2[s + i];
    for (int i = 0; i <= s / 2; ++i) t.trunc[n1 - 2 - i] = 1.0 - L[s - 1 + i] * h;
    // The boundary strips keep the Greville layout: replacing them by
    // clustered roots of the high-degree space destabilizes the square
    // one-patch systems under refinement, while the interior root pairs
    // carry the superconvergence.
    {
        DirectionTables g = greville_tables(s, k);
        for (int i = 0; i <= s + s / 2; ++i) {
            t.p2[i] = g.p2[i];
            t.p2[n2 - 1 - i] = g.p2[n2 - 1 - i];
        }
        for (int i = 0; i <= s; ++i) {
            t.p1[i] = g.p1[i];
            t.p1[n1 - 1 - i] = g.p1[n1 - 1 - i];
            if (i >= 1) {
                t.trunc[i] = g.trunc[i];
                t.trunc[n1 - 1 - i] = g.trunc[n1 - 1 - i];
            }
        }
    }
    return t;
}


std::vector<Vec2> local_points(const MixedSpace2D& space, const DirectionTables& tables) {
    auto coord = [&](const Factor& f) {
        if (f.degree_class == 1) return tables.p2[f.index];
        if (f.trunc_left || f.trunc_right) return tables.trunc[f.index];
        return tables.p1[f.index];
    };
    std::vector<Vec2> out;
    out.reserve(space.dim());
    for (const MixedBasisFunction& f : space.basis())
        out.emplace_back(coord(f.u), coord(f.v));
    return out;
}

std::vector<double> maxreg_span_roots(int s, int level) {
    const double r3 = 1.0 / std::sqrt(3.0);
    const double r76 = std::sqrt(225.0 - 30.0 * std::sqrt(30.0)) / 15.0;
    const double r98 = 0.504918567512653;
    int p = 2 * s + 1 - level;
    switch (p) {
        case 3: return {-r3, r3};
        case 4: return {-1.0, 0.0, 1.0};
        case 5: return (s == 2) ? std::vector<double>{-r76, r76} : std::vector<double>{-r3, r3};
        case 6: return {-1.0, 0.0, 1.0};
        case 7: return {-r76, r76};
        case 8: return {-1.0, 0.0, 1.0};
        case 9: return {-r98, r98};
    }
    throw std::invalid_argument("maxreg_span_roots: unsupported degree");
}

std::vector<double> maxreg_clustered(int s, int k, int level) {
    const int p = 2 * s + 1 - level;
    const int dim = p + 1 + k;
    std::vector<double> roots = maxreg_span_roots(s, level);
    std::vector<double> out = {0.0, 1.0};

    // symmetric fill order over the spans: ends first, then inward
    auto fill_order = [&](int count) {
        std::vector<int> spans;
        int lo = 0, hi = k;
        while (static_cast<int>(spans.size()) < count) {
            if (lo == hi) {
                spans.push_back(lo);
                break;
            }
            spans.push_back(lo++);
            if (static_cast<int>(spans.size()) < count) spans.push_back(hi--);
        }
        spans.resize(count);
        return spans;
    };

    if (roots.size() == 3) {
        // knots and a selection of span midpoints
        for (int m = 1; m <= k; ++m) out.push_back(m / double(k + 1));
        int midpoints = dim - 2 - k;
        for (int m : fill_order(midpoints)) out.push_back((m + 0.5) / (k + 1));
    } else {
        // one root per span, the doubled spans chosen ends-first
        int doubled = dim - 2 - (k + 1);
        std::vector<int> dbl = fill_order(std::max(doubled, 0));
        std::set<int> dblset(dbl.begin(), dbl.end());
        for (int m = 0; m <= k; ++m) {
            if (dblset.count(m)) {
                out.push_back(span_point(roots[0], m, k));
                out.push_back(span_point(roots[1], m, k));
            } else {
                int pick = (m <= k / 2) ? (m % 2) : 1 - ((k - m) % 2);
                out.push_back(span_point(roots[pick], m, k));
            }
        }
    }
    std::sort(out.begin(), out.end());
    if (static_cast<int>(out.size()) != dim)
        throw std::logic_error("maxreg_clustered: wrong cardinality");
    return out;
}

namespace {

struct LocalPoint {
    int patch;
    Vec2 zeta;
    // index metadata per direction: class 0 = plain p1, 1 = p2, 2 = truncated
    int cls_u, idx_u, cls_v, idx_v;
    bool replaced_zone = false; // set for the set2/set3 replacement points
};

struct IndexMap {
    // maps edge-frame (trans idx, along idx) of a given class size to patch
    // frame (u idx, v idx)
    Dihedral chart;
    std::pair<int, int> operator()(int it, int ia, int nt, int na) const {
        int a = it, b = ia, n_a = nt, n_b = na;
        if (chart.swap) {
            std::swap(a, b);
            std::swap(n_a, n_b);
        }
        if (chart.flip_u) a = n_a - 1 - a;
        if (chart.flip_v) b = n_b - 1 - b;
        return {a, b};
    }
};

} // namespace

PointSet assemble_points(const SmoothSpace& space, SchemeKind scheme, ProblemKind problem) {
    const MultiPatchDomain& dom = space.domain();
    const int s = space.s();
    const int k = space.k();
    const UnivariateSpace& sp2 = space.space_p2();
    const int n2 = sp2.dim();

    if ((problem == ProblemKind::poisson && s != 2) ||
        (problem == ProblemKind::biharmonic && s != 4))
        throw std::invalid_argument("problem requires s=2 (poisson) or s=4 (biharmonic)");
    if ((scheme == SchemeKind::set2 || scheme == SchemeKind::set3) &&
        !(dom.num_patches() == 2 && dom.inner_edges().size() == 1))
        throw std::invalid_argument(std::string(scheme_name(scheme)) +
                                    " is defined for two-patch domains with one inner edge");

    DirectionTables tables = (scheme == SchemeKind::greville) ? greville_tables(s, k)
                                                              : superconvergent_tables(s, k);

    // per-patch points, one per mixed basis function
    std::vector<LocalPoint> pts;
    for (int pi = 0; pi < dom.num_patches(); ++pi) {
        const MixedSpace2D& mx = space.mixed_space(pi);
        auto coord = [&](const Factor& f, int& cls) {
            if (f.degree_class == 1) {
                cls = 1;
                return tables.p2[f.index];
            }
            if (f.trunc_left || f.trunc_right) {
                cls = 2;
                return tables.trunc[f.index];
            }
            cls = 0;
            return tables.p1[f.index];
        };
        for (const MixedBasisFunction& f : mx.basis()) {
            LocalPoint lp;
            lp.patch = pi;
            lp.zeta.x() = coord(f.u, lp.cls_u);
            lp.idx_u = f.u.index;
            lp.zeta.y() = coord(f.v, lp.cls_v);
            lp.idx_v = f.v.index;
            pts.push_back(lp);
        }
    }

    // set2/set3: replace the along-edge sequences on the inner edge and its s
    // neighbouring high-degree columns per side by clustered superconvergent
    // points of the maximal-regularity spaces
    if (scheme == SchemeKind::set2 || scheme == SchemeKind::set3) {
        const InnerEdge& e = dom.inner_edges()[0];
        const EdgeFrame& fr = space.stored_edge_frame(e.id);
        IndexMap map_a{fr.chart_a}, map_b{fr.chart_b};

        // remove the zone: per patch all degree-(2s+1) x degree-(2s+1) points
        // whose transversal index (towards the edge) is <= s
        auto trans_idx = [&](const LocalPoint& lp, const IndexMap& im) {
            // invert: patch indices -> edge frame indices
            IndexMap inv{im.chart.inverse()};
            auto [it, ia] = inv(lp.idx_u, lp.idx_v, n2, n2);
            (void)ia;
            return it;
        };
        pts.erase(std::remove_if(pts.begin(), pts.end(),
                                 [&](const LocalPoint& lp) {
                                     if (lp.cls_u != 1 || lp.cls_v != 1) return false;
                                     if (lp.patch == fr.patch_a)
                                         return trans_idx(lp, map_a) <= s;
                                     if (lp.patch == fr.patch_b)
                                         return trans_idx(lp, map_b) <= s;
                                     return false;
                                 }),
                  pts.end());

        auto add_zone_point = [&](int patch, const Dihedral& chart, double trans, double along) {
            LocalPoint lp;
            lp.patch = patch;
            auto xy = chart(trans, along);
            lp.zeta = Vec2(xy[0], xy[1]);
            lp.cls_u = lp.cls_v = 1;
            lp.idx_u = lp.idx_v = -1;
            lp.replaced_zone = true;
            pts.push_back(lp);
        };

        // edge column: the clustered level-0 sequence; for set2 a second,
        // knot-midpoint based sequence of the same length is interleaved
        std::vector<double> lv0 = maxreg_clustered(s, k, 0);
        int owner = std::min(fr.patch_a, fr.patch_b);
        const Dihedral& owner_chart = (owner == fr.patch_a) ? fr.chart_a : fr.chart_b;
        for (double t : lv0) add_zone_point(owner, owner_chart, 0.0, t);
        if (scheme == SchemeKind::set2) {
            // complementary on-edge sequence: interior knots plus span
            // midpoints, thinned at the ends for the biharmonic case
            int want = static_cast<int>(lv0.size()) - ((s == 4) ? 6 : 0);
            std::vector<double> comp = {0.5 / (k + 1), 1.0 - 0.5 / (k + 1)};
            for (int m = 1; m <= k && static_cast<int>(comp.size()) < want; ++m)
                comp.push_back(m / double(k + 1));
            for (int m = 1; m <= k && static_cast<int>(comp.size()) < want; ++m)
                comp.push_back((m + 0.5) / (k + 1));
            std::sort(comp.begin(), comp.end());
            comp.resize(std::min<std::size_t>(comp.size(), want));
            for (double t : comp) add_zone_point(owner, owner_chart, 0.0, t);
        }

        // side columns at the transversal strip coordinates
        for (int level = 1; level <= s; ++level) {
            double trans = tables.p2[level];
            // Greville abscissae of the trace space S^{2s+1-l,2s-l}; the
            // clustered roots of the maximal-regularity spaces destabilize the
            // thinned square systems
            UnivariateSpace tr(2 * s + 1 - level, 2 * s - level, k);
            std::vector<double> seq;
            for (int j = 0; j < tr.dim(); ++j) seq.push_back(tr.greville_d(j));
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (scheme == SchemeKind::set2) {
                    add_zone_point(fr.patch_a, fr.chart_a, trans, seq[i]);
                    add_zone_point(fr.patch_b, fr.chart_b, trans, seq[i]);
                } else {
                    // set3: alternate consecutive pairs of points between the
                    // two sides
                    bool to_a = (i / 2) % 2 == 0;
                    if (to_a)
                        add_zone_point(fr.patch_a, fr.chart_a, trans, seq[i]);
                    else
                        add_zone_point(fr.patch_b, fr.chart_b, trans, seq[i]);
                }
            }
        }
    }

    // biharmonic separation: points excluded near the boundary ends of inner
    // edges (the first s/2 high-degree strips next to the corner)
    std::set<std::pair<int, std::pair<int, int>>> dropped;
    if (problem == ProblemKind::biharmonic && scheme != SchemeKind::set2 &&
        scheme != SchemeKind::set3) {
        for (const InnerEdge& e : dom.inner_edges()) {
            const EdgeFrame& fr = space.stored_edge_frame(e.id);
            for (int end = 0; end <= 1; ++end) {
                int vid = (end == 0) ? e.vertex0 : e.vertex1;
                if (!dom.vertices()[vid].boundary) continue;
                int along = (end == 0) ? 1 : n2 - 2;
                for (int trans = 1; trans <= s / 2; ++trans) {
                    for (auto [patch, chart] :
                         {std::pair<int, Dihedral>{fr.patch_a, fr.chart_a},
                          {fr.patch_b, fr.chart_b}}) {
                        IndexMap im{chart};
                        auto [a, b] = im(trans, along, n2, n2);
                        dropped.insert({patch, {a, b}});
                    }
                }
            }
        }
    }
    if (!dropped.empty())
        pts.erase(std::remove_if(pts.begin(), pts.end(),
                                 [&](const LocalPoint& lp) {
                                     return lp.cls_u == 1 && lp.cls_v == 1 &&
                                            dropped.count({lp.patch, {lp.idx_u, lp.idx_v}});
                                 }),
                  pts.end());

    // physical positions and global deduplication keeping the smallest patch
    struct Global {
        LocalPoint lp;
        Vec2 x;
    };
    std::vector<Global> globals;
    globals.reserve(pts.size());
    for (const LocalPoint& lp : pts)
        globals.push_back({lp, dom.patch(lp.patch).eval(lp.zeta.x(), lp.zeta.y())});

    const double tol = 1e-10 * dom.diameter();
    std::vector<int> order(globals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (globals[a].x.x() != globals[b].x.x()) return globals[a].x.x() < globals[b].x.x();
        return globals[a].x.y() < globals[b].x.y();
    });
    std::vector<bool> drop(globals.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (drop[order[i]]) continue;
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (globals[order[j]].x.x() - globals[order[i]].x.x() > tol) break;
            if ((globals[order[j]].x - globals[order[i]].x).norm() <= tol) {
                int keep = order[i], other = order[j];
                if (globals[other].lp.patch < globals[keep].lp.patch) std::swap(keep, other);
                drop[other] = true;
            }
        }
    }

    // tagging
    PointSet out;
    for (std::size_t i = 0; i < globals.size(); ++i) {
        if (drop[i]) continue;
        const LocalPoint& lp = globals[i].lp;
        CollocationPoint cp;
        cp.patch = lp.patch;
        cp.zeta = lp.zeta;
        cp.x = globals[i].x;

        // boundary test: a local coordinate at 0/1 on a non-inner side
        auto on_side = [&](Side sd) {
            switch (sd) {
                case Side::left: return lp.zeta.x() == 0.0;
                case Side::right: return lp.zeta.x() == 1.0;
                case Side::bottom: return lp.zeta.y() == 0.0;
                case Side::top: return lp.zeta.y() == 1.0;
            }
            return false;
        };
        bool on_boundary = false;
        for (Side sd : {Side::left, Side::right, Side::bottom, Side::top})
            if (on_side(sd) && !dom.side_is_inner(lp.patch, sd)) on_boundary = true;

        if (on_boundary) {
            cp.tag = PointTag::dirichlet;
            out.points.push_back(cp);
            continue;
        }
        cp.tag = PointTag::interior;

        if (problem == ProblemKind::biharmonic && !lp.replaced_zone) {
            // first-interior-layer points give a Neumann row at their
            // parametric projection onto the adjacent boundary side
            auto layer_index = [&](int cls, int idx, bool near_high) {
                int n = (cls == 1) ? n2 : space.mixed_space(0).space_p1().dim();
                if (cls == 2) return false; // truncated factors stay clear
                return near_high ? idx == n - 2 : idx == 1;
            };
            for (Side sd : {Side::left, Side::right, Side::bottom, Side::top}) {
                if (dom.side_is_inner(lp.patch, sd)) continue;
                bool fl = false;
                Vec2 proj = lp.zeta;
                switch (sd) {
                    case Side::left: fl = layer_index(lp.cls_u, lp.idx_u, false); proj.x() = 0.0; break;
                    case Side::right: fl = layer_index(lp.cls_u, lp.idx_u, true); proj.x() = 1.0; break;
                    case Side::bottom: fl = layer_index(lp.cls_v, lp.idx_v, false); proj.y() = 0.0; break;
                    case Side::top: fl = layer_index(lp.cls_v, lp.idx_v, true); proj.y() = 1.0; break;
                }
                if (!fl) continue;
                // projections onto corners have no normal; keep the PDE row
                bool corner = (proj.x() == 0.0 || proj.x() == 1.0) &&
                              (proj.y() == 0.0 || proj.y() == 1.0);
                if (corner) continue;
                cp.tag = PointTag::neumann;
                cp.neumann_side = sd;
                cp.zeta_boundary = proj;
                break; // smallest side index wins
            }
        }
        out.points.push_back(cp);
    }

    // deterministic ordering: interior, dirichlet, neumann, stable within
    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const CollocationPoint& a, const CollocationPoint& b) {
                         return static_cast<int>(a.tag) < static_cast<int>(b.tag);
                     });
    return out;
}

} // namespace mdcol
