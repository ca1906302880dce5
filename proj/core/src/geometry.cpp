#include "mdcol/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

namespace mdcol {

Patch::Patch(UnivariateSpace su, UnivariateSpace sv, std::vector<Vec2R> net)
    : su_(std::move(su)), sv_(std::move(sv)), net_(std::move(net)) {
    if (static_cast<int>(net_.size()) != su_.dim() * sv_.dim())
        throw std::invalid_argument("Patch: control net size mismatch");
    net_d_.resize(net_.size());
    for (std::size_t i = 0; i < net_.size(); ++i)
        net_d_[i] = Vec2(net_[i].x.to_double(), net_[i].y.to_double());
}

Patch Patch::bilinear(const std::array<Vec2R, 4>& c) {
    UnivariateSpace lin(1, 0, 0);
    // net is row-major in (u index, v index): c00, c01 / c10, c11
    std::vector<Vec2R> net = {c[0], c[2], c[1], c[3]};
    return Patch(lin, lin, std::move(net));
}

Patch Patch::spline(int degree, int regularity, int inner_knots, std::vector<Vec2R> net) {
    UnivariateSpace sp(degree, regularity, inner_knots);
    return Patch(sp, sp, std::move(net));
}

Vec2 Patch::eval(double x, double y) const {
    GeometryJet j = jet(x, y, 0);
    return j.at(0, 0);
}

Eigen::Matrix2d Patch::jacobian(double x, double y) const {
    GeometryJet j = jet(x, y, 1);
    Eigen::Matrix2d J;
    J.col(0) = j.at(1, 0);
    J.col(1) = j.at(0, 1);
    return J;
}

GeometryJet Patch::jet(double x, double y, int order) const {
    GeometryJet out;
    out.order = order;
    out.d.assign((order + 1) * (order + 1), Vec2::Zero());
    Eigen::MatrixXd Nu, Nv;
    int fu = 0, fv = 0;
    su_.eval_active(x, order, Nu, fu);
    sv_.eval_active(y, order, Nv, fv);
    const int wu = su_.degree() + 1, wv = sv_.degree() + 1;
    for (int a = 0; a <= order; ++a)
        for (int b = 0; b <= order; ++b) {
            Vec2 v = Vec2::Zero();
            for (int i = 0; i < wu; ++i) {
                if (Nu(a, i) == 0.0) continue;
                for (int j = 0; j < wv; ++j)
                    v += Nu(a, i) * Nv(b, j) * net_d_[(fu + i) * sv_.dim() + (fv + j)];
            }
            out.at(a, b) = v;
        }
    return out;
}

Vec2R Patch::corner(Corner c) const {
    int a = (c == Corner::br || c == Corner::tr) ? su_.dim() - 1 : 0;
    int b = (c == Corner::tl || c == Corner::tr) ? sv_.dim() - 1 : 0;
    return net_[a * sv_.dim() + b];
}

std::vector<Vec2R> Patch::side_controls(Side s) const {
    std::vector<Vec2R> out;
    const int nu = su_.dim(), nv = sv_.dim();
    switch (s) {
        case Side::left:
            for (int b = 0; b < nv; ++b) out.push_back(net_[0 * nv + b]);
            break;
        case Side::right:
            for (int b = 0; b < nv; ++b) out.push_back(net_[(nu - 1) * nv + b]);
            break;
        case Side::bottom:
            for (int a = 0; a < nu; ++a) out.push_back(net_[a * nv + 0]);
            break;
        case Side::top:
            for (int a = 0; a < nu; ++a) out.push_back(net_[a * nv + (nv - 1)]);
            break;
    }
    return out;
}

Dihedral side_chart(Side s, bool reversed) {
    Dihedral d;
    switch (s) {
        case Side::left: d = {false, false, reversed}; break;
        case Side::right: d = {false, true, reversed}; break;
        case Side::bottom: d = {true, reversed, false}; break;
        case Side::top: d = {true, reversed, true}; break;
    }
    return d;
}

namespace {

bool controls_equal(const std::vector<Vec2R>& a, const std::vector<Vec2R>& b, bool reversed) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec2R& q = b[reversed ? b.size() - 1 - i : i];
        if (!(a[i].x == q.x && a[i].y == q.y)) return false;
    }
    return true;
}

double edge_frame_det(const Patch& p, const Dihedral& chart, double t) {
    auto xy = chart(0.0, t);
    Eigen::Matrix2d J = p.jacobian(xy[0], xy[1]);
    // chain rule through the (affine) chart
    Eigen::Matrix2d C = Eigen::Matrix2d::Zero();
    auto o = chart(0.0, 0.0);
    auto du = chart(1.0, 0.0);
    auto dv = chart(0.0, 1.0);
    C(0, 0) = du[0] - o[0];
    C(1, 0) = du[1] - o[1];
    C(0, 1) = dv[0] - o[0];
    C(1, 1) = dv[1] - o[1];
    return (J * C).determinant();
}

struct CornerKey {
    Rational x, y;
    bool operator<(const CornerKey& o) const {
        if (x != o.x) return x < o.x;
        return y < o.y;
    }
};

} // namespace

MultiPatchDomain MultiPatchDomain::build(std::vector<Patch> patches,
                                         const std::vector<InnerEdgeSpec>& specs,
                                         std::string name) {
    MultiPatchDomain d;
    d.name_ = std::move(name);
    d.patches_ = std::move(patches);
    const int np = d.num_patches();
    if (np == 0) throw std::invalid_argument("MultiPatchDomain: no patches");

    // regularity of every mapping: the Jacobian determinant may not change
    // sign (checked on a 30 x 30 sample grid)
    for (int i = 0; i < np; ++i) {
        double sign = 0.0;
        for (int a = 0; a < 30; ++a)
            for (int b = 0; b < 30; ++b) {
                double x = (a + 0.5) / 30.0, y = (b + 0.5) / 30.0;
                double det = d.patches_[i].jacobian(x, y).determinant();
                if (det == 0.0 || (sign != 0.0 && sign * det < 0.0))
                    throw std::runtime_error("patch " + std::to_string(i) +
                                             ": geometry mapping is singular or folded");
                if (sign == 0.0) sign = det > 0 ? 1.0 : -1.0;
            }
    }

    // collect inner edges: explicit specs, otherwise exact side matching
    std::vector<InnerEdgeSpec> edges = specs;
    if (edges.empty()) {
        for (int i = 0; i < np; ++i)
            for (Side si : {Side::left, Side::right, Side::bottom, Side::top})
                for (int j = i + 1; j < np; ++j)
                    for (Side sj : {Side::left, Side::right, Side::bottom, Side::top}) {
                        auto ci = d.patches_[i].side_controls(si);
                        auto cj = d.patches_[j].side_controls(sj);
                        if (controls_equal(ci, cj, false))
                            edges.push_back({i, si, j, sj, false});
                        else if (controls_equal(ci, cj, true))
                            edges.push_back({i, si, j, sj, true});
                    }
    } else {
        for (const InnerEdgeSpec& e : edges) {
            auto ca = d.patches_.at(e.patch_a).side_controls(e.side_a);
            auto cb = d.patches_.at(e.patch_b).side_controls(e.side_b);
            if (!controls_equal(ca, cb, e.reversed))
                throw std::runtime_error("inner edge between patch " +
                                         std::to_string(e.patch_a) + " and patch " +
                                         std::to_string(e.patch_b) +
                                         ": side control points do not match");
        }
    }

    std::set<std::pair<int, Side>> used;
    for (const InnerEdgeSpec& e : edges) {
        InnerEdge ie;
        ie.id = static_cast<int>(d.inner_edges_.size());
        ie.a = {e.patch_a, e.side_a, false};
        ie.b = {e.patch_b, e.side_b, e.reversed};
        // orient so that end a carries the negative edge-frame determinant
        double da = edge_frame_det(d.patches_[e.patch_a], ie.a.chart(), 0.5);
        double db = edge_frame_det(d.patches_[e.patch_b], ie.b.chart(), 0.5);
        if (da * db > 0.0)
            throw std::runtime_error("inner edge " + std::to_string(ie.id) +
                                     ": inconsistent orientations across the edge");
        if (da > 0.0) std::swap(ie.a, ie.b);
        if (used.count({ie.a.patch, ie.a.side}) || used.count({ie.b.patch, ie.b.side}))
            throw std::runtime_error("side shared by more than one inner edge");
        used.insert({ie.a.patch, ie.a.side});
        used.insert({ie.b.patch, ie.b.side});
        d.inner_edges_.push_back(ie);
    }

    for (int i = 0; i < np; ++i)
        for (Side s : {Side::left, Side::right, Side::bottom, Side::top})
            if (!used.count({i, s})) {
                BoundaryEdge be;
                be.id = static_cast<int>(d.boundary_edges_.size());
                be.owner = {i, s, false};
                d.boundary_edges_.push_back(be);
            }

    // vertices from exact corner positions
    std::map<CornerKey, int> vid;
    std::vector<std::vector<std::pair<int, Corner>>> members;
    for (int i = 0; i < np; ++i)
        for (Corner c : {Corner::bl, Corner::br, Corner::tl, Corner::tr}) {
            Vec2R pos = d.patches_[i].corner(c);
            CornerKey key{pos.x, pos.y};
            auto it = vid.find(key);
            if (it == vid.end()) {
                it = vid.emplace(key, static_cast<int>(members.size())).first;
                members.emplace_back();
            }
            members[it->second].push_back({i, c});
        }

    // helper: inner edge at (patch, side), or -1
    auto inner_at = [&](int patch, Side s) {
        for (const InnerEdge& ie : d.inner_edges_)
            if ((ie.a.patch == patch && ie.a.side == s) ||
                (ie.b.patch == patch && ie.b.side == s))
                return ie.id;
        return -1;
    };

    for (std::size_t v = 0; v < members.size(); ++v) {
        Vertex vert;
        vert.id = static_cast<int>(d.vertices_.size());
        {
            Vec2R p = d.patches_[members[v][0].first].corner(members[v][0].second);
            vert.pos = Vec2(p.x.to_double(), p.y.to_double());
        }
        // local incidence: per member patch, the two sides meeting the corner
        struct Entry {
            int patch;
            Corner corner;
            std::array<std::pair<Side, int>, 2> sides; // side, inner edge id or -1
        };
        std::vector<Entry> entries;
        int boundary_slots = 0;
        for (auto [pi, c] : members[v]) {
            Entry e;
            e.patch = pi;
            e.corner = c;
            int idx = 0;
            for (Side s : {Side::left, Side::right, Side::bottom, Side::top})
                if (corner_touches(c, s)) e.sides[idx++] = {s, inner_at(pi, s)};
            for (auto& [s, ie] : e.sides)
                if (ie < 0) ++boundary_slots;
            entries.push_back(e);
        }
        vert.boundary = boundary_slots > 0;
        if (!vert.boundary && boundary_slots % 2 != 0)
            throw std::runtime_error("vertex: inconsistent incidence");

        // order the fan so that consecutive patches share an inner edge;
        // each entry's prev edge maps to the bottom, next edge to the left
        auto find_entry_with_edge = [&](int edge, int skip_patch) -> int {
            for (std::size_t i = 0; i < entries.size(); ++i) {
                if (entries[i].patch == skip_patch) continue;
                if (entries[i].sides[0].second == edge || entries[i].sides[1].second == edge)
                    return static_cast<int>(i);
            }
            return -1;
        };

        int start = 0;
        if (vert.boundary) {
            // start at a patch with a boundary slot used as "previous" edge;
            // pick the smallest such patch index for determinism
            start = -1;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                bool has_bnd = entries[i].sides[0].second < 0 || entries[i].sides[1].second < 0;
                if (has_bnd && (start < 0 || entries[i].patch < entries[start].patch))
                    start = static_cast<int>(i);
            }
        } else {
            for (std::size_t i = 1; i < entries.size(); ++i)
                if (entries[i].patch < entries[start].patch) start = static_cast<int>(i);
        }

        std::vector<int> order;
        std::vector<int> prev_edge_of;
        int cur = start;
        int prev_edge = -1;
        if (vert.boundary) {
            const Entry& e = entries[cur];
            prev_edge = -1; // boundary slot
            if (e.sides[0].second < 0 && e.sides[1].second < 0) {
                // valency-one vertex
            }
        } else {
            // inner vertex: previous edge of the start patch is the incident
            // edge shared with the largest-index neighbour, fixing the walk
            const Entry& e = entries[cur];
            int e0 = e.sides[0].second, e1 = e.sides[1].second;
            int n0 = -1, n1 = -1;
            for (const Entry& o : entries) {
                if (o.patch == e.patch) continue;
                if (o.sides[0].second == e0 || o.sides[1].second == e0) n0 = o.patch;
                if (o.sides[0].second == e1 || o.sides[1].second == e1) n1 = o.patch;
            }
            prev_edge = (n0 > n1) ? e0 : e1;
        }

        std::set<int> visited;
        while (true) {
            const Entry& e = entries[cur];
            order.push_back(cur);
            prev_edge_of.push_back(prev_edge);
            visited.insert(cur);
            int next_edge =
                (e.sides[0].second == prev_edge) ? e.sides[1].second : e.sides[0].second;
            if (next_edge < 0) break; // boundary slot closes the fan
            int nxt = find_entry_with_edge(next_edge, e.patch);
            if (nxt < 0 || visited.count(nxt)) break; // cycle closed (inner vertex)
            prev_edge = next_edge;
            cur = nxt;
        }
        if (order.size() != entries.size())
            throw std::runtime_error("vertex fan: patches around vertex are not connected");

        for (std::size_t i = 0; i < order.size(); ++i) {
            const Entry& e = entries[order[i]];
            VertexFanEntry fe;
            fe.patch = e.patch;
            fe.corner = e.corner;
            fe.prev_edge = prev_edge_of[i];
            fe.next_edge =
                (e.sides[0].second == fe.prev_edge) ? e.sides[1].second : e.sides[0].second;
            // chart: prev side -> bottom, next side -> left, corner -> (0,0)
            Side prev_side =
                (e.sides[0].second == fe.prev_edge &&
                 (fe.prev_edge >= 0 || e.sides[1].second == fe.next_edge))
                    ? e.sides[0].first
                    : e.sides[1].first;
            Side next_side = (prev_side == e.sides[0].first) ? e.sides[1].first
                                                             : e.sides[0].first;
            bool found = false;
            for (const Dihedral& g : Dihedral::all()) {
                if (g.map(Side::bottom) == prev_side && g.map(Side::left) == next_side &&
                    g.map(Corner::bl) == e.corner) {
                    fe.chart = g;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::logic_error("vertex fan: no chart");
            vert.fan.push_back(fe);
        }
        d.vertices_.push_back(vert);
    }

    // ambiguous prev/next for valency-2 boundary vertices around one inner
    // edge: both sides carry the inner edge for one patch; nothing to fix,
    // handled by the walk above.

    // edge-to-vertex links
    auto vertex_at = [&](const Vec2R& p) {
        CornerKey key{p.x, p.y};
        return vid.at(key);
    };
    for (InnerEdge& ie : d.inner_edges_) {
        const Patch& pa = d.patches_[ie.a.patch];
        Dihedral ca = ie.a.chart();
        auto p0 = ca(0.0, 0.0);
        auto p1 = ca(0.0, 1.0);
        auto corner_of = [&](double x, double y) {
            bool uh = x > 0.5, vh = y > 0.5;
            return uh ? (vh ? Corner::tr : Corner::br) : (vh ? Corner::tl : Corner::bl);
        };
        ie.vertex0 = vertex_at(pa.corner(corner_of(p0[0], p0[1])));
        ie.vertex1 = vertex_at(pa.corner(corner_of(p1[0], p1[1])));
    }
    for (BoundaryEdge& be : d.boundary_edges_) {
        const Patch& pa = d.patches_[be.owner.patch];
        Dihedral ca = be.owner.chart();
        auto p0 = ca(0.0, 0.0);
        auto p1 = ca(0.0, 1.0);
        auto corner_of = [&](double x, double y) {
            bool uh = x > 0.5, vh = y > 0.5;
            return uh ? (vh ? Corner::tr : Corner::br) : (vh ? Corner::tl : Corner::bl);
        };
        be.vertex0 = vertex_at(pa.corner(corner_of(p0[0], p0[1])));
        be.vertex1 = vertex_at(pa.corner(corner_of(p1[0], p1[1])));
    }

    // edge matching invariant
    for (const InnerEdge& ie : d.inner_edges_) {
        Dihedral ca = ie.a.chart(), cb = ie.b.chart();
        for (int i = 0; i <= 50; ++i) {
            double t = i / 50.0;
            auto xa = ca(0.0, t);
            auto xb = cb(0.0, t);
            Vec2 fa = d.patches_[ie.a.patch].eval(xa[0], xa[1]);
            Vec2 fb = d.patches_[ie.b.patch].eval(xb[0], xb[1]);
            if ((fa - fb).norm() > 1e-12)
                throw std::runtime_error("inner edge " + std::to_string(ie.id) +
                                         ": sides do not parameterize the same curve");
        }
    }

    // domain diameter from control points
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Patch& p : d.patches_)
        for (int a = 0; a < p.net_rows(); ++a)
            for (int b = 0; b < p.net_cols(); ++b) {
                Vec2R c = p.control(a, b);
                lo_x = std::min(lo_x, c.x.to_double());
                hi_x = std::max(hi_x, c.x.to_double());
                lo_y = std::min(lo_y, c.y.to_double());
                hi_y = std::max(hi_y, c.y.to_double());
            }
    d.diameter_ = std::hypot(hi_x - lo_x, hi_y - lo_y);

    return d;
}

EdgeFlags MultiPatchDomain::patch_flags(int i) const {
    EdgeFlags f;
    for (const InnerEdge& ie : inner_edges_) {
        if (ie.a.patch == i) f.inner.insert(ie.a.side);
        if (ie.b.patch == i) f.inner.insert(ie.b.side);
    }
    for (const Vertex& v : vertices_)
        if (v.valency() == 1)
            for (const VertexFanEntry& fe : v.fan)
                if (fe.patch == i) f.valency1.insert(fe.corner);
    return f;
}

bool MultiPatchDomain::side_is_inner(int patch, Side s) const {
    for (const InnerEdge& ie : inner_edges_)
        if ((ie.a.patch == patch && ie.a.side == s) || (ie.b.patch == patch && ie.b.side == s))
            return true;
    return false;
}

} // namespace mdcol
