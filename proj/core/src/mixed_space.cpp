#include "mdcol/mixed_space.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace mdcol {

const char* side_name(Side s) {
    switch (s) {
        case Side::left: return "left";
        case Side::right: return "right";
        case Side::bottom: return "bottom";
        case Side::top: return "top";
    }
    return "?";
}

const char* corner_name(Corner c) {
    switch (c) {
        case Corner::bl: return "bl";
        case Corner::br: return "br";
        case Corner::tl: return "tl";
        case Corner::tr: return "tr";
    }
    return "?";
}

Side Dihedral::map(Side s) const {
    if (swap) {
        switch (s) {
            case Side::left: s = Side::bottom; break;
            case Side::bottom: s = Side::left; break;
            case Side::right: s = Side::top; break;
            case Side::top: s = Side::right; break;
        }
    }
    if (flip_u) {
        if (s == Side::left) s = Side::right;
        else if (s == Side::right) s = Side::left;
    }
    if (flip_v) {
        if (s == Side::bottom) s = Side::top;
        else if (s == Side::top) s = Side::bottom;
    }
    return s;
}

Corner Dihedral::map(Corner c) const {
    bool at_left = (c == Corner::bl || c == Corner::tl);
    bool at_bottom = (c == Corner::bl || c == Corner::br);
    if (swap) std::swap(at_left, at_bottom);
    if (flip_u) at_left = !at_left;
    if (flip_v) at_bottom = !at_bottom;
    if (at_left) return at_bottom ? Corner::bl : Corner::tl;
    return at_bottom ? Corner::br : Corner::tr;
}

Dihedral Dihedral::then(const Dihedral& g) const {
    // composite action (g o *this) found by matching on generators
    for (const Dihedral& h : all()) {
        auto p1 = g(operator()(0.25, 0.5)[0], operator()(0.25, 0.5)[1]);
        auto q1 = h(0.25, 0.5);
        auto p2 = g(operator()(0.75, 0.125)[0], operator()(0.75, 0.125)[1]);
        auto q2 = h(0.75, 0.125);
        if (std::abs(p1[0] - q1[0]) < 1e-12 && std::abs(p1[1] - q1[1]) < 1e-12 &&
            std::abs(p2[0] - q2[0]) < 1e-12 && std::abs(p2[1] - q2[1]) < 1e-12)
            return h;
    }
    throw std::logic_error("Dihedral::then: no match");
}

Dihedral Dihedral::inverse() const {
    for (const Dihedral& h : all()) {
        auto p = h(operator()(0.25, 0.5)[0], operator()(0.25, 0.5)[1]);
        auto q = h(operator()(0.75, 0.125)[0], operator()(0.75, 0.125)[1]);
        if (std::abs(p[0] - 0.25) < 1e-12 && std::abs(p[1] - 0.5) < 1e-12 &&
            std::abs(q[0] - 0.75) < 1e-12 && std::abs(q[1] - 0.125) < 1e-12)
            return h;
    }
    throw std::logic_error("Dihedral::inverse: no match");
}

const std::array<Dihedral, 8>& Dihedral::all() {
    static const std::array<Dihedral, 8> g = {{
        {false, false, false},
        {false, true, false},
        {false, false, true},
        {false, true, true},
        {true, false, false},
        {true, true, false},
        {true, false, true},
        {true, true, true},
    }};
    return g;
}

int MixedSpace2D::dimension(int s, int k, int E, int V) {
    if (E < 1 || E > 4 || V < 0 || V > 2) throw std::invalid_argument("dimension: bad E or V");
    return (k + 2) * (k + 2) + ((2 + 2 * E) * k + (12 - E - 2 * V)) * s +
           (E * k + (5 - V)) * s * s;
}

namespace {

struct Range {
    int lo, hi; // inclusive
    bool contains(int j) const { return lo <= j && j <= hi; }
};

Factor plain(int cls, int j) { return Factor{cls, j, false, false}; }

Factor trunc(int j, bool left, bool right) { return Factor{0, j, left, right}; }

Factor reflect_factor(const Factor& f, int n1, int n2) {
    Factor g = f;
    g.index = (f.degree_class == 0 ? n1 : n2) - 1 - f.index;
    g.trunc_left = f.trunc_right;
    g.trunc_right = f.trunc_left;
    return g;
}

} // namespace

MixedBasisFunction map_mixed_function(const MixedBasisFunction& f, const Dihedral& g, int n1,
                                      int n2) {
    MixedBasisFunction out = f;
    if (g.swap) std::swap(out.u, out.v);
    if (g.flip_u) out.u = reflect_factor(out.u, n1, n2);
    if (g.flip_v) out.v = reflect_factor(out.v, n1, n2);
    if (out.corner_trunc) out.corner_trunc = g.map(*out.corner_trunc);
    return out;
}

MixedSpace2D::MixedSpace2D(int s, int k, EdgeFlags flags)
    : s_(s), k_(k), flags_(std::move(flags)),
      sp1_(s + 1, s, k), sp2_(2 * s + 1, s, k) {
    if (s != 2 && s != 4) throw std::invalid_argument("MixedSpace2D: s must be 2 or 4");
    if (k < s + 1) throw std::invalid_argument("MixedSpace2D: k too small (need k >= s+1)");
    if (flags_.inner.empty())
        throw std::invalid_argument("MixedSpace2D: at least one inner edge required");
    for (Corner c : flags_.valency1)
        for (Side sd : flags_.inner)
            if (corner_touches(c, sd))
                throw std::invalid_argument(
                    "MixedSpace2D: valency-1 corner incident to an inner edge");
    p1_in_p2_ = embedding_matrix(sp1_, sp2_).transpose();
    enumerate();
}

void MixedSpace2D::enumerate() {
    const int s = s_;
    const int n1 = sp1_.dim();
    const int n2 = sp2_.dim();

    // canonical inner-edge placements per number of inner edges
    const std::set<Side> L{Side::left}, B{Side::bottom};
    std::set<Side> canon;
    std::vector<Corner> eligible;
    const int E = static_cast<int>(flags_.inner.size());
    bool adjacent2 = false;
    if (E == 2) {
        auto it = flags_.inner.begin();
        Side a = *it++, b = *it;
        adjacent2 = !((a == Side::left && b == Side::right) ||
                      (a == Side::bottom && b == Side::top));
    }
    switch (E) {
        case 4: canon = {Side::left, Side::right, Side::bottom, Side::top}; break;
        case 3: canon = {Side::left, Side::bottom, Side::top}; break;
        case 2:
            canon = adjacent2 ? std::set<Side>{Side::left, Side::bottom}
                              : std::set<Side>{Side::bottom, Side::top};
            eligible = adjacent2 ? std::vector<Corner>{Corner::tr} : std::vector<Corner>{};
            break;
        case 1:
            canon = {Side::bottom};
            eligible = {Corner::tl, Corner::tr};
            break;
        default: throw std::invalid_argument("MixedSpace2D: unsupported edge count");
    }

    // dihedral map carrying the canonical placement onto the requested one
    Dihedral g;
    bool found = false;
    for (const Dihedral& h : Dihedral::all()) {
        std::set<Side> mapped;
        for (Side sd : canon) mapped.insert(h.map(sd));
        if (mapped == flags_.inner) { g = h; found = true; break; }
    }
    if (!found) throw std::logic_error("MixedSpace2D: no dihedral map to canonical layout");

    Dihedral ginv = g.inverse();
    std::set<Corner> v1_canon;
    for (Corner c : flags_.valency1) v1_canon.insert(ginv.map(c));
    for (Corner c : v1_canon)
        if (std::find(eligible.begin(), eligible.end(), c) == eligible.end())
            throw std::invalid_argument("MixedSpace2D: valency-1 corner not admissible here");

    std::vector<Corner> upgrades; // eligible corners of patch valency > 1
    for (Corner c : eligible)
        if (!v1_canon.count(c)) upgrades.push_back(c);
    if (!upgrades.empty() && k_ < s + 2)
        throw std::invalid_argument("MixedSpace2D: k too small for corner upgrades");

    // canonical index blocks; m(left/right) marks truncation toward inner sides
    const bool iL = canon.count(Side::left), iR = canon.count(Side::right);
    const bool iB = canon.count(Side::bottom), iT = canon.count(Side::top);
    auto band = [&](int n) { return std::vector<Range>{{1, s}, {n - s - 1, n - 2}}; };

    std::vector<MixedBasisFunction> s1, s1bar, s2;

    auto add_s1_block = [&](Range ju, Range jv) {
        for (int a = ju.lo; a <= ju.hi; ++a)
            for (int b = jv.lo; b <= jv.hi; ++b)
                s1.push_back({BasisClass::S1, plain(0, a), plain(0, b), std::nullopt});
    };
    auto add_s1bar = [&](int a, bool tu, int b, bool tv) {
        s1bar.push_back({BasisClass::S1bar,
                         tu ? trunc(a, iL, iR) : plain(0, a),
                         tv ? trunc(b, iB, iT) : plain(0, b), std::nullopt});
    };
    auto add_s2_block = [&](Range ju, Range jv) {
        for (int a = ju.lo; a <= ju.hi; ++a)
            for (int b = jv.lo; b <= jv.hi; ++b)
                s2.push_back({BasisClass::S2, plain(1, a), plain(1, b), std::nullopt});
    };

    if (E == 4) {
        add_s1_block({s + 1, n1 - s - 2}, {s + 1, n1 - s - 2});
        for (const Range& ru : band(n1))
            for (int a = ru.lo; a <= ru.hi; ++a)
                for (int b = 1; b <= n1 - 2; ++b) add_s1bar(a, true, b, true);
        for (int a = s + 1; a <= n1 - s - 2; ++a)
            for (const Range& rv : band(n1))
                for (int b = rv.lo; b <= rv.hi; ++b) add_s1bar(a, true, b, true);
        add_s2_block({0, s}, {0, n2 - 1});
        add_s2_block({n2 - s - 1, n2 - 1}, {0, n2 - 1});
        add_s2_block({s + 1, n2 - s - 2}, {0, s});
        add_s2_block({s + 1, n2 - s - 2}, {n2 - s - 1, n2 - 1});
    } else if (E == 3) {
        add_s1_block({s + 1, n1 - 1}, {s + 1, n1 - s - 2});
        for (int a = 1; a <= s; ++a)
            for (int b = 1; b <= n1 - 2; ++b) add_s1bar(a, true, b, true);
        for (int a = s + 1; a <= n1 - 1; ++a)
            for (const Range& rv : band(n1))
                for (int b = rv.lo; b <= rv.hi; ++b) add_s1bar(a, false, b, true);
        add_s2_block({0, s}, {0, n2 - 1});
        add_s2_block({s + 1, n2 - 1}, {0, s});
        add_s2_block({s + 1, n2 - 1}, {n2 - s - 1, n2 - 1});
    } else if (E == 2 && adjacent2) {
        add_s1_block({s + 1, n1 - 1}, {s + 1, n1 - 1});
        for (int a = 1; a <= s; ++a)
            for (int b = 1; b <= s; ++b) add_s1bar(a, true, b, true);
        for (int a = 1; a <= s; ++a)
            for (int b = s + 1; b <= n1 - 1; ++b) add_s1bar(a, true, b, false);
        for (int a = s + 1; a <= n1 - 1; ++a)
            for (int b = 1; b <= s; ++b) add_s1bar(a, false, b, true);
        add_s2_block({0, s}, {0, n2 - 1});
        add_s2_block({s + 1, n2 - 1}, {0, s});
    } else if (E == 2) { // opposite, bottom and top
        add_s1_block({0, n1 - 1}, {s + 1, n1 - s - 2});
        for (int a = 0; a <= n1 - 1; ++a)
            for (const Range& rv : band(n1))
                for (int b = rv.lo; b <= rv.hi; ++b) add_s1bar(a, false, b, true);
        add_s2_block({0, n2 - 1}, {0, s});
        add_s2_block({0, n2 - 1}, {n2 - s - 1, n2 - 1});
    } else { // E == 1, bottom
        add_s1_block({0, n1 - 1}, {s + 1, n1 - 1});
        for (int a = 0; a <= n1 - 1; ++a)
            for (int b = 1; b <= s; ++b) add_s1bar(a, false, b, true);
        add_s2_block({0, n2 - 1}, {0, s});
    }

    // Corners free of inner edges but of patch valency > 1 swap the local
    // degree-(s+1) block for a degree-(2s+1) one: remove the tensor B-splines
    // alive at the corner, add them back with the corner coefficient block
    // zeroed, and append the plain high-degree corner block.
    for (Corner c : upgrades) {
        bool uh = (c == Corner::br || c == Corner::tr); // corner at u = 1
        bool vh = (c == Corner::tl || c == Corner::tr); // corner at v = 1
        Range bu1 = uh ? Range{n1 - s - 2, n1 - 1} : Range{0, s + 1};
        Range bv1 = vh ? Range{n1 - s - 2, n1 - 1} : Range{0, s + 1};
        s1.erase(std::remove_if(s1.begin(), s1.end(),
                                [&](const MixedBasisFunction& f) {
                                    return bu1.contains(f.u.index) && bv1.contains(f.v.index);
                                }),
                 s1.end());
        int extreme = uh ? n1 - 1 : 0;
        int vextreme = vh ? n1 - 1 : 0;
        for (int a = bu1.lo; a <= bu1.hi; ++a)
            for (int b = bv1.lo; b <= bv1.hi; ++b) {
                if (a == extreme && b == vextreme) continue;
                s1bar.push_back({BasisClass::S1bar, plain(0, a), plain(0, b), c});
            }
        Range bu2 = uh ? Range{n2 - s - 1, n2 - 1} : Range{0, s};
        Range bv2 = vh ? Range{n2 - s - 1, n2 - 1} : Range{0, s};
        add_s2_block(bu2, bv2);
    }

    basis_.clear();
    basis_.reserve(s1.size() + s1bar.size() + s2.size());
    auto append_mapped = [&](std::vector<MixedBasisFunction>& v) {
        for (const MixedBasisFunction& f : v) basis_.push_back(map_mixed_function(f, g, n1, n2));
    };
    append_mapped(s1);
    append_mapped(s1bar);
    append_mapped(s2);
}

Eigen::VectorXd MixedSpace2D::factor_p2(const Factor& f) const {
    if (f.degree_class == 1) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(sp2_.dim());
        e[f.index] = 1.0;
        return e;
    }
    Eigen::VectorXd mu = p1_in_p2_.row(f.index).transpose();
    const int n2 = sp2_.dim();
    if (f.trunc_left)
        for (int j = 0; j <= s_; ++j) mu[j] = 0.0;
    if (f.trunc_right)
        for (int j = n2 - s_ - 1; j < n2; ++j) mu[j] = 0.0;
    return mu;
}

Eigen::MatrixXd MixedSpace2D::eval(double x, double y, int max_deriv) const {
    const int nd = max_deriv;
    const int n2 = sp2_.dim();
    Eigen::MatrixXd Nu, Nv;
    int fu = 0, fv = 0;
    sp2_.eval_active(x, nd, Nu, fu);
    sp2_.eval_active(y, nd, Nv, fv);
    const int w = sp2_.degree() + 1;

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), (nd + 1) * (nd + 1));
    std::map<std::array<int, 4>, Eigen::VectorXd> fcache;
    auto factor_vals = [&](const Factor& f, const Eigen::MatrixXd& N, int first) {
        std::array<int, 4> key{f.degree_class, f.index, f.trunc_left ? 1 : 0,
                               f.trunc_right ? 2 : 0};
        key[3] += (&N == &Nv) ? 4 : 0;
        auto it = fcache.find(key);
        if (it != fcache.end()) return it->second;
        Eigen::VectorXd mu = factor_p2(f);
        Eigen::VectorXd vals(nd + 1);
        for (int d = 0; d <= nd; ++d) {
            double v = 0.0;
            for (int j = 0; j < w; ++j) v += mu[first + j] * N(d, j);
            vals[d] = v;
        }
        return fcache.emplace(key, std::move(vals)).first->second;
    };

    for (int i = 0; i < dim(); ++i) {
        const MixedBasisFunction& f = basis_[i];
        Eigen::VectorXd vu = factor_vals(f.u, Nu, fu);
        Eigen::VectorXd vv = factor_vals(f.v, Nv, fv);
        for (int d1 = 0; d1 <= nd; ++d1)
            for (int d2 = 0; d2 <= nd; ++d2)
                out(i, d1 * (nd + 1) + d2) = vu[d1] * vv[d2];
        if (f.corner_trunc) {
            // subtract the zeroed corner coefficient block
            bool uh = (*f.corner_trunc == Corner::br || *f.corner_trunc == Corner::tr);
            bool vh = (*f.corner_trunc == Corner::tl || *f.corner_trunc == Corner::tr);
            int a0 = uh ? n2 - s_ - 1 : 0, b0 = vh ? n2 - s_ - 1 : 0;
            Eigen::VectorXd mu = factor_p2(f.u), mv = factor_p2(f.v);
            for (int a = a0; a <= a0 + s_; ++a) {
                if (a < fu || a >= fu + w) continue;
                for (int b = b0; b <= b0 + s_; ++b) {
                    if (b < fv || b >= fv + w) continue;
                    double cab = mu[a] * mv[b];
                    if (cab == 0.0) continue;
                    for (int d1 = 0; d1 <= nd; ++d1)
                        for (int d2 = 0; d2 <= nd; ++d2)
                            out(i, d1 * (nd + 1) + d2) -= cab * Nu(d1, a - fu) * Nv(d2, b - fv);
                }
            }
        }
    }
    return out;
}

} // namespace mdcol
