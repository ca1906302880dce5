#include "mdcol/smooth_space.hpp"

#include <Eigen/SVD>
#include <cassert>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "mdcol/spline_arith.hpp"

namespace mdcol {

namespace {

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

SparseVec compress(const Eigen::VectorXd& v) {
    double mx = v.lpNorm<Eigen::Infinity>();
    SparseVec out;
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > 1e-14 * mx) {
            out.idx.push_back(i);
            out.val.push_back(v[i]);
        }
    return out;
}

// entries of a frame-coordinate coefficient matrix carried into the patch
// frame through an axis-aligned chart (same transport rule as basis factors)
std::vector<CoeffEntry> map_matrix(const Eigen::MatrixXd& M, const Dihedral& chart, int n2) {
    std::vector<CoeffEntry> out;
    double mx = M.cwiseAbs().maxCoeff();
    for (int a = 0; a < M.rows(); ++a)
        for (int b = 0; b < M.cols(); ++b) {
            double v = M(a, b);
            if (std::abs(v) <= 1e-14 * mx) continue;
            int ua = a, vb = b;
            if (chart.swap) std::swap(ua, vb);
            if (chart.flip_u) ua = n2 - 1 - ua;
            if (chart.flip_v) vb = n2 - 1 - vb;
            out.push_back({ua, vb, v});
        }
    return out;
}

// coefficients in the edge frame of the Eq.-type trace functions: rows are
// the transversal degree-(2s+1) index (only 0..s populated), columns the
// along-edge index
struct TraceBlocks {
    Eigen::MatrixXd a, b;
};

Eigen::MatrixXd trace_side(const LinearFn& alpha, const LinearFn& beta, int s, int k,
                           const UnivariateSpace& sp2, int j1, int j2) {
    const int p2 = 2 * s + 1;
    UnivariateSpace tr(p2 - j1, 2 * s - j1, k);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(tr.dim());
    unit[j2] = 1.0;
    PiecewisePoly base = PiecewisePoly::from_spline(tr, unit);
    PiecewisePoly A1 = PiecewisePoly::linear_function(alpha(0.0), alpha(1.0), k + 1);
    PiecewisePoly B1 = PiecewisePoly::linear_function(beta(0.0), beta(1.0), k + 1);
    const double h = 1.0 / (k + 1);
    double gamma = std::pow(h, -j1);
    for (int rho = 0; rho < j1; ++rho) gamma *= (p2 - rho);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(s + 1, sp2.dim());
    for (int l = j1; l <= s; ++l) {
        PiecewisePoly term = base;
        for (int d = 0; d < l - j1; ++d) term = term.derivative();
        for (int d = 0; d < l - j1; ++d) term = term.times(B1);
        for (int d = 0; d < j1; ++d) term = term.times(A1);
        term = term.scaled(gamma * binom(l, j1));
        Eigen::VectorXd g = term.to_spline_coeffs(sp2);
        double denom = 1.0;
        for (int rho = 0; rho < l; ++rho) denom *= (p2 - rho);
        for (int j = l; j <= s; ++j)
            out.row(j) += (binom(j, l) * std::pow(h, l) / denom) * g.transpose();
    }
    return out;
}

TraceBlocks edge_trace(const EdgeFrame& fr, int s, int k, const UnivariateSpace& sp2, int j1,
                       int j2) {
    return {trace_side(fr.glue.alpha_a, fr.glue.beta_a, s, k, sp2, j1, j2),
            trace_side(fr.glue.alpha_b, fr.glue.beta_b, s, k, sp2, j1, j2)};
}

// deterministic kernel basis: singular values decide the rank, a column-
// pivoted reduced row echelon form provides a sparse reproducible basis
Eigen::MatrixXd kernel_basis(Eigen::MatrixXd M, double tol_rel, const std::string& what) {
    const int rows = static_cast<int>(M.rows());
    const int cols = static_cast<int>(M.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv[0] : 0.0;
    double tol = tol_rel * std::max(smax, 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol) ++rank;
    if (rank > 0 && rank < sv.size()) {
        if (sv[rank - 1] < 10.0 * tol && sv[rank] > 0.1 * tol)
            throw std::runtime_error(what + ": ambiguous numerical rank (singular values " +
                                     std::to_string(sv[rank - 1]) + " / " +
                                     std::to_string(sv[rank]) + " near tolerance " +
                                     std::to_string(tol) + ")");
    }

    // row echelon with partial pivoting; the pivot cut sits inside the
    // singular value gap, well above the elimination roundoff
    double pivot_tol = tol;
    if (rank > 0 && rank < sv.size())
        pivot_tol = std::sqrt(sv[rank - 1] * std::max(sv[rank], 1e-30));
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        for (int i = r + 1; i < rows; ++i)
            if (std::abs(M(i, c)) > std::abs(M(p, c))) p = i;
        if (std::abs(M(p, c)) <= pivot_tol) continue;
        M.row(p).swap(M.row(r));
        M.row(r) /= M(r, c);
        for (int i = 0; i < rows; ++i)
            if (i != r && M(i, c) != 0.0) M.row(i) -= M(i, c) * M.row(r);
        pivot_col.push_back(c);
        ++r;
    }
    if (r != rank) {
        std::string tail;
        for (int i = std::max(0, std::min(r, rank) - 3);
             i < std::min<int>(sv.size(), std::max(r, rank) + 3); ++i)
            tail += " " + std::to_string(sv[i]);
        throw std::runtime_error(what + ": elimination rank " + std::to_string(r) +
                                 " disagrees with singular value rank " + std::to_string(rank) +
                                 "; sigma near cut:" + tail + "; tol " + std::to_string(tol));
    }

    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(cols, cols - rank);
    int kcol = 0;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        K(f, kcol) = 1.0;
        for (int i = 0; i < rank; ++i) K(pivot_col[i], kcol) = -M(i, f);
        ++kcol;
    }
    return K;
}

} // namespace

SmoothSpace::SmoothSpace(const MultiPatchDomain& dom, int s, int k)
    : dom_(&dom), s_(s), k_(k), sp1_(s + 1, s, k), sp2_(2 * s + 1, s, k) {
    if (s != 2 && s != 4) throw std::invalid_argument("SmoothSpace: s must be 2 or 4");
    if (k < s + 2)
        throw std::invalid_argument("SmoothSpace: k too small for the subspace windows");
    if (!dom.inner_edges().empty() && k < 2 * s + 1)
        throw std::invalid_argument(
            "SmoothSpace: k < 2s+1 collapses the edge and vertex index windows of a "
            "multi-patch domain");
    build();
}

void SmoothSpace::build() {
    for (int i = 0; i < dom_->num_patches(); ++i) {
        EdgeFlags fl = dom_->patch_flags(i);
        if (fl.inner.empty()) {
            // one-patch domains use the full four-inner-edge underlying space
            fl.inner = {Side::left, Side::right, Side::bottom, Side::top};
            fl.valency1.clear();
        }
        mixed_.push_back(std::make_unique<MixedSpace2D>(s_, k_, fl));
    }
    for (const InnerEdge& e : dom_->inner_edges()) edge_frames_.push_back(edge_frame(*dom_, e));

    for (int i = 0; i < dom_->num_patches(); ++i) build_patch_subspace(i);
    if (!dom_->inner_edges().empty()) {
        // one-patch domains carry the whole underlying space in the patch
        // subspace; edge and vertex subspaces exist only between patches
        for (const InnerEdge& e : dom_->inner_edges()) build_inner_edge_subspace(e);
        for (const BoundaryEdge& e : dom_->boundary_edges()) build_boundary_edge_subspace(e);
        for (const Vertex& v : dom_->vertices()) build_vertex_subspace(v);
        drop_dependent_vertex_functions();
    }

    for (std::size_t i = 0; i < basis_.size(); ++i) basis_[i].id = static_cast<int>(i);
}

// For s = 4 the vertex families printed for the boundary cases and the
// kernels of the corner systems are not disjoint from the neighbouring
// subspaces on every valency configuration. Keep the construction order
// authoritative and drop edge or vertex functions that are already spanned,
// tested on local samples around each vertex.
void SmoothSpace::drop_dependent_vertex_functions() {
    if (s_ < 4) return; // the s = 2 construction is verified direct
    for (std::size_t i = 0; i < basis_.size(); ++i) basis_[i].id = static_cast<int>(i);
    const int n2 = sp2_.dim();
    const double h = 1.0 / (k_ + 1);
    const double reach = std::min(1.0, (3.0 * s_ + 4.0) * h);
    std::vector<bool> drop(basis_.size(), false);
    std::vector<bool> validated(basis_.size(), false);

    // per-patch coefficient footprints
    struct Box {
        int a0 = 1 << 30, a1 = -1, b0 = 1 << 30, b1 = -1;
    };
    std::vector<std::map<int, Box>> boxes(basis_.size());
    for (const SmoothBasisFunction& f : basis_)
        for (const PatchSupport& ps : f.supports) {
            Box& bx = boxes[f.id][ps.patch];
            ps.for_each_entry([&](int a, int b, double) {
                bx.a0 = std::min(bx.a0, a);
                bx.a1 = std::max(bx.a1, a);
                bx.b0 = std::min(bx.b0, b);
                bx.b1 = std::max(bx.b1, b);
            });
        }
    auto overlaps = [&](int fid, int patch, double u0, double u1, double v0, double v1) {
        auto it = boxes[fid].find(patch);
        if (it == boxes[fid].end()) return false;
        const Box& bx = it->second;
        // index range whose basis functions are alive on [u0,u1] x [v0,v1]
        auto lo = [&](double t) { return sp2_.active_range(std::max(0.0, t)).first; };
        auto hi = [&](double t) { return sp2_.active_range(std::min(1.0, t)).second; };
        return bx.a1 >= lo(u0) && bx.a0 <= hi(u1) && bx.b1 >= lo(v0) && bx.b0 <= hi(v1);
    };
    (void)n2;

    for (const Vertex& v : dom_->vertices()) {
        // sample window around the vertex in every fan patch
        struct Win {
            int patch;
            double u0, u1, v0, v1;
        };
        std::vector<Win> wins;
        for (const VertexFanEntry& fe : v.fan) {
            auto c0 = fe.chart(0.0, 0.0);
            auto c1 = fe.chart(reach, reach);
            wins.push_back({fe.patch, std::min(c0[0], c1[0]), std::max(c0[0], c1[0]),
                            std::min(c0[1], c1[1]), std::max(c0[1], c1[1])});
        }
        std::vector<int> prior, cand;
        for (const SmoothBasisFunction& f : basis_) {
            if (drop[f.id]) continue;
            bool alive = false;
            for (const Win& w2 : wins)
                if (overlaps(f.id, w2.patch, w2.u0, w2.u1, w2.v0, w2.v1)) alive = true;
            if (!alive) continue;
            bool candidate = (f.origin == Origin::vertex && f.origin_id == v.id) ||
                             (f.origin == Origin::boundary_edge && !validated[f.id]);
            if (candidate &&
                (f.origin != Origin::vertex ||
                 f.origin_id == v.id)) {
                if (f.origin == Origin::vertex || !validated[f.id]) {
                    cand.push_back(f.id);
                    continue;
                }
            }
            prior.push_back(f.id);
        }
        if (cand.empty()) continue;

        int total = static_cast<int>(prior.size() + cand.size());
        int per_patch = static_cast<int>(wins.size());
        int nsamp = std::max(3 * s_ + 6,
                             (int)std::ceil(std::sqrt(3.0 * total / per_patch)));
        std::vector<std::pair<int, Vec2>> pts;
        for (const Win& w2 : wins)
            for (int a = 0; a < nsamp; ++a)
                for (int b = 0; b < nsamp; ++b)
                    pts.push_back({w2.patch,
                                   Vec2(w2.u0 + (a + 0.5) / nsamp * (w2.u1 - w2.u0),
                                        w2.v0 + (b + 0.5) / nsamp * (w2.v1 - w2.v0))});

        Eigen::MatrixXd E(pts.size(), prior.size());
        for (std::size_t r = 0; r < pts.size(); ++r)
            for (std::size_t c = 0; c < prior.size(); ++c)
                E(r, c) = eval_function(prior[c], pts[r].first, pts[r].second.x(),
                                        pts[r].second.y(), 0)(0, 0);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(E);
        Eigen::MatrixXd Q = qr.householderQ() *
                            Eigen::MatrixXd::Identity(E.rows(), std::min(E.rows(), E.cols()));

        std::vector<Eigen::VectorXd> kept;
        for (int id : cand) {
            Eigen::VectorXd col(pts.size());
            for (std::size_t r = 0; r < pts.size(); ++r)
                col[r] = eval_function(id, pts[r].first, pts[r].second.x(),
                                       pts[r].second.y(), 0)(0, 0);
            double norm0 = col.norm();
            col -= Q * (Q.transpose() * col);
            for (const Eigen::VectorXd& q : kept) col -= q * q.dot(col);
            if (col.norm() <= 1e-7 * norm0) {
                drop[id] = true;
            } else {
                kept.push_back(col.normalized());
                validated[id] = true;
            }
        }
    }

    std::vector<SmoothBasisFunction> filtered;
    filtered.reserve(basis_.size());
    for (SmoothBasisFunction& f : basis_)
        if (!drop[f.id]) filtered.push_back(std::move(f));
    basis_ = std::move(filtered);
}

std::map<std::string, int> SmoothSpace::breakdown() const {
    std::map<std::string, int> out = {{"patch", 0}, {"inner_edge", 0}, {"boundary_edge", 0},
                                      {"vertex", 0}};
    for (const SmoothBasisFunction& f : basis_) {
        switch (f.origin) {
            case Origin::patch: ++out["patch"]; break;
            case Origin::inner_edge: ++out["inner_edge"]; break;
            case Origin::boundary_edge: ++out["boundary_edge"]; break;
            case Origin::vertex: ++out["vertex"]; break;
        }
    }
    return out;
}

Eigen::MatrixXd SmoothSpace::eval_function(int fid, int patch, double x, double y,
                                           int nd) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nd + 1, nd + 1);
    const SmoothBasisFunction& f = basis_[fid];
    for (const PatchSupport& ps : f.supports) {
        if (ps.patch != patch) continue;
        Eigen::MatrixXd Nu, Nv;
        int fu = 0, fv = 0;
        sp2_.eval_active(x, nd, Nu, fu);
        sp2_.eval_active(y, nd, Nv, fv);
        const int w = sp2_.degree() + 1;
        ps.for_each_entry([&](int a, int b, double c) {
            if (a < fu || a >= fu + w || b < fv || b >= fv + w) return;
            for (int d1 = 0; d1 <= nd; ++d1)
                for (int d2 = 0; d2 <= nd; ++d2)
                    out(d1, d2) += c * Nu(d1, a - fu) * Nv(d2, b - fv);
        });
    }
    return out;
}

void SmoothSpace::export_coefficients(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# function origin origin_id patch a b coefficient\n";
    const char* names[] = {"patch", "inner_edge", "boundary_edge", "vertex"};
    for (const SmoothBasisFunction& f : basis_)
        for (const PatchSupport& ps : f.supports)
            ps.for_each_entry([&](int a, int b, double v) {
                out << f.id << ' ' << names[static_cast<int>(f.origin)] << ' ' << f.origin_id
                    << ' ' << ps.patch << ' ' << a << ' ' << b << ' ';
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << buf << '\n';
            });
}

} // namespace mdcol
