#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mdcol/geometry.hpp"
#include "mdcol/gluing.hpp"
#include "mdcol/mixed_space.hpp"

namespace mdcol {

struct SparseVec {
    std::vector<int> idx;
    std::vector<double> val;
};

struct CoeffEntry {
    int a, b;
    double v;
};

/// Coefficients of one smooth basis function on one patch, in the patch-frame
/// degree-(2s+1) tensor B-spline basis. Tensor-product functions keep the
/// factorized form.
struct PatchSupport {
    int patch = -1;
    bool separable = false;
    SparseVec uf, vf;               // used when separable
    std::vector<CoeffEntry> entries; // used otherwise

    template <class Fn>
    void for_each_entry(Fn&& fn) const {
        if (separable) {
            for (std::size_t i = 0; i < uf.idx.size(); ++i)
                for (std::size_t j = 0; j < vf.idx.size(); ++j)
                    fn(uf.idx[i], vf.idx[j], uf.val[i] * vf.val[j]);
        } else {
            for (const CoeffEntry& e : entries) fn(e.a, e.b, e.v);
        }
    }
};

enum class Origin { patch, inner_edge, boundary_edge, vertex };

struct SmoothBasisFunction {
    int id = -1;
    Origin origin = Origin::patch;
    int origin_id = -1;
    std::vector<PatchSupport> supports;
};

/// The C^s-smooth mixed degree space over a multi-patch domain: the direct
/// sum of patch, edge and vertex subspaces, each global function stored as
/// per-patch coefficient vectors in the degree-(2s+1) tensor basis.
class SmoothSpace {
public:
    SmoothSpace(const MultiPatchDomain& dom, int s, int k);

    int s() const { return s_; }
    int k() const { return k_; }
    double h() const { return 1.0 / (k_ + 1); }
    const MultiPatchDomain& domain() const { return *dom_; }
    const UnivariateSpace& space_p2() const { return sp2_; }
    const MixedSpace2D& mixed_space(int patch) const { return *mixed_[patch]; }

    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<SmoothBasisFunction>& basis() const { return basis_; }
    const SmoothBasisFunction& function(int id) const { return basis_[id]; }

    /// Per-origin dimension breakdown ("patch", "inner_edge", ...).
    std::map<std::string, int> breakdown() const;

    /// Derivatives (d1,d2), d1,d2 <= nd of function fid on one patch at (x,y);
    /// zero if the function has no support there.
    Eigen::MatrixXd eval_function(int fid, int patch, double x, double y, int nd) const;

    /// Sparse text dump of every basis function (patch id, (a,b), coefficient).
    void export_coefficients(const std::string& path) const;

    const EdgeFrame& stored_edge_frame(int edge_id) const { return edge_frames_[edge_id]; }

private:
    void build();
    void build_patch_subspace(int patch);
    void build_inner_edge_subspace(const InnerEdge& e);
    void build_boundary_edge_subspace(const BoundaryEdge& e);
    void build_vertex_subspace(const Vertex& v);
    void drop_dependent_vertex_functions();

    const MultiPatchDomain* dom_;
    int s_, k_;
    UnivariateSpace sp1_, sp2_;
    std::vector<std::unique_ptr<MixedSpace2D>> mixed_;
    std::vector<EdgeFrame> edge_frames_;
    std::vector<SmoothBasisFunction> basis_;
};

} // namespace mdcol
