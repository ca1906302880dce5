#include "mdcol/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <random>
#include <sstream>

#include "mdcol/physical_oracle.hpp"

namespace mdcol {

MultiPatchDomain load_domain(const RunConfig& cfg) {
    if (!cfg.geometry_file.empty()) return load_geometry(cfg.geometry_file);
    return builtin_domain(cfg.domain);
}

double oracle_comparison(const SmoothSpace& w, ProblemKind problem, int samples,
                         unsigned seed) {
    std::mt19937 rng(seed == 0 ? 1234u : seed);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    std::uniform_int_distribution<int> P(0, w.domain().num_patches() - 1);
    std::uniform_int_distribution<int> F(0, w.dim() - 1);
    const int nd = (problem == ProblemKind::biharmonic) ? 4 : 2;
    SpaceEvaluator ev(w);
    double worst = 0.0;
    int done = 0;
    while (done < samples) {
        int patch = P(rng);
        Vec2 zeta(U(rng), U(rng));
        int want = F(rng);
        GeometryJets g = geometry_jets(w.domain().patch(patch), zeta, nd);
        JetFunctional fun = (problem == ProblemKind::biharmonic) ? bilaplacian_functional(g)
                                                                 : laplacian_functional(g);
        bool hit = false;
        ev.for_each_function(patch, zeta, nd, [&](int fid, const Eigen::MatrixXd& d) {
            if (hit || std::abs(fid - want) > w.dim() / 8) return;
            double row = fun.apply(d);
            Jet2 v = Jet2::from_derivs(d, nd);
            double ref = (problem == ProblemKind::biharmonic) ? bilaplacian_by_inverse(v, g)
                                                              : laplacian_by_inverse(v, g);
            double scale = std::max({std::abs(ref), std::abs(row), 1e-6});
            worst = std::max(worst, std::abs(row - ref) / scale);
            hit = true;
        });
        if (hit) ++done;
    }
    return worst;
}

SolveRecord run_single(const MultiPatchDomain& dom, const RunConfig& cfg, int k) {
    auto t0 = std::chrono::steady_clock::now();
    SolveRecord rec;
    rec.k = k;
    rec.h = 1.0 / (k + 1);

    SmoothSpace w(dom, cfg.s(), k);
    rec.dim = w.dim();
    PointSet pts = assemble_points(w, cfg.scheme, cfg.problem);
    SpaceEvaluator ev(w);
    ManufacturedSolution sol = ManufacturedSolution::cos_sin();
    CollocationSystem sys = assemble(ev, pts, sol, cfg.problem);
    rec.rows = static_cast<int>(sys.A.rows());
    rec.cols = static_cast<int>(sys.A.cols());
    rec.square = sys.square();

    auto t1 = std::chrono::steady_clock::now();
    SolveInfo info;
    Eigen::VectorXd c = solve(sys, &info);
    auto t2 = std::chrono::steady_clock::now();
    rec.rank = info.rank;
    rec.residual = info.residual;
    rec.errors = error_norms(ev, c, sol, cfg.quad_points);
    if (cfg.check_oracles) rec.oracle_worst = oracle_comparison(w, cfg.problem, 100, cfg.seed);
    auto t3 = std::chrono::steady_clock::now();
    rec.seconds_solve = std::chrono::duration<double>(t2 - t1).count();
    rec.seconds_total = std::chrono::duration<double>(t3 - t0).count();
    return rec;
}

std::vector<SolveRecord> run_ladder(const MultiPatchDomain& dom, const RunConfig& cfg) {
    std::vector<SolveRecord> out;
    for (int k : cfg.ks) out.push_back(run_single(dom, cfg, k));
    return out;
}

namespace {
double order(double coarse, double fine, int levels = 1) {
    if (coarse <= 0.0 || fine <= 0.0) return 0.0;
    return std::log2(coarse / fine) / levels;
}
} // namespace

std::vector<ErrorReport> pairwise_orders(const std::vector<SolveRecord>& ladder) {
    std::vector<ErrorReport> out;
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        ErrorReport r;
        r.l2 = order(ladder[i - 1].errors.l2, ladder[i].errors.l2);
        r.h1 = order(ladder[i - 1].errors.h1, ladder[i].errors.h1);
        r.h2 = order(ladder[i - 1].errors.h2, ladder[i].errors.h2);
        r.h3 = order(ladder[i - 1].errors.h3, ladder[i].errors.h3);
        r.h4 = order(ladder[i - 1].errors.h4, ladder[i].errors.h4);
        out.push_back(r);
    }
    return out;
}

ErrorReport ladder_orders(const std::vector<SolveRecord>& ladder) {
    ErrorReport r;
    if (ladder.size() < 2) return r;
    int lv = static_cast<int>(ladder.size()) - 1;
    const ErrorReport& a = ladder.front().errors;
    const ErrorReport& b = ladder.back().errors;
    r.l2 = order(a.l2, b.l2, lv);
    r.h1 = order(a.h1, b.h1, lv);
    r.h2 = order(a.h2, b.h2, lv);
    r.h3 = order(a.h3, b.h3, lv);
    r.h4 = order(a.h4, b.h4, lv);
    return r;
}

std::string records_csv(const std::vector<SolveRecord>& records, int s) {
    std::ostringstream out;
    out << "h,k,dim,rows,cols,square,residual,l2,h1,h2";
    if (s >= 4) out << ",h3,h4";
    out << "\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    for (const SolveRecord& r : records) {
        out << num(r.h) << ',' << r.k << ',' << r.dim << ',' << r.rows << ',' << r.cols << ','
            << (r.square ? 1 : 0) << ',' << num(r.residual) << ',' << num(r.errors.l2) << ','
            << num(r.errors.h1) << ',' << num(r.errors.h2);
        if (s >= 4) out << ',' << num(r.errors.h3) << ',' << num(r.errors.h4);
        out << "\n";
    }
    return out.str();
}

std::string records_json(const RunConfig& cfg, const std::vector<SolveRecord>& records) {
    nlohmann::json doc;
    doc["domain"] = cfg.geometry_file.empty() ? cfg.domain : cfg.geometry_file;
    doc["problem"] = cfg.problem == ProblemKind::biharmonic ? "biharmonic" : "poisson";
    doc["scheme"] = scheme_name(cfg.scheme);
    doc["records"] = nlohmann::json::array();
    for (const SolveRecord& r : records) {
        nlohmann::json j;
        j["k"] = r.k;
        j["h"] = r.h;
        j["dim"] = r.dim;
        j["rows"] = r.rows;
        j["cols"] = r.cols;
        j["square"] = r.square;
        j["rank"] = r.rank;
        j["residual"] = r.residual;
        j["errors"] = {{"l2", r.errors.l2}, {"h1", r.errors.h1}, {"h2", r.errors.h2}};
        if (cfg.s() >= 4) {
            j["errors"]["h3"] = r.errors.h3;
            j["errors"]["h4"] = r.errors.h4;
        }
        j["seconds_total"] = r.seconds_total;
        j["seconds_solve"] = r.seconds_solve;
        if (cfg.check_oracles) j["oracle_worst"] = r.oracle_worst;
        doc["records"].push_back(j);
    }
    return doc.dump(2);
}

std::string points_csv(const SmoothSpace& w, const PointSet& ps) {
    (void)w;
    std::ostringstream out;
    out << "x,y,patch,zeta1,zeta2,tag\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    for (const CollocationPoint& p : ps.points)
        out << num(p.x.x()) << ',' << num(p.x.y()) << ',' << p.patch << ',' << num(p.zeta.x())
            << ',' << num(p.zeta.y()) << ',' << tag_name(p.tag) << "\n";
    return out.str();
}

} // namespace mdcol
