// Command line front end: single solves, h-refinement studies, point and
// space dumps for the smooth mixed degree collocation library.
#include <CLI11.hpp>
#include <fstream>
#include <sstream>
#include <iostream>

#include "mdcol/gluing.hpp"
#include "mdcol/run.hpp"

namespace {

using namespace mdcol;

int parse_mesh(const std::string& text) {
    // mesh sizes follow the refinement ladder h = 1/2^i
    if (text.rfind("1/", 0) != 0)
        throw CLI::ValidationError("--h expects a mesh size of the form 1/2^i, e.g. 1/16");
    long den = std::stol(text.substr(2));
    if (den < 4 || (den & (den - 1)) != 0)
        throw CLI::ValidationError("--h expects a power-of-two denominator");
    return static_cast<int>(den - 1);
}

SchemeKind parse_scheme(const std::string& s) {
    if (s == "greville") return SchemeKind::greville;
    if (s == "superconvergent" || s == "set1") return SchemeKind::superconvergent;
    if (s == "set2") return SchemeKind::set2;
    if (s == "set3") return SchemeKind::set3;
    throw CLI::ValidationError("unknown scheme \"" + s + "\"");
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct CommonOpts {
    std::string domain = "G";
    std::string geometry_file;
    std::string problem = "poisson";
    std::string scheme = "superconvergent";
    std::vector<std::string> meshes;
    int k = -1;
    int quad = 0;
    unsigned seed = 0;
    bool check_oracles = false;
    std::string out;

    RunConfig config() const {
        RunConfig cfg;
        cfg.domain = domain;
        cfg.geometry_file = geometry_file;
        cfg.problem = (problem == "biharmonic") ? ProblemKind::biharmonic : ProblemKind::poisson;
        if (problem != "poisson" && problem != "biharmonic")
            throw CLI::ValidationError("--problem must be poisson or biharmonic");
        cfg.scheme = parse_scheme(scheme);
        cfg.quad_points = quad;
        cfg.seed = seed;
        cfg.check_oracles = check_oracles;
        if (k >= 0) {
            cfg.ks = {k};
        } else if (!meshes.empty()) {
            cfg.ks.clear();
            for (const std::string& m : meshes) cfg.ks.push_back(parse_mesh(m));
        }
        return cfg;
    }

    void attach(CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help");
        cmd->add_option("--domain", domain, "built-in domain name (A, B, C, D, F, G)");
        cmd->add_option("--geometry-file", geometry_file, "geometry JSON file instead");
        cmd->add_option("--problem", problem, "poisson or biharmonic");
        cmd->add_option("--scheme", scheme, "greville, superconvergent, set2 or set3");
        cmd->add_option("--h", meshes, "mesh size 1/2^i (repeatable)");
        cmd->add_option("--k", k, "interior knot count (overrides --h)");
        cmd->add_option("--quadrature-points", quad, "Gauss points per direction and element");
        cmd->add_option("--seed", seed, "seed for randomized checks");
        cmd->add_option("--out", out, "output file (stdout otherwise)");
        cmd->add_flag("--check-oracles", check_oracles,
                      "compare operator rows against the chain-rule oracle");
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"smooth mixed degree isogeometric collocation"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    CommonOpts solve_opts, conv_opts, points_opts, info_opts;
    std::string geom_name = "A", geom_out;
    int gs_check = 0;

    CLI::App* c_solve = app.add_subcommand("solve", "solve on one or more mesh sizes");
    solve_opts.attach(c_solve);
    CLI::App* c_conv = app.add_subcommand("convergence", "h-refinement study with orders");
    conv_opts.attach(c_conv);
    CLI::App* c_points = app.add_subcommand("points", "dump collocation points as CSV");
    points_opts.attach(c_points);
    CLI::App* c_info = app.add_subcommand("space-info", "smooth space dimensions");
    info_opts.attach(c_info);
    CLI::App* c_geom = app.add_subcommand("geometry", "export a built-in domain to JSON");
    c_geom->add_option("--domain", geom_name, "built-in domain name");
    c_geom->add_option("--out", geom_out, "output path")->required();
    c_geom->add_flag("--check-gs", gs_check,
                     "report the bilinear-like G^s derivative-matching residual");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_solve->parsed()) {
            RunConfig cfg = solve_opts.config();
            MultiPatchDomain dom = load_domain(cfg);
            std::vector<SolveRecord> records = run_ladder(dom, cfg);
            write_or_print(solve_opts.out, records_csv(records, cfg.s()));
            // full-precision sidecar next to the CSV
            std::string json = records_json(cfg, records) + "\n";
            if (solve_opts.out.empty())
                std::cout << json;
            else
                write_or_print(solve_opts.out + ".json", json);
        } else if (c_conv->parsed()) {
            RunConfig cfg = conv_opts.config();
            MultiPatchDomain dom = load_domain(cfg);
            std::vector<SolveRecord> records = run_ladder(dom, cfg);
            std::string csv = records_csv(records, cfg.s());
            std::vector<ErrorReport> orders = pairwise_orders(records);
            std::ostringstream tail;
            tail << "pair,l2_order,h1_order,h2_order";
            if (cfg.s() >= 4) tail << ",h3_order,h4_order";
            tail << "\n";
            for (std::size_t i = 0; i < orders.size(); ++i) {
                tail << (i + 1) << ',' << orders[i].l2 << ',' << orders[i].h1 << ','
                     << orders[i].h2;
                if (cfg.s() >= 4) tail << ',' << orders[i].h3 << ',' << orders[i].h4;
                tail << "\n";
            }
            write_or_print(conv_opts.out, csv + tail.str());
        } else if (c_points->parsed()) {
            RunConfig cfg = points_opts.config();
            MultiPatchDomain dom = load_domain(cfg);
            int k = cfg.ks.front();
            SmoothSpace w(dom, cfg.s(), k);
            PointSet ps = assemble_points(w, cfg.scheme, cfg.problem);
            write_or_print(points_opts.out, points_csv(w, ps));
        } else if (c_info->parsed()) {
            RunConfig cfg = info_opts.config();
            MultiPatchDomain dom = load_domain(cfg);
            int k = cfg.ks.front();
            SmoothSpace w(dom, cfg.s(), k);
            std::ostringstream out;
            out << "domain,s,k,h,total";
            for (auto& [name, d] : w.breakdown()) out << ',' << name;
            out << "\n" << dom.name() << ',' << cfg.s() << ',' << k << ",1/" << (k + 1) << ','
                << w.dim();
            for (auto& [name, d] : w.breakdown()) out << ',' << d;
            out << "\n";
            write_or_print(info_opts.out, out.str());
        } else if (c_geom->parsed()) {
            MultiPatchDomain dom = builtin_domain(geom_name);
            save_geometry(dom, geom_out);
            if (gs_check) {
                int s = 2;
                for (const InnerEdge& e : dom.inner_edges())
                    std::cout << "edge " << e.id << " G^" << s << " residual "
                              << gs_condition_residual(dom, e, s) << "\n";
            }
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
