#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "mdcol/geometry.hpp"
#include "mdcol/gluing.hpp"

namespace mdcol {

namespace {

using nlohmann::json;

Rational parse_number(const json& v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) {
        // exact binary expansion of the double
        double d = v.get<double>();
        if (!std::isfinite(d)) throw std::invalid_argument("geometry file: non-finite number");
        std::int64_t den = 1;
        while (d != std::floor(d)) {
            d *= 2.0;
            den <<= 1;
            if (den > (std::int64_t(1) << 60))
                throw std::invalid_argument("geometry file: number not representable");
        }
        return Rational(static_cast<std::int64_t>(d), den);
    }
    throw std::invalid_argument("geometry file: expected a number or \"n/d\" string");
}

Vec2R parse_point(const json& v) {
    if (!v.is_array() || v.size() != 2)
        throw std::invalid_argument("geometry file: point must be [x, y]");
    return {parse_number(v[0]), parse_number(v[1])};
}

Side parse_side(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    if (s == "bottom") return Side::bottom;
    if (s == "top") return Side::top;
    throw std::invalid_argument("geometry file: unknown side \"" + s + "\"");
}

json number_out(const Rational& r) {
    if (r.den() == 1) return json(r.num());
    return json(r.str());
}

} // namespace

MultiPatchDomain load_geometry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open geometry file " + path);
    json doc = json::parse(in);

    std::vector<Patch> patches;
    for (const json& jp : doc.at("patches")) {
        std::string type = jp.at("type").get<std::string>();
        if (type == "bilinear") {
            const json& c = jp.at("corners");
            if (!c.is_array() || c.size() != 4)
                throw std::invalid_argument("geometry file: bilinear patch needs 4 corners");
            // corner loop order F(0,0), F(1,0), F(1,1), F(0,1)
            patches.push_back(Patch::bilinear({parse_point(c[0]), parse_point(c[1]),
                                               parse_point(c[3]), parse_point(c[2])}));
        } else if (type == "spline") {
            int degree = jp.at("degree").get<int>();
            int reg = jp.at("regularity").get<int>();
            int k = jp.at("k").get<int>();
            std::vector<Vec2R> net;
            for (const json& pt : jp.at("control_net")) net.push_back(parse_point(pt));
            patches.push_back(Patch::spline(degree, reg, k, std::move(net)));
        } else {
            throw std::invalid_argument("geometry file: unknown patch type \"" + type + "\"");
        }
    }

    std::vector<InnerEdgeSpec> specs;
    if (doc.contains("inner_edges")) {
        for (const json& je : doc.at("inner_edges")) {
            InnerEdgeSpec e;
            e.patch_a = je.at("patch_a").get<int>();
            e.side_a = parse_side(je.at("side_a").get<std::string>());
            e.patch_b = je.at("patch_b").get<int>();
            e.side_b = parse_side(je.at("side_b").get<std::string>());
            e.reversed = je.value("reversed", false);
            specs.push_back(e);
        }
    }

    std::string name = doc.value("name", std::string("file:") + path);
    MultiPatchDomain dom = MultiPatchDomain::build(std::move(patches), specs, name);
    // reject inputs whose gluing data is not bilinear-like G^s
    for (const InnerEdge& e : dom.inner_edges()) edge_frame(dom, e);
    return dom;
}

void save_geometry(const MultiPatchDomain& dom, const std::string& path) {
    json doc;
    doc["name"] = dom.name();
    doc["patches"] = json::array();
    for (const Patch& p : dom.patches()) {
        json jp;
        if (p.is_bilinear()) {
            jp["type"] = "bilinear";
            jp["corners"] = json::array();
            for (Corner c : {Corner::bl, Corner::br, Corner::tr, Corner::tl}) {
                Vec2R q = p.corner(c);
                jp["corners"].push_back({number_out(q.x), number_out(q.y)});
            }
        } else {
            jp["type"] = "spline";
            jp["degree"] = p.space_u().degree();
            jp["regularity"] = p.space_u().regularity();
            jp["k"] = p.space_u().inner_knots();
            jp["control_net"] = json::array();
            for (int a = 0; a < p.net_rows(); ++a)
                for (int b = 0; b < p.net_cols(); ++b) {
                    const Vec2R& q = p.control(a, b);
                    jp["control_net"].push_back({number_out(q.x), number_out(q.y)});
                }
        }
        doc["patches"].push_back(jp);
    }
    doc["inner_edges"] = json::array();
    for (const InnerEdge& e : dom.inner_edges()) {
        json je;
        je["patch_a"] = e.a.patch;
        je["side_a"] = side_name(e.a.side);
        je["patch_b"] = e.b.patch;
        je["side_b"] = side_name(e.b.side);
        je["reversed"] = (e.a.reversed != e.b.reversed);
        doc["inner_edges"].push_back(je);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write geometry file " + path);
    out << doc.dump(2) << "\n";
}

} // namespace mdcol
