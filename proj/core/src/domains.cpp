#include <sstream>
#include <stdexcept>

#include "mdcol/geometry.hpp"

namespace mdcol {

namespace {

Rational rat(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(tok));
    return Rational(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1)));
}

Vec2R pt(const std::string& x, const std::string& y) { return {rat(x), rat(y)}; }

std::vector<Vec2R> parse_net(const char* text, int expected) {
    std::vector<Vec2R> net;
    std::istringstream in(text);
    std::string x, y;
    while (in >> x >> y) net.push_back(pt(x, y));
    if (static_cast<int>(net.size()) != expected)
        throw std::logic_error("built-in control net has wrong size");
    return net;
}

// Vertices of the fan-parameterized bilinear multi-patch domains: patch i has
// corners c00 = X0, c01 = X(2i+1), c11 = X(2i+2), c10 = X(2i+3), indices of
// the outer ring taken cyclically.
std::vector<Patch> bilinear_fan(const std::vector<Vec2R>& X, int npatches) {
    std::vector<Patch> out;
    int ring = static_cast<int>(X.size()) - 1;
    for (int i = 0; i < npatches; ++i) {
        Vec2R c01 = X[1 + (2 * i) % ring];
        Vec2R c11 = X[1 + (2 * i + 1) % ring];
        Vec2R c10 = X[1 + (2 * i + 2) % ring];
        out.push_back(Patch::bilinear({X[0], c10, c01, c11}));
    }
    return out;
}

MultiPatchDomain make_domain_A() {
    std::array<Vec2R, 4> c = {pt("3/4", "3/4"), pt("15/4", "9/4"), pt("21/20", "27/10"),
                              pt("3", "3")};
    // corner order of Patch::bilinear is c00, c10, c01, c11
    return MultiPatchDomain::build({Patch::bilinear({c[0], c[1], c[2], c[3]})}, {}, "A");
}

MultiPatchDomain make_domain_B() {
    std::vector<Vec2R> X = {pt("12", "8"),      pt("14", "44/5"),  pt("61/5", "109/10"),
                            pt("10", "91/10"),  pt("87/10", "36/5"), pt("111/10", "6"),
                            pt("71/5", "13/2")};
    return MultiPatchDomain::build(bilinear_fan(X, 3), {}, "B");
}

MultiPatchDomain make_domain_C() {
    std::vector<Vec2R> X = {pt("14/5", "3"),   pt("31/10", "4"),  pt("14/5", "26/5"),
                            pt("5/2", "4"),    pt("1", "7/5"),    pt("1", "1"),
                            pt("17/10", "9/10"), pt("14/5", "11/10"), pt("39/10", "9/10"),
                            pt("23/5", "1"),   pt("23/5", "7/5")};
    return MultiPatchDomain::build(bilinear_fan(X, 5), {}, "C");
}

MultiPatchDomain make_domain_D() {
    const char* net =
        "18/5 36/5   6 39/5   42/5 36/5 "
        "21/5 6      6 6      39/5 6 "
        "18/5 24/5   6 21/5   42/5 24/5 ";
    return MultiPatchDomain::build({Patch::spline(2, 1, 0, parse_net(net, 9))}, {}, "D");
}

MultiPatchDomain make_domain_G() {
    std::vector<Vec2R> X = {pt("3", "3"), pt("3", "6"), pt("1", "6"),
                            pt("1", "1"), pt("7", "1"), pt("7", "3")};
    std::vector<Patch> p;
    p.push_back(Patch::bilinear({X[0], X[3], X[1], X[2]}));
    p.push_back(Patch::bilinear({X[0], X[5], X[3], X[4]}));
    return MultiPatchDomain::build(std::move(p), {}, "G");
}

// Control nets of the biquintic five-patch star (rows are the first tensor
// index j1, columns j2; entries x y).
const char* kStarNet0 =
    "0 0  3/32 459/1600  9/32 1377/1600  9/16 1377/800  15/16 459/160  21/16 3213/800  51/32 7803/1600  57/32 8721/1600  15/8 459/80 "
    "3/10 0  249/640 9069/32000  363/640 27207/32000  267/320 27207/16000  381/320 9069/3200  99/64 63483/16000  1161/640 154173/32000  255/128 172311/32000  333/160 9069/1600 "
    "9/10 0  627/640 8847/32000  729/640 26541/32000  441/320 26541/16000  543/320 8847/3200  129/64 61929/16000  1443/640 150399/32000  309/128 168093/32000  399/160 8847/1600 "
    "9/5 0  597/320 4257/16000  639/320 12771/16000  351/160 12771/8000  393/160 4257/1600  87/32 29799/8000  933/320 72369/16000  195/64 80883/16000  249/80 4257/800 "
    "3 0  195/64 807/3200  201/64 2421/3200  105/32 2421/1600  111/32 807/320  117/32 5649/1600  243/64 13719/3200  249/64 15333/3200  63/16 807/160 "
    "21/5 0  1353/320 3813/16000  1371/320 11439/16000  699/160 11439/8000  717/160 3813/1600  1911/400 1383/400  1881/400 903/200  1857/400 2097/400  459/100 2247/400 "
    "51/10 0  3273/640 7293/32000  3291/640 21879/32000  1659/320 21879/16000  1677/320 7293/3200  144/25 153/50  567/100 1641/400  2157/400 2007/400  423/80 273/50 "
    "57/10 0  3651/640 7071/32000  3657/640 21213/32000  1833/320 21213/16000  1839/320 7071/3200  321/50 1107/400  2577/400 711/200  1227/200 1779/400  381/64 137/28 "
    "6 0  6 87/400  6 261/400  6 261/200  6 87/40  2703/400 1041/400  2733/400 663/200  13/2 1653/400  63/10 201/44 ";

const char* kStarNet1 =
    "0 0  -39/160 57/320  -117/160 171/320  -117/80 171/160  -39/16 57/32  -273/80 399/160  -663/160 969/320  -741/160 1083/320  -39/8 57/16 "
    "3/32 459/1600  -237/1600 7353/16000  -1011/1600 12879/16000  -543/400 1323/1000  -93/40 1611/800  -1317/400 5409/2000  -6429/1600 51561/16000  -7203/1600 57087/16000  -759/160 1197/320 "
    "9/32 1377/1600  69/1600 16359/16000  -693/1600 21537/16000  -459/400 3663/2000  -21/10 1983/800  -1221/400 1563/500  -6027/1600 57783/16000  -6789/1600 62961/16000  -717/160 1311/320 "
    "9/16 1377/800  33/100 7467/4000  -27/200 8631/4000  -333/400 10377/4000  -141/80 2541/800  -1077/400 15033/4000  -339/100 16779/4000  -771/200 17943/4000  -327/80 741/160 "
    "15/16 459/160  57/80 1197/400  21/80 81/25  -33/80 2889/800  -21/16 657/160  -177/80 3681/800  -231/80 1989/400  -267/80 261/50  -57/16 171/32 "
    "21/16 3213/800  219/200 16473/4000  33/50 17289/4000  3/400 18513/4000  -69/80 4029/800  -723/400 2259/400  -1137/400 591/100  -1419/400 243/40  -783/200 2457/400 "
    "51/32 7803/1600  2211/1600 79401/16000  1533/1600 82143/16000  129/400 5391/1000  -21/40 4587/800  -111/100 1293/200  -213/100 1341/200  -1239/400 1347/200  -1419/400 2709/400 "
    "57/32 8721/1600  2517/1600 88407/16000  1851/1600 90801/16000  213/400 11799/2000  -3/10 4959/800  -249/400 1401/200  -273/200 2913/400  -921/400 291/40  -167/60 507/70 "
    "15/8 459/80  267/160 9291/1600  201/160 9513/1600  51/80 4923/800  -3/16 1029/160  -141/400 2913/400  -201/200 3033/400  -49/26 753/100  -189/80 389/52 ";

const char* kStarNet2 =
    "0 0  -39/160 -57/320  -117/160 -171/320  -117/80 -171/160  -39/16 -57/32  -273/80 -399/160  -663/160 -969/320  -741/160 -1083/320  -39/8 -57/16 "
    "-39/160 57/320  -771/1600 0  -1533/1600 -57/160  -669/400 -57/64  -21/8 -513/320  -1431/400 -741/320  -6867/1600 -57/20  -7629/1600 -513/160  -801/160 -1083/320 "
    "-117/160 171/320  -1533/1600 57/160  -2259/1600 0  -837/400 -171/320  -3 -399/320  -1563/400 -627/320  -7341/1600 -399/160  -8067/1600 -57/20  -843/160 -969/320 "
    "-117/80 171/160  -669/400 57/64  -837/400 171/320  -1089/400 0  -57/16 -57/80  -1761/400 -57/40  -2013/400 -627/320  -2181/400 -741/320  -453/80 -399/160 "
    "-39/16 57/32  -21/8 513/320  -3 399/320  -57/16 57/80  -69/16 0  -81/16 -57/80  -45/8 -399/320  -6 -513/320  -99/16 -57/32 "
    "-273/80 399/160  -1431/400 741/320  -1563/400 627/320  -1761/400 57/40  -81/16 57/80  -297/50 -3/400  -651/100 -183/200  -1377/200 -309/200  -2823/400 -753/400 "
    "-663/160 969/320  -6867/1600 57/20  -7341/1600 399/160  -2013/400 627/320  -45/8 399/320  -651/100 9/10  -141/20 -3/400  -369/50 -369/400  -3021/400 -537/400 "
    "-741/160 1083/320  -7629/1600 513/160  -8067/1600 57/20  -2181/400 741/320  -6 513/320  -1377/200 153/100  -369/50 363/400  -3063/400 -3/400  -373/48 -19/40 "
    "-39/8 57/16  -801/160 1083/320  -843/160 969/320  -453/80 399/160  -99/16 57/32  -2823/400 15/8  -3021/400 267/200  -373/48 19/40  -63/8 0 ";

const char* kStarNet3 =
    "0 0  3/32 -459/1600  9/32 -1377/1600  9/16 -1377/800  15/16 -459/160  21/16 -3213/800  51/32 -7803/1600  57/32 -8721/1600  15/8 -459/80 "
    "-39/160 -57/320  -237/1600 -7353/16000  69/1600 -16359/16000  33/100 -7467/4000  57/80 -1197/400  219/200 -16473/4000  2211/1600 -79401/16000  2517/1600 -88407/16000  267/160 -9291/1600 "
    "-117/160 -171/320  -1011/1600 -12879/16000  -693/1600 -21537/16000  -27/200 -8631/4000  21/80 -81/25  33/50 -17289/4000  1533/1600 -82143/16000  1851/1600 -90801/16000  201/160 -9513/1600 "
    "-117/80 -171/160  -543/400 -1323/1000  -459/400 -3663/2000  -333/400 -10377/4000  -33/80 -2889/800  3/400 -18513/4000  129/400 -5391/1000  213/400 -11799/2000  51/80 -4923/800 "
    "-39/16 -57/32  -93/40 -1611/800  -21/10 -1983/800  -141/80 -2541/800  -21/16 -657/160  -69/80 -4029/800  -21/40 -4587/800  -3/10 -4959/800  -3/16 -1029/160 "
    "-273/80 -399/160  -1317/400 -5409/2000  -1221/400 -1563/500  -1077/400 -15033/4000  -177/80 -3681/800  -723/400 -453/80  -111/100 -162/25  -249/400 -351/50  -141/400 -729/100 "
    "-663/160 -969/320  -6429/1600 -51561/16000  -6027/1600 -57783/16000  -339/100 -16779/4000  -231/80 -1989/400  -1137/400 -237/40  -213/100 -537/80  -273/200 -2919/400  -201/200 -759/100 "
    "-741/160 -1083/320  -7203/1600 -57087/16000  -6789/1600 -62961/16000  -771/200 -17943/4000  -267/80 -261/50  -1419/400 -609/100  -1239/400 -27/4  -921/400 -2913/400  -49/26 -753/100 "
    "-39/8 -57/16  -759/160 -1197/320  -717/160 -1311/320  -327/80 -741/160  -57/16 -171/32  -783/200 -123/20  -1419/400 -339/50  -167/60 -507/70  -189/80 -389/52 ";

const char* kStarNet4 =
    "0 0  3/10 0  9/10 0  9/5 0  3 0  21/5 0  51/10 0  57/10 0  6 0 "
    "3/32 -459/1600  249/640 -9069/32000  627/640 -8847/32000  597/320 -4257/16000  195/64 -807/3200  1353/320 -3813/16000  3273/640 -7293/32000  3651/640 -7071/32000  6 -87/400 "
    "9/32 -1377/1600  363/640 -27207/32000  729/640 -26541/32000  639/320 -12771/16000  201/64 -2421/3200  1371/320 -11439/16000  3291/640 -21879/32000  3657/640 -21213/32000  6 -261/400 "
    "9/16 -1377/800  267/320 -27207/16000  441/320 -26541/16000  351/160 -12771/8000  105/32 -2421/1600  699/160 -11439/8000  1659/320 -21879/16000  1833/320 -21213/16000  6 -261/200 "
    "15/16 -459/160  381/320 -9069/3200  543/320 -8847/3200  393/160 -4257/1600  111/32 -807/320  717/160 -3813/1600  1677/320 -7293/3200  1839/320 -7071/3200  6 -87/40 "
    "21/16 -3213/800  99/64 -63483/16000  129/64 -61929/16000  87/32 -29799/8000  117/32 -5649/1600  1911/400 -1389/400  144/25 -123/40  321/50 -1113/400  2703/400 -261/100 "
    "51/32 -7803/1600  1161/640 -154173/32000  1443/640 -150399/32000  933/320 -72369/16000  243/64 -13719/3200  1881/400 -363/80  567/100 -411/100  2577/400 -357/100  2733/400 -1329/400 "
    "57/32 -8721/1600  255/128 -172311/32000  309/128 -168093/32000  195/64 -80883/16000  249/64 -15333/3200  1857/400 -21/4  2157/400 -2013/400  1227/200 -891/200  13/2 -1653/400 "
    "15/8 -459/80  333/160 -9069/1600  399/160 -8847/1600  249/80 -4257/800  63/16 -807/160  459/100 -45/8  423/80 -2187/400  381/64 -137/28  63/10 -201/44 ";

MultiPatchDomain make_domain_F() {
    std::vector<Patch> p;
    for (const char* net : {kStarNet0, kStarNet1, kStarNet2, kStarNet3, kStarNet4})
        p.push_back(Patch::spline(5, 4, 3, parse_net(net, 81)));
    return MultiPatchDomain::build(std::move(p), {}, "F");
}

} // namespace

MultiPatchDomain builtin_domain(const std::string& name) {
    if (name == "A") return make_domain_A();
    if (name == "B") return make_domain_B();
    if (name == "C") return make_domain_C();
    if (name == "D") return make_domain_D();
    if (name == "F") return make_domain_F();
    if (name == "G") return make_domain_G();
    if (name == "E")
        throw std::invalid_argument(
            "domain E: external control net required; use load_geometry with a geometry file");
    throw std::invalid_argument("unknown built-in domain \"" + name + "\"");
}

} // namespace mdcol
