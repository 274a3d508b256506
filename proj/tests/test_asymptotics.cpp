#include <doctest.h>

#include <map>

#include "splitenum/asymptotics.hpp"
#include "splitenum/grammars.hpp"

using namespace splitenum;
using namespace splitenum::asymptotics;
namespace bmp = boost::multiprecision;

namespace {

const Analysis& analysisOf(GraphClassId id)
{
    static std::map<GraphClassId, Analysis> cache;
    auto it = cache.find(id);
    if (it == cache.end())
        it = cache.emplace(id, analyze(id)).first;
    return it->second;
}

const std::vector<BigInt>& unrootedTerms(GraphClassId id)
{
    static std::map<GraphClassId, std::vector<BigInt>> cache;
    auto it = cache.find(id);
    if (it == cache.end())
        it = cache.emplace(id, grammars::enumerate(id, grammars::Flavor::Unlabeled, Rooting::Unrooted, 2000).terms)
                 .first;
    return it->second;
}

bool near(const Real& a, const Real& b, const Real& tol) { return bmp::abs(a - b) <= tol; }

// x agrees with every digit of the truncated decimal `printed`.
bool agreesWithPrinted(const Real& x, const std::string& printed)
{
    const auto decimals = static_cast<int>(printed.size() - printed.find('.') - 1);
    const Real diff = x - Real(printed);
    return diff >= 0 && diff < bmp::pow(Real(10), -decimals);
}

} // namespace

TEST_CASE("jets")
{
    PrecisionScope scope(50);
    const Jet z = Jet::varZ(Real(0));
    const Jet y = Jet::varY(Real(2));

    const Jet e = exp(z);
    Real fact = 1;
    for (int k = 0; k <= Jet::kDegree; ++k) {
        if (k > 0)
            fact *= k;
        CHECK(near(e.at(k, 0), 1 / fact, Real("1e-45")));
    }

    const Jet zy = z * y;
    CHECK(zy.at(1, 0) == 2);
    CHECK(zy.at(1, 1) == 1);
    CHECK(zy.partial(1, 1) == 1);
    CHECK(zy.at(0, 1) == 0);

    const Jet q = (Jet::constant(1) + z * y) / (Jet::constant(3) - y * y);
    const Jet back = q * (Jet::constant(3) - y * y);
    for (int i = 0; i <= Jet::kDegree; ++i)
        for (int j = 0; i + j <= Jet::kDegree; ++j)
            CHECK(near(back.at(i, j), (Jet::constant(1) + z * y).at(i, j), Real("1e-45")));

    // 1/(1-x) composed with x = z: geometric coefficients
    std::array<Real, Jet::kDegree + 1> geometric;
    geometric.fill(Real(1));
    const Jet g = compose(geometric, z);
    for (int k = 0; k <= Jet::kDegree; ++k)
        CHECK(g.at(k, 0) == 1);

    // y^3 at y0 = 2: d^3/dy^3 = 6
    CHECK(near((y * y * y).partial(0, 3), Real(6), Real("1e-45")));
}

TEST_CASE("characteristic equation")
{
    const auto tlp = buildCharacteristicEquation(GraphClassId::TLP, 10);
    const Real f = tlp.F(Real("0.2"), Real("0.3"));
    CHECK(bmp::isfinite(f));
    CHECK(f > 0);

    const auto b = tlp.expandB(Real(0));
    CHECK(near(b[0], Real(0), Real("1e-40")));
    CHECK(near(b[1], Real(1), Real("1e-40")));
    CHECK(near(b[2], Real(3) / 2, Real("1e-40")));

    const auto dh = buildCharacteristicEquation(GraphClassId::DH, 10);
    CHECK(dh.inDomain(Real("0.1"), Real("0.1")));
    CHECK_FALSE(dh.inDomain(Real("0.5"), Real("0.25")));
    CHECK_THROWS_AS(dh.expandF(Real("0.5"), Real("0.3")), PoleCrossed);
    CHECK_THROWS_AS(buildCharacteristicEquation(GraphClassId::DH, 4), std::invalid_argument);
    CHECK_THROWS_AS(analyze(GraphClassId::DH, 20), std::invalid_argument);
}

TEST_CASE("branch points")
{
    const auto& tlp = analysisOf(GraphClassId::TLP);
    const auto& dh = analysisOf(GraphClassId::DH);
    const Real tol("1e-9");
    CHECK(agreesWithPrinted(1 / tlp.branch.rho, "3.848442876"));
    CHECK(near(1 / dh.branch.rho, Real("7.249751250"), tol));
    CHECK(toDecimal(1 / tlp.branch.rho, 10) == "3.848442877");

    for (const Analysis* a : {&tlp, &dh}) {
        CHECK(a->branch.rho > 0);
        CHECK(a->branch.rho < 1);
        CHECK(a->branch.tau > 0);
        CHECK(a->branch.residualF < Real("1e-40"));
        CHECK(a->branch.residualFy < Real("1e-40"));
        const auto& history = a->rhoByTruncation;
        REQUIRE(history.size() >= 3);
        for (std::size_t i = 2; i < history.size(); ++i)
            CHECK(bmp::abs(history[i].second - history[i - 1].second) <=
                  bmp::abs(history[i - 1].second - history[i - 2].second));
    }
    CHECK(dh.branch.rho < tlp.branch.rho);
    CHECK(1 - dh.branch.rho - 2 * dh.branch.tau > 0);

    // 3LP: at the branch point y - 1 = -L(z)
    CHECK(near(tlp.branch.tau - 1, -tlp.branch.rho / (1 - tlp.branch.rho), Real("1e-35")));
    CHECK(bmp::abs(dhEliminant(dh.branch.rho, dh.branch.tau)) < Real("1e-35"));
}

TEST_CASE("branch point from another seed")
{
    const auto& a = analysisOf(GraphClassId::DH);
    const auto eq = buildCharacteristicEquation(GraphClassId::DH, a.truncation);
    const auto bp = solveBranchPoint(eq, a.branch.rho * Real("0.98"), a.branch.tau * Real("0.9"));
    CHECK(near(bp.rho, a.branch.rho, Real("1e-40")));
}

TEST_CASE("singular expansions and cancellation")
{
    PrecisionScope scope(kDefaultDigits);
    for (auto id : {GraphClassId::TLP, GraphClassId::DH}) {
        const auto& a = analysisOf(id);
        const auto eq = buildCharacteristicEquation(id, a.truncation);
        const Jet f = eq.expandF(a.branch.rho, a.branch.tau);
        CHECK(a.rooted.c > 0);
        const Real lhs = a.rooted.c * a.rooted.c * f.partial(0, 2);
        const Real rhs = 2 * a.branch.rho * f.partial(1, 0);
        CHECK(bmp::abs(lhs / rhs - 1) < Real("1e-30"));

        CHECK(bmp::abs(a.unrooted.gY) < Real("1e-30"));
        CHECK(bmp::abs(a.unrooted.cPrime) < Real("1e-30"));
        CHECK(bmp::abs(a.unrooted.ePrime) > Real("1e-10"));
    }
    const auto& dh = analysisOf(GraphClassId::DH);
    const Real dhConstant = 3 * dh.unrooted.ePrime / (4 * bmp::sqrt(boost::math::constants::pi<Real>()));
    CHECK(agreesWithPrinted(dhConstant, "0.02337516194"));
    CHECK(near(dhConstant, dh.unrootedEstimate.constant, Real("1e-40")));
    const auto& tlp = analysisOf(GraphClassId::TLP);
    CHECK(agreesWithPrinted(tlp.unrootedEstimate.constant, "0.70955825396"));
    CHECK(near(tlp.unrootedEstimate.constant, Real("0.70955825396"), Real("1e-10") * Real("0.70955825396")));
    CHECK(tlp.unrootedEstimate.alpha == Real(-5) / 2);
    CHECK(tlp.rootedEstimate.alpha == Real(-3) / 2);
}

TEST_CASE("estimates against exact counts")
{
    for (auto id : {GraphClassId::TLP, GraphClassId::DH}) {
        const auto& a = analysisOf(id);
        const auto& terms = unrootedTerms(id);
        CHECK(empiricalFit(terms, a.unrootedEstimate, 2000) < Real("0.01"));

        const auto rooted = rootedSeries(id, 2001);
        CHECK(empiricalFit(rooted, a.rootedEstimate, 2000) < Real("0.01"));

        // ratio with the n^{-3/2} correction
        const Real n(2000);
        const Real r = Real(rooted[2001].get_str()) / Real(rooted[2000].get_str()) * bmp::pow(n / (n + 1), Real(-1.5));
        CHECK(bmp::abs(1 / r - a.branch.rho) < Real("1e-4"));

        AsymptoticEstimate wrong = a.unrootedEstimate;
        wrong.alpha = Real(-3) / 2;
        const Real at500 = empiricalFit(terms, wrong, 500);
        const Real at2000 = empiricalFit(terms, wrong, 2000);
        CHECK(at2000 > at500);
        CHECK(at2000 > Real("0.99"));
    }
    CHECK_THROWS_AS(empiricalFit(unrootedTerms(GraphClassId::DH), analysisOf(GraphClassId::DH).unrootedEstimate, 2001),
                    std::out_of_range);
}

TEST_CASE("toDecimal")
{
    PrecisionScope scope(50);
    CHECK(toDecimal(Real("0.0233751619492619"), 10) == "0.02337516195");
    CHECK(toDecimal(Real(0), 5) == "0");
}
