#include <doctest.h>

#include <random>

#include "detail/engine.hpp"
#include "detail/program.hpp"
#include "detail/rings.hpp"
#include "splitenum/grammars.hpp"
#include "splitenum/species.hpp"
#include "support/checks.hpp"
#include "support/oracles.hpp"

using namespace splitenum;
using namespace splitenum::species;

namespace {

ClassExpr Z() { return ClassExpr::atom(); }
ClassExpr R(const std::string& n) { return ClassExpr::ref(n); }

GrammarSystem single(const std::string& name, ClassExpr e, bool recursive)
{
    GrammarSystem g;
    g.define(name, std::move(e), recursive);
    g.outputs = {name};
    return g;
}

// Expressions of valuation >= 1 over recursive names X0..X{k-1}.
ClassExpr randomPositive(std::mt19937& rng, int names, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    std::uniform_int_distribution<int> bound(1, 3);
    std::uniform_int_distribution<int> which(0, names - 1);
    switch (pick(rng)) {
    case 0:
        return Z();
    case 1:
        return R("X" + std::to_string(which(rng)));
    case 2:
        return randomPositive(rng, names, depth - 1) + randomPositive(rng, names, depth - 1);
    case 3:
        return randomPositive(rng, names, depth - 1) * randomPositive(rng, names, depth - 1);
    case 4:
        return ClassExpr::setAtLeast(bound(rng), randomPositive(rng, names, depth - 1));
    case 5:
        return ClassExpr::seqAtLeast(bound(rng), randomPositive(rng, names, depth - 1));
    case 6:
        return ClassExpr::setExactly(bound(rng), randomPositive(rng, names, depth - 1));
    default:
        return Z() + randomPositive(rng, names, depth - 1);
    }
}

GrammarSystem randomSystem(std::mt19937& rng)
{
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_int_distribution<int> shape(0, 2);
    const int k = count(rng);
    GrammarSystem g;
    for (int i = 0; i < k; ++i) {
        const std::string name = "X" + std::to_string(i);
        ClassExpr body = randomPositive(rng, k, 3);
        switch (shape(rng)) {
        case 0:
            g.define(name, Z() * ClassExpr::setAtLeast(0, std::move(body)), true);
            break;
        case 1:
            g.define(name, Z() * ClassExpr::seqAtLeast(0, std::move(body)), true);
            break;
        default:
            g.define(name, Z() + Z() * std::move(body), true);
            break;
        }
        g.outputs.push_back(name);
    }
    return g;
}

std::vector<BigInt> factorials(std::size_t n)
{
    std::vector<BigInt> f(n + 1, 1);
    for (std::size_t i = 1; i <= n; ++i)
        f[i] = f[i - 1] * static_cast<unsigned long>(i);
    return f;
}

} // namespace

TEST_CASE("validateSystem")
{
    using grammars::GraphClassId;
    using grammars::Rooting;
    CHECK(validateSystem(grammars::buildGrammar(GraphClassId::TLP, Rooting::Rooted)).ok());
    CHECK(validateSystem(grammars::buildGrammar(GraphClassId::DH, Rooting::Rooted)).ok());

    CHECK_FALSE(validateSystem(single("X", R("X"), true)).ok());
    CHECK_FALSE(validateSystem(single("X", Z() + ClassExpr::setAtLeast(1, R("X")), true)).ok());
    CHECK_FALSE(validateSystem(single("X", Z() + R("Y"), true)).ok());
    CHECK_FALSE(validateSystem(single("X", ClassExpr::setAtLeast(2, ClassExpr::seqAtLeast(0, Z())), false)).ok());
    CHECK(validateSystem(single("X", Z() * ClassExpr::seqAtLeast(0, R("X")), true)).ok());
    CHECK(validateSystem(single("X", Z() + ClassExpr::setAtLeast(2, R("X")), true)).ok());

    SUBCASE("cycles among non-recursive names are rejected")
    {
        GrammarSystem g;
        g.define("A", Z() + R("B"));
        g.define("B", Z() * R("A"));
        const auto report = validateSystem(g);
        CHECK_FALSE(report.ok());
        CHECK_FALSE(report.violations.empty());
    }
    SUBCASE("a critical reference through a non-recursive name is found")
    {
        GrammarSystem g;
        g.define("X", Z() + R("Y"), true);
        g.define("Y", Z() + R("X"));
        CHECK_FALSE(validateSystem(g).ok());
    }
    CHECK_THROWS_AS(translateLabeled(single("X", R("X"), true), 5), InvalidSystem);
    CHECK_THROWS_AS(ClassExpr::setAtLeast(-1, Z()), std::invalid_argument);
}

TEST_CASE("translateLabeled")
{
    const auto e = translateLabeled(single("T", ClassExpr::setAtLeast(0, Z()), false), 10).at("T");
    CHECK_SERIES(e, seriesExp(Series::monomial(10, 1)));

    const auto tlp = grammars::buildGrammar(grammars::GraphClassId::TLP, grammars::Rooting::Rooted);
    const auto T = translateLabeled(tlp, 6).at("T");
    const long expected[] = {12, 140, 1805, 26892};
    for (int n = 3; n <= 6; ++n)
        CHECK(T[static_cast<std::size_t>(n)] * testoracle::factorial(n) == expected[n - 3]);

    SUBCASE("labeled plane trees")
    {
        const auto P = translateLabeled(single("T", Z() * ClassExpr::seqAtLeast(0, R("T")), true), 6).at("T");
        for (int n = 1; n <= 6; ++n)
            CHECK(P[static_cast<std::size_t>(n)] * testoracle::factorial(n) ==
                  testoracle::factorial(n) * testoracle::dyckWords(n - 1));
    }
}

TEST_CASE("translateUnlabeled")
{
    const auto L = translateUnlabeled(single("T", ClassExpr::setAtLeast(1, Z()), false), 12).at("T");
    CHECK_SERIES(L, seriesAdd(Series::geometric(12), Series::constant(12, 1), -1));

    const auto pairs = translateUnlabeled(single("P", ClassExpr::setExactly(2, Z() + Z() * Z()), false), 8).at("P");
    CHECK_SERIES(pairs, Series(8, {0, 0, 1, 1, 1}));

    const auto trees = translateUnlabeled(single("T", Z() * ClassExpr::setAtLeast(0, R("T")), true), 12).at("T");
    const auto brute = testoracle::rootedTreeCounts(8);
    for (int n = 1; n <= 8; ++n)
        CHECK(trees[static_cast<std::size_t>(n)] == brute[static_cast<std::size_t>(n)]);
    CHECK(trees[12] == 4766);

    SUBCASE("above the modular threshold the series are unchanged")
    {
        const std::size_t order = kModularThreshold + 20;
        const auto sys = single("T", Z() * ClassExpr::setAtLeast(0, R("T")), true);
        const auto big = translateUnlabeled(sys, order).at("T");
        const auto counts = unlabeledCounts(sys, order, {"T"}, Backend::Rational).at("T");
        for (std::size_t n = 0; n <= order; ++n)
            CHECK(big[n] == counts[n]);
    }
}

TEST_CASE("setExactlyUnlabeled")
{
    const auto L = seriesAdd(Series::geometric(12), Series::constant(12, 1), -1);
    CHECK_SERIES(setExactlyUnlabeled(L, 0), Series::constant(12, 1));
    CHECK_SERIES(setExactlyUnlabeled(L, 1), L);
    const auto s2 = setExactlyUnlabeled(L, 2);
    for (int n = 2; n <= 12; ++n)
        CHECK(s2[static_cast<std::size_t>(n)] == n / 2);
    CHECK(s2[2] == 1);
    CHECK(s2[3] == 1);
    CHECK(s2[4] == 2);
    CHECK_THROWS_AS(setExactlyUnlabeled(Series::constant(4, 1), 2), NonzeroConstantTerm);
}

TEST_CASE("engine reports a coefficient that does not settle")
{
    using namespace splitenum::species::detail;
    Program p;
    p.nodes.push_back(Node{Op::Ref, {}, {}, {}, 0});
    p.nodes.push_back(Node{Op::Poly, {}, {}, {{1, SmallQ{1, 1}}}, 0});
    p.nodes.push_back(Node{Op::Linear, {0, 1}, {SmallQ{1, 1}, SmallQ{1, 1}}, {}, 0});
    p.recursive = {"X"};
    p.refNode = {0};
    p.rootNode = {2};
    Engine<RationalRing> engine(p, {});
    CHECK_THROWS_AS(engine.run(3), DivergentSystem);
}

TEST_CASE("unlabeledCombination signs")
{
    GrammarSystem g;
    g.define("A", ClassExpr::setAtLeast(1, Z()));
    g.define("B", Z());
    const auto c = unlabeledCombination(g, 6, {{"A", 1}, {"B", -1}});
    CHECK(c == std::vector<BigInt>{0, 0, 1, 1, 1, 1, 1});
    CHECK_THROWS(unlabeledCombination(g, 6, {{"A", 2}}));
    CHECK_THROWS(unlabeledCombination(g, 6, {{"missing", 1}}));
}

TEST_CASE("properties: random grammars")
{
    std::mt19937 rng(20240601);
    constexpr std::size_t order = 14;
    const auto fact = factorials(order);
    for (int t = 0; t < 40; ++t) {
        const GrammarSystem g = randomSystem(rng);
        REQUIRE(validateSystem(g).ok());
        const auto lab = translateLabeled(g, order);
        const auto unl = translateUnlabeled(g, order);
        for (const auto& name : g.outputs) {
            const Series& egf = lab.at(name);
            const Series& ogf = unl.at(name);
            CHECK(ogf.allIntegral());
            for (std::size_t n = 1; n <= order; ++n) {
                const Rational labeled = egf[n] * fact[n];
                CHECK(labeled.get_den() == 1);
                CHECK(labeled >= ogf[n]);
                CHECK(labeled <= ogf[n] * fact[n]);
            }
        }
        {
            // fixpoint stability
            const auto longer = translateUnlabeled(g, 2 * order);
            for (const auto& name : g.outputs)
                CHECK_SERIES(longer.at(name).truncated(order), unl.at(name));
        }
        {
            // residue backend equals rational backend
            std::vector<std::string> names(g.outputs.begin(), g.outputs.end());
            CHECK(unlabeledCounts(g, 40, names, Backend::Modular) == unlabeledCounts(g, 40, names, Backend::Rational));
        }
    }
}

TEST_CASE("properties: Set and Seq identities")
{
    std::mt19937 rng(99);
    constexpr std::size_t order = 16;
    for (int t = 0; t < 25; ++t) {
        GrammarSystem base = randomSystem(rng);
        const ClassExpr a = R("X0");
        for (int k = 0; k <= 3; ++k) {
            GrammarSystem g = base;
            g.define("SetGe", ClassExpr::setAtLeast(k, a));
            g.define("SetGe1", ClassExpr::setAtLeast(k + 1, a));
            g.define("SetEq", ClassExpr::setExactly(k, a));
            g.define("SeqGe", ClassExpr::seqAtLeast(k, a));
            const auto u = translateUnlabeled(g, order);
            CHECK_SERIES(u.at("SetGe"), u.at("SetGe1") + u.at("SetEq"));
            for (std::size_t n = 0; n <= order; ++n)
                CHECK(u.at("SeqGe")[n] >= u.at("SetGe")[n]);
            const auto l = translateLabeled(g, order);
            CHECK_SERIES(l.at("SetGe"), l.at("SetGe1") + l.at("SetEq"));
        }
    }
}
