#include "splitenum/grammars.hpp"

#include <algorithm>

namespace splitenum::grammars {

using species::ClassExpr;
using species::GrammarSystem;

namespace {

ClassExpr Z() { return ClassExpr::atom(); }
ClassExpr R(const char* name) { return ClassExpr::ref(name); }
ClassExpr sum(std::vector<ClassExpr> t) { return ClassExpr::sum(std::move(t)); }
ClassExpr setGe(int k, ClassExpr a) { return ClassExpr::setAtLeast(k, std::move(a)); }
ClassExpr set2(ClassExpr a) { return ClassExpr::setExactly(2, std::move(a)); }
ClassExpr seqGe(int k, ClassExpr a) { return ClassExpr::seqAtLeast(k, std::move(a)); }

// Leaves, clique nodes and star nodes of the rooted 3LP split tree.
void tlpCore(GrammarSystem& g)
{
    g.define("L", Z() + setGe(2, Z()));
    g.define("S_C", setGe(2, R("L") + R("S_X")), true);
    g.define("S_X", R("L") * setGe(1, R("L") + R("S_X")), true);
}

void dhCore(GrammarSystem& g, const std::string& variant)
{
    if (variant == "merged") {
        g.define("K", setGe(2, sum({Z(), R("K"), R("S")})), true);
        g.define("S", seqGe(2, sum({Z(), R("K"), R("K")})), true);
        return;
    }
    g.define("K", setGe(2, sum({Z(), R("S_C"), R("S_X")})), true);
    g.define("S_C", setGe(2, sum({Z(), R("K"), R("S_X")})), true);
    if (variant == "appendixA-product")
        g.define("S_X", sum({Z(), R("K"), R("S_C")}) * setGe(1, sum({Z(), R("K"), R("S_X")})), true);
    else if (variant == "mutant-sx-set")
        g.define("S_X", setGe(2, sum({Z(), R("K"), R("S_C")})), true);
    else
        g.define("S_X", seqGe(2, sum({Z(), R("K"), R("S_C")})), true);
}

GrammarSystem tlpRooted()
{
    GrammarSystem g;
    tlpCore(g);
    g.define("L_root", Z() + Z() * setGe(1, Z()));
    g.define("K_root", Z() * setGe(2, Z()));
    g.define("T", R("L_root") * (R("S_C") + R("S_X")) + R("K_root"));
    g.outputs = {"T"};
    return g;
}

GrammarSystem tlpUnrooted(const std::string& variant)
{
    GrammarSystem g;
    tlpCore(g);
    g.define("K", setGe(3, Z()));
    g.define("T_S", R("L") * R("S_C"));
    g.define("T_SS", variant == "mutant-tss-product" ? R("S_X") * R("S_X") : set2(R("S_X")));
    g.define("T_StoS", R("S_X") * R("S_X"));
    g.outputs = {"K", "T_S", "T_SS", "T_StoS"};
    return g;
}

GrammarSystem dhRooted(const std::string& variant)
{
    GrammarSystem g;
    dhCore(g, variant);
    if (variant == "merged")
        g.define("D", Z() * sum({R("K"), R("K"), R("S")}));
    else
        g.define("D", Z() * sum({R("K"), R("S_C"), R("S_X")}));
    g.outputs = {"D"};
    return g;
}

GrammarSystem dhUnrooted(const std::string& variant)
{
    GrammarSystem g;
    dhCore(g, variant);
    const bool merged = variant == "merged";
    const char* sc = merged ? "K" : "S_C";
    const char* sx = merged ? "S" : "S_X";
    g.define("T_K", setGe(3, sum({Z(), R(sc), R(sx)})));
    g.define("T_S", sum({Z(), R("K"), R(sc)}) * R(sc));
    g.define("T_KS", R("K") * (R(sc) + R(sx)));
    if (variant == "mutant-tss-product")
        g.define("T_SS", R(sc) * R(sc) + R(sx) * R(sx));
    else
        g.define("T_SS", set2(R(sc)) + set2(R(sx)));
    g.define("T_StoS", R(sc) * R(sc) + R(sx) * R(sx));
    g.outputs = {"T_K", "T_S", "T_SS", "T_KS", "T_StoS"};
    return g;
}

std::vector<BigInt> shiftedFactorials(std::size_t order, int shift)
{
    // f[n] = (n + shift)! for n >= 1 - shift
    std::vector<BigInt> f(order + 1, 1);
    for (std::size_t n = 1; n <= order; ++n) {
        const long k = static_cast<long>(n) + shift;
        f[n] = k <= 1 ? BigInt(1) : BigInt(f[n - 1] * k);
    }
    return f;
}

} // namespace

std::string toString(GraphClassId id) { return id == GraphClassId::DH ? "dh" : "3lp"; }
std::string toString(Flavor f) { return f == Flavor::Labeled ? "labeled" : "unlabeled"; }
std::string toString(Rooting r) { return r == Rooting::Rooted ? "rooted" : "unrooted"; }

std::vector<std::string> knownVariants(GraphClassId id, Rooting rooting)
{
    std::vector<std::string> v{"default"};
    if (id == GraphClassId::DH) {
        v.push_back("appendixA-product");
        v.push_back("merged");
        v.push_back("mutant-sx-set");
    }
    if (rooting == Rooting::Unrooted)
        v.push_back("mutant-tss-product");
    return v;
}

GrammarSystem buildGrammar(GraphClassId id, Rooting rooting, const std::string& variant)
{
    const auto known = knownVariants(id, rooting);
    if (std::find(known.begin(), known.end(), variant) == known.end())
        throw UnknownVariant("unknown grammar variant '" + variant + "' for " + toString(id) + " " +
                             toString(rooting));
    GrammarSystem g;
    if (id == GraphClassId::TLP)
        g = rooting == Rooting::Rooted ? tlpRooted() : tlpUnrooted(variant);
    else
        g = rooting == Rooting::Rooted ? dhRooted(variant) : dhUnrooted(variant);
    const auto report = species::validateSystem(g);
    if (!report.ok())
        throw species::InvalidSystem(report.violations.front());
    return g;
}

std::string rootedName(GraphClassId id) { return id == GraphClassId::DH ? "D" : "T"; }

std::vector<species::SignedName> unrootedCombination(GraphClassId id)
{
    if (id == GraphClassId::TLP)
        return {{"K", 1}, {"T_S", 1}, {"T_SS", 1}, {"T_StoS", -1}};
    return {{"T_K", 1}, {"T_S", 1}, {"T_SS", 1}, {"T_KS", -1}, {"T_StoS", -1}};
}

CountTable enumerate(GraphClassId id, Flavor flavor, Rooting rooting, std::size_t n, const std::string& variant)
{
    if (n < 1)
        throw std::invalid_argument("enumerate: n must be at least 1");
    CountTable table;
    table.classId = id;
    table.flavor = flavor;
    table.rooting = rooting;
    table.meta.order = n;
    table.meta.variant = variant;

    if (flavor == Flavor::Unlabeled) {
        const auto g = buildGrammar(id, rooting, variant);
        if (rooting == Rooting::Rooted)
            table.terms = species::unlabeledCombination(g, n, {{rootedName(id), 1}});
        else
            table.terms = species::unlabeledCombination(g, n, unrootedCombination(id));
    } else {
        // Labeled counts come from the rooted EGF; rooting at a vertex multiplies by n.
        buildGrammar(id, rooting, variant);
        const auto rootedVariants = knownVariants(id, Rooting::Rooted);
        const bool shared = std::find(rootedVariants.begin(), rootedVariants.end(), variant) != rootedVariants.end();
        const auto g = buildGrammar(id, Rooting::Rooted, shared ? variant : "default");
        const Series egf = species::translateLabeled(g, n).at(rootedName(id));
        const auto fact = shiftedFactorials(n, rooting == Rooting::Rooted ? 0 : -1);
        table.terms.assign(n + 1, 0);
        for (std::size_t k = 1; k <= n; ++k) {
            const Rational v = egf[k] * fact[k];
            if (v.get_den() != 1)
                throw std::logic_error("non-integral labeled count at n = " + std::to_string(k));
            table.terms[k] = v.get_num();
        }
    }
    table.terms[0] = 0;
    return patchInitialTerms(std::move(table));
}

CountTable patchInitialTerms(CountTable table)
{
    for (std::size_t n = 1; n <= 2 && n < table.terms.size(); ++n)
        table.terms[n] = 1;
    table.meta.patched = true;
    return table;
}

bool dissymmetryCheckLabeled(GraphClassId id, std::size_t order, const std::string& unrootedVariant)
{
    const auto rooted = species::translateLabeled(buildGrammar(id, Rooting::Rooted), order).at(rootedName(id));
    const auto unrooted = species::translateLabeled(buildGrammar(id, Rooting::Unrooted, unrootedVariant), order);
    Series combo = Series::zero(order);
    for (const auto& [name, sign] : unrootedCombination(id))
        combo = seriesAdd(combo, unrooted.at(name), sign);
    for (std::size_t n = 3; n <= order; ++n)
        if (combo[n] * static_cast<long>(n) != rooted[n])
            return false;
    return true;
}

} // namespace splitenum::grammars
