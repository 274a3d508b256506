#ifndef SPLITENUM_GRAMMARS_HPP
#define SPLITENUM_GRAMMARS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitenum/powerseries.hpp"
#include "splitenum/species.hpp"

namespace splitenum::grammars {

enum class GraphClassId { DH, TLP };
enum class Flavor { Labeled, Unlabeled };
enum class Rooting { Rooted, Unrooted };

std::string toString(GraphClassId id);
std::string toString(Flavor f);
std::string toString(Rooting r);

struct CountMeta {
    std::size_t order = 0;
    std::string variant = "default";
    bool patched = false;

    bool operator==(const CountMeta&) const = default;
};

/// Counts of connected graphs; terms[n] is the count on n vertices and
/// terms[0] is an unused zero slot, so terms.size() == meta.order + 1.
struct CountTable {
    GraphClassId classId = GraphClassId::DH;
    Flavor flavor = Flavor::Unlabeled;
    Rooting rooting = Rooting::Unrooted;
    std::vector<BigInt> terms;
    CountMeta meta;

    bool operator==(const CountTable&) const = default;
};

struct UnknownVariant : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Variants accepted by buildGrammar:
///   "default"            every class and rooting
///   "appendixA-product"  DH: S_X = (Z+K+S_C) x Set>=1(Z+K+S_X)
///   "merged"             DH: K and S_C merged into K, S_X renamed S
///   "mutant-sx-set"      DH: S_X = Set>=2(Z+K+S_C), a deliberately wrong grammar
///   "mutant-tss-product" unrooted: T_{S-S} built from products without the
///                        Set_2 symmetry, a deliberately wrong grammar
std::vector<std::string> knownVariants(GraphClassId id, Rooting rooting);

/// Rooted systems output the vertex-rooted class ("T" for 3LP, "D" for DH).
/// Unrooted systems contain the rooted core's recursive equations plus the
/// non-recursive T_* terms named by unrootedCombination.
species::GrammarSystem buildGrammar(GraphClassId id, Rooting rooting, const std::string& variant = "default");

/// Name of the vertex-rooted class in the rooted system.
std::string rootedName(GraphClassId id);

/// Dissymmetry combination whose coefficients count unrooted graphs (up to
/// the first two terms).
std::vector<species::SignedName> unrootedCombination(GraphClassId id);

CountTable enumerate(GraphClassId id, Flavor flavor, Rooting rooting, std::size_t n,
                     const std::string& variant = "default");

/// Sets terms[1] and terms[2] to 1: the one-vertex and one-edge graphs.
CountTable patchInitialTerms(CountTable table);

/// Labeled check that the unrooted combination's EGF has coefficient
/// [z^n] T_rooted / n for 3 <= n <= order.
bool dissymmetryCheckLabeled(GraphClassId id, std::size_t order, const std::string& unrootedVariant = "default");

} // namespace splitenum::grammars

#endif
