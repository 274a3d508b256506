#ifndef SPLITENUM_SPECIES_HPP
#define SPLITENUM_SPECIES_HPP

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splitenum/powerseries.hpp"

namespace splitenum::species {

/// Node of a decomposable-structure specification.
///
/// Rooted atoms are plain atoms: they carry weight 1 and translate to z in
/// both semantics, so a rooting mark would only be documentation.
class ClassExpr {
public:
    enum class Kind { Atom, Sum, Product, SetAtLeast, SetExactly, SeqAtLeast, Ref };

    static ClassExpr atom();
    static ClassExpr sum(std::vector<ClassExpr> terms);
    static ClassExpr product(std::vector<ClassExpr> factors);
    static ClassExpr setAtLeast(int k, ClassExpr arg);
    static ClassExpr setExactly(int k, ClassExpr arg);
    static ClassExpr seqAtLeast(int k, ClassExpr arg);
    static ClassExpr ref(std::string name);

    Kind kind() const { return kind_; }
    /// Size bound of Set/Seq nodes.
    int bound() const { return bound_; }
    const std::vector<ClassExpr>& args() const { return args_; }
    const std::string& name() const { return name_; }

    std::string toString() const;

private:
    ClassExpr(Kind kind, int bound, std::vector<ClassExpr> args, std::string name);

    Kind kind_;
    int bound_ = 0;
    std::vector<ClassExpr> args_;
    std::string name_;
};

ClassExpr operator+(ClassExpr a, ClassExpr b);
ClassExpr operator*(ClassExpr a, ClassExpr b);

struct Equation {
    std::string name;
    ClassExpr expr;
};

/// Named, possibly mutually recursive, class equations.
struct GrammarSystem {
    std::vector<Equation> equations;
    std::vector<std::string> outputs;
    std::set<std::string> recursiveNames;

    GrammarSystem& define(std::string name, ClassExpr expr, bool recursive = false);
    bool has(const std::string& name) const;
    const ClassExpr& at(const std::string& name) const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

/// Checks that every Ref resolves, that Set/Seq arguments have no constant
/// term, that non-recursive names do not form cycles, and that no recursive
/// name's n-th coefficient depends on the n-th coefficient of a recursive name.
ValidationReport validateSystem(const GrammarSystem& sys);

struct InvalidSystem : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A recursive coefficient did not settle in its round; only reachable when
/// validation is bypassed.
struct DivergentSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Semantics { Labeled, Unlabeled };

/// EGFs of every named class, coefficients 0..order.
std::map<std::string, Series> translateLabeled(const GrammarSystem& sys, std::size_t order);
/// OGFs (Polya semantics) of every named class, coefficients 0..order.
std::map<std::string, Series> translateUnlabeled(const GrammarSystem& sys, std::size_t order);

/// Integer coefficient sequences (index 0..order) of the requested names under
/// unlabeled semantics. Large orders switch to residue arithmetic with CRT
/// reconstruction; the values are exact either way.
std::map<std::string, std::vector<BigInt>> unlabeledCounts(const GrammarSystem& sys, std::size_t order,
                                                           const std::vector<std::string>& names);

/// Orders above this use the multimodular path in unlabeledCounts.
inline constexpr std::size_t kModularThreshold = 300;

/// Forces a particular unlabeled backend; used to cross-check the two.
enum class Backend { Automatic, Rational, Modular };
std::map<std::string, std::vector<BigInt>> unlabeledCounts(const GrammarSystem& sys, std::size_t order,
                                                           const std::vector<std::string>& names,
                                                           Backend backend);

/// Signed combination sum_i sign_i * name_i (sign = +1 or -1) of unlabeled
/// counts, index 0..order. Cheaper than fetching the names separately at
/// large orders since only the combination is reconstructed.
using SignedName = std::pair<std::string, int>;
std::vector<BigInt> unlabeledCombination(const GrammarSystem& sys, std::size_t order,
                                         const std::vector<SignedName>& terms, Backend backend = Backend::Automatic);

/// OGF of k-multisets of a-structures: Set_k(a) = (1/k) sum_{i=1..k} a(z^i) Set_{k-i}(a).
Series setExactlyUnlabeled(const Series& a, int k);

} // namespace splitenum::species

#endif
