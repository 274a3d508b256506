#ifndef SPLITENUM_DETAIL_PROGRAM_HPP
#define SPLITENUM_DETAIL_PROGRAM_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "splitenum/species.hpp"

namespace splitenum::species::detail {

struct SmallQ {
    long num = 0;
    long den = 1;
};

// Primitive series operations a class specification lowers to. Every node's
// coefficient n is split into a part that only reads indices < n (history)
// and a cheap remainder that reads index n of its children.
enum class Op {
    Poly,     // fixed sparse polynomial
    Ref,      // coefficient sequence of a recursive name
    Linear,   // sum of small-rational multiples of children
    Shift,    // z^s * child
    Subst,    // child(z^i), i >= 2
    Product,  // child0 * child1
    SeqInv,   // 1 / (1 - child)
    Exp,      // exp(child)
    PolyaExp, // exp(sum_i child(z^i) / i)
};

struct Node {
    Op op = Op::Poly;
    std::vector<int> kids;
    std::vector<SmallQ> coefs;                          // Linear weights
    std::vector<std::pair<std::size_t, SmallQ>> terms;  // Poly terms
    std::size_t param = 0;                              // Shift amount, Subst power, Ref slot
};

struct Program {
    std::vector<Node> nodes; // topological: kids precede parents, Ref nodes are sources
    std::vector<std::string> recursive;
    std::vector<int> refNode;  // slot -> Ref node
    std::vector<int> rootNode; // slot -> node computing the equation's right-hand side
    std::map<std::string, int> nameNode;
};

/// Lowers a validated system; throws InvalidSystem otherwise.
Program lower(const GrammarSystem& sys, Semantics semantics);

/// Signed sum of node sequences (sign is +1 or -1).
using SignedNodes = std::vector<std::pair<int, int>>;

/// Exact integer coefficients 0..order of each signed combination, computed
/// over residues and rebuilt by CRT.
std::vector<std::vector<BigInt>> solveModular(const Program& prog, std::size_t order,
                                              const std::vector<SignedNodes>& outputs);

} // namespace splitenum::species::detail

#endif
