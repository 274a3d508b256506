#include "splitenum/species.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "detail/engine.hpp"
#include "detail/program.hpp"
#include "detail/rings.hpp"

namespace splitenum::species {

// ---------------------------------------------------------------- ClassExpr

ClassExpr::ClassExpr(Kind kind, int bound, std::vector<ClassExpr> args, std::string name)
    : kind_(kind), bound_(bound), args_(std::move(args)), name_(std::move(name))
{
}

ClassExpr ClassExpr::atom() { return ClassExpr(Kind::Atom, 0, {}, {}); }
ClassExpr ClassExpr::sum(std::vector<ClassExpr> terms) { return ClassExpr(Kind::Sum, 0, std::move(terms), {}); }
ClassExpr ClassExpr::product(std::vector<ClassExpr> factors)
{
    return ClassExpr(Kind::Product, 0, std::move(factors), {});
}

static void requireBound(int k)
{
    if (k < 0)
        throw std::invalid_argument("Set/Seq size bound must be non-negative");
}

ClassExpr ClassExpr::setAtLeast(int k, ClassExpr arg)
{
    requireBound(k);
    return ClassExpr(Kind::SetAtLeast, k, {std::move(arg)}, {});
}
ClassExpr ClassExpr::setExactly(int k, ClassExpr arg)
{
    requireBound(k);
    return ClassExpr(Kind::SetExactly, k, {std::move(arg)}, {});
}
ClassExpr ClassExpr::seqAtLeast(int k, ClassExpr arg)
{
    requireBound(k);
    return ClassExpr(Kind::SeqAtLeast, k, {std::move(arg)}, {});
}
ClassExpr ClassExpr::ref(std::string name) { return ClassExpr(Kind::Ref, 0, {}, std::move(name)); }

std::string ClassExpr::toString() const
{
    auto join = [this](const char* sep) {
        std::string s;
        for (std::size_t i = 0; i < args_.size(); ++i)
            s += (i ? sep : "") + args_[i].toString();
        return s;
    };
    switch (kind_) {
    case Kind::Atom:
        return "Z";
    case Kind::Sum:
        return "(" + join(" + ") + ")";
    case Kind::Product:
        return "(" + join(" x ") + ")";
    case Kind::SetAtLeast:
        return "Set>=" + std::to_string(bound_) + "(" + join("") + ")";
    case Kind::SetExactly:
        return "Set=" + std::to_string(bound_) + "(" + join("") + ")";
    case Kind::SeqAtLeast:
        return "Seq>=" + std::to_string(bound_) + "(" + join("") + ")";
    case Kind::Ref:
        return name_;
    }
    return "?";
}

ClassExpr operator+(ClassExpr a, ClassExpr b) { return ClassExpr::sum({std::move(a), std::move(b)}); }
ClassExpr operator*(ClassExpr a, ClassExpr b) { return ClassExpr::product({std::move(a), std::move(b)}); }

// ------------------------------------------------------------ GrammarSystem

GrammarSystem& GrammarSystem::define(std::string name, ClassExpr expr, bool recursive)
{
    if (has(name))
        throw std::invalid_argument("duplicate equation '" + name + "'");
    if (recursive)
        recursiveNames.insert(name);
    equations.push_back({std::move(name), std::move(expr)});
    return *this;
}

bool GrammarSystem::has(const std::string& name) const
{
    return std::any_of(equations.begin(), equations.end(), [&](const Equation& e) { return e.name == name; });
}

const ClassExpr& GrammarSystem::at(const std::string& name) const
{
    for (const auto& e : equations)
        if (e.name == name)
            return e.expr;
    throw std::out_of_range("no equation named '" + name + "'");
}

// --------------------------------------------------------------- validation

namespace {

constexpr long kInfinite = std::numeric_limits<long>::max() / 4;

class Analyzer {
public:
    explicit Analyzer(const GrammarSystem& sys) : sys_(sys)
    {
        for (const auto& e : sys.equations)
            valuation_[e.name] = kInfinite;
    }

    ValidationReport run()
    {
        ValidationReport report;
        auto& v = report.violations;
        for (const auto& name : sys_.recursiveNames)
            if (!sys_.has(name))
                v.push_back("recursive name '" + name + "' has no equation");
        for (const auto& name : sys_.outputs)
            if (!sys_.has(name))
                v.push_back("output '" + name + "' has no equation");
        for (const auto& e : sys_.equations)
            collectRefs(e.name, e.expr, v);
        if (!v.empty())
            return report;

        computeValuations();
        for (const auto& e : sys_.equations)
            checkArguments(e.name, e.expr, v);

        for (const auto& e : sys_.equations)
            if (!sys_.recursiveNames.count(e.name)) {
                std::vector<std::string> stack;
                if (nonRecursiveCycle(e.name, stack)) {
                    v.push_back("non-recursive names form a cycle through '" + e.name + "'");
                    return report;
                }
            }

        for (const auto& name : sys_.recursiveNames) {
            std::set<std::string> deps = critical(sys_.at(name));
            for (const auto& d : deps)
                v.push_back("coefficient n of '" + name + "' depends on coefficient n of '" + d +
                            "' (system is not contracting)");
        }
        return report;
    }

private:
    void collectRefs(const std::string& owner, const ClassExpr& e, std::vector<std::string>& v) const
    {
        if (e.kind() == ClassExpr::Kind::Ref && !sys_.has(e.name()))
            v.push_back("'" + owner + "' references undefined class '" + e.name() + "'");
        if ((e.kind() == ClassExpr::Kind::Sum || e.kind() == ClassExpr::Kind::Product) && e.args().empty())
            v.push_back("'" + owner + "' contains an empty sum or product");
        for (const auto& a : e.args())
            collectRefs(owner, a, v);
    }

    long val(const ClassExpr& e) const
    {
        switch (e.kind()) {
        case ClassExpr::Kind::Atom:
            return 1;
        case ClassExpr::Kind::Ref:
            return valuation_.at(e.name());
        case ClassExpr::Kind::Sum: {
            long m = kInfinite;
            for (const auto& a : e.args())
                m = std::min(m, val(a));
            return m;
        }
        case ClassExpr::Kind::Product: {
            long s = 0;
            for (const auto& a : e.args())
                s = std::min(kInfinite, s + val(a));
            return s;
        }
        case ClassExpr::Kind::SetAtLeast:
        case ClassExpr::Kind::SetExactly:
        case ClassExpr::Kind::SeqAtLeast:
            if (e.bound() == 0)
                return 0;
            return std::min(kInfinite, e.bound() * val(e.args()[0]));
        }
        return 0;
    }

    void computeValuations()
    {
        // Greatest fixpoint from +infinity; values only decrease.
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& e : sys_.equations) {
                const long nv = val(e.expr);
                if (nv < valuation_[e.name]) {
                    valuation_[e.name] = nv;
                    changed = true;
                }
            }
        }
    }

    void checkArguments(const std::string& owner, const ClassExpr& e, std::vector<std::string>& v) const
    {
        const auto k = e.kind();
        if (k == ClassExpr::Kind::SetAtLeast || k == ClassExpr::Kind::SetExactly || k == ClassExpr::Kind::SeqAtLeast) {
            if (val(e.args()[0]) < 1)
                v.push_back("argument of " + e.toString() + " in '" + owner + "' has a constant term");
        }
        for (const auto& a : e.args())
            checkArguments(owner, a, v);
    }

    bool nonRecursiveCycle(const std::string& name, std::vector<std::string>& stack) const
    {
        if (std::find(stack.begin(), stack.end(), name) != stack.end())
            return true;
        stack.push_back(name);
        bool found = false;
        std::function<void(const ClassExpr&)> walk = [&](const ClassExpr& e) {
            if (found)
                return;
            if (e.kind() == ClassExpr::Kind::Ref && !sys_.recursiveNames.count(e.name()))
                found = nonRecursiveCycle(e.name(), stack);
            for (const auto& a : e.args())
                walk(a);
        };
        walk(sys_.at(name));
        stack.pop_back();
        return found;
    }

    // Recursive names whose coefficient n can reach coefficient n of `e`.
    std::set<std::string> critical(const ClassExpr& e) const
    {
        std::set<std::string> out;
        switch (e.kind()) {
        case ClassExpr::Kind::Atom:
            break;
        case ClassExpr::Kind::Ref:
            if (sys_.recursiveNames.count(e.name()))
                out.insert(e.name());
            else
                out = critical(sys_.at(e.name()));
            break;
        case ClassExpr::Kind::Sum:
            for (const auto& a : e.args()) {
                auto s = critical(a);
                out.insert(s.begin(), s.end());
            }
            break;
        case ClassExpr::Kind::Product: {
            long total = 0;
            for (const auto& a : e.args())
                total = std::min(kInfinite, total + val(a));
            for (const auto& a : e.args()) {
                if (total - val(a) == 0) {
                    auto s = critical(a);
                    out.insert(s.begin(), s.end());
                }
            }
            break;
        }
        case ClassExpr::Kind::SetAtLeast:
        case ClassExpr::Kind::SeqAtLeast:
        case ClassExpr::Kind::SetExactly: {
            const bool singleton = e.kind() == ClassExpr::Kind::SetExactly ? e.bound() == 1 : e.bound() <= 1;
            if (singleton)
                out = critical(e.args()[0]);
            break;
        }
        }
        return out;
    }

    const GrammarSystem& sys_;
    std::map<std::string, long> valuation_;
};

} // namespace

ValidationReport validateSystem(const GrammarSystem& sys) { return Analyzer(sys).run(); }

// ----------------------------------------------------------------- lowering

namespace detail {

namespace {

long factorial(int k)
{
    if (k > 20)
        throw std::invalid_argument("Set size bound too large");
    long f = 1;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

class Lowerer {
public:
    Lowerer(const GrammarSystem& sys, Semantics sem) : sys_(sys), sem_(sem) {}

    Program run()
    {
        for (const auto& e : sys_.equations) {
            if (!sys_.recursiveNames.count(e.name))
                continue;
            Node n;
            n.op = Op::Ref;
            n.param = prog_.recursive.size();
            prog_.recursive.push_back(e.name);
            slot_[e.name] = static_cast<int>(prog_.refNode.size());
            prog_.refNode.push_back(push(std::move(n), "ref:" + e.name));
        }
        prog_.rootNode.resize(prog_.refNode.size());
        for (const auto& e : sys_.equations) {
            if (sys_.recursiveNames.count(e.name)) {
                const int root = expr(e.expr);
                prog_.rootNode[static_cast<std::size_t>(slot_[e.name])] = root;
                prog_.nameNode[e.name] = root;
            } else {
                prog_.nameNode[e.name] = named(e.name);
            }
        }
        return std::move(prog_);
    }

private:
    int push(Node n, const std::string& key)
    {
        if (auto it = cse_.find(key); it != cse_.end())
            return it->second;
        const int id = static_cast<int>(prog_.nodes.size());
        prog_.nodes.push_back(std::move(n));
        cse_[key] = id;
        return id;
    }

    static std::string q(SmallQ c) { return std::to_string(c.num) + "/" + std::to_string(c.den); }

    int poly(std::vector<std::pair<std::size_t, SmallQ>> terms)
    {
        std::string key = "poly";
        for (const auto& [k, c] : terms)
            key += ":" + std::to_string(k) + "*" + q(c);
        Node n;
        n.op = Op::Poly;
        n.terms = std::move(terms);
        return push(std::move(n), key);
    }
    int one() { return poly({{0, {1, 1}}}); }
    int z() { return poly({{1, {1, 1}}}); }

    // Returns s when node is the monomial z^s with unit coefficient.
    std::optional<std::size_t> unitMonomial(int id) const
    {
        const Node& n = prog_.nodes[static_cast<std::size_t>(id)];
        if (n.op == Op::Poly && n.terms.size() == 1 && n.terms[0].second.num == n.terms[0].second.den)
            return n.terms[0].first;
        return std::nullopt;
    }

    int linear(std::vector<std::pair<int, SmallQ>> parts)
    {
        std::map<int, SmallQ> merged;
        for (const auto& [id, c] : parts) {
            auto& m = merged[id];
            // c1/d1 + c2/d2 with small denominators
            const long num = m.num * c.den + c.num * m.den;
            const long den = m.den * c.den;
            const long g = std::gcd(num == 0 ? den : num, den);
            m = {num / g, den / g};
        }
        std::vector<int> kids;
        std::vector<SmallQ> coefs;
        std::string key = "lin";
        for (const auto& [id, c] : merged) {
            if (c.num == 0)
                continue;
            kids.push_back(id);
            coefs.push_back(c);
            key += ":" + std::to_string(id) + "*" + q(c);
        }
        if (kids.size() == 1 && coefs[0].num == coefs[0].den)
            return kids[0];
        if (kids.empty())
            return poly({});
        Node n;
        n.op = Op::Linear;
        n.kids = std::move(kids);
        n.coefs = std::move(coefs);
        return push(std::move(n), key);
    }

    int shift(int a, std::size_t s)
    {
        if (s == 0)
            return a;
        Node n;
        n.op = Op::Shift;
        n.kids = {a};
        n.param = s;
        return push(std::move(n), "shift:" + std::to_string(a) + ":" + std::to_string(s));
    }

    int subst(int a, std::size_t i)
    {
        if (i == 1)
            return a;
        Node n;
        n.op = Op::Subst;
        n.kids = {a};
        n.param = i;
        return push(std::move(n), "subst:" + std::to_string(a) + ":" + std::to_string(i));
    }

    int product(int a, int b)
    {
        if (auto s = unitMonomial(a))
            return shift(b, *s);
        if (auto s = unitMonomial(b))
            return shift(a, *s);
        if (a > b)
            std::swap(a, b);
        Node n;
        n.op = Op::Product;
        n.kids = {a, b};
        return push(std::move(n), "mul:" + std::to_string(a) + ":" + std::to_string(b));
    }

    int unary(Op op, int a, const char* tag)
    {
        Node n;
        n.op = op;
        n.kids = {a};
        return push(std::move(n), std::string(tag) + ":" + std::to_string(a));
    }

    int power(int a, int j)
    {
        if (j == 0)
            return one();
        int r = a;
        for (int i = 1; i < j; ++i)
            r = product(r, a);
        return r;
    }

    // Set_j(a) for j = 0..k.
    int setExactly(int a, int k)
    {
        if (sem_ == Semantics::Labeled)
            return linear({{power(a, k), {1, factorial(k)}}});
        auto& cache = sets_[a];
        if (cache.empty())
            cache.push_back(one());
        while (static_cast<int>(cache.size()) <= k) {
            const int j = static_cast<int>(cache.size());
            std::vector<std::pair<int, SmallQ>> parts;
            for (int i = 1; i <= j; ++i)
                parts.push_back({product(subst(a, static_cast<std::size_t>(i)), cache[static_cast<std::size_t>(j - i)]),
                                 {1, j}});
            cache.push_back(linear(std::move(parts)));
        }
        return cache[static_cast<std::size_t>(k)];
    }

    int lowerSmallSets(int full, int a, int k, bool sequence)
    {
        std::vector<std::pair<int, SmallQ>> parts{{full, {1, 1}}};
        for (int j = 0; j < k; ++j)
            parts.push_back({sequence ? power(a, j) : setExactly(a, j), {-1, 1}});
        return linear(std::move(parts));
    }

    int expr(const ClassExpr& e)
    {
        switch (e.kind()) {
        case ClassExpr::Kind::Atom:
            return z();
        case ClassExpr::Kind::Ref: {
            if (auto it = slot_.find(e.name()); it != slot_.end())
                return prog_.refNode[static_cast<std::size_t>(it->second)];
            return named(e.name());
        }
        case ClassExpr::Kind::Sum: {
            std::vector<std::pair<int, SmallQ>> parts;
            for (const auto& a : e.args())
                parts.push_back({expr(a), {1, 1}});
            return linear(std::move(parts));
        }
        case ClassExpr::Kind::Product: {
            int r = expr(e.args()[0]);
            for (std::size_t i = 1; i < e.args().size(); ++i)
                r = product(r, expr(e.args()[i]));
            return r;
        }
        case ClassExpr::Kind::SetExactly:
            return setExactly(expr(e.args()[0]), e.bound());
        case ClassExpr::Kind::SetAtLeast: {
            const int a = expr(e.args()[0]);
            const int full = sem_ == Semantics::Labeled ? unary(Op::Exp, a, "exp") : unary(Op::PolyaExp, a, "pexp");
            return lowerSmallSets(full, a, e.bound(), false);
        }
        case ClassExpr::Kind::SeqAtLeast: {
            const int a = expr(e.args()[0]);
            return lowerSmallSets(unary(Op::SeqInv, a, "seq"), a, e.bound(), true);
        }
        }
        throw std::logic_error("unreachable");
    }

    int named(const std::string& name)
    {
        if (auto it = named_.find(name); it != named_.end())
            return it->second;
        const int id = expr(sys_.at(name));
        named_[name] = id;
        return id;
    }

    const GrammarSystem& sys_;
    Semantics sem_;
    Program prog_;
    std::map<std::string, int> cse_;
    std::map<std::string, int> slot_;
    std::map<std::string, int> named_;
    std::map<int, std::vector<int>> sets_;
};

} // namespace

Program lower(const GrammarSystem& sys, Semantics semantics)
{
    const auto report = validateSystem(sys);
    if (!report.ok())
        throw InvalidSystem("invalid system: " + report.violations.front());
    return Lowerer(sys, semantics).run();
}

} // namespace detail

// -------------------------------------------------------------- translators

namespace {

std::map<std::string, Series> solveRational(const GrammarSystem& sys, std::size_t order, Semantics sem)
{
    const detail::Program prog = detail::lower(sys, sem);
    detail::Engine<detail::RationalRing> engine(prog, {});
    engine.run(order);
    std::map<std::string, Series> out;
    for (const auto& [name, node] : prog.nameNode)
        out.emplace(name, Series(engine.values(node)));
    return out;
}

} // namespace

std::map<std::string, Series> translateLabeled(const GrammarSystem& sys, std::size_t order)
{
    return solveRational(sys, order, Semantics::Labeled);
}

std::map<std::string, Series> translateUnlabeled(const GrammarSystem& sys, std::size_t order)
{
    if (order <= kModularThreshold)
        return solveRational(sys, order, Semantics::Unlabeled);
    std::vector<std::string> names;
    for (const auto& e : sys.equations)
        names.push_back(e.name);
    std::map<std::string, Series> out;
    for (auto& [name, terms] : unlabeledCounts(sys, order, names)) {
        std::vector<Rational> c(terms.begin(), terms.end());
        out.emplace(name, Series(std::move(c)));
    }
    return out;
}

namespace {

std::vector<std::vector<BigInt>> solveCombinations(const GrammarSystem& sys, std::size_t order,
                                                   const std::vector<std::vector<SignedName>>& combos,
                                                   Backend backend)
{
    if (backend == Backend::Automatic)
        backend = order <= kModularThreshold ? Backend::Rational : Backend::Modular;
    const detail::Program prog = detail::lower(sys, Semantics::Unlabeled);
    std::vector<detail::SignedNodes> outputs;
    for (const auto& combo : combos) {
        detail::SignedNodes nodes;
        for (const auto& [name, sign] : combo) {
            auto it = prog.nameNode.find(name);
            if (it == prog.nameNode.end())
                throw std::out_of_range("no equation named '" + name + "'");
            if (sign != 1 && sign != -1)
                throw std::invalid_argument("combination signs must be +1 or -1");
            nodes.push_back({it->second, sign});
        }
        outputs.push_back(std::move(nodes));
    }
    if (backend == Backend::Modular)
        return detail::solveModular(prog, order, outputs);

    detail::Engine<detail::RationalRing> engine(prog, {});
    engine.run(order);
    std::vector<std::vector<BigInt>> out;
    for (const auto& nodes : outputs) {
        std::vector<BigInt> terms(order + 1, 0);
        for (std::size_t n = 0; n <= order; ++n) {
            Rational c = 0;
            for (const auto& [node, sign] : nodes)
                c += sign * engine.values(node)[n];
            if (c.get_den() != 1)
                throw std::logic_error("non-integral unlabeled count at index " + std::to_string(n));
            terms[n] = c.get_num();
        }
        out.push_back(std::move(terms));
    }
    return out;
}

} // namespace

std::map<std::string, std::vector<BigInt>> unlabeledCounts(const GrammarSystem& sys, std::size_t order,
                                                           const std::vector<std::string>& names)
{
    return unlabeledCounts(sys, order, names, Backend::Automatic);
}

std::map<std::string, std::vector<BigInt>> unlabeledCounts(const GrammarSystem& sys, std::size_t order,
                                                           const std::vector<std::string>& names,
                                                           Backend backend)
{
    std::map<std::string, std::vector<BigInt>> out;
    std::vector<std::vector<SignedName>> combos;
    for (const auto& name : names)
        combos.push_back({{name, 1}});
    auto terms = solveCombinations(sys, order, combos, backend);
    for (std::size_t i = 0; i < names.size(); ++i)
        out.emplace(names[i], std::move(terms[i]));
    return out;
}

std::vector<BigInt> unlabeledCombination(const GrammarSystem& sys, std::size_t order,
                                         const std::vector<SignedName>& terms, Backend backend)
{
    return solveCombinations(sys, order, {terms}, backend).front();
}

Series setExactlyUnlabeled(const Series& a, int k)
{
    if (k < 0)
        throw std::invalid_argument("setExactlyUnlabeled: k must be non-negative");
    if (a[0] != 0)
        throw NonzeroConstantTerm();
    std::vector<Series> sets{Series::constant(a.order(), 1)};
    for (int j = 1; j <= k; ++j) {
        Series s = Series::zero(a.order());
        for (int i = 1; i <= j; ++i)
            s = s + substitutePower(a, static_cast<std::size_t>(i)) * sets[static_cast<std::size_t>(j - i)];
        sets.push_back(seriesScale(s, Rational(1, j)));
    }
    return sets.back();
}

} // namespace splitenum::species
