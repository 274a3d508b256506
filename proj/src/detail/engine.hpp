#ifndef SPLITENUM_DETAIL_ENGINE_HPP
#define SPLITENUM_DETAIL_ENGINE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "program.hpp"

namespace splitenum::species::detail {

/// Order-by-order solver for a lowered program over coefficient ring `Ring`.
///
/// Round n first evaluates every node with the recursive coefficients of
/// index n set to zero, assigns the recursive names from that pass, then
/// evaluates again. In a well-founded system the n-th coefficient of a
/// recursive name does not read index n of any recursive name, so both passes
/// agree on it; a disagreement raises DivergentSystem.
template <class Ring>
class Engine {
public:
    using V = typename Ring::value_type;

    Engine(const Program& prog, Ring ring) : prog_(prog), ring_(std::move(ring))
    {
        vals_.resize(prog_.nodes.size());
        aux_.resize(prog_.nodes.size());
        hist_.resize(prog_.nodes.size());
        auxHist_.resize(prog_.nodes.size());
    }

    void run(std::size_t order)
    {
        for (auto& v : vals_)
            v.reserve(order + 1);
        for (std::size_t n = next_; n <= order; ++n)
            step(n);
    }

    const std::vector<V>& values(int node) const { return vals_[static_cast<std::size_t>(node)]; }
    std::size_t computedOrder() const { return next_ - 1; }

private:
    void step(std::size_t n)
    {
        const auto count = prog_.nodes.size();
        for (std::size_t i = 0; i < count; ++i) {
            vals_[i].push_back(ring_.zero());
            if (prog_.nodes[i].op == Op::PolyaExp || prog_.nodes[i].op == Op::Exp)
                aux_[i].push_back(ring_.zero());
            history(i, n);
        }
        for (std::size_t i = 0; i < count; ++i)
            finish(i, n);
        for (std::size_t s = 0; s < prog_.refNode.size(); ++s)
            vals_[static_cast<std::size_t>(prog_.refNode[s])][n] = vals_[static_cast<std::size_t>(prog_.rootNode[s])][n];
        for (std::size_t i = 0; i < count; ++i)
            finish(i, n);
        for (std::size_t s = 0; s < prog_.refNode.size(); ++s) {
            const auto& assigned = vals_[static_cast<std::size_t>(prog_.refNode[s])][n];
            const auto& settled = vals_[static_cast<std::size_t>(prog_.rootNode[s])][n];
            if (!ring_.equal(assigned, settled))
                throw DivergentSystem("coefficient " + std::to_string(n) + " of '" + prog_.recursive[s] +
                                      "' does not stabilize");
        }
        next_ = n + 1;
    }

    const std::vector<V>& kid(const Node& node, std::size_t j) const
    {
        return vals_[static_cast<std::size_t>(node.kids[j])];
    }

    void history(std::size_t i, std::size_t n)
    {
        const Node& node = prog_.nodes[i];
        V h = ring_.zero();
        switch (node.op) {
        case Op::Shift:
            if (n >= node.param)
                h = kid(node, 0)[n - node.param];
            break;
        case Op::Subst:
            if (n > 0 && n % node.param == 0)
                h = kid(node, 0)[n / node.param];
            break;
        case Op::Product:
            if (n >= 2)
                h = ring_.dot(kid(node, 0), kid(node, 1), n);
            break;
        case Op::SeqInv:
            if (n >= 2)
                h = ring_.dot(kid(node, 0), vals_[i], n);
            break;
        case Op::Exp:
        case Op::PolyaExp:
            if (n >= 2)
                h = ring_.dot(aux_[i], vals_[i], n);
            break;
        default:
            break;
        }
        hist_[i] = h;
        if (node.op == Op::PolyaExp) {
            V c = ring_.zero();
            const auto& a = kid(node, 0);
            for (std::size_t d = 1; d * d <= n; ++d) {
                if (n % d != 0)
                    continue;
                if (d < n)
                    ring_.addTo(c, ring_.scale(a[d], {static_cast<long>(d), 1}));
                const std::size_t e = n / d;
                if (e != d && e < n)
                    ring_.addTo(c, ring_.scale(a[e], {static_cast<long>(e), 1}));
            }
            auxHist_[i] = c;
        }
    }

    void finish(std::size_t i, std::size_t n)
    {
        const Node& node = prog_.nodes[i];
        V& out = vals_[i][n];
        switch (node.op) {
        case Op::Poly: {
            V v = ring_.zero();
            for (const auto& [k, q] : node.terms)
                if (k == n)
                    ring_.addTo(v, ring_.fromSmall(q));
            out = v;
            break;
        }
        case Op::Ref:
            break;
        case Op::Linear: {
            V v = ring_.zero();
            for (std::size_t j = 0; j < node.kids.size(); ++j)
                ring_.addTo(v, ring_.scale(kid(node, j)[n], node.coefs[j]));
            out = v;
            break;
        }
        case Op::Shift:
            out = hist_[i];
            break;
        case Op::Subst:
            out = n == 0 ? kid(node, 0)[0] : hist_[i];
            break;
        case Op::Product: {
            const auto& a = kid(node, 0);
            const auto& b = kid(node, 1);
            V v = hist_[i];
            if (n == 0) {
                v = ring_.mul(a[0], b[0]);
            } else {
                ring_.addTo(v, ring_.mul(a[0], b[n]));
                ring_.addTo(v, ring_.mul(a[n], b[0]));
            }
            out = v;
            break;
        }
        case Op::SeqInv: {
            if (n == 0) {
                out = ring_.fromSmall({1, 1});
            } else {
                V v = hist_[i];
                ring_.addTo(v, kid(node, 0)[n]);
                out = v;
            }
            break;
        }
        case Op::Exp:
        case Op::PolyaExp: {
            if (n == 0) {
                out = ring_.fromSmall({1, 1});
                break;
            }
            V c = node.op == Op::PolyaExp ? auxHist_[i] : ring_.zero();
            ring_.addTo(c, ring_.scale(kid(node, 0)[n], {static_cast<long>(n), 1}));
            aux_[i][n] = c;
            V v = hist_[i];
            ring_.addTo(v, c);
            out = ring_.divInt(v, static_cast<long>(n));
            break;
        }
        }
    }

    const Program& prog_;
    Ring ring_;
    std::vector<std::vector<V>> vals_;
    std::vector<std::vector<V>> aux_;
    std::vector<V> hist_;
    std::vector<V> auxHist_;
    std::size_t next_ = 0;
};

} // namespace splitenum::species::detail

#endif
