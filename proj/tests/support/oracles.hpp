// Reference computations for tests, written independently of the library.
#ifndef SPLITENUM_TESTS_ORACLES_HPP
#define SPLITENUM_TESTS_ORACLES_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace testoracle {

using Q = mpq_class;
using Z = mpz_class;
using Poly = std::vector<Q>;

inline Poly mul(const Poly& a, const Poly& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    Poly r(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

// Solves a * r = 1 by undetermined coefficients.
inline Poly inverse(const Poly& a)
{
    Poly r(a.size(), 0);
    r[0] = 1 / a[0];
    for (std::size_t n = 1; n < a.size(); ++n) {
        Q s = 0;
        for (std::size_t k = 1; k <= n; ++k)
            s += a[k] * r[n - k];
        r[n] = -s / a[0];
    }
    return r;
}

// log E = integral of E' / E, for E[0] = 1.
inline Poly formalLog(const Poly& e)
{
    Poly d(e.size(), 0);
    for (std::size_t k = 1; k < e.size(); ++k)
        d[k - 1] = e[k] * static_cast<long>(k);
    const Poly q = mul(d, inverse(e));
    Poly r(e.size(), 0);
    for (std::size_t k = 1; k < e.size(); ++k)
        r[k] = q[k - 1] / static_cast<long>(k);
    return r;
}

// Partitions of n into parts drawn from `parts`, by explicit recursion.
inline long partitions(int n, const std::vector<int>& parts, std::size_t from = 0)
{
    if (n == 0)
        return 1;
    long total = 0;
    for (std::size_t i = from; i < parts.size(); ++i)
        if (parts[i] <= n)
            total += partitions(n - parts[i], parts, i);
    return total;
}

inline long partitions(int n)
{
    std::vector<int> all;
    for (int k = 1; k <= n; ++k)
        all.push_back(k);
    return partitions(n, all);
}

// Balanced parenthesis words of length 2m, generated explicitly.
inline long dyckWords(int m)
{
    long count = 0;
    std::function<void(int, int)> go = [&](int open, int close) {
        if (open == m && close == m) {
            ++count;
            return;
        }
        if (open < m)
            go(open + 1, close);
        if (close < open)
            go(open, close + 1);
    };
    go(0, 0);
    return count;
}

// Unlabeled rooted trees on n nodes: grow by attaching a leaf anywhere and
// dedup by the sorted-children encoding.
inline std::string encode(const std::vector<std::vector<int>>& kids, int v)
{
    std::vector<std::string> parts;
    for (int c : kids[static_cast<std::size_t>(v)])
        parts.push_back(encode(kids, c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts)
        s += p;
    return s + ")";
}

inline std::vector<long> rootedTreeCounts(int maxN)
{
    std::vector<long> counts(static_cast<std::size_t>(maxN) + 1, 0);
    std::set<std::string> level{"()"};
    counts[1] = 1;
    // decode a canonical string into child lists
    auto decode = [](const std::string& s) {
        std::vector<std::vector<int>> kids;
        std::vector<int> stack;
        for (char ch : s) {
            if (ch == '(') {
                const int id = static_cast<int>(kids.size());
                kids.emplace_back();
                if (!stack.empty())
                    kids[static_cast<std::size_t>(stack.back())].push_back(id);
                stack.push_back(id);
            } else {
                stack.pop_back();
            }
        }
        return kids;
    };
    for (int n = 2; n <= maxN; ++n) {
        std::set<std::string> next;
        for (const auto& t : level) {
            auto kids = decode(t);
            for (std::size_t v = 0; v < kids.size(); ++v) {
                auto k2 = kids;
                k2.emplace_back();
                k2[v].push_back(static_cast<int>(k2.size()) - 1);
                next.insert(encode(k2, 0));
            }
        }
        level = std::move(next);
        counts[static_cast<std::size_t>(n)] = static_cast<long>(level.size());
    }
    return counts;
}

inline Z factorial(int n)
{
    Z f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

} // namespace testoracle

#endif
