#ifndef SPLITENUM_DETAIL_RINGS_HPP
#define SPLITENUM_DETAIL_RINGS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <gmpxx.h>

#include "program.hpp"

namespace splitenum::species::detail {

// Coefficient rings the online engine runs over. Each provides the handful of
// operations the node recurrences need, plus `dot(a, b, n)` computing
// sum_{k=1}^{n-1} a[k] b[n-k], which dominates the running time.

struct RationalRing {
    using value_type = mpq_class;

    value_type zero() const { return 0; }
    value_type fromSmall(SmallQ q) const
    {
        mpq_class r(q.num, q.den);
        r.canonicalize();
        return r;
    }
    void addTo(value_type& acc, const value_type& x) const { acc += x; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type scale(const value_type& x, SmallQ q) const { return x * fromSmall(q); }
    value_type divInt(const value_type& x, long n) const { return x / n; }
    bool equal(const value_type& a, const value_type& b) const { return a == b; }
    bool isZero(const value_type& a) const { return a == 0; }

    value_type dot(const std::vector<value_type>& a, const std::vector<value_type>& b, std::size_t n) const
    {
        value_type s = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (a[k] != 0 && b[n - k] != 0)
                s += a[k] * b[n - k];
        return s;
    }
};

inline constexpr int kLanes = 8;

struct alignas(32) Lanes {
    std::array<std::uint32_t, kLanes> v{};
};

inline std::uint32_t invMod(std::uint64_t a, std::uint32_t p)
{
    // p prime, a not divisible by p
    std::int64_t t = 0, nt = 1, r = p, nr = static_cast<std::int64_t>(a % p);
    while (nr != 0) {
        const std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0)
        t += p;
    return static_cast<std::uint32_t>(t);
}

/// Eight independent residue rings Z/p_i, p_i < 2^28, evaluated in lock-step.
struct ModLanesRing {
    using value_type = Lanes;
    std::array<std::uint32_t, kLanes> primes{};

    value_type zero() const { return {}; }
    value_type fromSmall(SmallQ q) const
    {
        Lanes r;
        for (int l = 0; l < kLanes; ++l) {
            const std::uint32_t p = primes[l];
            std::int64_t num = q.num % static_cast<std::int64_t>(p);
            if (num < 0)
                num += p;
            const std::uint32_t den =
                q.den == 1 ? 1u : invMod(static_cast<std::uint64_t>(q.den < 0 ? -q.den : q.den), p);
            std::uint64_t v = static_cast<std::uint64_t>(num) * den % p;
            if (q.den < 0 && v != 0)
                v = p - v;
            r.v[l] = static_cast<std::uint32_t>(v);
        }
        return r;
    }
    void addTo(value_type& acc, const value_type& x) const
    {
        for (int l = 0; l < kLanes; ++l) {
            std::uint32_t s = acc.v[l] + x.v[l];
            if (s >= primes[l])
                s -= primes[l];
            acc.v[l] = s;
        }
    }
    value_type mul(const value_type& a, const value_type& b) const
    {
        Lanes r;
        for (int l = 0; l < kLanes; ++l)
            r.v[l] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v[l]) * b.v[l] % primes[l]);
        return r;
    }
    value_type scale(const value_type& x, SmallQ q) const { return mul(x, fromSmall(q)); }
    value_type divInt(const value_type& x, long n) const { return mul(x, fromSmall({1, n})); }
    bool equal(const value_type& a, const value_type& b) const { return a.v == b.v; }
    bool isZero(const value_type& a) const
    {
        return std::all_of(a.v.begin(), a.v.end(), [](std::uint32_t x) { return x == 0; });
    }

    value_type dot(const std::vector<value_type>& a, const std::vector<value_type>& b, std::size_t n) const
    {
        // Products are < 2^56, so 256 of them fit an unreduced 64-bit sum.
        std::uint64_t acc[kLanes] = {};
        std::size_t k = 1;
        while (k < n) {
            const std::size_t end = std::min(n, k + 256);
            std::uint64_t s[kLanes] = {};
            for (std::size_t j = k; j < end; ++j) {
                const Lanes& x = a[j];
                const Lanes& y = b[n - j];
                for (int l = 0; l < kLanes; ++l)
                    s[l] += static_cast<std::uint64_t>(x.v[l]) * y.v[l];
            }
            for (int l = 0; l < kLanes; ++l)
                acc[l] = (acc[l] + s[l] % primes[l]) % primes[l];
            k = end;
        }
        Lanes r;
        for (int l = 0; l < kLanes; ++l)
            r.v[l] = static_cast<std::uint32_t>(acc[l]);
        return r;
    }
};

/// m * 2^e with 0.5 <= |m| < 1 (or m == 0): a double with an unbounded exponent.
struct ExtFloat {
    double m = 0.0;
    long e = 0;

    static ExtFloat make(double m, long e)
    {
        ExtFloat r{m, e};
        r.normalize();
        return r;
    }
    void normalize()
    {
        if (m == 0.0) {
            e = 0;
            return;
        }
        int k = 0;
        m = std::frexp(m, &k);
        e += k;
    }
    /// log2|x|, or a large negative number for zero.
    double log2abs() const { return m == 0.0 ? -1e300 : static_cast<double>(e) + std::log2(std::fabs(m)); }
};

inline ExtFloat operator*(ExtFloat a, ExtFloat b) { return ExtFloat::make(a.m * b.m, a.e + b.e); }

inline ExtFloat operator+(ExtFloat a, ExtFloat b)
{
    if (a.m == 0.0)
        return b;
    if (b.m == 0.0)
        return a;
    if (a.e < b.e)
        std::swap(a, b);
    const long d = a.e - b.e;
    if (d > 80)
        return a;
    return ExtFloat::make(a.m + std::ldexp(b.m, static_cast<int>(-d)), a.e);
}

/// Magnitude estimates for the multimodular path.
struct FloatRing {
    using value_type = ExtFloat;

    value_type zero() const { return {}; }
    value_type fromSmall(SmallQ q) const
    {
        return ExtFloat::make(static_cast<double>(q.num) / static_cast<double>(q.den), 0);
    }
    void addTo(value_type& acc, const value_type& x) const { acc = acc + x; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type scale(const value_type& x, SmallQ q) const { return x * fromSmall(q); }
    value_type divInt(const value_type& x, long n) const
    {
        return ExtFloat::make(x.m / static_cast<double>(n), x.e);
    }
    bool equal(const value_type& a, const value_type& b) const
    {
        const double la = a.log2abs(), lb = b.log2abs();
        return std::fabs(la - lb) < 1e-6 || (la < -1e200 && lb < -1e200) || std::max(la, lb) < -20;
    }
    bool isZero(const value_type& a) const { return a.m == 0.0; }

    value_type dot(const std::vector<value_type>& a, const std::vector<value_type>& b, std::size_t n) const
    {
        long emax = std::numeric_limits<long>::min();
        for (std::size_t k = 1; k < n; ++k)
            if (a[k].m != 0.0 && b[n - k].m != 0.0)
                emax = std::max(emax, a[k].e + b[n - k].e);
        if (emax == std::numeric_limits<long>::min())
            return {};
        double s = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const long d = a[k].e + b[n - k].e - emax;
            if (d > -1000)
                s += std::ldexp(a[k].m * b[n - k].m, static_cast<int>(d));
        }
        return ExtFloat::make(s, emax);
    }
};

} // namespace splitenum::species::detail

#endif
