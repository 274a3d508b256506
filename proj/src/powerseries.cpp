#include "splitenum/powerseries.hpp"

#include <algorithm>
#include <sstream>

namespace splitenum {

Series::Series(std::size_t order, std::initializer_list<Rational> leading) : coeffs_(order + 1)
{
    std::size_t i = 0;
    for (const auto& c : leading) {
        if (i > order)
            break;
        coeffs_[i++] = c;
    }
}

Series::Series(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        coeffs_.resize(1);
}

Series Series::constant(std::size_t order, const Rational& c)
{
    Series s(order);
    s[0] = c;
    return s;
}

Series Series::monomial(std::size_t order, std::size_t k, const Rational& c)
{
    Series s(order);
    if (k <= order)
        s[k] = c;
    return s;
}

Series Series::geometric(std::size_t order)
{
    Series s(order);
    for (auto& c : s.coeffs_)
        c = 1;
    return s;
}

std::size_t Series::valuation() const
{
    std::size_t i = 0;
    while (i < coeffs_.size() && coeffs_[i] == 0)
        ++i;
    return i;
}

bool Series::allIntegral() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Rational& c) { return c.get_den() == 1; });
}

Series Series::truncated(std::size_t order) const
{
    std::vector<Rational> c(coeffs_.begin(),
                            coeffs_.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
    return Series(std::move(c));
}

Series seriesAdd(const Series& a, const Series& b, int sign)
{
    const std::size_t n = std::min(a.order(), b.order());
    Series r(n);
    for (std::size_t i = 0; i <= n; ++i)
        r[i] = sign >= 0 ? Rational(a[i] + b[i]) : Rational(a[i] - b[i]);
    return r;
}

Series seriesScale(const Series& a, const Rational& c)
{
    Series r(a.order());
    for (std::size_t i = 0; i <= a.order(); ++i)
        r[i] = a[i] * c;
    return r;
}

Series seriesMul(const Series& a, const Series& b)
{
    const std::size_t n = std::min(a.order(), b.order());
    const std::size_t va = a.valuation(), vb = b.valuation();
    Series r(n);
    for (std::size_t k = 0; k <= n; ++k) {
        if (k < va + vb)
            continue;
        Rational s = 0;
        for (std::size_t i = va; i + vb <= k; ++i)
            s += a[i] * b[k - i];
        r[k] = s;
    }
    return r;
}

Series seriesReciprocal(const Series& a)
{
    if (a[0] == 0)
        throw ZeroConstantTerm();
    const std::size_t n = a.order();
    Series r(n);
    const Rational inv0 = 1 / a[0];
    r[0] = inv0;
    for (std::size_t k = 1; k <= n; ++k) {
        Rational s = 0;
        for (std::size_t i = 1; i <= k; ++i)
            if (a[i] != 0)
                s += a[i] * r[k - i];
        r[k] = -s * inv0;
    }
    return r;
}

Series seriesExp(const Series& a)
{
    if (a[0] != 0)
        throw NonzeroConstantTerm();
    const std::size_t n = a.order();
    Series e(n);
    e[0] = 1;
    // k E_k = sum_{j=1..k} j a_j E_{k-j}
    for (std::size_t k = 1; k <= n; ++k) {
        Rational s = 0;
        for (std::size_t j = 1; j <= k; ++j)
            if (a[j] != 0)
                s += Rational(static_cast<long>(j)) * a[j] * e[k - j];
        e[k] = s / static_cast<long>(k);
    }
    return e;
}

Series substitutePower(const Series& a, std::size_t i)
{
    if (i == 0)
        throw std::invalid_argument("substitutePower: exponent must be >= 1");
    Series r(a.order());
    for (std::size_t k = 0; k * i <= a.order(); ++k)
        r[k * i] = a[k];
    return r;
}

Series polyaExp(const Series& a)
{
    if (a[0] != 0)
        throw NonzeroConstantTerm();
    const std::size_t n = a.order();
    // z d/dz log P = sum_k c_k z^k with c_k = sum_{d | k} d a_d.
    std::vector<Rational> c(n + 1);
    for (std::size_t d = 1; d <= n; ++d) {
        if (a[d] == 0)
            continue;
        const Rational da = Rational(static_cast<long>(d)) * a[d];
        for (std::size_t k = d; k <= n; k += d)
            c[k] += da;
    }
    Series p(n);
    p[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        Rational s = 0;
        for (std::size_t j = 1; j <= k; ++j)
            if (c[j] != 0)
                s += c[j] * p[k - j];
        p[k] = s / static_cast<long>(k);
    }
    return p;
}

Series operator+(const Series& a, const Series& b) { return seriesAdd(a, b, +1); }
Series operator-(const Series& a, const Series& b) { return seriesAdd(a, b, -1); }
Series operator*(const Series& a, const Series& b) { return seriesMul(a, b); }

std::string toString(const Series& a)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i <= a.order(); ++i)
        os << (i ? ", " : "") << a[i];
    os << " + O(z^" << a.order() + 1 << ")]";
    return os.str();
}

} // namespace splitenum
