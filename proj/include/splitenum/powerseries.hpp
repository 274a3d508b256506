#ifndef SPLITENUM_POWERSERIES_HPP
#define SPLITENUM_POWERSERIES_HPP

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace splitenum {

using Rational = mpq_class;
using BigInt = mpz_class;

struct ZeroConstantTerm : std::domain_error {
    ZeroConstantTerm() : std::domain_error("series has zero constant term") {}
};

struct NonzeroConstantTerm : std::domain_error {
    NonzeroConstantTerm() : std::domain_error("series has nonzero constant term") {}
};

/// Truncated formal power series with exact rational coefficients.
///
/// A series of order N carries coefficients 0..N; every operation truncates
/// its result to the smallest order among its inputs.
class Series {
public:
    Series() : coeffs_(1) {}
    explicit Series(std::size_t order) : coeffs_(order + 1) {}
    Series(std::size_t order, std::initializer_list<Rational> leading);
    Series(std::vector<Rational> coeffs);

    static Series zero(std::size_t order) { return Series(order); }
    static Series constant(std::size_t order, const Rational& c);
    /// z^k truncated at `order`.
    static Series monomial(std::size_t order, std::size_t k, const Rational& c = 1);
    /// 1/(1-z) truncated at `order`.
    static Series geometric(std::size_t order);

    std::size_t order() const { return coeffs_.size() - 1; }
    const Rational& operator[](std::size_t i) const { return coeffs_[i]; }
    Rational& operator[](std::size_t i) { return coeffs_[i]; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    /// Index of the first nonzero coefficient, or order()+1 if all vanish.
    std::size_t valuation() const;
    bool isZero() const { return valuation() > order(); }
    bool allIntegral() const;

    Series truncated(std::size_t order) const;

    friend bool operator==(const Series& a, const Series& b) = default;

private:
    std::vector<Rational> coeffs_;
};

/// a + sign*b truncated to the common order.
Series seriesAdd(const Series& a, const Series& b, int sign = +1);
Series seriesScale(const Series& a, const Rational& c);
/// Cauchy product truncated to the common order.
Series seriesMul(const Series& a, const Series& b);
/// Throws ZeroConstantTerm when a[0] == 0.
Series seriesReciprocal(const Series& a);
/// exp(a) via E' = a'E. Throws NonzeroConstantTerm when a[0] != 0.
Series seriesExp(const Series& a);
/// b[k*i] = a[k], zero elsewhere. Requires i >= 1.
Series substitutePower(const Series& a, std::size_t i);
/// Multiset (unlabeled Set) construction: exp(sum_{i>=1} a(z^i)/i).
Series polyaExp(const Series& a);

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator*(const Series& a, const Series& b);

std::string toString(const Series& a);

} // namespace splitenum

#endif
