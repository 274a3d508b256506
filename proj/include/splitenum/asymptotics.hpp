#ifndef SPLITENUM_ASYMPTOTICS_HPP
#define SPLITENUM_ASYMPTOTICS_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "splitenum/grammars.hpp"
#include "splitenum/powerseries.hpp"

namespace splitenum::asymptotics {

using grammars::GraphClassId;
using grammars::Rooting;

/// Binary floating point with run-time precision.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

inline constexpr int kDefaultDigits = 50;

/// Sets the working precision of newly created Real values for its lifetime.
class PrecisionScope {
public:
    explicit PrecisionScope(int digits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned previous_;
};

/// Truncated Taylor expansion in (dz, dy) of total degree <= 4:
/// f(z0+dz, y0+dy) = sum c[i][j] dz^i dy^j.
class Jet {
public:
    static constexpr int kDegree = 4;

    Jet();
    static Jet constant(const Real& v);
    static Jet varZ(const Real& z0);
    static Jet varY(const Real& y0);

    Real& at(int i, int j) { return c_[i][j]; }
    const Real& at(int i, int j) const { return c_[i][j]; }
    const Real& value() const { return c_[0][0]; }
    /// d^{i+j} f / dz^i dy^j at the expansion point.
    Real partial(int i, int j) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Real& s);

private:
    std::array<std::array<Real, kDegree + 1>, kDegree + 1> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(Jet a, const Real& s);
Jet operator/(const Jet& a, const Jet& b);
Jet exp(const Jet& a);
/// sum_k t[k] (a - a(0))^k, i.e. a univariate function with Taylor
/// coefficients t at a(0) composed with a.
Jet compose(const std::array<Real, Jet::kDegree + 1>& t, const Jet& a);

struct PoleCrossed : std::domain_error {
    using std::domain_error::domain_error;
};

struct NewtonDiverged : std::runtime_error {
    NewtonDiverged(const std::string& what, Real z, Real y);
    Real lastZ;
    Real lastY;
};

struct DegenerateBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CancellationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The equation y = F(z, y) satisfied by the rooted series y(z) (S_X for
/// 3LP, K for DH), with the plethystic remainder B(z) built from series
/// truncated at degree m, and the function G with U(z) = G(z, y(z)) for the
/// unrooted class.
class CharacteristicEquation {
public:
    CharacteristicEquation(GraphClassId id, int m, std::vector<Real> plethysticSeries, int digits);

    GraphClassId classId() const { return id_; }
    int truncation() const { return m_; }
    int digits() const { return digits_; }

    /// False where F is not analytic (DH: 1 - z - 2y <= 0) or z is outside (0, 1).
    bool inDomain(const Real& z, const Real& y) const;

    Real F(const Real& z, const Real& y) const;
    Jet expandF(const Real& z, const Real& y) const;
    Jet expandG(const Real& z, const Real& y) const;
    /// Taylor coefficients of B at z.
    std::array<Real, Jet::kDegree + 1> expandB(const Real& z) const;

private:
    Jet plethystic(const Jet& z, int firstPower) const;

    GraphClassId id_;
    int m_;
    int digits_;
    std::vector<Real> series_; // S_X (3LP) or Z + K + S_X (DH), degree <= m
};

/// Exact series data for the characteristic equation: coefficients 0..m of the
/// plethystic series.
CharacteristicEquation buildCharacteristicEquation(GraphClassId id, int m, int digits = kDefaultDigits);

struct BranchPoint {
    Real rho;
    Real tau;
    Real residualF;  // |F - y|
    Real residualFy; // |F_y - 1|
    int iterations = 0;
};

/// Seed from the coefficient ratio of the rooted series at index 200.
BranchPoint solveBranchPoint(const CharacteristicEquation& eq);
BranchPoint solveBranchPoint(const CharacteristicEquation& eq, Real z0, Real y0);

/// y(z) = tau - c Z + d Z^2 + e Z^3 + O(Z^4), Z = sqrt(1 - z/rho).
struct SingularExpansion {
    Real tau, c, d, e;
};

SingularExpansion singularExpansion(const CharacteristicEquation& eq, const BranchPoint& bp);

/// U(z) = tau' - c' Z + d' Z^2 + e' Z^3 + O(Z^4).
struct UnrootedExpansion {
    Real tauPrime, cPrime, dPrime, ePrime;
    Real gY; // G_y at the branch point
};

/// Throws CancellationFailed when |c'| exceeds `tolerance`.
UnrootedExpansion unrootedExpansion(const CharacteristicEquation& eq, const SingularExpansion& se,
                                    const BranchPoint& bp, const Real& tolerance = Real("1e-30"));

/// a_n ~ constant * growthRate^n * n^alpha.
struct AsymptoticEstimate {
    Real growthRate;
    Real alpha;
    Real constant;
};

/// Everything computed for one class at its stable truncation.
struct Analysis {
    GraphClassId classId = GraphClassId::DH;
    int digits = kDefaultDigits;
    int truncation = 0;
    std::vector<std::pair<int, Real>> rhoByTruncation;
    BranchPoint branch;
    SingularExpansion rooted;
    UnrootedExpansion unrooted;
    AsymptoticEstimate rootedEstimate;   // the rooted series y(z)
    AsymptoticEstimate unrootedEstimate; // unrooted connected graphs
};

/// Raises m in steps of 10 from 20 until rho agrees across m and m + 10 to
/// `digits` - 10 digits.
Analysis analyze(GraphClassId id, int digits = kDefaultDigits);

/// Rooted: the series y(z), constant c / (2 sqrt(pi)), alpha = -3/2.
/// Unrooted: constant 3 e' / (4 sqrt(pi)), alpha = -5/2.
AsymptoticEstimate asymptoticEstimate(GraphClassId id, Rooting rooting, int digits = kDefaultDigits);

/// |a_n / (constant * growthRate^n * n^alpha) - 1|.
Real empiricalFit(const std::vector<BigInt>& terms, const AsymptoticEstimate& est, std::size_t n);
Real empiricalFit(const grammars::CountTable& table, const AsymptoticEstimate& est, std::size_t n);

/// Coefficients 0..order of the rooted series y(z): S_X for 3LP, K for DH.
std::vector<BigInt> rootedSeries(GraphClassId id, std::size_t order);

/// (4y^2 + 4zy + z^2 - 8y - 4z + 1) / (1 - z - 2y)^3, zero at the DH branch point.
Real dhEliminant(const Real& z, const Real& y);

/// Decimal rendering with `digits` significant digits.
std::string toDecimal(const Real& x, int digits);

} // namespace splitenum::asymptotics

#endif
