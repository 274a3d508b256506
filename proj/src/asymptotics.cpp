#include "splitenum/asymptotics.hpp"

#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/constants/constants.hpp>

#include "splitenum/species.hpp"

namespace splitenum::asymptotics {

namespace bmp = boost::multiprecision;

PrecisionScope::PrecisionScope(int digits) : previous_(Real::default_precision())
{
    Real::default_precision(static_cast<unsigned>(digits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_); }

// ---------------------------------------------------------------------- Jet

Jet::Jet()
{
    for (auto& row : c_)
        for (auto& v : row)
            v = 0;
}

Jet Jet::constant(const Real& v)
{
    Jet j;
    j.c_[0][0] = v;
    return j;
}

Jet Jet::varZ(const Real& z0)
{
    Jet j = constant(z0);
    j.c_[1][0] = 1;
    return j;
}

Jet Jet::varY(const Real& y0)
{
    Jet j = constant(y0);
    j.c_[0][1] = 1;
    return j;
}

Real Jet::partial(int i, int j) const
{
    Real f = c_[i][j];
    for (int k = 2; k <= i; ++k)
        f *= k;
    for (int k = 2; k <= j; ++k)
        f *= k;
    return f;
}

Jet& Jet::operator+=(const Jet& o)
{
    for (int i = 0; i <= kDegree; ++i)
        for (int j = 0; i + j <= kDegree; ++j)
            c_[i][j] += o.c_[i][j];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    for (int i = 0; i <= kDegree; ++i)
        for (int j = 0; i + j <= kDegree; ++j)
            c_[i][j] -= o.c_[i][j];
    return *this;
}

Jet& Jet::operator*=(const Real& s)
{
    for (int i = 0; i <= kDegree; ++i)
        for (int j = 0; i + j <= kDegree; ++j)
            c_[i][j] *= s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, const Real& s) { return a *= s; }

Jet operator*(const Jet& a, const Jet& b)
{
    constexpr int D = Jet::kDegree;
    Jet r;
    for (int i1 = 0; i1 <= D; ++i1)
        for (int j1 = 0; i1 + j1 <= D; ++j1) {
            if (a.at(i1, j1) == 0)
                continue;
            for (int i2 = 0; i1 + i2 <= D; ++i2)
                for (int j2 = 0; i1 + j1 + i2 + j2 <= D; ++j2)
                    r.at(i1 + i2, j1 + j2) += a.at(i1, j1) * b.at(i2, j2);
        }
    return r;
}

Jet compose(const std::array<Real, Jet::kDegree + 1>& t, const Jet& a)
{
    Jet delta = a;
    delta.at(0, 0) = 0;
    // Horner in delta; delta^5 vanishes at this degree.
    Jet r = Jet::constant(t[Jet::kDegree]);
    for (int k = Jet::kDegree - 1; k >= 0; --k) {
        r = r * delta;
        r.at(0, 0) += t[static_cast<std::size_t>(k)];
    }
    return r;
}

Jet exp(const Jet& a)
{
    std::array<Real, Jet::kDegree + 1> t;
    const Real e = bmp::exp(a.value());
    Real f = 1;
    for (int k = 0; k <= Jet::kDegree; ++k) {
        if (k > 1)
            f *= k;
        t[static_cast<std::size_t>(k)] = e / f;
    }
    return compose(t, a);
}

Jet operator/(const Jet& a, const Jet& b)
{
    // 1/(b0 + d) = sum (-1)^k d^k / b0^(k+1)
    std::array<Real, Jet::kDegree + 1> t;
    const Real inv = 1 / b.value();
    Real p = inv;
    for (int k = 0; k <= Jet::kDegree; ++k) {
        t[static_cast<std::size_t>(k)] = (k % 2 == 0) ? p : Real(-p);
        p *= inv;
    }
    return a * compose(t, b);
}

// ------------------------------------------------------------------ errors

NewtonDiverged::NewtonDiverged(const std::string& what, Real z, Real y)
    : std::runtime_error(what), lastZ(std::move(z)), lastY(std::move(y))
{
}

// ------------------------------------------------------------ series cache

namespace {

std::mutex cacheMutex;

// Coefficients 0..order of named unlabeled classes of the rooted grammar.
std::vector<BigInt> cachedSeries(GraphClassId id, const std::string& key, std::size_t order)
{
    static std::map<std::pair<GraphClassId, std::string>, std::vector<BigInt>> cache;
    std::lock_guard<std::mutex> lock(cacheMutex);
    auto& slot = cache[{id, key}];
    if (slot.size() <= order) {
        const auto g = grammars::buildGrammar(id, Rooting::Rooted);
        std::vector<species::SignedName> combo;
        if (key == "A")
            combo = {{"K", 1}, {"S_X", 1}};
        else
            combo = {{key, 1}};
        const std::size_t target = std::max(order, 2 * slot.size());
        slot = species::unlabeledCombination(g, target, combo);
        if (key == "A")
            slot[1] += 1;
    }
    return {slot.begin(), slot.begin() + static_cast<std::ptrdiff_t>(order + 1)};
}

Real toReal(const BigInt& x)
{
    Real r;
    mpfr_set_z(r.backend().data(), x.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real tenTo(int e) { return bmp::pow(Real(10), e); }

// Taylor coefficients P^(k)(w0)/k!, k <= 4, of the polynomial with coefficients p.
std::array<Real, Jet::kDegree + 1> taylorAt(const std::vector<Real>& p, const Real& w0)
{
    std::vector<Real> b(p);
    const std::size_t deg = b.size() - 1;
    std::array<Real, Jet::kDegree + 1> t;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(Jet::kDegree); ++k) {
        for (std::size_t j = deg; j-- > k;)
            b[j] += w0 * b[j + 1];
        t[k] = k <= deg ? b[k] : Real(0);
    }
    return t;
}

} // namespace

std::vector<BigInt> rootedSeries(GraphClassId id, std::size_t order)
{
    return cachedSeries(id, id == GraphClassId::TLP ? "S_X" : "K", order);
}

// --------------------------------------------------- CharacteristicEquation

CharacteristicEquation::CharacteristicEquation(GraphClassId id, int m, std::vector<Real> plethysticSeries, int digits)
    : id_(id), m_(m), digits_(digits), series_(std::move(plethysticSeries))
{
}

CharacteristicEquation buildCharacteristicEquation(GraphClassId id, int m, int digits)
{
    if (m < 5)
        throw std::invalid_argument("truncation m must be at least 5");
    PrecisionScope scope(digits + 10);
    const auto exact = cachedSeries(id, id == GraphClassId::TLP ? "S_X" : "A", static_cast<std::size_t>(m));
    std::vector<Real> s;
    s.reserve(exact.size());
    for (const auto& c : exact)
        s.push_back(toReal(c));
    return CharacteristicEquation(id, m, std::move(s), digits);
}

bool CharacteristicEquation::inDomain(const Real& z, const Real& y) const
{
    if (z <= 0 || z >= 1)
        return false;
    if (id_ == GraphClassId::DH)
        return 1 - z - 2 * y > 0;
    return true;
}

// sum_{i >= firstPower} P(z^i) / i with P the truncated series; terms stop
// once z0^i drops below the working precision.
Jet CharacteristicEquation::plethystic(const Jet& z, int firstPower) const
{
    const Real eps = tenTo(-(digits_ + 15));
    Jet total;
    Jet zi = Jet::constant(1);
    for (int i = 1; i < firstPower; ++i)
        zi = zi * z;
    for (int i = firstPower;; ++i) {
        zi = zi * z;
        const Real w0 = zi.value();
        if (w0 < eps && i > firstPower)
            break;
        total += compose(taylorAt(series_, w0), zi) * (Real(1) / i);
        if (id_ == GraphClassId::TLP) {
            // L(z^i) / i with L(w) = w / (1 - w)
            total += (zi / (Jet::constant(1) - zi)) * (Real(1) / i);
        }
    }
    return total;
}

std::array<Real, Jet::kDegree + 1> CharacteristicEquation::expandB(const Real& z) const
{
    PrecisionScope scope(digits_ + 10);
    const Jet zj = Jet::varZ(z);
    Jet b = plethystic(zj, 2);
    if (id_ == GraphClassId::TLP) {
        // the i = 1 term of the leaf part belongs to B as well
        b += zj / (Jet::constant(1) - zj);
    }
    std::array<Real, Jet::kDegree + 1> out;
    for (int k = 0; k <= Jet::kDegree; ++k)
        out[static_cast<std::size_t>(k)] = b.at(k, 0);
    return out;
}

Jet CharacteristicEquation::expandF(const Real& z, const Real& y) const
{
    if (!inDomain(z, y))
        throw PoleCrossed("characteristic equation evaluated outside its domain");
    PrecisionScope scope(digits_ + 10);
    const Jet zj = Jet::varZ(z);
    const Jet yj = Jet::varY(y);
    const Jet one = Jet::constant(1);
    Jet b = plethystic(zj, 2);
    if (id_ == GraphClassId::TLP) {
        b += zj / (one - zj);
        const Jet L = zj / (one - zj);
        return L * (exp(yj + b) - one);
    }
    const Jet w = zj + yj * Real(2);
    const Jet r = zj + yj + w * w / (one - w);
    return exp(r + b) - one - r;
}

Real CharacteristicEquation::F(const Real& z, const Real& y) const { return expandF(z, y).value(); }

Jet CharacteristicEquation::expandG(const Real& z, const Real& y) const
{
    if (!inDomain(z, y))
        throw PoleCrossed("unrooted function evaluated outside its domain");
    PrecisionScope scope(digits_ + 10);
    const Jet zj = Jet::varZ(z);
    const Jet yj = Jet::varY(y);
    const Jet one = Jet::constant(1);
    if (id_ == GraphClassId::TLP) {
        const Jet L = zj / (one - zj);
        const Jet z2 = zj * zj;
        const Jet sx2 = compose(taylorAt(series_, z2.value()), z2);
        return z2 * zj / (one - zj) + sx2 * Real("0.5") + yj - L * (L + yj) - yj * yj * Real("0.5");
    }
    const Jet w = zj + yj * Real(2);
    const Jet q = one - w;
    return yj - zj * zj - w * w * w / (q * q);
}

// ----------------------------------------------------------- branch point

BranchPoint solveBranchPoint(const CharacteristicEquation& eq)
{
    PrecisionScope scope(eq.digits() + 10);
    constexpr std::size_t n = 200;
    const auto a = rootedSeries(eq.classId(), n + 1);
    // Ratio estimate with the n^{-3/2} correction of a square-root singularity.
    Real z0 = toReal(a[n]) / toReal(a[n + 1]) * bmp::pow(Real(n + 1) / n, Real(3) / 2);
    Real y0 = 0;
    Real zk = 1;
    for (std::size_t k = 0; k <= n; ++k) {
        y0 += toReal(a[k]) * zk;
        zk *= z0;
    }
    return solveBranchPoint(eq, z0, y0);
}

BranchPoint solveBranchPoint(const CharacteristicEquation& eq, Real z, Real y)
{
    PrecisionScope scope(eq.digits() + 10);
    const Real tol = tenTo(-(eq.digits() - 10));
    const Real stepTol = tenTo(-(eq.digits() + 3));
    if (!eq.inDomain(z, y))
        throw PoleCrossed("initial guess outside the domain of the characteristic equation");
    for (int it = 1; it <= 200; ++it) {
        const Jet J = eq.expandF(z, y);
        const Real f1 = J.value() - y;
        const Real f2 = J.partial(0, 1) - 1;
        const Real a = J.partial(1, 0), b = J.partial(0, 1) - 1;
        const Real c = J.partial(1, 1), d = J.partial(0, 2);
        const Real det = a * d - b * c;
        if (det == 0)
            throw NewtonDiverged("singular Jacobian", z, y);
        const Real dz = (f1 * d - b * f2) / det;
        const Real dy = (a * f2 - c * f1) / det;
        Real lambda = 1;
        int halvings = 0;
        while (!eq.inDomain(z - lambda * dz, y - lambda * dy)) {
            lambda /= 2;
            if (++halvings > 60)
                throw PoleCrossed("Newton step cannot be damped back into the domain");
        }
        z -= lambda * dz;
        y -= lambda * dy;
        if (!bmp::isfinite(z) || !bmp::isfinite(y))
            throw NewtonDiverged("Newton iterate is not finite", z, y);
        if (bmp::abs(dz) < stepTol && bmp::abs(dy) < stepTol) {
            const Jet K = eq.expandF(z, y);
            BranchPoint bp;
            bp.rho = z;
            bp.tau = y;
            bp.residualF = bmp::abs(K.value() - y);
            bp.residualFy = bmp::abs(K.partial(0, 1) - 1);
            bp.iterations = it;
            if (bp.residualF < tol && bp.residualFy < tol)
                return bp;
            throw NewtonDiverged("Newton stalled with large residuals", z, y);
        }
    }
    throw NewtonDiverged("Newton did not converge in 200 iterations", z, y);
}

// -------------------------------------------------------------- expansions

SingularExpansion singularExpansion(const CharacteristicEquation& eq, const BranchPoint& bp)
{
    PrecisionScope scope(eq.digits() + 10);
    const Jet J = eq.expandF(bp.rho, bp.tau);
    const Real& rho = bp.rho;
    const Real Fz = J.partial(1, 0), Fzz = J.partial(2, 0), Fzy = J.partial(1, 1);
    const Real Fyy = J.partial(0, 2), Fyyy = J.partial(0, 3), Fzyy = J.partial(1, 2), Fyyyy = J.partial(0, 4);
    if (bmp::abs(Fyy) < tenTo(-(eq.digits() - 5)))
        throw DegenerateBranch("F_yy vanishes at the branch point");
    SingularExpansion se;
    se.tau = bp.tau;
    const Real c2 = 2 * rho * Fz / Fyy;
    if (c2 <= 0)
        throw DegenerateBranch("2 rho F_z / F_yy is not positive");
    se.c = bmp::sqrt(c2);
    const Real& c = se.c;
    se.d = (rho * Fzy - c2 * Fyyy / 6) / Fyy;
    const Real& d = se.d;
    se.e = (rho * rho * Fzz / 2 - rho * d * Fzy + Fyy * d * d / 2 - rho * c2 * Fzyy / 2 + c2 * d * Fyyy / 2 +
            c2 * c2 * Fyyyy / 24) /
           (c * Fyy);
    return se;
}

UnrootedExpansion unrootedExpansion(const CharacteristicEquation& eq, const SingularExpansion& se,
                                    const BranchPoint& bp, const Real& tolerance)
{
    PrecisionScope scope(eq.digits() + 10);
    const Jet G = eq.expandG(bp.rho, bp.tau);
    const Real& rho = bp.rho;
    const Real Gz = G.partial(1, 0), Gy = G.partial(0, 1), Gzy = G.partial(1, 1);
    const Real Gyy = G.partial(0, 2), Gyyy = G.partial(0, 3);
    UnrootedExpansion ue;
    ue.gY = Gy;
    ue.tauPrime = G.value();
    ue.cPrime = se.c * Gy;
    ue.dPrime = -rho * Gz + Gy * se.d + Gyy * se.c * se.c / 2;
    ue.ePrime = Gy * se.e + rho * se.c * Gzy - se.c * se.d * Gyy - se.c * se.c * se.c * Gyyy / 6;
    if (bmp::abs(ue.cPrime) > tolerance)
        throw CancellationFailed("square-root term of the unrooted expansion does not cancel: c' = " +
                                 toDecimal(ue.cPrime, 5));
    return ue;
}

// ---------------------------------------------------------------- analysis

Analysis analyze(GraphClassId id, int digits)
{
    if (digits < 30)
        throw std::invalid_argument("working precision must be at least 30 digits");
    PrecisionScope scope(digits + 10);
    Analysis out;
    out.classId = id;
    out.digits = digits;
    const Real stable = tenTo(-(digits - 10));

    BranchPoint previous;
    bool have = false;
    for (int m = 20; m <= 400; m += 10) {
        const auto eq = buildCharacteristicEquation(id, m, digits);
        const BranchPoint bp = have ? solveBranchPoint(eq, previous.rho, previous.tau) : solveBranchPoint(eq);
        out.rhoByTruncation.push_back({m, bp.rho});
        if (have && bmp::abs(bp.rho - previous.rho) < stable * bp.rho) {
            out.truncation = m;
            out.branch = bp;
            out.rooted = singularExpansion(eq, bp);
            out.unrooted = unrootedExpansion(eq, out.rooted, bp);
            const Real sqrtPi = bmp::sqrt(boost::math::constants::pi<Real>());
            out.rootedEstimate = {1 / bp.rho, Real(-3) / 2, out.rooted.c / (2 * sqrtPi)};
            out.unrootedEstimate = {1 / bp.rho, Real(-5) / 2, 3 * out.unrooted.ePrime / (4 * sqrtPi)};
            return out;
        }
        previous = bp;
        have = true;
    }
    throw NewtonDiverged("branch point did not stabilize for m <= 400", previous.rho, previous.tau);
}

AsymptoticEstimate asymptoticEstimate(GraphClassId id, Rooting rooting, int digits)
{
    const Analysis a = analyze(id, digits);
    return rooting == Rooting::Rooted ? a.rootedEstimate : a.unrootedEstimate;
}

Real empiricalFit(const std::vector<BigInt>& terms, const AsymptoticEstimate& est, std::size_t n)
{
    if (n >= terms.size())
        throw std::out_of_range("empiricalFit: table has no term " + std::to_string(n));
    const Real N(static_cast<unsigned long>(n));
    const Real predicted = est.constant * bmp::pow(est.growthRate, N) * bmp::pow(N, est.alpha);
    return bmp::abs(toReal(terms[n]) / predicted - 1);
}

Real empiricalFit(const grammars::CountTable& table, const AsymptoticEstimate& est, std::size_t n)
{
    return empiricalFit(table.terms, est, n);
}

Real dhEliminant(const Real& z, const Real& y)
{
    const Real q = 1 - z - 2 * y;
    return (4 * y * y + 4 * z * y + z * z - 8 * y - 4 * z + 1) / (q * q * q);
}

std::string toDecimal(const Real& x, int digits)
{
    if (x == 0)
        return "0";
    const long exponent = static_cast<long>(bmp::floor(bmp::log10(bmp::abs(x))).convert_to<double>());
    std::ostringstream os;
    if (exponent < -6 || exponent > 20) {
        os << std::scientific << std::setprecision(digits - 1) << x;
    } else {
        const long after = std::max(0L, static_cast<long>(digits) - 1 - exponent);
        os << std::fixed << std::setprecision(static_cast<int>(after)) << x;
    }
    return os.str();
}

} // namespace splitenum::asymptotics
