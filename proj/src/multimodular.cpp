// Exact unlabeled counts at large orders: the lowered program is run over
// batches of eight 28-bit primes and every requested coefficient is rebuilt by
// incremental CRT from just as many primes as its magnitude needs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "detail/engine.hpp"
#include "detail/program.hpp"
#include "detail/rings.hpp"

namespace splitenum::species::detail {

namespace {

std::uint64_t powMod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1;
    b %= m;
    for (; e; e >>= 1, b = b * b % m)
        if (e & 1)
            r = r * b % m;
    return r;
}

// Deterministic Miller-Rabin for n < 3.2e9.
bool isPrime(std::uint32_t n)
{
    if (n < 2)
        return false;
    for (std::uint32_t p : {2u, 3u, 5u, 7u})
        if (n % p == 0)
            return n == p;
    std::uint64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (std::uint64_t a : {2u, 3u, 5u, 7u}) {
        std::uint64_t x = powMod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = x * x % n;
            if (x == n - 1)
                composite = false;
        }
        if (composite)
            return false;
    }
    return true;
}

std::vector<std::uint32_t> primesBelow28(std::size_t count)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = (1u << 28) - 1; out.size() < count; c -= 2)
        if (isPrime(c))
            out.push_back(c);
    return out;
}

// log2 of an upper bound on |coefficient n| over every node of the program.
std::vector<double> magnitudes(const Program& prog, std::size_t order)
{
    Engine<FloatRing> engine(prog, {});
    engine.run(order);
    std::vector<double> bits(order + 1, 0.0);
    for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
        const auto& v = engine.values(static_cast<int>(i));
        for (std::size_t n = 0; n <= order; ++n)
            bits[n] = std::max(bits[n], v[n].log2abs());
    }
    return bits;
}

} // namespace

std::vector<std::vector<BigInt>> solveModular(const Program& prog, std::size_t order, const std::vector<SignedNodes>& outputs)
{
    constexpr double kGuardBits = 64.0;
    constexpr double kBitsPerPrime = 27.9;

    const auto bits = magnitudes(prog, order);
    // Primes used for coefficient n; one more prime verifies the reconstruction.
    std::vector<std::size_t> need(order + 1);
    std::size_t maxNeed = 0;
    for (std::size_t n = 0; n <= order; ++n) {
        need[n] = static_cast<std::size_t>(std::ceil((bits[n] + kGuardBits + 1.0) / kBitsPerPrime));
        maxNeed = std::max(maxNeed, need[n]);
    }
    const std::size_t batches = (maxNeed + 1 + kLanes - 1) / kLanes;
    const auto primes = primesBelow28(batches * kLanes);

    std::vector<std::vector<BigInt>> x(outputs.size(), std::vector<BigInt>(order + 1, 0));
    BigInt modulus = 1;
    std::vector<BigInt> prefix; // prefix[j] = product of primes[0..j)
    prefix.reserve(primes.size() + 1);
    prefix.push_back(1);

    for (std::size_t b = 0; b < batches; ++b) {
        ModLanesRing ring;
        for (int l = 0; l < kLanes; ++l)
            ring.primes[static_cast<std::size_t>(l)] = primes[b * kLanes + static_cast<std::size_t>(l)];
        Engine<ModLanesRing> engine(prog, ring);
        engine.run(order);

        for (int l = 0; l < kLanes; ++l) {
            const std::size_t j = b * kLanes + static_cast<std::size_t>(l);
            const std::uint32_t p = primes[j];
            const BigInt& m = prefix[j];
            const std::uint32_t minv = invMod(mpz_fdiv_ui(m.get_mpz_t(), p), p);
            for (std::size_t o = 0; o < outputs.size(); ++o) {
                for (std::size_t n = 0; n <= order; ++n) {
                    if (j > need[n])
                        continue;
                    BigInt& xn = x[o][n];
                    std::uint64_t r = 0;
                    for (const auto& [node, sign] : outputs[o]) {
                        const std::uint64_t v = engine.values(node)[n].v[static_cast<std::size_t>(l)];
                        r = (r + (sign > 0 ? v : p - v)) % p;
                    }
                    const std::uint64_t cur = mpz_fdiv_ui(xn.get_mpz_t(), p);
                    if (j == need[n]) {
                        // Symmetric reconstruction against the verification prime.
                        const BigInt& mn = prefix[j];
                        BigInt signedX = xn;
                        if (2 * xn > mn)
                            signedX -= mn;
                        const std::uint64_t check = mpz_fdiv_ui(signedX.get_mpz_t(), p);
                        if (check != r)
                            throw std::logic_error("multimodular reconstruction failed at coefficient " +
                                                   std::to_string(n));
                        xn = signedX;
                        continue;
                    }
                    const std::uint64_t t = (r + p - cur) % p * minv % p;
                    if (t != 0)
                        mpz_addmul_ui(xn.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(t));
                }
            }
            modulus = m * p;
            prefix.push_back(modulus);
        }
    }
    return x;
}

} // namespace splitenum::species::detail
