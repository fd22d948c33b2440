#pragma once

#include <cstdint>
#include <vector>

#include "barrenlab/errors.hpp"

namespace barrenlab::modcore {

using u64 = std::uint64_t;

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime(u64 n);

/// The ring Z_p for an odd prime modulus p, 3 <= p < 2^61.
/// Residues are plain u64 values in [0,p); the O(p^2) inner loops elsewhere
/// make per-element wrappers too costly.
class PrimeField {
public:
    explicit PrimeField(u64 p);

    u64 p() const { return p_; }

    /// (a*b) mod p through a 128-bit intermediate.
    u64 mul(u64 a, u64 b) const {
        return static_cast<u64>(
            static_cast<unsigned __int128>(a) * b % p_);
    }

    /// Multiplicative inverse in Z_p^*. Throws InvalidResidueError on a == 0.
    u64 inv(u64 a) const;

    u64 pow(u64 a, u64 e) const;

    /// Largest valid bit index: the r with 2^(r-1) < p <= 2^r.
    unsigned max_bit_index() const;

private:
    u64 p_;
};

/// r-th least-significant binary digit of x (r is 1-based).
inline int bit_r(u64 x, unsigned r) {
    if (r > 64) return 0;
    return static_cast<int>((x >> (r - 1)) & 1u);
}

/// Checks 1 <= r and 2^(r-1) < p; throws BitOutOfRangeError otherwise.
void check_bit_index(const PrimeField& field, unsigned r);

/// p mod 2^(r-1): the integer formed by the last r-1 binary digits of p.
u64 p_tail(const PrimeField& field, unsigned r);

/// All primes in [lo,hi], ascending. Requires 2 <= lo <= hi.
std::vector<u64> primes_in_range(u64 lo, u64 hi);

}  // namespace barrenlab::modcore
