#include "barrenlab/modcore.hpp"

#include <bit>

namespace barrenlab::modcore {

namespace {

u64 mul_mod_raw(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 pow_mod_raw(u64 a, u64 e, u64 m) {
    u64 result = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) result = mul_mod_raw(result, a, m);
        a = mul_mod_raw(a, a, m);
        e >>= 1;
    }
    return result;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                  23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set decides primality for every n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                  23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod_raw(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod_raw(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(u64 p) : p_(p) {
    if (p < 3 || p >= (1ull << 61))
        throw Error("PrimeField: modulus must satisfy 3 <= p < 2^61");
    if (!is_prime(p)) throw Error("PrimeField: modulus is not prime");
}

u64 PrimeField::inv(u64 a) const {
    if (a == 0) throw InvalidResidueError("inv: 0 has no inverse");
    // Extended Euclid on (a, p); p prime guarantees gcd 1.
    std::int64_t t = 0, new_t = 1;
    u64 r = p_, new_r = a % p_;
    while (new_r != 0) {
        u64 q = r / new_r;
        std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * new_t;
        t = new_t;
        new_t = tmp_t;
        u64 tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    return t < 0 ? static_cast<u64>(t + static_cast<std::int64_t>(p_))
                 : static_cast<u64>(t);
}

u64 PrimeField::pow(u64 a, u64 e) const { return pow_mod_raw(a, e, p_); }

unsigned PrimeField::max_bit_index() const {
    // p is odd and > 2, never a power of two, so ceil(log2 p) = bit_width(p).
    return static_cast<unsigned>(std::bit_width(p_));
}

void check_bit_index(const PrimeField& field, unsigned r) {
    if (r < 1 || r > field.max_bit_index())
        throw BitOutOfRangeError("bit index out of range for modulus");
}

u64 p_tail(const PrimeField& field, unsigned r) {
    check_bit_index(field, r);
    if (r == 1) return 0;
    return field.p() & ((1ull << (r - 1)) - 1);
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
    if (lo < 2 || lo > hi) throw Error("primes_in_range: need 2 <= lo <= hi");
    std::vector<bool> composite(hi - lo + 1, false);
    for (u64 q = 2; q * q <= hi; ++q) {
        u64 start = std::max(q * q, ((lo + q - 1) / q) * q);
        for (u64 m = start; m <= hi; m += q) composite[m - lo] = true;
    }
    std::vector<u64> out;
    for (u64 n = lo; n <= hi; ++n)
        if (n >= 2 && !composite[n - lo]) out.push_back(n);
    return out;
}

}  // namespace barrenlab::modcore
