#include <doctest.h>

#include "barrenlab/modcore.hpp"
#include "barrenlab/rng.hpp"

using namespace barrenlab;
using namespace barrenlab::modcore;

namespace {

// Independent oracles: plain integer arithmetic, no PrimeField involved.
u64 mul_oracle(u64 a, u64 b, u64 p) {
    u64 acc = 0;
    for (u64 i = 0; i < b; ++i) acc = (acc + a) % p;  // repeated addition
    return acc;
}

u64 inv_oracle(u64 a, u64 p) {  // exhaustive search
    for (u64 b = 1; b < p; ++b)
        if ((a * b) % p == 1) return b;
    return 0;
}

std::vector<u64> sieve_oracle(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 n = lo; n <= hi; ++n) {
        if (n < 2) continue;
        bool prime = true;
        for (u64 d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(n);
    }
    return out;
}

}  // namespace

TEST_CASE("prime field construction validates the modulus") {
    CHECK_THROWS_AS(PrimeField(1), Error);
    CHECK_THROWS_AS(PrimeField(2), Error);  // p > 2 required
    CHECK_THROWS_AS(PrimeField(9), Error);
    CHECK_THROWS_AS(PrimeField(1ull << 61), Error);
    CHECK_NOTHROW(PrimeField(3));
    CHECK_NOTHROW(PrimeField((1ull << 61) - 1));  // Mersenne prime
}

TEST_CASE("miller-rabin against the trial-division oracle") {
    const auto expected = sieve_oracle(2, 2000);
    std::vector<u64> got;
    for (u64 n = 2; n <= 2000; ++n)
        if (is_prime(n)) got.push_back(n);
    CHECK(got == expected);

    // Carmichael numbers and strong-pseudoprime bait.
    CHECK_FALSE(is_prime(561));
    CHECK_FALSE(is_prime(1729));
    CHECK_FALSE(is_prime(3215031751ull));
    CHECK(is_prime(2147483647ull));
}

TEST_CASE("mul_mod matches integer oracles") {
    CHECK(PrimeField(7).mul(3, 5) == 1);  // 15 mod 7
    CHECK(PrimeField(7).mul(0, 5) == 0);
    CHECK(PrimeField(5).mul(4, 4) == 1);  // 16 mod 5
    CHECK(mul_oracle(3, 5, 7) == 1);
    CHECK(mul_oracle(4, 4, 5) == 1);

    // No overflow near the top of the allowed range.
    const u64 p = (1ull << 61) - 1;
    const PrimeField big(p);
    const u64 a = p - 2, b = p - 3;
    // (p-2)(p-3) = p^2 - 5p + 6 == 6 (mod p)
    CHECK(big.mul(a, b) == 6);
}

TEST_CASE("inv_mod via the extended-euclid contract") {
    CHECK(PrimeField(7).inv(3) == 5);
    CHECK(PrimeField(7).inv(1) == 1);
    CHECK(PrimeField(11).inv(10) == 10);  // p-1 is self-inverse
    CHECK((10 * 10) % 11 == 1);
    CHECK_THROWS_AS(PrimeField(7).inv(0), InvalidResidueError);

    const PrimeField field(101);
    for (u64 a = 1; a < 101; ++a) {
        CHECK(field.inv(a) == inv_oracle(a, 101));
        CHECK(field.mul(a, field.inv(a)) == 1);
    }
}

TEST_CASE("bit extraction and digit reconstruction") {
    CHECK(bit_r(13, 3) == 1);  // 13 = 1101b, digits 1,0,1,1 from the end
    CHECK(bit_r(13, 2) == 0);
    CHECK(bit_r(0, 5) == 0);

    CounterRng rng(2024, 0);
    for (int trial = 0; trial < 10000; ++trial) {
        const u64 x = rng.next_u64() & ((1ull << 60) - 1);
        u64 rebuilt = 0;
        for (unsigned r = 1; r <= 60; ++r)
            rebuilt |= static_cast<u64>(bit_r(x, r)) << (r - 1);
        CHECK(rebuilt == x);
        const unsigned r = 1 + static_cast<unsigned>(rng.below(60));
        CHECK(bit_r(x, r) == static_cast<int>((x >> (r - 1)) % 2));
    }
}

TEST_CASE("p_tail is the low binary digits of p") {
    CHECK(p_tail(PrimeField(13), 3) == 1);  // 13 - 4*3
    CHECK(p_tail(PrimeField(13), 1) == 0);
    CHECK(p_tail(PrimeField(7), 2) == 1);  // 7 - 2*3

    for (u64 p : {5ull, 13ull, 101ull, 65537ull}) {
        const PrimeField field(p);
        for (unsigned r = 1; r <= field.max_bit_index(); ++r) {
            const u64 t = p_tail(field, r);
            CHECK(t == p % (1ull << (r - 1)));
            CHECK(t < (1ull << (r - 1)));
        }
        CHECK_THROWS_AS(p_tail(field, field.max_bit_index() + 1),
                        BitOutOfRangeError);
    }
}

TEST_CASE("primes_in_range matches the sieve oracle") {
    CHECK(primes_in_range(3, 12) == std::vector<u64>{3, 5, 7, 11});
    CHECK(primes_in_range(8, 10).empty());
    CHECK(primes_in_range(2, 2) == std::vector<u64>{2});
    CHECK(primes_in_range(2, 5000) == sieve_oracle(2, 5000));
    CHECK_THROWS_AS(primes_in_range(1, 10), Error);
    CHECK_THROWS_AS(primes_in_range(10, 5), Error);
}
