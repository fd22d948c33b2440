#include <doctest.h>

#include <cmath>
#include <vector>

#include "barrenlab/gram.hpp"
#include "barrenlab/kahan.hpp"
#include "barrenlab/rng.hpp"

using namespace barrenlab;
using namespace barrenlab::gram;
using spectral::make_custom_target;
using spectral::make_target;
using spectral::TargetKind;
using modcore::PrimeField;
using modcore::u64;

namespace {

// Brute second moment of f straight from the definition: a double loop per
// y, no shared machinery with gram_f's incremental indexing.
double second_moment_oracle(const spectral::TargetTable& table) {
    const u64 p = table.p();
    KahanSum total;
    for (u64 y = 1; y < p; ++y) {
        KahanSum inner;
        for (u64 x = 1; x < p; ++x)
            inner.add(table.values[x] *
                      table.values[(static_cast<unsigned __int128>(y) * x) % p]);
        const double f = inner.value() / static_cast<double>(p - 1);
        total.add(f * f);
    }
    return total.value() / static_cast<double>(p - 1);
}

spectral::TargetTable random_zero_table(const PrimeField& field,
                                        CounterRng& rng) {
    std::vector<double> values(field.p(), 0.0);
    for (u64 x = 1; x < field.p(); ++x) values[x] = rng.uniform(-1.0, 1.0);
    return make_custom_target(field, std::move(values));
}

}  // namespace

TEST_CASE("gram_f frozen p=5 last-bit case") {
    const PrimeField p5(5);
    const auto report = gram_f(make_target(p5, TargetKind::BitR, 1));

    CHECK(report.f_values == std::vector<double>{1.0, 0.0, 0.0, -1.0});
    CHECK(report.mean_f == doctest::Approx(0.0));
    CHECK(report.second_moment_f == doctest::Approx(0.5));

    // Independent 4x4 brute loop.
    CHECK(second_moment_oracle(make_target(p5, TargetKind::BitR, 1)) ==
          doctest::Approx(0.5));
}

TEST_CASE("gram_f rejects tables with t(0) != 0") {
    const PrimeField p5(5);
    auto table = make_target(p5, TargetKind::BitR, 1);
    table.values[0] = 1.0;
    CHECK_THROWS_AS(gram_f(table), ConventionViolationError);
}

TEST_CASE("f(1) is the mean square of t") {
    CounterRng rng(17, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const PrimeField field(31);
        const auto table = random_zero_table(field, rng);
        const auto report = gram_f(table);
        KahanSum sq;
        for (u64 x = 1; x < 31; ++x)
            sq.add(table.values[x] * table.values[x]);
        CHECK(report.f_values[0] ==
              doctest::Approx(sq.value() / 30.0).epsilon(1e-12));
    }
}

TEST_CASE("standardized tables have mean_f = 0") {
    const auto report =
        gram_f(make_target(PrimeField(5), TargetKind::Standardized));
    CHECK(report.mean_f == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mean of f equals the squared mean of t on random tables") {
    CounterRng rng(23, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const PrimeField field(17);
        const auto table = random_zero_table(field, rng);
        const auto report = gram_f(table);
        const double mean_t = spectral::mean_over_units(table);
        CHECK(report.mean_f ==
              doctest::Approx(mean_t * mean_t).epsilon(1e-10));
        CHECK(report.second_moment_f + 1e-15 >=
              report.mean_f * report.mean_f);  // Jensen
    }
}

TEST_CASE("centered bit tables have mean-free f") {
    for (u64 p : {13ull, 31ull, 127ull}) {
        const PrimeField field(p);
        for (unsigned r = 1; r <= 3; ++r) {
            const auto report =
                gram_f(make_target(field, TargetKind::CenteredBitR, r));
            CHECK(std::fabs(report.mean_f) < 1e-10);
        }
    }
}

TEST_CASE("direct and spectral second moments agree for built-in kinds") {
    for (u64 p : {13ull, 101ull, 251ull}) {
        const PrimeField field(p);
        for (auto kind : {TargetKind::RawMul, TargetKind::Standardized}) {
            const auto report = gram_f(make_target(field, kind));
            CHECK(report.second_moment_f ==
                  doctest::Approx(report.second_moment_spectral)
                      .epsilon(1e-9));
        }
        for (unsigned r = 1; r <= field.max_bit_index(); ++r) {
            const auto report = gram_f(make_target(field, TargetKind::BitR, r));
            CHECK(report.second_moment_f ==
                  doctest::Approx(report.second_moment_spectral)
                      .epsilon(1e-9));
        }
    }
}

TEST_CASE("sum-of-squares identity via the group structure") {
    // sum_{a,b} <h_a,h_b>^2 = (p-1)^4 E[f^2], evaluating the left side by
    // the b/a lookup instead of a triple loop.
    for (u64 p : {13ull, 101ull}) {
        const PrimeField field(p);
        const auto table = make_target(field, TargetKind::BitR, 1);
        const auto report = gram_f(table);
        const double n = static_cast<double>(p - 1);
        KahanSum lhs;
        for (u64 a = 1; a < p; ++a) {
            const u64 inv_a = field.inv(a);
            for (u64 b = 1; b < p; ++b) {
                const double ip = n * report.f_values[field.mul(b, inv_a) - 1];
                lhs.add(ip * ip);
            }
        }
        CHECK(lhs.value() ==
              doctest::Approx(n * n * n * n * report.second_moment_f)
                  .epsilon(1e-9));
    }
}

TEST_CASE("bb_quantity matches a direct pairwise computation") {
    const PrimeField p5(5);
    const auto table = make_target(p5, TargetKind::BitR, 1);
    const auto report = gram_f(table);

    // All 12 ordered pairs a != b with explicit vectors.
    KahanSum direct;
    for (u64 a = 1; a < 5; ++a)
        for (u64 b = 1; b < 5; ++b) {
            if (a == b) continue;
            KahanSum ip;
            for (u64 x = 1; x < 5; ++x)
                ip.add(table.values[p5.mul(a, x)] * table.values[p5.mul(b, x)]);
            direct.add(ip.value() * ip.value());
        }
    CHECK(report.bb_quantity == doctest::Approx(direct.value()).epsilon(1e-12));
    CHECK(report.bb_quantity == doctest::Approx(64.0));
    CHECK(report.bb_normalized() == doctest::Approx(4.0));  // 64 / 16
}

TEST_CASE("theorem_a_bound dominates the exact second moment") {
    {
        const PrimeField p13(13);
        const auto table = make_target(p13, TargetKind::CenteredBitR, 2);
        const double brute = second_moment_oracle(table);
        const double bound =
            theorem_a_bound(table, spectral::centered_bit_shift(p13, 2));
        CHECK(bound + 1e-12 >= brute);
    }
    {
        const PrimeField p101(101);
        const auto table = make_target(p101, TargetKind::Standardized);
        const double brute = second_moment_oracle(table);
        const double sigma = std::sqrt(101.0 * 101.0 / 12.0 - 101.0 / 6.0);
        const double bound = theorem_a_bound(table, -101.0 / (2.0 * sigma));
        CHECK(bound >= brute);
        CHECK(std::isfinite(bound / brute));
    }
}

TEST_CASE("theorem_a_bound edge cases") {
    const PrimeField p13(13);
    const auto zero = make_custom_target(p13, std::vector<double>(13, 0.0));
    CHECK(theorem_a_bound(zero, 0.0) == 0.0);

    // Uncentered third bit of p=13 sums to 2 over the units.
    const auto biased = make_target(p13, TargetKind::BitR, 3);
    CHECK_THROWS_AS(theorem_a_bound(biased, 0.0), HypothesisViolationError);

    auto bad = make_target(p13, TargetKind::CenteredBitR, 2);
    bad.values[0] = 0.5;
    CHECK_THROWS_AS(theorem_a_bound(bad, 0.0), HypothesisViolationError);
}

TEST_CASE("gram_f fills the canonical bound for mean-free kinds") {
    const PrimeField p31(31);
    for (auto kind : {TargetKind::RawMul, TargetKind::Standardized}) {
        const auto report = gram_f(make_target(p31, kind));
        CHECK(report.theorem_a_bound > 0.0);
        CHECK(report.theorem_a_bound + 1e-12 >= report.second_moment_f);
    }
    const auto centered = gram_f(make_target(p31, TargetKind::CenteredBitR, 2));
    CHECK(centered.theorem_a_bound + 1e-12 >= centered.second_moment_f);
    const auto biased = gram_f(make_target(p31, TargetKind::BitR, 2));
    CHECK(biased.theorem_a_bound == 0.0);  // no canonical split applies
}

TEST_CASE("ms_covariance against the 64-term triple loop") {
    const PrimeField p5(5);
    KahanSum brute;
    for (u64 a = 1; a < 5; ++a)
        for (u64 b = 1; b < 5; ++b) {
            KahanSum cov;
            for (u64 x = 1; x < 5; ++x)
                cov.add(static_cast<double>(p5.mul(a, x)) *
                        static_cast<double>(p5.mul(b, x)));
            const double c = cov.value() / 4.0 - 2.5 * 2.5;  // E[aX] = p/2
            brute.add(c * c);
        }
    const double expected = brute.value() / 16.0;
    CHECK(ms_covariance(p5) == doctest::Approx(expected).epsilon(1e-12));

    // The diagonal a=b sits at Var^2 = (p^2/12 - p/6)^2 = 1.5625 for p=5.
    const auto raw = gram_f(make_target(p5, TargetKind::RawMul));
    CHECK(raw.f_values[0] * raw.f_values[0] == doctest::Approx(1.5625));
}

TEST_CASE("ms_covariance stays under a fixed multiple of p^3 ln^2 p") {
    for (u64 p : modcore::primes_in_range(3, 150)) {
        const double value = ms_covariance(PrimeField(p));
        const double pd = static_cast<double>(p);
        const double scale = pd * pd * pd * std::log(pd) * std::log(pd);
        CHECK(value / scale < 1.0);
    }
}

TEST_CASE("boas-bellman inequality evaluation") {
    // Orthonormal family: rhs collapses to |g|^2, and Bessel caps the lhs.
    std::vector<std::vector<double>> ortho{
        {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
    std::vector<double> g{0.5, -2.0, 1.0, 3.0};
    const auto b = boas_bellman_rhs(ortho, g);
    const double g2 = 0.25 + 4.0 + 1.0 + 9.0;
    CHECK(b.rhs == doctest::Approx(g2));
    CHECK(b.lhs <= g2 + 1e-12);

    // Single vector h = g.
    const auto single = boas_bellman_rhs({g}, g);
    CHECK(single.lhs == doctest::Approx(g2 * g2));
    CHECK(single.lhs <= single.rhs + 1e-12);

    // Random families never violate the inequality.
    CounterRng rng(7, 0);
    for (int seed = 0; seed < 1000; ++seed) {
        std::vector<std::vector<double>> hs(10, std::vector<double>(32));
        std::vector<double> gg(32);
        for (auto& h : hs)
            for (auto& v : h) v = rng.uniform(-1.0, 1.0);
        for (auto& v : gg) v = rng.uniform(-1.0, 1.0);
        const auto r = boas_bellman_rhs(hs, gg);
        CHECK(r.lhs <= r.rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("variance_bound_bits basic behavior") {
    const PrimeField p13(13);
    const double c = variance_bound_bits(p13, 1);
    CHECK(c > 0.0);
    CHECK(std::isfinite(c));
    CHECK_THROWS_AS(variance_bound_bits(p13, 5), BitOutOfRangeError);
}
