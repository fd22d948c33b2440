#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "barrenlab/kahan.hpp"
#include "barrenlab/rng.hpp"
#include "barrenlab/spectral.hpp"

using namespace barrenlab;
using namespace barrenlab::spectral;
using modcore::PrimeField;
using modcore::u64;

namespace {

// Brute DFT oracle with unreduced phases: different evaluation path from
// the production transform.
cplx dft_oracle(const std::vector<double>& values, u64 p, u64 y) {
    cplx sum{0.0, 0.0};
    for (u64 x = 0; x < p; ++x) {
        const double angle = -2.0 * std::numbers::pi *
                             static_cast<double>(y) * static_cast<double>(x) /
                             static_cast<double>(p);
        sum += std::polar(values[x], angle);
    }
    return sum;
}

TargetTable random_table(const PrimeField& field, CounterRng& rng) {
    std::vector<double> values(field.p(), 0.0);
    for (u64 x = 1; x < field.p(); ++x) values[x] = rng.uniform(-1.0, 1.0);
    return make_custom_target(field, std::move(values));
}

}  // namespace

TEST_CASE("built-in target tables") {
    const PrimeField p5(5);

    const auto bit = make_target(p5, TargetKind::BitR, 1);
    CHECK(bit.values == std::vector<double>{0, -1, 1, -1, 1});

    const auto raw = make_target(p5, TargetKind::RawMul);
    CHECK(raw.values == std::vector<double>{0, -1.5, -0.5, 0.5, 1.5});

    const auto std_t = make_target(p5, TargetKind::Standardized);
    CHECK(std::fabs(mean_over_units(std_t)) < 1e-12);

    CHECK_THROWS_AS(make_target(p5, TargetKind::BitR, 4), BitOutOfRangeError);
}

TEST_CASE("standardized tables have unit variance on the units") {
    for (u64 p : {5ull, 13ull, 101ull, 499ull}) {
        const auto table = make_target(PrimeField(p), TargetKind::Standardized);
        KahanSum sq;
        for (u64 x = 1; x < p; ++x) sq.add(table.values[x] * table.values[x]);
        const double variance = sq.value() / static_cast<double>(p - 1);
        CHECK(std::fabs(mean_over_units(table)) < 1e-12);
        CHECK(variance == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("centered bit tables are mean-free and keep t(0) = 0") {
    for (u64 p : {5ull, 13ull, 31ull, 127ull}) {
        const PrimeField field(p);
        for (unsigned r = 1; r <= field.max_bit_index(); ++r) {
            const auto table = make_target(field, TargetKind::CenteredBitR, r);
            CHECK(table.values[0] == 0.0);
            CHECK(std::fabs(mean_over_units(table)) < 1e-12);
        }
    }
}

TEST_CASE("naive DFT basics") {
    const PrimeField p5(5);
    const auto bit_spec = dft_naive(make_target(p5, TargetKind::BitR, 1));
    CHECK(std::abs(bit_spec.coeffs[0]) < 1e-12);  // equal counts of +-1

    std::vector<double> ones(5, 1.0);
    const auto const_spec = dft_naive(make_custom_target(p5, ones));
    CHECK(const_spec.coeffs[0].real() == doctest::Approx(5.0));
    for (u64 y = 1; y < 5; ++y) CHECK(std::abs(const_spec.coeffs[y]) < 1e-12);

    const auto raw_spec = dft_naive(make_target(p5, TargetKind::RawMul));
    CHECK(std::abs(raw_spec.coeffs[0]) < 1e-12);  // sum of (x - 5/2) over units
}

TEST_CASE("naive DFT equals the unreduced-phase oracle") {
    CounterRng rng(11, 0);
    for (u64 p : {5ull, 13ull, 61ull}) {
        const PrimeField field(p);
        const auto table = random_table(field, rng);
        const auto spectrum = dft_naive(table);
        for (u64 y = 0; y < p; ++y)
            CHECK(std::abs(spectrum.coeffs[y] - dft_oracle(table.values, p, y)) <
                  1e-9);
    }
}

TEST_CASE("Parseval and the zero coefficient on random tables") {
    CounterRng rng(3, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const PrimeField field(61);
        const auto table = random_table(field, rng);
        const auto spectrum = dft_naive(table);

        KahanSum time_sq, freq_sq, time_sum;
        for (u64 x = 0; x < 61; ++x) {
            time_sq.add(table.values[x] * table.values[x]);
            time_sum.add(table.values[x]);
        }
        for (const auto& c : spectrum.coeffs) freq_sq.add(std::norm(c));
        CHECK(freq_sq.value() ==
              doctest::Approx(61.0 * time_sq.value()).epsilon(1e-9));
        CHECK(spectrum.coeffs[0].real() ==
              doctest::Approx(time_sum.value()).epsilon(1e-9));
        CHECK(std::fabs(spectrum.coeffs[0].imag()) < 1e-9);
    }
}

TEST_CASE("closed-form bit DFT frozen values") {
    // p=13, r=3: [p]_3 = 1, p_2 = 1, so the zero coefficient is
    // -1 + 4*1 + (-1)*1 = 2; the brute sum over the units agrees.
    const PrimeField p13(13);
    const cplx zero_coeff = dft_bit_closed_form(p13, 3, 0);
    CHECK(zero_coeff.real() == doctest::Approx(2.0));
    CHECK(zero_coeff.imag() == 0.0);
    double brute = 0.0;
    for (u64 x = 1; x < 13; ++x) brute += modcore::bit_r(x, 3) ? -1.0 : 1.0;
    CHECK(brute == doctest::Approx(2.0));

    const cplx p7r1 = dft_bit_closed_form(PrimeField(7), 1, 0);
    CHECK(p7r1.real() == doctest::Approx(0.0));
}

TEST_CASE("closed-form bit DFT equals the naive DFT everywhere") {
    for (u64 p : {5ull, 13ull, 31ull, 101ull}) {
        const PrimeField field(p);
        for (unsigned r = 1; r <= field.max_bit_index(); ++r) {
            const auto spectrum =
                dft_naive(make_target(field, TargetKind::BitR, r));
            for (u64 i = 0; i < p; ++i)
                CHECK(std::abs(dft_bit_closed_form(field, r, i) -
                               spectrum.coeffs[i]) <
                      1e-9 * static_cast<double>(p));
        }
    }
}

TEST_CASE("closed-form linear DFT") {
    // 3-term and 5-term brute sums.
    for (auto [p, i] : std::vector<std::pair<u64, u64>>{{3, 1}, {5, 2}}) {
        const PrimeField field(p);
        std::vector<double> linear(p);
        for (u64 x = 0; x < p; ++x) linear[x] = static_cast<double>(x);
        const cplx brute = dft_oracle(linear, p, i);
        CHECK(std::abs(dft_linear_closed_form(field, i) - brute) < 1e-10);
    }

    CHECK_THROWS_AS(dft_linear_closed_form(PrimeField(7), 0),
                    ZeroFrequencyError);

    for (u64 p : {13ull, 101ull, 251ull}) {
        const PrimeField field(p);
        std::vector<double> linear(p);
        for (u64 x = 0; x < p; ++x) linear[x] = static_cast<double>(x);
        const auto spectrum = dft_naive(make_custom_target(field, linear));
        const double tol =
            1e-9 * static_cast<double>(p) * static_cast<double>(p);
        for (u64 i = 1; i < p; ++i)
            CHECK(std::abs(dft_linear_closed_form(field, i) -
                           spectrum.coeffs[i]) < tol);
    }
}

TEST_CASE("harmonic sums: frozen small cases") {
    const PrimeField p3(3);
    // 1/2 + 1/|1+w| + 1/|1+w^2| with |1+w| = |1+w^2| = 1.
    CHECK(harmonic_sum(p3, HarmonicSign::Plus, 1) == doctest::Approx(2.5));
    // |1-w| = |1-w^2| = sqrt(3).
    CHECK(harmonic_sum(p3, HarmonicSign::Minus, 1) ==
          doctest::Approx(2.0 / std::sqrt(3.0)));
}

TEST_CASE("harmonic sums are invariant under frequency reindexing") {
    for (u64 p : {5ull, 31ull, 101ull}) {
        const PrimeField field(p);
        const double plus1 = harmonic_sum(field, HarmonicSign::Plus, 1);
        const double minus1 = harmonic_sum(field, HarmonicSign::Minus, 1);
        for (u64 r = 2; r < p; ++r) {
            CHECK(harmonic_sum(field, HarmonicSign::Plus, r) ==
                  doctest::Approx(plus1).epsilon(1e-12));
            CHECK(harmonic_sum(field, HarmonicSign::Minus, r) ==
                  doctest::Approx(minus1).epsilon(1e-12));
        }
    }
}

TEST_CASE("harmonic sums stay within a fixed multiple of p ln p") {
    for (u64 p : modcore::primes_in_range(3, 2000)) {
        const PrimeField field(p);
        const double scale =
            static_cast<double>(p) * std::log(static_cast<double>(p));
        CHECK(harmonic_sum(field, HarmonicSign::Plus, 1) / scale < 1.0);
        CHECK(harmonic_sum(field, HarmonicSign::Minus, 1) / scale < 1.0);
    }
}

TEST_CASE("spectral l1 edge cases") {
    const PrimeField p5(5);
    std::vector<cplx> constant{{5.0, 0.0}, {}, {}, {}, {}};
    CHECK(spectral_l1(Spectrum{p5, constant}, true) == 0.0);
    CHECK(spectral_l1(Spectrum{p5, constant}, false) == 5.0);

    const auto zero =
        dft_naive(make_custom_target(p5, std::vector<double>(5, 0.0)));
    CHECK(spectral_l1(zero, false) == 0.0);

    // Bit-target l1 against its p r (log2 p + 1 - r) envelope.
    const PrimeField p101(101);
    const auto spectrum = dft_naive(make_target(p101, TargetKind::BitR, 1));
    const double level = 101.0 * 1.0 * (std::log2(101.0) + 1.0 - 1.0);
    CHECK(spectral_l1(spectrum, true) / level < 10.0);
}
