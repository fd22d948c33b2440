#include "barrenlab/spectral.hpp"

#include <cmath>
#include <numbers>

#include "barrenlab/csv.hpp"
#include "barrenlab/kahan.hpp"
#include "barrenlab/parallel.hpp"

namespace barrenlab::spectral {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

cplx unit_root_pow(const PrimeField& field, u64 e_mod_p) {
    const double angle =
        kTwoPi * static_cast<double>(e_mod_p) / static_cast<double>(field.p());
    return {std::cos(angle), std::sin(angle)};
}

double centered_bit_shift(const PrimeField& field, unsigned r) {
    modcore::check_bit_index(field, r);
    const u64 p = field.p();
    const int p_bit = modcore::bit_r(p, r);
    const double tail = static_cast<double>(modcore::p_tail(field, r));
    const double sign = p_bit ? -1.0 : 1.0;
    const double unit_sum =
        -1.0 + sign * tail + std::ldexp(static_cast<double>(p_bit), r - 1);
    return -unit_sum / static_cast<double>(p - 1);
}

double mean_over_units(const TargetTable& table) {
    KahanSum s;
    for (u64 x = 1; x < table.p(); ++x) s.add(table.values[x]);
    return s.value() / static_cast<double>(table.p() - 1);
}

TargetTable make_target(const PrimeField& field, TargetKind kind, unsigned r) {
    const u64 p = field.p();
    TargetTable table{field, std::vector<double>(p, 0.0), kind, r};
    const double half = static_cast<double>(p) / 2.0;
    switch (kind) {
        case TargetKind::RawMul:
            for (u64 x = 1; x < p; ++x)
                table.values[x] = static_cast<double>(x) - half;
            break;
        case TargetKind::Standardized: {
            const double sigma = std::sqrt(
                static_cast<double>(p) * static_cast<double>(p) / 12.0 -
                static_cast<double>(p) / 6.0);
            for (u64 x = 1; x < p; ++x)
                table.values[x] = (static_cast<double>(x) - half) / sigma;
            break;
        }
        case TargetKind::BitR:
            modcore::check_bit_index(field, r);
            for (u64 x = 1; x < p; ++x)
                table.values[x] = modcore::bit_r(x, r) ? -1.0 : 1.0;
            break;
        case TargetKind::CenteredBitR: {
            const double shift = centered_bit_shift(field, r);
            for (u64 x = 1; x < p; ++x)
                table.values[x] =
                    (modcore::bit_r(x, r) ? -1.0 : 1.0) + shift;
            break;
        }
        case TargetKind::Custom:
            throw Error("make_target: Custom tables come from make_custom_target");
    }
    return table;
}

TargetTable make_custom_target(const PrimeField& field,
                               std::vector<double> values) {
    if (values.size() != field.p())
        throw Error("make_custom_target: table length must equal p");
    return TargetTable{field, std::move(values), TargetKind::Custom, 0};
}

Spectrum dft_naive(const TargetTable& table) {
    const u64 p = table.p();
    Spectrum spectrum{table.field, std::vector<cplx>(p)};

    // One shared root table; the exponent is reduced mod p before lookup.
    std::vector<double> cos_table(p), sin_table(p);
    for (u64 k = 0; k < p; ++k) {
        const double angle =
            kTwoPi * static_cast<double>(k) / static_cast<double>(p);
        cos_table[k] = std::cos(angle);
        sin_table[k] = std::sin(angle);
    }

    const auto& t = table.values;
    parallel_for_chunks(p, 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t y = lo; y < hi; ++y) {
            KahanSum re, im;
            // exponent of w^(-yx) reduced into [0,p): p - (y*x mod p)
            u64 e = 0;
            const u64 step = p - static_cast<u64>(y) % p;
            for (u64 x = 0; x < p; ++x) {
                const double v = t[x];
                if (v != 0.0) {
                    re.add(cos_table[e] * v);
                    im.add(sin_table[e] * v);
                }
                e += step;
                if (e >= p) e -= p;
            }
            spectrum.coeffs[y] = {re.value(), im.value()};
        }
    });
    return spectrum;
}

cplx dft_bit_closed_form(const PrimeField& field, unsigned r, u64 i) {
    modcore::check_bit_index(field, r);
    const u64 p = field.p();
    const int p_bit = modcore::bit_r(p, r);
    const u64 tail = modcore::p_tail(field, r);
    const double sign = p_bit ? -1.0 : 1.0;

    if (i % p == 0) {
        return {-1.0 + std::ldexp(static_cast<double>(p_bit), r - 1) +
                    sign * static_cast<double>(tail),
                0.0};
    }

    i %= p;
    const u64 block = (1ull << (r - 1)) % p;
    // w^(-(p - tail) i) = w^(tail * i), and w^(-pi) = 1.
    const cplx w_head = unit_root_pow(field, field.mul(tail, i));
    const cplx w_block = unit_root_pow(field, p - field.mul(block, i));
    const cplx w_one = unit_root_pow(field, p - i);

    const cplx alternating =
        (1.0 - sign * w_head) / (1.0 + w_block) * ((1.0 - w_block) / (1.0 - w_one));
    const cplx remainder = sign * (w_head - 1.0) / (1.0 - w_one);
    return -1.0 + alternating + remainder;
}

cplx dft_linear_closed_form(const PrimeField& field, u64 i) {
    const u64 p = field.p();
    i %= p;
    if (i == 0)
        throw ZeroFrequencyError(
            "linear DFT closed form has a pole at frequency 0");
    // For z = w^(-i) with z^p = 1: sum_x x z^x = -p/(1-z).
    const cplx w_inv = unit_root_pow(field, p - i);
    return -static_cast<double>(p) / (1.0 - w_inv);
}

double harmonic_sum(const PrimeField& field, HarmonicSign sign, u64 r) {
    const u64 p = field.p();
    r %= p;
    if (r == 0) throw InvalidResidueError("harmonic_sum: r must be a unit");

    // |1 + w^m| = 2|cos(pi m / p)|, |1 - w^m| = 2|sin(pi m / p)|.
    KahanSum s;
    u64 m = 0;
    if (sign == HarmonicSign::Plus) {
        for (u64 k = 0; k < p; ++k) {
            const double angle =
                std::numbers::pi * static_cast<double>(m) / static_cast<double>(p);
            s.add(0.5 / std::fabs(std::cos(angle)));
            m += r;
            if (m >= p) m -= p;
        }
    } else {
        m = r;
        for (u64 k = 1; k < p; ++k) {
            const double angle =
                std::numbers::pi * static_cast<double>(m) / static_cast<double>(p);
            s.add(0.5 / std::fabs(std::sin(angle)));
            m += r;
            if (m >= p) m -= p;
        }
    }
    return s.value();
}

double spectral_l1(const Spectrum& spectrum, bool exclude_zero) {
    KahanSum s;
    for (std::size_t i = exclude_zero ? 1 : 0; i < spectrum.coeffs.size(); ++i)
        s.add(std::abs(spectrum.coeffs[i]));
    return s.value();
}

void write_spectrum_csv(const Spectrum& spectrum, const std::string& path) {
    CsvWriter csv(path, {"index", "re", "im", "abs"});
    for (std::size_t i = 0; i < spectrum.coeffs.size(); ++i) {
        const cplx& c = spectrum.coeffs[i];
        csv.row({static_cast<double>(i), c.real(), c.imag(), std::abs(c)});
    }
}

}  // namespace barrenlab::spectral
