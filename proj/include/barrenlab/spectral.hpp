#pragma once

#include <complex>
#include <string>
#include <vector>

#include "barrenlab/modcore.hpp"

namespace barrenlab::spectral {

using modcore::PrimeField;
using modcore::u64;
using cplx = std::complex<double>;

enum class TargetKind { RawMul, BitR, Standardized, CenteredBitR, Custom };

/// Real-valued target t on Z_p stored as a length-p table; t(0) = 0 for all
/// built-in kinds so the multiplicative-shift lemmas apply unchanged.
struct TargetTable {
    PrimeField field;
    std::vector<double> values;  // values[x] = t(x)
    TargetKind kind = TargetKind::Custom;
    unsigned r = 0;  // bit index, meaningful for the bit kinds

    u64 p() const { return field.p(); }
};

/// Centering shift c_r that makes the r-th-bit target mean-free on Z_p^*.
double centered_bit_shift(const PrimeField& field, unsigned r);

/// Mean of t over Z_p^*.
double mean_over_units(const TargetTable& table);

TargetTable make_target(const PrimeField& field, TargetKind kind,
                        unsigned r = 0);
TargetTable make_custom_target(const PrimeField& field,
                               std::vector<double> values);

/// DFT coefficients t_hat(0..p-1).
struct Spectrum {
    PrimeField field;
    std::vector<cplx> coeffs;
};

/// Direct O(p^2) transform, t_hat(y) = sum_x w^(-yx) t(x), with compensated
/// per-coefficient sums. Reference path for every closed form below.
Spectrum dft_naive(const TargetTable& table);

/// Closed form for the DFT of the r-th-bit target, including the y = 0
/// branch (-1 + 2^(r-1)[p]_r + (-1)^([p]_r) p_(r-1)).
cplx dft_bit_closed_form(const PrimeField& field, unsigned r, u64 i);

/// Closed form for the DFT of t(x) = x at a nonzero frequency:
///   -p/(1-w^(-i)) + w^(-i)/(1-w^(-i))^2.
/// Throws ZeroFrequencyError at i = 0 (use p(p-1)/2 there).
cplx dft_linear_closed_form(const PrimeField& field, u64 i);

enum class HarmonicSign { Plus, Minus };

/// Plus:  sum_{k=0}^{p-1} 1/|1+w^(rk)|.
/// Minus: sum_{k=1}^{p-1} 1/|1-w^(rk)| (k = 0 pole excluded).
double harmonic_sum(const PrimeField& field, HarmonicSign sign, u64 r);

/// l1 mass of the spectrum, optionally without the zero frequency.
double spectral_l1(const Spectrum& spectrum, bool exclude_zero);

/// w^e for e reduced into [0,p) first, so phases stay small.
cplx unit_root_pow(const PrimeField& field, u64 e_mod_p);

void write_spectrum_csv(const Spectrum& spectrum, const std::string& path);

}  // namespace barrenlab::spectral
