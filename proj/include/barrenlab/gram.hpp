#pragma once

#include <optional>
#include <string>
#include <vector>

#include "barrenlab/spectral.hpp"

namespace barrenlab::gram {

using modcore::PrimeField;
using modcore::u64;
using spectral::TargetTable;

/// Statistics of f(Y) = (1/(p-1)) sum_x t(x) t(Y x) over Y in Z_p^*.
struct GramReport {
    PrimeField field;
    std::vector<double> f_values;    // f(y) for y = 1..p-1
    double mean_f = 0.0;
    double second_moment_f = 0.0;    // direct route, mean of f(y)^2
    double second_moment_spectral = 0.0;  // frequency-domain route
    double bb_quantity = 0.0;  // sum_{a != b} <h_a,h_b>^2, unnormalized
    double theorem_a_bound = 0.0;  // 0 when no canonical split applies

    /// sum_{a != b} E[h_a h_b]^2, the normalized scaling the SQ-dimension
    /// bound consumes. Exposing both avoids silent (p-1) factor slips.
    double bb_normalized() const {
        const double n = static_cast<double>(field.p() - 1);
        return bb_quantity / (n * n);
    }
};

/// Builds the full report. Requires t(0) = 0 (ConventionViolationError
/// otherwise). The direct and spectral second moments are cross-checked to
/// relative 1e-9 before returning.
GramReport gram_f(const TargetTable& table);

/// Right-hand side of the Young-convolution bound
///   E[f^2] <= (1/(p(p-1)^3)) (sum |t1_hat|)^2 (sum |t|^2)
/// for the split t = t1 + c*[x != 0]. Requires t(0) = 0 and zero mean on
/// Z_p^* (HypothesisViolationError otherwise).
double theorem_a_bound(const TargetTable& table, double split_constant);

/// The split constant the built-in kinds use with theorem_a_bound, when the
/// kind is mean-free on Z_p^*.
std::optional<double> canonical_split_constant(const TargetTable& table);

/// E_{A,B}(Cov_X[A.X, B.X])^2 for X,A,B uniform on Z_p^*; equals the second
/// moment of f for the t(x) = (x - p/2)[x != 0] table.
double ms_covariance(const PrimeField& field);

struct BoasBellman {
    double lhs;  // sum_i <h_i,g>^2
    double rhs;  // |g|^2 (max_i |h_i|^2 + sqrt(sum_{i!=j} <h_i,h_j>^2))
};

BoasBellman boas_bellman_rhs(const std::vector<std::vector<double>>& vectors,
                             const std::vector<double>& g);

/// Empirical constant E[f~_r^2] * p / (r^2 (log2 p + 1 - r)^2) for the
/// centered r-th-bit target.
double variance_bound_bits(const PrimeField& field, unsigned r);

/// CSV of (y, f_value) plus a sidecar text file with the summary block.
void write_gram_csv(const GramReport& report, const std::string& csv_path,
                    const std::string& summary_path);

}  // namespace barrenlab::gram
