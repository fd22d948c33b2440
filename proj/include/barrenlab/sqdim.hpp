#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "barrenlab/modcore.hpp"

namespace barrenlab::sqdim {

using modcore::PrimeField;
using modcore::u64;

/// Finite hypothesis class: m real-valued functions on a weighted domain.
struct HypothesisClass {
    std::size_t domain_size = 0;
    std::vector<std::vector<double>> functions;  // m rows of length domain_size
    std::vector<double> weights;                 // probability vector

    unsigned bit_index = 0;  // nonzero for modular bit classes

    std::size_t size() const { return functions.size(); }
    bool is_boolean() const;
};

/// {x -> (-1)^([a.x]_r)} for a in Z_p^*, on the uniform domain Z_p^*.
HypothesisClass modular_bit_class(const PrimeField& field, unsigned r);

/// All 2^n characters of {-1,1}^n (constant included), uniform domain.
HypothesisClass parity_class(unsigned n);

/// M[i][j] = sum_x weights[x] f_i(x) f_j(x).
std::vector<std::vector<double>> correlation_matrix(const HypothesisClass& cls);

/// BB statistic sum_{i != j} M[i][j]^2 (normalized correlations).
double bb_statistic(const HypothesisClass& cls);

/// Largest d such that some d functions are pairwise at most 1/d correlated.
/// Scans d downward with a branch-and-bound clique search on the threshold
/// graph. Throws SizeLimitError when the class exceeds `limit`.
int sq_dim_exact(const HypothesisClass& cls, std::size_t limit = 64);

/// Certified lower bound: largest d a single greedy pass can realize.
int sq_dim_greedy_lower(const HypothesisClass& cls);

/// min(m^(2/3) / (2^(1/3) bb^(1/3)), sqrt(m)); bb = 0 falls to the sqrt(m)
/// branch (orthogonal family).
double turan_lower_bound(std::size_t m, double bb);

struct SqDimReport {
    std::optional<int> exact_dim;
    int greedy_lower = 0;
    double turan_lower = 0.0;
    double bb = 0.0;
    bool flagged_unbalanced = false;  // bit classes with r > 1
};

/// Full report; exact_dim is attempted only for +-1-valued classes within
/// the clique-search cap.
SqDimReport analyze(const HypothesisClass& cls, std::size_t limit = 64);

}  // namespace barrenlab::sqdim
