#include "barrenlab/sqdim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "barrenlab/kahan.hpp"

namespace barrenlab::sqdim {

bool HypothesisClass::is_boolean() const {
    for (const auto& f : functions)
        for (double v : f)
            if (v != 1.0 && v != -1.0) return false;
    return true;
}

HypothesisClass modular_bit_class(const PrimeField& field, unsigned r) {
    modcore::check_bit_index(field, r);
    const u64 p = field.p();
    HypothesisClass cls;
    cls.domain_size = p - 1;
    cls.bit_index = r;
    cls.weights.assign(p - 1, 1.0 / static_cast<double>(p - 1));
    cls.functions.reserve(p - 1);
    for (u64 a = 1; a < p; ++a) {
        std::vector<double> f(p - 1);
        u64 m = a;  // a*x mod p, ascending x = 1..p-1
        for (u64 x = 1; x < p; ++x) {
            f[x - 1] = modcore::bit_r(m, r) ? -1.0 : 1.0;
            m += a;
            if (m >= p) m -= p;
        }
        cls.functions.push_back(std::move(f));
    }
    return cls;
}

HypothesisClass parity_class(unsigned n) {
    if (n > 16) throw SizeLimitError("parity_class: n too large");
    const std::size_t size = 1ull << n;
    HypothesisClass cls;
    cls.domain_size = size;
    cls.weights.assign(size, 1.0 / static_cast<double>(size));
    cls.functions.reserve(size);
    for (std::size_t mask = 0; mask < size; ++mask) {
        std::vector<double> f(size);
        for (std::size_t x = 0; x < size; ++x)
            f[x] = (std::popcount(mask & x) & 1) ? -1.0 : 1.0;
        cls.functions.push_back(std::move(f));
    }
    return cls;
}

std::vector<std::vector<double>> correlation_matrix(
    const HypothesisClass& cls) {
    const std::size_t m = cls.size();
    std::vector<std::vector<double>> mat(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            KahanSum s;
            for (std::size_t x = 0; x < cls.domain_size; ++x)
                s.add(cls.weights[x] * cls.functions[i][x] *
                      cls.functions[j][x]);
            mat[i][j] = mat[j][i] = s.value();
        }
    }
    return mat;
}

double bb_statistic(const HypothesisClass& cls) {
    const auto mat = correlation_matrix(cls);
    KahanSum s;
    for (std::size_t i = 0; i < mat.size(); ++i)
        for (std::size_t j = 0; j < mat.size(); ++j)
            if (i != j) s.add(mat[i][j] * mat[i][j]);
    return s.value();
}

namespace {

using Mask = std::uint64_t;

/// Greedy-coloring upper bound on the clique number of the subgraph
/// induced by `cand`.
int color_bound(const std::vector<Mask>& adj, Mask cand) {
    int colors = 0;
    while (cand) {
        ++colors;
        Mask uncolored = cand;
        while (uncolored) {
            const int v = std::countr_zero(uncolored);
            uncolored &= uncolored - 1;
            uncolored &= ~adj[v];       // same color class: non-neighbors
            cand &= ~(Mask{1} << v);
        }
    }
    return colors;
}

bool clique_search(const std::vector<Mask>& adj, Mask cand, int have,
                   int target) {
    if (have >= target) return true;
    if (have + std::popcount(cand) < target) return false;
    if (have + color_bound(adj, cand) < target) return false;
    while (cand) {
        const int v = std::countr_zero(cand);
        cand &= cand - 1;
        if (have + 1 + std::popcount(cand & adj[v]) >= target &&
            clique_search(adj, cand & adj[v], have + 1, target))
            return true;
    }
    return false;
}

/// Does the graph with |M[i][j]| <= 1/d edges contain a d-clique?
bool threshold_feasible(const std::vector<std::vector<double>>& mat, int d) {
    const std::size_t m = mat.size();
    if (d <= 1) return m >= 1;
    const double threshold =
        1.0 / static_cast<double>(d) * (1.0 + 1e-12) + 1e-15;
    std::vector<Mask> adj(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && std::fabs(mat[i][j]) <= threshold)
                adj[i] |= Mask{1} << j;
    const Mask all = m == 64 ? ~Mask{0} : (Mask{1} << m) - 1;
    return clique_search(adj, all, 0, d);
}

}  // namespace

int sq_dim_exact(const HypothesisClass& cls, std::size_t limit) {
    const std::size_t m = cls.size();
    if (m == 0) return 0;
    if (m > limit || m > 64)
        throw SizeLimitError("sq_dim_exact: class too large for exact search");
    const auto mat = correlation_matrix(cls);

    double min_offdiag = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j) min_offdiag = std::min(min_offdiag, std::fabs(mat[i][j]));

    std::size_t d_hi = m;
    if (m > 1 && min_offdiag > 0.0)
        d_hi = std::min<std::size_t>(
            m, static_cast<std::size_t>(std::ceil(1.0 / min_offdiag)));

    // Feasibility only loosens as d drops (edges grow, the needed clique
    // shrinks), so the first feasible d on the way down is the dimension.
    for (std::size_t d = d_hi; d >= 1; --d)
        if (threshold_feasible(mat, static_cast<int>(d)))
            return static_cast<int>(d);
    return 0;
}

int sq_dim_greedy_lower(const HypothesisClass& cls) {
    const std::size_t m = cls.size();
    if (m == 0) return 0;
    const auto mat = correlation_matrix(cls);
    for (std::size_t d = m; d >= 2; --d) {
        const double threshold =
            1.0 / static_cast<double>(d) * (1.0 + 1e-12) + 1e-15;
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < m && chosen.size() < d; ++i) {
            bool ok = true;
            for (std::size_t j : chosen)
                if (std::fabs(mat[i][j]) > threshold) {
                    ok = false;
                    break;
                }
            if (ok) chosen.push_back(i);
        }
        if (chosen.size() >= d) return static_cast<int>(d);
    }
    return 1;
}

double turan_lower_bound(std::size_t m, double bb) {
    if (m < 1) throw Error("turan_lower_bound: empty class");
    if (bb < 0.0) throw Error("turan_lower_bound: bb must be nonnegative");
    const double md = static_cast<double>(m);
    const double root = std::sqrt(md);
    if (bb == 0.0) return root;
    const double cube =
        std::pow(md, 2.0 / 3.0) / std::cbrt(2.0 * bb);
    return std::min(cube, root);
}

SqDimReport analyze(const HypothesisClass& cls, std::size_t limit) {
    SqDimReport report;
    report.bb = bb_statistic(cls);
    report.turan_lower = turan_lower_bound(cls.size(), report.bb);
    report.greedy_lower = sq_dim_greedy_lower(cls);
    report.flagged_unbalanced = cls.bit_index > 1;
    if (cls.size() <= limit && cls.size() <= 64 && cls.is_boolean())
        report.exact_dim = sq_dim_exact(cls, limit);
    return report;
}

}  // namespace barrenlab::sqdim
