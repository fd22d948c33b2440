#include "barrenlab/gram.hpp"

#include <cmath>
#include <complex>
#include <fstream>

#include "barrenlab/csv.hpp"
#include "barrenlab/kahan.hpp"
#include "barrenlab/parallel.hpp"

namespace barrenlab::gram {

using spectral::cplx;
using spectral::TargetKind;

namespace {

double sum_of_squares_units(const TargetTable& table) {
    KahanSum s;
    for (u64 x = 1; x < table.p(); ++x)
        s.add(table.values[x] * table.values[x]);
    return s.value();
}

/// ||Phi t||^2 through the DFT: with t(0) = 0,
///   ||Phi t||^2 = (1/p) (|t_hat(0)|^4 + sum_{m in Z_p^*} |(t_hat * t)(m)|^2)
/// where * is convolution on the multiplicative group.
double phi_norm_squared_spectral(const TargetTable& table) {
    const u64 p = table.p();
    const spectral::Spectrum hat = spectral::dft_naive(table);

    std::vector<cplx> conv(p, cplx{0.0, 0.0});
    for (u64 s = 1; s < p; ++s) {
        const double ts = table.values[s];
        if (ts == 0.0) continue;
        u64 m = s;  // k*s mod p as k walks 1..p-1
        for (u64 k = 1; k < p; ++k) {
            conv[m] += hat.coeffs[k] * ts;
            m += s;
            if (m >= p) m -= p;
        }
    }

    KahanSum norm;
    for (u64 m = 1; m < p; ++m) norm.add(std::norm(conv[m]));
    const double dc = std::abs(hat.coeffs[0]);
    return (dc * dc * dc * dc + norm.value()) / static_cast<double>(p);
}

}  // namespace

GramReport gram_f(const TargetTable& table) {
    const u64 p = table.p();
    if (table.values[0] != 0.0)
        throw ConventionViolationError("gram_f: table must have t(0) = 0");

    GramReport report{table.field, std::vector<double>(p - 1), 0, 0, 0, 0, 0};
    const auto& t = table.values;
    const double n = static_cast<double>(p - 1);

    parallel_for_chunks(p - 1, 64,
                        [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const u64 y = idx + 1;
            KahanSum s;
            u64 m = y;  // y*x mod p, ascending x
            for (u64 x = 1; x < p; ++x) {
                s.add(t[x] * t[m]);
                m += y;
                if (m >= p) m -= p;
            }
            report.f_values[idx] = s.value() / n;
        }
    });

    KahanSum mean, second;
    for (double f : report.f_values) {
        mean.add(f);
        second.add(f * f);
    }
    report.mean_f = mean.value() / n;
    report.second_moment_f = second.value() / n;

    report.second_moment_spectral =
        phi_norm_squared_spectral(table) / (n * n * n);
    const double scale =
        std::max(std::fabs(report.second_moment_f),
                 std::fabs(report.second_moment_spectral));
    if (std::fabs(report.second_moment_f - report.second_moment_spectral) >
        1e-9 * scale)
        throw Error("gram_f: direct and spectral second moments disagree");

    const double s2 = sum_of_squares_units(table);
    report.bb_quantity =
        n * n * n * n * report.second_moment_f - n * s2 * s2;

    if (auto c = canonical_split_constant(table))
        report.theorem_a_bound = theorem_a_bound(table, *c);
    return report;
}

double theorem_a_bound(const TargetTable& table, double split_constant) {
    const u64 p = table.p();
    if (table.values[0] != 0.0)
        throw HypothesisViolationError("theorem_a_bound: t(0) must be 0");

    KahanSum mean;
    double max_abs = 0.0;
    for (u64 x = 1; x < p; ++x) {
        mean.add(table.values[x]);
        max_abs = std::max(max_abs, std::fabs(table.values[x]));
    }
    if (std::fabs(mean.value()) > 1e-9 * std::max(1.0, max_abs))
        throw HypothesisViolationError(
            "theorem_a_bound: t must have zero mean on Z_p^*");

    TargetTable smooth = table;
    smooth.kind = TargetKind::Custom;
    for (u64 x = 1; x < p; ++x) smooth.values[x] -= split_constant;
    const double l1 =
        spectral::spectral_l1(spectral::dft_naive(smooth), true);
    const double s2 = sum_of_squares_units(table);

    const double n = static_cast<double>(p - 1);
    return l1 * l1 * s2 / (static_cast<double>(p) * n * n * n);
}

std::optional<double> canonical_split_constant(const TargetTable& table) {
    const u64 p = table.p();
    switch (table.kind) {
        case TargetKind::RawMul:
            return -static_cast<double>(p) / 2.0;  // leaves t1(x) = x
        case TargetKind::Standardized: {
            const double sigma = std::sqrt(
                static_cast<double>(p) * static_cast<double>(p) / 12.0 -
                static_cast<double>(p) / 6.0);
            return -static_cast<double>(p) / (2.0 * sigma);  // t1(x) = x/sigma
        }
        case TargetKind::CenteredBitR:
            return spectral::centered_bit_shift(table.field, table.r);
        case TargetKind::BitR:
            // Mean-free only for r = 1, where the shift is exactly 0.
            if (table.r == 1) return 0.0;
            return std::nullopt;
        case TargetKind::Custom:
            return std::nullopt;
    }
    return std::nullopt;
}

double ms_covariance(const PrimeField& field) {
    const TargetTable table =
        spectral::make_target(field, TargetKind::RawMul);
    // Cov_X[A.X, B.X] = E_X[h_A(X) h_B(X)] for h_a(x) = t(a.x), so the mean
    // squared covariance is exactly the second moment of f.
    return gram_f(table).second_moment_f;
}

BoasBellman boas_bellman_rhs(const std::vector<std::vector<double>>& vectors,
                             const std::vector<double>& g) {
    const std::size_t m = vectors.size();
    for (const auto& h : vectors)
        if (h.size() != g.size())
            throw Error("boas_bellman_rhs: vector lengths differ");

    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        KahanSum s;
        for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
        return s.value();
    };

    KahanSum lhs;
    double max_norm2 = 0.0;
    for (const auto& h : vectors) {
        const double hg = dot(h, g);
        lhs.add(hg * hg);
        max_norm2 = std::max(max_norm2, dot(h, h));
    }

    KahanSum cross;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const double hij = dot(vectors[i], vectors[j]);
            cross.add(hij * hij);
        }

    const double g2 = dot(g, g);
    return BoasBellman{lhs.value(),
                       g2 * (max_norm2 + std::sqrt(cross.value()))};
}

double variance_bound_bits(const PrimeField& field, unsigned r) {
    modcore::check_bit_index(field, r);
    const TargetTable table =
        spectral::make_target(field, TargetKind::CenteredBitR, r);
    const double moment = gram_f(table).second_moment_f;
    const double p = static_cast<double>(field.p());
    const double level = static_cast<double>(r) *
                         (std::log2(p) + 1.0 - static_cast<double>(r));
    return moment * p / (level * level);
}

void write_gram_csv(const GramReport& report, const std::string& csv_path,
                    const std::string& summary_path) {
    CsvWriter csv(csv_path, {"y", "f_value"});
    for (std::size_t i = 0; i < report.f_values.size(); ++i)
        csv.row({static_cast<double>(i + 1), report.f_values[i]});

    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + summary_path);
    out << "{\n"
        << "  \"p\": " << report.field.p() << ",\n"
        << "  \"mean_f\": " << format_double(report.mean_f) << ",\n"
        << "  \"second_moment_f\": " << format_double(report.second_moment_f)
        << ",\n"
        << "  \"second_moment_spectral\": "
        << format_double(report.second_moment_spectral) << ",\n"
        << "  \"bb_quantity\": " << format_double(report.bb_quantity) << ",\n"
        << "  \"bb_normalized\": " << format_double(report.bb_normalized())
        << ",\n"
        << "  \"theorem_a_bound\": " << format_double(report.theorem_a_bound)
        << "\n}\n";
    if (!out) throw IoError("summary write failed: " + summary_path);
}

}  // namespace barrenlab::gram
