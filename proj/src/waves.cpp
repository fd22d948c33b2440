#include "barrenlab/waves.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "barrenlab/csv.hpp"
#include "barrenlab/kahan.hpp"
#include "barrenlab/parallel.hpp"

namespace barrenlab::waves {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double u) { return u - std::floor(u); }
}  // namespace

PeriodicWave::PeriodicWave(WaveKind kind, std::vector<double> samples,
                           double bv)
    : kind_(kind), samples_(std::move(samples)), bv_norm_(bv) {}

PeriodicWave PeriodicWave::centered_sawtooth() {
    return PeriodicWave(WaveKind::CenteredSawtooth, {}, 2.0);
}

PeriodicWave PeriodicWave::square() {
    return PeriodicWave(WaveKind::Square, {}, 4.0);
}

PeriodicWave PeriodicWave::custom(std::vector<double> samples) {
    const std::size_t n = samples.size();
    if (n < 2 || !std::has_single_bit(n))
        throw ValidationError("custom wave needs 2^k samples, k >= 1");
    // Trapezoid mean of the periodic interpolant equals the sample mean.
    KahanSum mean;
    for (double s : samples) mean.add(s);
    if (std::fabs(mean.value() / static_cast<double>(n)) > 1e-6)
        throw ValidationError("custom wave must have mean 0 over one period");
    KahanSum bv;
    for (std::size_t i = 0; i < n; ++i)
        bv.add(std::fabs(samples[(i + 1) % n] - samples[i]));
    return PeriodicWave(WaveKind::Custom, std::move(samples), bv.value());
}

double PeriodicWave::at_frac(double f) const {
    switch (kind_) {
        case WaveKind::CenteredSawtooth:
            return f - 0.5;
        case WaveKind::Square:
            return f < 0.5 ? 1.0 : -1.0;
        case WaveKind::Custom: {
            const double pos = f * static_cast<double>(samples_.size());
            std::size_t i = static_cast<std::size_t>(pos);
            if (i >= samples_.size()) i = samples_.size() - 1;
            const double w = pos - static_cast<double>(i);
            const double next = samples_[(i + 1) % samples_.size()];
            return samples_[i] * (1.0 - w) + next * w;
        }
    }
    return 0.0;
}

double PeriodicWave::operator()(double u) const { return at_frac(frac(u)); }

namespace {

// Gauss-2 node offsets within a unit cell.
constexpr double kGaussLo = 0.5 - 0.28867513459481288225;  // 0.5 - 1/(2 sqrt 3)
constexpr double kGaussHi = 0.5 + 0.28867513459481288225;

/// Positions within one period where the wave stops being a single linear
/// piece (jumps included).
std::vector<double> wave_breakpoints(const PeriodicWave& psi) {
    switch (psi.kind()) {
        case WaveKind::CenteredSawtooth:
            return {0.0};
        case WaveKind::Square:
            return {0.0, 0.5};
        case WaveKind::Custom: {
            std::vector<double> breaks(psi.sample_count());
            for (std::size_t i = 0; i < breaks.size(); ++i)
                breaks[i] = static_cast<double>(i) /
                            static_cast<double>(breaks.size());
            return breaks;
        }
    }
    return {0.0};
}

/// Integral of psi(a x) psi(b x) over [0,1]. The partition merges every
/// breakpoint of psi(a.) and psi(b.), so the integrand is a quadratic
/// polynomial on each cell and the two-node Gauss rule is exact there.
double pair_integral(const PeriodicWave& psi, unsigned a, unsigned b) {
    const std::vector<double> base = wave_breakpoints(psi);

    // Breakpoints of psi(f x) on [0,1): (j + beta)/f, ascending.
    auto at = [&](unsigned f, std::size_t idx) {
        const std::size_t j = idx / base.size();
        const std::size_t k = idx % base.size();
        return (static_cast<double>(j) + base[k]) / static_cast<double>(f);
    };
    const std::size_t count_a = a == 0 ? 0 : a * base.size();
    const std::size_t count_b = b == 0 ? 0 : b * base.size();

    KahanSum sum;
    double lo = 0.0;
    std::size_t ia = 0, ib = 0;
    // Skip breakpoints at 0.
    while (ia < count_a && at(a, ia) <= 0.0) ++ia;
    while (ib < count_b && at(b, ib) <= 0.0) ++ib;
    while (lo < 1.0) {
        double hi = 1.0;
        if (ia < count_a) hi = std::min(hi, at(a, ia));
        if (ib < count_b) hi = std::min(hi, at(b, ib));
        if (hi > lo) {
            const double mid_lo = lo + (hi - lo) * kGaussLo;
            const double mid_hi = lo + (hi - lo) * kGaussHi;
            const double fa = static_cast<double>(a);
            const double fb = static_cast<double>(b);
            sum.add((hi - lo) * 0.5 *
                    (psi(fa * mid_lo) * psi(fb * mid_lo) +
                     psi(fa * mid_hi) * psi(fb * mid_hi)));
        }
        while (ia < count_a && at(a, ia) <= hi) ++ia;
        while (ib < count_b && at(b, ib) <= hi) ++ib;
        lo = hi;
    }
    return sum.value();
}

}  // namespace

double wave_inner(const PeriodicWave& psi, unsigned a, unsigned b) {
    return pair_integral(psi, a, b);
}

namespace {

/// Cache of inner products over reduced pairs (a <= b, gcd 1, plus the
/// 0-frequency rows), filled in parallel.
class PairCache {
public:
    PairCache(const PeriodicWave& psi, unsigned a_max) : a_max_(a_max) {
        std::vector<std::pair<unsigned, unsigned>> todo;
        for (unsigned b = 0; b < a_max; ++b)
            for (unsigned a = 0; a <= b; ++a)
                if (reduced_is_self(a, b)) todo.emplace_back(a, b);
        values_.assign(a_max * a_max, 0.0);
        parallel_for_chunks(todo.size(), 8,
                            [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                values_[index(todo[i].first, todo[i].second)] =
                    pair_integral(psi, todo[i].first, todo[i].second);
        });
    }

    double inner(unsigned a, unsigned b) const {
        if (a > b) std::swap(a, b);
        const unsigned d = std::gcd(a, b);
        if (d > 1) {
            a /= d;
            b /= d;
        } else if (a == 0 && b > 1) {
            b = 1;  // <h_0, h_b> = <h_0, h_1> for every b >= 1
        }
        return values_[index(a, b)];
    }

private:
    static bool reduced_is_self(unsigned a, unsigned b) {
        if (a == 0) return b <= 1;
        return std::gcd(a, b) == 1;
    }

    std::size_t index(unsigned a, unsigned b) const {
        return static_cast<std::size_t>(a) * a_max_ + b;
    }

    unsigned a_max_;
    std::vector<double> values_;
};

}  // namespace

std::vector<double> q_norm_squared_sweep(const PeriodicWave& psi,
                                         const std::vector<unsigned>& As) {
    unsigned a_max = 1;
    for (unsigned A : As) {
        if (A < 1) throw ValidationError("q_norm_squared: A must be >= 1");
        a_max = std::max(a_max, A);
    }
    PairCache cache(psi, a_max);

    std::vector<double> out;
    out.reserve(As.size());
    for (unsigned A : As) {
        KahanSum total;
        for (unsigned b = 0; b < A; ++b) {
            for (unsigned a = 0; a < b; ++a) {
                const double v = cache.inner(a, b);
                total.add(2.0 * v * v);
            }
            const double diag = cache.inner(b, b);
            total.add(diag * diag);
        }
        out.push_back(total.value());
    }
    return out;
}

double q_norm_squared(const PeriodicWave& psi, unsigned A) {
    return q_norm_squared_sweep(psi, {A}).front();
}

PointSet2D kronecker_orbit(double x, double y, std::size_t n) {
    if (n < 1) throw ValidationError("kronecker_orbit: need at least 1 point");
    PointSet2D set;
    set.points.reserve(n);
    set.origin = "kronecker(" + format_double(x) + "," + format_double(y) + ")";
    for (std::size_t i = 0; i < n; ++i)
        set.points.push_back(
            {frac(static_cast<double>(i) * x), frac(static_cast<double>(i) * y)});
    return set;
}

namespace {

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t i) {       // 1-based
        for (; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
    }

    int prefix(std::size_t i) const {  // count of indices <= i
        int s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

private:
    std::vector<int> tree_;
};

}  // namespace

double star_discrepancy_2d(const PointSet2D& set) {
    const std::size_t n = set.points.size();
    if (n == 0) throw ValidationError("star_discrepancy_2d: empty set");
    if (n > 5000)
        throw SizeLimitError("star_discrepancy_2d: exact algorithm capped at 5000 points");
    for (const auto& pt : set.points)
        if (pt[0] < 0.0 || pt[0] >= 1.0 || pt[1] < 0.0 || pt[1] >= 1.0)
            throw ValidationError("star_discrepancy_2d: points must lie in [0,1)^2");

    std::vector<double> xs, ys;
    xs.reserve(n + 1);
    ys.reserve(n + 1);
    for (const auto& pt : set.points) {
        xs.push_back(pt[0]);
        ys.push_back(pt[1]);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.push_back(1.0);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    ys.push_back(1.0);

    auto y_rank = [&](double v) {  // 1-based rank of v in ys
        return static_cast<std::size_t>(
            std::lower_bound(ys.begin(), ys.end(), v) - ys.begin() + 1);
    };

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set.points[a][0] < set.points[b][0];
    });

    const double inv_n = 1.0 / static_cast<double>(n);
    double worst = 0.0;

    // Volume-above-count side: open boxes [0,u1) x [0,u2) with u on the
    // grid; counts are strict on both axes.
    {
        Fenwick counts(ys.size());
        std::size_t next = 0;
        for (double u1 : xs) {
            while (next < n && set.points[order[next]][0] < u1) {
                counts.add(y_rank(set.points[order[next]][1]));
                ++next;
            }
            for (std::size_t yi = 0; yi < ys.size(); ++yi) {
                const double u2 = ys[yi];
                const int c = counts.prefix(yi);  // strictly below u2
                worst = std::max(worst, u1 * u2 - c * inv_n);
            }
        }
    }

    // Count-above-volume side: boxes shrunk onto the captured points, so
    // counts are closed on both axes.
    {
        Fenwick counts(ys.size());
        std::size_t next = 0;
        for (double c1 : xs) {
            while (next < n && set.points[order[next]][0] <= c1) {
                counts.add(y_rank(set.points[order[next]][1]));
                ++next;
            }
            for (std::size_t yi = 0; yi < ys.size(); ++yi) {
                const double c2 = ys[yi];
                const int c = counts.prefix(yi + 1);  // <= c2
                worst = std::max(worst, c * inv_n - c1 * c2);
            }
        }
    }
    return worst;
}

double etk_bound(const PointSet2D& set, unsigned H) {
    if (H < 1) throw ValidationError("etk_bound: H must be >= 1");
    const std::size_t n = set.points.size();
    if (n == 0) throw ValidationError("etk_bound: empty set");
    constexpr double kC2 = 2.25;  // (3/2)^2

    using cplx = std::complex<double>;
    std::vector<cplx> u(n), v(n), pu(n);
    for (std::size_t l = 0; l < n; ++l) {
        u[l] = std::polar(1.0, kTwoPi * set.points[l][0]);
        v[l] = std::polar(1.0, kTwoPi * set.points[l][1]);
        pu[l] = cplx{1.0, 0.0};  // u^0
    }

    KahanSum sum;
    std::vector<cplx> row(2 * H + 1);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (unsigned h1 = 0; h1 <= H; ++h1) {
        std::fill(row.begin(), row.end(), cplx{0.0, 0.0});
        for (std::size_t l = 0; l < n; ++l) {
            const cplx base = pu[l];
            row[H] += base;
            cplx tp = base, tn = base;
            for (unsigned h2 = 1; h2 <= H; ++h2) {
                tp *= v[l];
                row[H + h2] += tp;
                tn *= std::conj(v[l]);
                row[H - h2] += tn;
            }
            pu[l] *= u[l];
        }
        if (h1 == 0) {
            // (0,0) excluded; (0,-h2) pairs with (0,h2) by conjugation.
            for (unsigned h2 = 1; h2 <= H; ++h2)
                sum.add(2.0 * std::abs(row[H + h2]) * inv_n /
                        static_cast<double>(h2));
        } else {
            for (int h2 = -static_cast<int>(H); h2 <= static_cast<int>(H);
                 ++h2) {
                const double r_h = static_cast<double>(h1) *
                                   std::max(1.0, std::fabs(h2));
                sum.add(2.0 * std::abs(row[H + h2]) * inv_n / r_h);
            }
        }
    }
    return kC2 * (1.0 / static_cast<double>(H) + sum.value());
}

KoksmaHlawkaGap koksma_hlawka_gap(const PeriodicWave& psi, double x, double y,
                                  std::size_t n) {
    const PointSet2D orbit = kronecker_orbit(x, y, n);
    KahanSum s;
    for (const auto& pt : orbit.points)
        s.add(psi.at_frac(pt[0]) * psi.at_frac(pt[1]));
    const double empirical = std::fabs(s.value() / static_cast<double>(n));
    const double bv2 = psi.bv_norm() * psi.bv_norm();
    return KoksmaHlawkaGap{empirical, 3.0 * bv2 * star_discrepancy_2d(orbit)};
}

namespace {

double sin_ratio_value(double x, double omega, double r_mult) {
    const double denom = std::sin(omega * x);
    if (std::fabs(denom) < 1e-12) return r_mult;  // removable singularity
    return std::fabs(std::sin(r_mult * omega * x)) / std::fabs(denom);
}

/// Gauss-Legendre 8 on [lo,hi].
double gauss8(double lo, double hi, double omega, double r_mult) {
    static constexpr double nodes[4] = {
        0.18343464249564980494, 0.52553240991632898582,
        0.79666647741362673959, 0.96028985649753623168};
    static constexpr double weights[4] = {
        0.36268378337836198297, 0.31370664587788728734,
        0.22238103445337447054, 0.10122853629037625915};
    const double c = 0.5 * (lo + hi);
    const double hw = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double dx = hw * nodes[i];
        s += weights[i] * (sin_ratio_value(c - dx, omega, r_mult) +
                           sin_ratio_value(c + dx, omega, r_mult));
    }
    return s * hw;
}

double adaptive_panel(double lo, double hi, double omega, double r_mult,
                      double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double left = gauss8(lo, mid, omega, r_mult);
    const double right = gauss8(mid, hi, omega, r_mult);
    if (depth <= 0 || std::fabs(left + right - whole) <= tol)
        return left + right;
    return adaptive_panel(lo, mid, omega, r_mult, left, tol * 0.5, depth - 1) +
           adaptive_panel(mid, hi, omega, r_mult, right, tol * 0.5, depth - 1);
}

}  // namespace

double sin_ratio_integral(double omega, unsigned r) {
    if (omega < 1.0) throw ValidationError("sin_ratio_integral: omega >= 1");
    if (r < 1) throw ValidationError("sin_ratio_integral: r >= 1");
    const double r_mult = static_cast<double>(r);

    // Even integrand: integrate [0,1] and double. Panels end at the zeros
    // of sin(r w x); the integrand is smooth inside each panel.
    const double zero_gap = std::numbers::pi / (r_mult * omega);
    const std::size_t panels =
        static_cast<std::size_t>(std::ceil(1.0 / zero_gap));
    KahanSum total;
    for (std::size_t j = 0; j < panels; ++j) {
        const double lo = static_cast<double>(j) * zero_gap;
        const double hi = std::min(1.0, lo + zero_gap);
        if (hi <= lo) break;
        const double coarse = gauss8(lo, hi, omega, r_mult);
        total.add(adaptive_panel(lo, hi, omega, r_mult, coarse,
                                 1e-10 * (hi - lo) / zero_gap, 10));
    }
    return 2.0 * total.value();
}

void write_point_set_csv(const PointSet2D& set, const std::string& path) {
    CsvWriter csv(path, {"x", "y"});
    for (const auto& pt : set.points) csv.row({pt[0], pt[1]});
}

PointSet2D read_point_set_csv(const std::string& path) {
    PointSet2D set;
    set.origin = "file:" + path;
    for (const auto& [x, y] : read_xy_csv(path)) set.points.push_back({x, y});
    return set;
}

}  // namespace barrenlab::waves
