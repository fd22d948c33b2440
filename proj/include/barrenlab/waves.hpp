#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "barrenlab/errors.hpp"

namespace barrenlab::waves {

enum class WaveKind { CenteredSawtooth, Square, Custom };

/// 1-periodic real function with mean 0 and bounded variation. Custom waves
/// hold 2^k uniform samples joined by linear interpolation; their variation
/// includes the wrap-around jump |psi(1-) - psi(0)|.
class PeriodicWave {
public:
    static PeriodicWave centered_sawtooth();  // {x} - 1/2, variation 2
    static PeriodicWave square();             // +-1 half-waves, variation 4
    static PeriodicWave custom(std::vector<double> samples);

    /// psi evaluated at the fractional part of u.
    double operator()(double u) const;

    /// psi at a point already reduced to [0,1).
    double at_frac(double f) const;

    double bv_norm() const { return bv_norm_; }
    WaveKind kind() const { return kind_; }
    std::size_t sample_count() const { return samples_.size(); }

private:
    PeriodicWave(WaveKind kind, std::vector<double> samples, double bv);

    WaveKind kind_;
    std::vector<double> samples_;
    double bv_norm_;
};

/// Quadrature of int_0^1 psi(a x) psi(b x) dx: composite two-node Gauss on
/// the partition merging the breakpoints of psi(a.) and psi(b.), which is
/// exact for the piecewise-linear wave kinds. a, b are nonnegative integer
/// frequencies.
double wave_inner(const PeriodicWave& psi, unsigned a, unsigned b);

/// sum_{a,b in Z_A} <h_a, h_b>^2 via the pairwise inner products; the
/// rescaling identity <h_ka, h_kb> = <h_a, h_b> dedups the quadratures.
double q_norm_squared(const PeriodicWave& psi, unsigned A);

/// One shared inner-product cache across several A values.
std::vector<double> q_norm_squared_sweep(const PeriodicWave& psi,
                                         const std::vector<unsigned>& As);

struct PointSet2D {
    std::vector<std::array<double, 2>> points;
    std::string origin;
};

/// Orbit of the torus translation by (x,y) started at (0,0):
/// points[i] = ({i x}, {i y}).
PointSet2D kronecker_orbit(double x, double y, std::size_t n);

/// Exact star discrepancy over the critical grid of coordinate values.
/// O(N^2 log N); throws SizeLimitError for N > 5000.
double star_discrepancy_2d(const PointSet2D& set);

/// Erdos-Turan-Koksma bound with C_2 = (3/2)^2:
///   C_2 (1/H + sum_{0 < |h|_inf <= H} |S_N(h)| / r(h)).
double etk_bound(const PointSet2D& set, unsigned H);

struct KoksmaHlawkaGap {
    double empirical;  // |mean of psi({ix}) psi({iy}) over the orbit|
    double bound;      // 3 |psi|_BV^2 * D*_N of the orbit
};

KoksmaHlawkaGap koksma_hlawka_gap(const PeriodicWave& psi, double x, double y,
                                  std::size_t n);

/// int_{-1}^{1} |sin(r w x)| / |sin(w x)| dx. Panels split at the zeros of
/// the numerator; the removable singularities take the limit value r.
double sin_ratio_integral(double omega, unsigned r);

void write_point_set_csv(const PointSet2D& set, const std::string& path);
PointSet2D read_point_set_csv(const std::string& path);

}  // namespace barrenlab::waves
