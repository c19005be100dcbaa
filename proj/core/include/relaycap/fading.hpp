#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaycap/channel.hpp"

namespace relaycap {

enum class FadingFamily { IndependentRayleigh, GridDensity, PointMass };

/// Joint SNR model for AWGN hops with time-continuous fading. Per-state
/// capacities are log2(1+snr); the decision regions are bounded by the curve
/// gamma2 = (1+gamma1)^rho - 1.
struct FadingModel {
    FadingFamily family = FadingFamily::IndependentRayleigh;

    // IndependentRayleigh: the SNRs are independent exponentials.
    double mean_snr_1 = 10.0;
    double mean_snr_2 = 10.0;

    // PointMass: all probability on one SNR pair.
    double point_snr_1 = 0.0;
    double point_snr_2 = 0.0;

    // GridDensity: cell probability masses over [0,max1] x [0,max2],
    // uniform within each cell.
    Matrix grid_mass;
    double grid_max_snr_1 = 0.0;
    double grid_max_snr_2 = 0.0;

    int nodes = 256;                     // Gauss-Legendre nodes per axis
    std::uint64_t mc_seed = 1;           // Monte Carlo path (GridDensity)
    long mc_samples = 1'000'000;
};

/// Load-time self check. Empty result means the model is usable.
std::vector<std::string> validate_model(const FadingModel& model);

struct RatePair {
    double c1_bits = 0.0;
    double c2_bits = 0.0;
    double std_error = 0.0;  // Monte Carlo path only; 0 for quadrature
};

struct FadingCapacityReport {
    double rho_opt = 0.0;
    double c1_bits = 0.0;
    double c2_bits = 0.0;
    double capacity_bits = 0.0;
    int nodes = 0;
    double balance_residual = 0.0;   // |c1 - c2| at the returned rho
    int bisection_steps = 0;
    bool boundary = false;           // bracket expansion hit its limit
    bool atom_on_boundary = false;   // probability mass sits on the decision curve
};

/// c1 integrates log2(1+g1) f over the source region {g2 <= (1+g1)^rho - 1},
/// c2 integrates log2(1+g2) f over its complement. Separable densities use
/// deterministic tensor quadrature with the boundary curve evaluated per
/// outer node; GridDensity uses seeded Monte Carlo with a reported standard
/// error.
RatePair rate_pair(double rho, const FadingModel& model);

double expected_rate_sr(const FadingModel& model);  // E[log2(1+gamma1)]
double expected_rate_rd(const FadingModel& model);  // E[log2(1+gamma2)]

/// Bisection on g(rho) = c1(rho) - c2(rho), which is continuous and
/// non-decreasing for continuous densities. The bracket grows geometrically
/// from [1/64, 64] until the sign changes; if an atom of probability sits on
/// the decision curve (g jumps across zero), the balanced value is recovered
/// by the scalar time-sharing solve on the jump.
FadingCapacityReport solve_rho(const FadingModel& model, double rel_tol = 1e-9);

/// Quantized view of the model: per-cell mean rates plus cell masses, ready
/// for the discrete threshold sweep. Rayleigh models use equal-probability
/// cells in quantile space so the tail is covered exactly.
struct DiscretizedFading {
    std::vector<double> a;
    std::vector<double> b;
    JointStatePmf joint;
};
DiscretizedFading quantize(const FadingModel& model, int cells_per_axis);

}  // namespace relaycap
