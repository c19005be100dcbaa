#pragma once

#include <vector>

#include "relaycap/channel.hpp"

namespace relaycap {

inline constexpr double kDefaultBaTolBits = 1e-10;
inline constexpr int kDefaultBaMaxIter = 10000;

/// Outcome of a Blahut-Arimoto run. The channel capacity lies in
/// [lower_bound, upper_bound]; capacity_bits is the lower (achievable) end,
/// attained by the returned input distribution. A non-converged run is
/// reported through a bounds gap larger than the stop tolerance.
struct CapacityResult {
    double capacity_bits = 0.0;
    std::vector<double> argmax;  // maximizing input distribution
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// I(X;Y) in bits per channel use for input distribution p_x over the rows
/// of ch, with the 0*log(0) = 0 convention and a fixed left-to-right
/// summation order. Throws std::invalid_argument on a dimension mismatch.
double mutual_information(const std::vector<double>& p_x, const StateChannel& ch);

/// Channel capacity max_p I(X;Y) by the Blahut-Arimoto alternating
/// maximization. Each iteration computes the output distribution induced by
/// the current input law, the per-input divergences D(p(y|x) || q(y)) whose
/// maximum upper-bounds capacity, and the multiplicative input update. Stops
/// once upper_bound - lower_bound <= tol_bits or after max_iter iterations.
CapacityResult blahut_arimoto(const StateChannel& ch,
                              double tol_bits = kDefaultBaTolBits,
                              int max_iter = kDefaultBaMaxIter);

}  // namespace relaycap
