#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "relaycap/channel.hpp"
#include "relaycap/mutual_information.hpp"

namespace relaycap {

/// Capacities of the two hops conditioned on each state, in bits per channel
/// use: a(s1) = max I(X1;Y1|s1) over the source-relay hop, b(s2) likewise for
/// relay-destination, together with the maximizing input distributions.
struct PerStateCapacities {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<std::vector<double>> argmax_inputs_sr;
    std::vector<std::vector<double>> argmax_inputs_rd;
    // Blahut-Arimoto bounds gap per state; a gap above the stop tolerance
    // marks a non-converged run.
    std::vector<double> gap_a;
    std::vector<double> gap_b;
};

/// Per-state-pair link selection. Source means the source transmits (d = 0),
/// Relay means the relay transmits (d = 1), Coin resolves an exact threshold
/// tie by a shared biased coin, and Irrelevant marks pairs where both hops
/// have zero capacity so the choice cannot matter.
enum class Decision : std::uint8_t { Source = 0, Relay = 1, Coin = 2, Irrelevant = 3 };

const char* to_string(Decision d);

struct LinkSelectionPolicy {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<Decision> decision;  // row-major over S1 x S2
    double coin_prob = 0.0;          // P_C = Pr{coin selects the relay}

    LinkSelectionPolicy() = default;
    LinkSelectionPolicy(std::size_t rows, std::size_t cols)
        : n1(rows), n2(cols), decision(rows * cols, Decision::Source) {}

    Decision at(std::size_t i, std::size_t j) const { return decision[i * n2 + j]; }
    Decision& at(std::size_t i, std::size_t j) { return decision[i * n2 + j]; }
};

/// Solved operating point: the threshold rho (possibly +infinity), the coin
/// bias, the balanced rates, and the policy table that achieves them.
struct CapacityReport {
    double rho_opt = 0.0;  // may be +infinity
    double coin_prob_opt = 0.0;
    double c1_bits = 0.0;
    double c2_bits = 0.0;
    double capacity_bits = 0.0;
    LinkSelectionPolicy policy;
    PerStateCapacities per_state;
    bool boundary = false;    // optimum sits at rho = 0 or rho = +infinity
    bool degenerate = false;  // every per-state capacity is zero
};

/// A pair counts as a threshold tie when |b - rho*a| <= kTieTolerance*max(1,b).
inline constexpr double kTieTolerance = 1e-7;
/// Returned reports satisfy |c1 - c2| <= kBalanceTolerance.
inline constexpr double kBalanceTolerance = 1e-9;

/// Runs Blahut-Arimoto on every per-state channel of both hops.
PerStateCapacities per_state_capacities(const RelayChannelSpec& spec,
                                        double tol_bits = kDefaultBaTolBits,
                                        int max_iter = kDefaultBaMaxIter);

/// Decision table for a fixed threshold: Relay where b > rho*a, Source where
/// b < rho*a, Coin on ties, Irrelevant where a = b = 0. For rho = +infinity
/// the table is deterministic: Source wherever a > 0, Relay where a = 0 and
/// b > 0. coin_prob is left at zero.
LinkSelectionPolicy policy_from_rho(const PerStateCapacities& caps, double rho);

/// Average rate into and out of the relay buffer under a policy:
/// c1 sums p*a over Source pairs plus (1-P_C)*p*a over Coin pairs, c2 sums
/// p*b over Relay pairs plus P_C*p*b over Coin pairs.
std::pair<double, double> evaluate_policy(const PerStateCapacities& caps,
                                          const JointStatePmf& joint,
                                          const LinkSelectionPolicy& policy);

/// Solves C1(rho, P_C) = C2(rho, P_C) exactly. The candidate thresholds are
/// the distinct capacity ratios b/a (0 and +infinity included via the pairs
/// with one zero-capacity side), swept in ascending order; C1 - C2 is
/// non-decreasing along the sweep, so the crossing candidate is found
/// exactly and the coin bias solves one scalar linear equation on its tie
/// set. No bisection, no iteration.
CapacityReport solve_from_capacities(PerStateCapacities caps, const JointStatePmf& joint);

/// Full pipeline: validate nothing (callers run validate_spec), compute
/// per-state capacities, then the threshold sweep.
CapacityReport solve_capacity(const RelayChannelSpec& spec,
                              double tol_bits = kDefaultBaTolBits,
                              int max_iter = kDefaultBaMaxIter);

/// Independent max-min oracle for small specs: maximizes
///   min( sum_s p(s)(1-q(s))a(s), sum_s p(s)q(s)b(s) )
/// over per-pair randomizations q in [0,1]^K without any use of the
/// threshold structure. All but the two heaviest coordinates are enumerated
/// on a grid with grid_steps points; the remaining two are maximized in
/// closed form (the objective restricted to a rectangle is the minimum of
/// two affine functions, so its maximum sits on a vertex or where the two
/// planes intersect an edge). Intended for |S1|*|S2| <= 6.
double brute_force_capacity(const PerStateCapacities& caps, const JointStatePmf& joint,
                            int grid_steps);

}  // namespace relaycap
