#include "relaycap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace relaycap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_tie(double a, double b, double rho) {
    return std::fabs(b - rho * a) <= kTieTolerance * std::max(1.0, b);
}

}  // namespace

const char* to_string(Decision d) {
    switch (d) {
        case Decision::Source: return "source";
        case Decision::Relay: return "relay";
        case Decision::Coin: return "coin";
        case Decision::Irrelevant: return "irrelevant";
    }
    return "?";
}

PerStateCapacities per_state_capacities(const RelayChannelSpec& spec, double tol_bits,
                                        int max_iter) {
    PerStateCapacities caps;
    caps.a.reserve(spec.sr_channels.size());
    caps.b.reserve(spec.rd_channels.size());
    for (const StateChannel& ch : spec.sr_channels) {
        CapacityResult r = blahut_arimoto(ch, tol_bits, max_iter);
        caps.a.push_back(r.capacity_bits);
        caps.argmax_inputs_sr.push_back(std::move(r.argmax));
        caps.gap_a.push_back(r.upper_bound - r.lower_bound);
    }
    for (const StateChannel& ch : spec.rd_channels) {
        CapacityResult r = blahut_arimoto(ch, tol_bits, max_iter);
        caps.b.push_back(r.capacity_bits);
        caps.argmax_inputs_rd.push_back(std::move(r.argmax));
        caps.gap_b.push_back(r.upper_bound - r.lower_bound);
    }
    return caps;
}

LinkSelectionPolicy policy_from_rho(const PerStateCapacities& caps, double rho) {
    if (!(rho >= 0.0)) throw std::invalid_argument("policy_from_rho: rho must be in [0, +inf]");
    const std::size_t n1 = caps.a.size(), n2 = caps.b.size();
    LinkSelectionPolicy policy(n1, n2);
    for (std::size_t i = 0; i < n1; ++i) {
        const double a = caps.a[i];
        for (std::size_t j = 0; j < n2; ++j) {
            const double b = caps.b[j];
            Decision d;
            if (a == 0.0 && b == 0.0) {
                d = Decision::Irrelevant;
            } else if (std::isinf(rho)) {
                d = (a > 0.0) ? Decision::Source : Decision::Relay;
            } else if (is_tie(a, b, rho)) {
                d = Decision::Coin;
            } else if (b > rho * a) {
                d = Decision::Relay;
            } else {
                d = Decision::Source;
            }
            policy.at(i, j) = d;
        }
    }
    return policy;
}

std::pair<double, double> evaluate_policy(const PerStateCapacities& caps,
                                          const JointStatePmf& joint,
                                          const LinkSelectionPolicy& policy) {
    const std::size_t n1 = caps.a.size(), n2 = caps.b.size();
    if (policy.n1 != n1 || policy.n2 != n2 || joint.probs.rows != n1 || joint.probs.cols != n2) {
        throw std::invalid_argument("evaluate_policy: dimension mismatch");
    }
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const double p = joint.probs.at(i, j);
            switch (policy.at(i, j)) {
                case Decision::Source: c1 += p * caps.a[i]; break;
                case Decision::Relay: c2 += p * caps.b[j]; break;
                case Decision::Coin:
                    c1 += p * (1.0 - policy.coin_prob) * caps.a[i];
                    c2 += p * policy.coin_prob * caps.b[j];
                    break;
                case Decision::Irrelevant: break;
            }
        }
    }
    return {c1, c2};
}

CapacityReport solve_from_capacities(PerStateCapacities caps, const JointStatePmf& joint) {
    const std::size_t n1 = caps.a.size(), n2 = caps.b.size();
    if (joint.probs.rows != n1 || joint.probs.cols != n2) {
        throw std::invalid_argument("solve_from_capacities: joint PMF is " +
                                    std::to_string(joint.probs.rows) + "x" +
                                    std::to_string(joint.probs.cols) + ", capacities are " +
                                    std::to_string(n1) + "x" + std::to_string(n2));
    }

    CapacityReport report;
    report.per_state = std::move(caps);
    const PerStateCapacities& cs = report.per_state;
    report.policy = LinkSelectionPolicy(n1, n2);

    // Ratio keys r = b/a per state pair; a = 0 with b > 0 maps to +infinity,
    // b = 0 with a > 0 maps to 0, both-zero pairs are out of the game.
    struct Pair {
        double key;
        double pa;  // p(s1,s2) * a(s1)
        double pb;  // p(s1,s2) * b(s2)
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const double a = cs.a[i], b = cs.b[j];
            if (a == 0.0 && b == 0.0) {
                report.policy.at(i, j) = Decision::Irrelevant;
                continue;
            }
            const double p = joint.probs.at(i, j);
            pairs.push_back({a == 0.0 ? kInf : b / a, p * a, p * b, i, j});
        }
    }
    if (pairs.empty()) {
        report.degenerate = true;
        return report;
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& x, const Pair& y) { return x.key < y.key; });

    // Group pairs whose keys fall within the tie tolerance of each other.
    // Classification by group index keeps the sweep exactly consistent:
    // ties-as-Source at candidate k is the same partition as ties-as-Relay
    // at candidate k+1, so C1 - C2 is continuous and non-decreasing along
    // the swept path.
    struct Group {
        double rho;      // candidate threshold (representative key)
        double ta = 0.0; // sum of p*a over the group
        double tb = 0.0; // sum of p*b over the group
        std::size_t first, last;  // index range into pairs
    };
    std::vector<Group> groups;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const Pair& pr = pairs[k];
        bool merge = false;
        if (!groups.empty()) {
            const double rep = groups.back().rho;
            if (std::isinf(rep)) {
                merge = std::isinf(pr.key);
            } else if (!std::isinf(pr.key)) {
                merge = pr.key - rep <= kTieTolerance * std::max(1.0, std::max(pr.key, rep));
            }
        }
        if (merge) {
            groups.back().ta += pr.pa;
            groups.back().tb += pr.pb;
            groups.back().last = k;
        } else {
            groups.push_back({pr.key, pr.pa, pr.pb, k, k});
        }
    }

    const std::size_t ng = groups.size();
    // prefix_a[k]: sum of p*a over groups below k (the Source side);
    // suffix_b[k]: sum of p*b over groups above k (the Relay side).
    std::vector<double> prefix_a(ng, 0.0), suffix_b(ng, 0.0);
    for (std::size_t k = 1; k < ng; ++k) prefix_a[k] = prefix_a[k - 1] + groups[k - 1].ta;
    for (std::size_t k = ng - 1; k-- > 0;) suffix_b[k] = suffix_b[k + 1] + groups[k + 1].tb;

    // Walk the candidates in ascending order. g0 (ties all Source) is the
    // largest value of C1 - C2 reachable at this candidate, g1 (ties all
    // Relay) the smallest; the first candidate with g0 >= 0 brackets the
    // crossing and the coin bias solves the affine balance equation.
    for (std::size_t k = 0; k < ng; ++k) {
        const Group& g = groups[k];
        const double g1 = prefix_a[k] - (suffix_b[k] + g.tb);
        const double g0 = (prefix_a[k] + g.ta) - suffix_b[k];
        if (g0 < 0.0 && k + 1 < ng) continue;

        const double den = g0 - g1;  // = g.ta + g.tb
        double pc = den > 0.0 ? g0 / den : 0.0;
        if (pc < -kBalanceTolerance || pc > 1.0 + kBalanceTolerance) {
            throw std::logic_error(
                "solve_from_capacities: coin probability " + std::to_string(pc) +
                " escapes [0,1] at candidate rho " + std::to_string(g.rho) +
                "; the crossing candidate is inconsistent");
        }
        pc = std::clamp(pc, 0.0, 1.0);

        report.rho_opt = g.rho;
        report.coin_prob_opt = pc;
        report.c1_bits = prefix_a[k] + (1.0 - pc) * g.ta;
        report.c2_bits = suffix_b[k] + pc * g.tb;
        report.capacity_bits = report.c1_bits;
        report.boundary = (g.rho == 0.0) || std::isinf(g.rho);
        report.policy.coin_prob = pc;
        for (std::size_t m = 0; m < pairs.size(); ++m) {
            Decision d;
            if (m < g.first) {
                d = Decision::Source;
            } else if (m > g.last) {
                d = Decision::Relay;
            } else {
                d = Decision::Coin;
            }
            report.policy.at(pairs[m].i, pairs[m].j) = d;
        }
        return report;
    }
    throw std::logic_error("solve_from_capacities: no crossing candidate found");
}

CapacityReport solve_capacity(const RelayChannelSpec& spec, double tol_bits, int max_iter) {
    return solve_from_capacities(per_state_capacities(spec, tol_bits, max_iter),
                                 spec.joint_pmf);
}

namespace {

// Exact maximum of min(alpha - c1 x - c2 y, beta + d1 x + d2 y) over the unit
// square. The minimum of two affine functions is concave, so the maximum is
// attained at a square vertex or on the segment where the planes meet; along
// that segment the common value is affine, pushing the maximum to the
// segment's intersections with the square's edges.
double max_min_rect(double alpha, double beta, double c1, double c2, double d1, double d2) {
    const double s1 = c1 + d1, s2 = c2 + d2, r = alpha - beta;
    double best = -kInf;
    const auto consider = [&](double x, double y) {
        const double v = std::min(alpha - c1 * x - c2 * y, beta + d1 * x + d2 * y);
        if (v > best) best = v;
    };
    consider(0.0, 0.0);
    consider(0.0, 1.0);
    consider(1.0, 0.0);
    consider(1.0, 1.0);
    // Plane intersection s1*x + s2*y = r clipped to the edges.
    if (s2 > 0.0) {
        for (double x : {0.0, 1.0}) {
            const double y = (r - s1 * x) / s2;
            if (y >= 0.0 && y <= 1.0) consider(x, y);
        }
    }
    if (s1 > 0.0) {
        for (double y : {0.0, 1.0}) {
            const double x = (r - s2 * y) / s1;
            if (x >= 0.0 && x <= 1.0) consider(x, y);
        }
    }
    return best;
}

}  // namespace

double brute_force_capacity(const PerStateCapacities& caps, const JointStatePmf& joint,
                            int grid_steps) {
    const std::size_t n1 = caps.a.size(), n2 = caps.b.size();
    if (joint.probs.rows != n1 || joint.probs.cols != n2) {
        throw std::invalid_argument("brute_force_capacity: dimension mismatch");
    }
    if (grid_steps < 2) throw std::invalid_argument("brute_force_capacity: grid_steps must be >= 2");

    // Weighted coordinates: picking q_s in [0,1] removes q_s*ca from the
    // arrival side and adds q_s*cb to the departure side.
    std::vector<double> ca, cb;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            ca.push_back(joint.probs.at(i, j) * caps.a[i]);
            cb.push_back(joint.probs.at(i, j) * caps.b[j]);
        }
    }
    const std::size_t k = ca.size();
    double alpha0 = 0.0;
    for (double v : ca) alpha0 += v;

    // The two heaviest coordinates get the exact treatment; the rest are
    // enumerated on the grid. Order is fixed for reproducibility.
    std::vector<std::size_t> order(k);
    for (std::size_t s = 0; s < k; ++s) order[s] = s;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::max(ca[x], cb[x]) > std::max(ca[y], cb[y]);
    });
    const std::size_t in1 = order[0];
    const bool has_in2 = k >= 2;
    const std::size_t in2 = has_in2 ? order[1] : 0;
    std::vector<std::size_t> outer(order.begin() + (has_in2 ? 2 : 1), order.end());

    const double e_c1 = ca[in1], e_d1 = cb[in1];
    const double e_c2 = has_in2 ? ca[in2] : 0.0;
    const double e_d2 = has_in2 ? cb[in2] : 0.0;

    const std::size_t g = static_cast<std::size_t>(grid_steps);
    std::vector<double> steps(g);
    for (std::size_t t = 0; t < g; ++t) {
        steps[t] = static_cast<double>(t) / static_cast<double>(g - 1);
    }

    double best = -kInf;
    std::vector<std::size_t> idx(outer.size(), 0);
    while (true) {
        double alpha = alpha0;
        double beta = 0.0;
        for (std::size_t t = 0; t < outer.size(); ++t) {
            const double q = steps[idx[t]];
            alpha -= q * ca[outer[t]];
            beta += q * cb[outer[t]];
        }
        const double v = max_min_rect(alpha, beta, e_c1, e_c2, e_d1, e_d2);
        if (v > best) best = v;

        // Odometer over the outer grid.
        std::size_t t = 0;
        for (; t < idx.size(); ++t) {
            if (++idx[t] < g) break;
            idx[t] = 0;
        }
        if (t == idx.size()) break;
    }
    return best;
}

}  // namespace relaycap
