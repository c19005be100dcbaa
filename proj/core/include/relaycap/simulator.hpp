#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relaycap/channel.hpp"
#include "relaycap/fading.hpp"
#include "relaycap/solver.hpp"

namespace relaycap {

enum class StateProcess { Iid, Markov };

/// Rate-level simulation of the buffer-aided protocol: per block the state
/// pair is drawn, the policy picks the transmitting node (flipping the coin
/// where required), and the relay queue moves by the per-state rate minus
/// the back-off epsilon. Block length is ideal: each block carries exactly
/// its assigned rate.
struct SimConfig {
    std::vector<double> a;  // source-relay rate per s1 (bits per channel use)
    std::vector<double> b;  // relay-destination rate per s2
    JointStatePmf joint;
    LinkSelectionPolicy policy;
    std::int64_t blocks = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 1;
    StateProcess process = StateProcess::Iid;
    Matrix markov;  // transition matrix over state pairs, row-major pair index
    std::int64_t decimation = 1000;  // queue sample spacing
};

struct QueueSample {
    std::int64_t block;
    double queue_bits;
};

/// Queue evolution summary. The *_units fields are the exact fixed-point
/// counters (2^-32 bit per channel use) the simulation runs on; the identity
/// arrived_units - delivered_units == final_queue_units holds exactly.
struct SimTrace {
    double throughput_bits = 0.0;
    std::vector<QueueSample> queue_samples;
    std::int64_t buffer_limited_blocks = 0;  // blocks where Q(i-1) < b(s2)
    double arrival_rate = 0.0;
    double departure_rate = 0.0;
    double final_queue = 0.0;
    std::int64_t arrived_units = 0;
    std::int64_t delivered_units = 0;
    std::int64_t final_queue_units = 0;
    std::int64_t source_blocks = 0;
    std::int64_t relay_blocks = 0;
};

/// Per-block record emitted at trace points (every decimation-th block).
struct TraceRow {
    std::int64_t block;
    std::string s1;
    std::string s2;
    int d;
    double queue_bits;
    double delivered_bits;  // this block's delivery
};
using TraceSink = std::function<void(const TraceRow&)>;

/// Validates Markov configs: rows must be PMFs and the joint PMF must be
/// stationary under the transition matrix (within 1e-9).
std::vector<std::string> validate_sim_config(const SimConfig& cfg);

SimTrace simulate(const SimConfig& cfg, const StateSpace* labels = nullptr,
                  const TraceSink& sink = {});

/// Comparison baseline: the relay strictly alternates receive/transmit
/// regardless of the channel states. Same queue dynamics otherwise.
SimTrace baseline_alternating(const SimConfig& cfg, const StateSpace* labels = nullptr,
                              const TraceSink& sink = {});

/// Fading counterpart: per block the SNR pair is drawn from the model, the
/// threshold rule d = 1 iff gamma2 > (1+gamma1)^rho - 1 selects the link,
/// and the rates are log2(1+snr). PointMass models are rejected; use the
/// discrete path with the coin instead.
struct FadingSimConfig {
    FadingModel model;
    double rho = 1.0;
    std::int64_t blocks = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 1;
    std::int64_t decimation = 1000;
};
SimTrace simulate_fading(const FadingSimConfig& cfg, const TraceSink& sink = {});

}  // namespace relaycap
