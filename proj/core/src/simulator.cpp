#include "relaycap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "relaycap/rng.hpp"

namespace relaycap {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321;

// Queue bookkeeping runs on integers in units of 2^-32 bit per channel use,
// so conservation (arrived - delivered == queue) is exact and the queue can
// never go negative by rounding.
constexpr double kUnit = 4294967296.0;
constexpr std::int64_t kMaxUnits = std::int64_t{1} << 53;

std::int64_t to_units(double bits) {
    if (!(bits >= 0.0) || bits * kUnit > static_cast<double>(kMaxUnits)) {
        throw std::invalid_argument("rate out of range: " + std::to_string(bits));
    }
    return std::llround(bits * kUnit);
}

double to_bits(std::int64_t units) { return static_cast<double>(units) / kUnit; }

struct QueueState {
    std::int64_t q = 0;
    std::int64_t arrived = 0;
    std::int64_t delivered = 0;
    std::int64_t limited = 0;
    std::int64_t source_blocks = 0;
    std::int64_t relay_blocks = 0;

    // d = 0: the source sends; everything decoded lands in the buffer.
    void source_block(std::int64_t arrive_units) {
        q += arrive_units;
        arrived += arrive_units;
        ++source_blocks;
    }

    // d = 1: the relay drains min(queue, channel rate) less the back-off.
    // Returns the delivered units of this block.
    std::int64_t relay_block(std::int64_t cap_units, std::int64_t eps_units) {
        if (q < cap_units) ++limited;
        const std::int64_t r = std::max<std::int64_t>(std::min(q, cap_units) - eps_units, 0);
        q -= r;
        delivered += r;
        ++relay_blocks;
        return r;
    }
};

void fill_trace(SimTrace& out, const QueueState& qs, std::int64_t blocks) {
    out.arrived_units = qs.arrived;
    out.delivered_units = qs.delivered;
    out.final_queue_units = qs.q;
    out.buffer_limited_blocks = qs.limited;
    out.source_blocks = qs.source_blocks;
    out.relay_blocks = qs.relay_blocks;
    out.final_queue = to_bits(qs.q);
    if (blocks > 0) {
        const double n = static_cast<double>(blocks);
        out.throughput_bits = to_bits(qs.delivered) / n;
        out.arrival_rate = to_bits(qs.arrived) / n;
        out.departure_rate = out.throughput_bits;
    }
}

// Samples an index from cumulative weights; the last bucket absorbs the
// rounding slack at u ~ 1.
std::size_t sample_cumulative(const std::vector<double>& cum, double u) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), u * cum.back());
    const std::size_t k = static_cast<std::size_t>(it - cum.begin());
    return std::min(k, cum.size() - 1);
}

std::string label_or_index(const StateSpace* labels, bool first, std::size_t idx) {
    if (labels) {
        const auto& v = first ? labels->labels_s1 : labels->labels_s2;
        if (idx < v.size()) return v[idx];
    }
    return std::to_string(idx);
}

SimTrace run_discrete(const SimConfig& cfg, const StateSpace* labels, const TraceSink& sink,
                      bool alternate) {
    {
        const auto violations = validate_sim_config(cfg);
        if (!violations.empty()) {
            std::string msg = "simulate: invalid config:";
            for (const auto& v : violations) msg += " " + v + ";";
            throw std::invalid_argument(msg);
        }
    }
    const std::size_t n1 = cfg.a.size(), n2 = cfg.b.size();
    const std::int64_t eps_units = to_units(cfg.epsilon);

    std::vector<std::int64_t> arrive_units(n1), cap_units(n2);
    std::int64_t max_units = 1;
    for (std::size_t i = 0; i < n1; ++i) {
        arrive_units[i] = std::max<std::int64_t>(to_units(cfg.a[i]) - eps_units, 0);
        max_units = std::max(max_units, arrive_units[i]);
    }
    for (std::size_t j = 0; j < n2; ++j) {
        cap_units[j] = to_units(cfg.b[j]);
        max_units = std::max(max_units, cap_units[j]);
    }
    if (cfg.blocks > 0 && max_units > (std::int64_t{1} << 62) / cfg.blocks) {
        throw std::invalid_argument("simulate: blocks * rate would overflow the counters");
    }

    std::vector<double> joint_cum(n1 * n2);
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < joint_cum.size(); ++k) {
            acc += cfg.joint.probs.data[k];
            joint_cum[k] = acc;
        }
    }
    std::vector<std::vector<double>> markov_cum;
    if (cfg.process == StateProcess::Markov) {
        markov_cum.resize(n1 * n2);
        for (std::size_t r = 0; r < n1 * n2; ++r) {
            markov_cum[r].resize(n1 * n2);
            double acc = 0.0;
            for (std::size_t c = 0; c < n1 * n2; ++c) {
                acc += cfg.markov.at(r, c);
                markov_cum[r][c] = acc;
            }
        }
    }

    Rng rng(cfg.seed);
    QueueState qs;
    SimTrace out;
    std::size_t pair = 0;
    bool have_pair = false;

    for (std::int64_t block = 1; block <= cfg.blocks; ++block) {
        // State first, coin second; each block consumes the stream in this
        // order so that traces are reproducible from the seed alone.
        if (cfg.process == StateProcess::Iid || !have_pair) {
            pair = sample_cumulative(joint_cum, rng.next_unit());
            have_pair = true;
        } else {
            pair = sample_cumulative(markov_cum[pair], rng.next_unit());
        }
        const std::size_t i = pair / n2, j = pair % n2;

        int d;
        if (alternate) {
            d = (block % 2 == 0) ? 1 : 0;
        } else {
            switch (cfg.policy.at(i, j)) {
                case Decision::Relay: d = 1; break;
                case Decision::Coin: d = rng.bernoulli(cfg.policy.coin_prob) ? 1 : 0; break;
                case Decision::Source:
                case Decision::Irrelevant:
                default: d = 0; break;
            }
        }

        std::int64_t delivered_now = 0;
        if (d == 0) {
            qs.source_block(arrive_units[i]);
        } else {
            delivered_now = qs.relay_block(cap_units[j], eps_units);
        }

        if ((block - 1) % cfg.decimation == 0) {
            out.queue_samples.push_back({block, to_bits(qs.q)});
            if (sink) {
                sink(TraceRow{block, label_or_index(labels, true, i),
                              label_or_index(labels, false, j), d, to_bits(qs.q),
                              to_bits(delivered_now)});
            }
        }
    }
    fill_trace(out, qs, cfg.blocks);
    return out;
}

}  // namespace

std::vector<std::string> validate_sim_config(const SimConfig& cfg) {
    std::vector<std::string> out;
    const std::size_t n1 = cfg.a.size(), n2 = cfg.b.size();
    if (n1 == 0 || n2 == 0) out.push_back("rate tables must be non-empty");
    if (cfg.joint.probs.rows != n1 || cfg.joint.probs.cols != n2) {
        out.push_back("joint PMF dimensions do not match the rate tables");
    }
    if (cfg.policy.n1 != n1 || cfg.policy.n2 != n2) {
        out.push_back("policy dimensions do not match the rate tables");
    }
    if (cfg.blocks < 0) out.push_back("blocks must be >= 0");
    if (!(cfg.epsilon >= 0.0)) out.push_back("epsilon must be >= 0");
    if (cfg.decimation < 1) out.push_back("decimation must be >= 1");
    if (!(cfg.policy.coin_prob >= 0.0 && cfg.policy.coin_prob <= 1.0)) {
        out.push_back("coin_prob must be in [0, 1]");
    }
    for (double v : cfg.a) {
        if (!(v >= 0.0) || !std::isfinite(v)) out.push_back("rate table a has an invalid entry");
    }
    for (double v : cfg.b) {
        if (!(v >= 0.0) || !std::isfinite(v)) out.push_back("rate table b has an invalid entry");
    }
    if (cfg.process == StateProcess::Markov) {
        const std::size_t k = n1 * n2;
        if (cfg.markov.rows != k || cfg.markov.cols != k) {
            out.push_back("markov matrix must be " + std::to_string(k) + "x" + std::to_string(k));
        } else {
            for (std::size_t r = 0; r < k; ++r) {
                double sum = 0.0;
                bool neg = false;
                for (std::size_t c = 0; c < k; ++c) {
                    const double v = cfg.markov.at(r, c);
                    if (!(v >= 0.0) || !std::isfinite(v)) neg = true;
                    sum += v;
                }
                if (neg || std::fabs(sum - 1.0) > kPmfTolerance) {
                    out.push_back("markov row " + std::to_string(r) + " is not a PMF");
                }
            }
            // The joint PMF must be stationary under the chain.
            for (std::size_t c = 0; c < k; ++c) {
                double acc = 0.0;
                for (std::size_t r = 0; r < k; ++r) {
                    acc += cfg.joint.probs.data[r] * cfg.markov.at(r, c);
                }
                if (std::fabs(acc - cfg.joint.probs.data[c]) > 1e-9) {
                    out.push_back("joint PMF is not stationary under the markov matrix (pair " +
                                  std::to_string(c) + ")");
                    break;
                }
            }
        }
    }
    return out;
}

SimTrace simulate(const SimConfig& cfg, const StateSpace* labels, const TraceSink& sink) {
    return run_discrete(cfg, labels, sink, /*alternate=*/false);
}

SimTrace baseline_alternating(const SimConfig& cfg, const StateSpace* labels,
                              const TraceSink& sink) {
    return run_discrete(cfg, labels, sink, /*alternate=*/true);
}

SimTrace simulate_fading(const FadingSimConfig& cfg, const TraceSink& sink) {
    if (cfg.model.family == FadingFamily::PointMass) {
        throw std::invalid_argument(
            "simulate_fading: point-mass models need the coin; use the discrete path");
    }
    if (cfg.blocks < 0) throw std::invalid_argument("simulate_fading: blocks must be >= 0");
    if (!(cfg.epsilon >= 0.0)) throw std::invalid_argument("simulate_fading: epsilon must be >= 0");
    if (!(cfg.rho > 0.0)) throw std::invalid_argument("simulate_fading: rho must be > 0");
    const std::int64_t decimation = cfg.decimation < 1 ? 1 : cfg.decimation;

    const Matrix& mass = cfg.model.grid_mass;
    std::vector<double> cell_cum;
    double cw1 = 0.0, cw2 = 0.0;
    if (cfg.model.family == FadingFamily::GridDensity) {
        cell_cum.resize(mass.data.size());
        double acc = 0.0;
        for (std::size_t k = 0; k < mass.data.size(); ++k) {
            acc += mass.data[k];
            cell_cum[k] = acc;
        }
        cw1 = cfg.model.grid_max_snr_1 / static_cast<double>(mass.rows);
        cw2 = cfg.model.grid_max_snr_2 / static_cast<double>(mass.cols);
    }

    const std::int64_t eps_units = to_units(cfg.epsilon);
    Rng rng(cfg.seed);
    QueueState qs;
    SimTrace out;
    char buf[32];

    for (std::int64_t block = 1; block <= cfg.blocks; ++block) {
        double g1, g2;
        if (cfg.model.family == FadingFamily::IndependentRayleigh) {
            g1 = rng.exponential(cfg.model.mean_snr_1);
            g2 = rng.exponential(cfg.model.mean_snr_2);
        } else {
            const std::size_t cell = sample_cumulative(cell_cum, rng.next_unit());
            const std::size_t i = cell / mass.cols, j = cell % mass.cols;
            g1 = (static_cast<double>(i) + rng.next_unit()) * cw1;
            g2 = (static_cast<double>(j) + rng.next_unit()) * cw2;
        }
        const int d = g2 > std::expm1(cfg.rho * std::log1p(g1)) ? 1 : 0;

        std::int64_t delivered_now = 0;
        if (d == 0) {
            const std::int64_t arrive =
                std::max<std::int64_t>(to_units(std::log1p(g1) / kLn2) - eps_units,
                                       0);
            qs.source_block(arrive);
        } else {
            delivered_now =
                qs.relay_block(to_units(std::log1p(g2) / kLn2), eps_units);
        }

        if ((block - 1) % decimation == 0) {
            out.queue_samples.push_back({block, to_bits(qs.q)});
            if (sink) {
                std::snprintf(buf, sizeof buf, "%.9g", g1);
                std::string s1 = buf;
                std::snprintf(buf, sizeof buf, "%.9g", g2);
                sink(TraceRow{block, std::move(s1), buf, d, to_bits(qs.q),
                              to_bits(delivered_now)});
            }
        }
    }
    fill_trace(out, qs, cfg.blocks);
    return out;
}

}  // namespace relaycap
