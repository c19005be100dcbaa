#include "relaycap/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaycap/quadrature.hpp"
#include "relaycap/rng.hpp"

namespace relaycap {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321;

double log2p1(double gamma) { return std::log1p(gamma) / kLn2; }

// Boundary curve gamma2 = (1+gamma1)^rho - 1, kept accurate for small rho
// and saturating cleanly to +inf for large arguments.
double boundary(double gamma1, double rho) {
    return std::expm1(rho * std::log1p(gamma1));
}

// Exponential quantile map u in [0,1) -> gamma, the substitution that turns
// each Rayleigh-SNR marginal into a unit uniform.
double exp_quantile(double u, double mean) { return -mean * std::log1p(-u); }

// P(gamma <= x) for an exponential with the given mean.
double exp_cdf(double x, double mean) { return -std::expm1(-x / mean); }

RatePair rate_pair_rayleigh(double rho, const FadingModel& m) {
    const GaussLegendre& rule = gauss_legendre(static_cast<std::size_t>(m.nodes));
    RatePair out;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u1 = rule.nodes[i];
        const double w1 = rule.weights[i];
        const double g1 = exp_quantile(u1, m.mean_snr_1);
        const double cut = boundary(g1, rho);
        const double u2cut = exp_cdf(cut, m.mean_snr_2);
        // Source region: the inner integral of the density alone is its CDF.
        out.c1_bits += w1 * log2p1(g1) * u2cut;
        // Relay region: integrate log2(1+g2) over u2 in [u2cut, 1).
        if (u2cut < 1.0) {
            double inner = 0.0;
            const double span = 1.0 - u2cut;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double u2 = u2cut + span * rule.nodes[k];
                inner += rule.weights[k] * log2p1(exp_quantile(u2, m.mean_snr_2));
            }
            out.c2_bits += w1 * span * inner;
        }
    }
    return out;
}

RatePair rate_pair_pointmass(double rho, const FadingModel& m) {
    RatePair out;
    const double a = log2p1(m.point_snr_1);
    const double b = log2p1(m.point_snr_2);
    if (m.point_snr_2 > boundary(m.point_snr_1, rho)) {
        out.c2_bits = b;
    } else {
        out.c1_bits = a;
    }
    return out;
}

RatePair rate_pair_grid(double rho, const FadingModel& m) {
    const Matrix& mass = m.grid_mass;
    std::vector<double> cum(mass.data.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < mass.data.size(); ++k) {
        acc += mass.data[k];
        cum[k] = acc;
    }
    const double cw1 = m.grid_max_snr_1 / static_cast<double>(mass.rows);
    const double cw2 = m.grid_max_snr_2 / static_cast<double>(mass.cols);

    Rng rng(m.mc_seed);
    const long n = std::max<long>(1, m.mc_samples);
    double s1 = 0.0, s1sq = 0.0, s2 = 0.0, s2sq = 0.0;
    for (long t = 0; t < n; ++t) {
        const double u = rng.next_unit() * acc;
        const std::size_t cell =
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
        const std::size_t i = cell / mass.cols;
        const std::size_t j = cell % mass.cols;
        const double g1 = (static_cast<double>(i) + rng.next_unit()) * cw1;
        const double g2 = (static_cast<double>(j) + rng.next_unit()) * cw2;
        double v1 = 0.0, v2 = 0.0;
        if (g2 > boundary(g1, rho)) {
            v2 = log2p1(g2);
        } else {
            v1 = log2p1(g1);
        }
        s1 += v1;
        s1sq += v1 * v1;
        s2 += v2;
        s2sq += v2 * v2;
    }
    RatePair out;
    const double dn = static_cast<double>(n);
    out.c1_bits = s1 / dn;
    out.c2_bits = s2 / dn;
    const double var1 = std::max(0.0, s1sq / dn - out.c1_bits * out.c1_bits);
    const double var2 = std::max(0.0, s2sq / dn - out.c2_bits * out.c2_bits);
    out.std_error = std::sqrt(std::max(var1, var2) / dn);
    return out;
}

double expected_rate_exponential(double mean, int nodes) {
    const GaussLegendre& rule = gauss_legendre(static_cast<std::size_t>(nodes));
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * log2p1(exp_quantile(rule.nodes[i], mean));
    }
    return acc;
}

double expected_rate_grid_axis(const FadingModel& m, bool first_axis) {
    const Matrix& mass = m.grid_mass;
    const std::size_t n = first_axis ? mass.rows : mass.cols;
    const double width =
        (first_axis ? m.grid_max_snr_1 : m.grid_max_snr_2) / static_cast<double>(n);
    const GaussLegendre& rule = gauss_legendre(32);
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double p = 0.0;
        if (first_axis) {
            for (std::size_t j = 0; j < mass.cols; ++j) p += mass.at(c, j);
        } else {
            for (std::size_t i = 0; i < mass.rows; ++i) p += mass.at(i, c);
        }
        const double lo = static_cast<double>(c) * width;
        double cell = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            cell += rule.weights[k] * log2p1(lo + width * rule.nodes[k]);
        }
        acc += p * cell;
    }
    return acc;
}

}  // namespace

std::vector<std::string> validate_model(const FadingModel& model) {
    std::vector<std::string> out;
    if (model.nodes < 8) out.push_back("nodes must be >= 8");
    switch (model.family) {
        case FadingFamily::IndependentRayleigh:
            if (!(model.mean_snr_1 > 0.0)) out.push_back("mean_snr_1 must be > 0");
            if (!(model.mean_snr_2 > 0.0)) out.push_back("mean_snr_2 must be > 0");
            break;
        case FadingFamily::PointMass:
            if (!(model.point_snr_1 >= 0.0) || !std::isfinite(model.point_snr_1)) {
                out.push_back("point_snr_1 must be finite and >= 0");
            }
            if (!(model.point_snr_2 >= 0.0) || !std::isfinite(model.point_snr_2)) {
                out.push_back("point_snr_2 must be finite and >= 0");
            }
            break;
        case FadingFamily::GridDensity: {
            if (model.grid_mass.empty()) {
                out.push_back("grid_mass is empty");
                break;
            }
            if (!(model.grid_max_snr_1 > 0.0) || !(model.grid_max_snr_2 > 0.0)) {
                out.push_back("grid_max_snr must be > 0 on both axes");
            }
            double sum = 0.0;
            bool neg = false;
            for (double v : model.grid_mass.data) {
                if (!(v >= 0.0) || !std::isfinite(v)) neg = true;
                sum += v;
            }
            if (neg) out.push_back("grid_mass has a negative or non-finite entry");
            if (std::fabs(sum - 1.0) > 1e-4) {
                out.push_back("grid_mass integrates to " + std::to_string(sum) +
                              ", expected 1 within 1e-4");
            }
            break;
        }
    }
    return out;
}

RatePair rate_pair(double rho, const FadingModel& model) {
    if (!(rho > 0.0)) throw std::invalid_argument("rate_pair: rho must be > 0");
    switch (model.family) {
        case FadingFamily::IndependentRayleigh: return rate_pair_rayleigh(rho, model);
        case FadingFamily::PointMass: return rate_pair_pointmass(rho, model);
        case FadingFamily::GridDensity: return rate_pair_grid(rho, model);
    }
    throw std::logic_error("rate_pair: unknown family");
}

double expected_rate_sr(const FadingModel& model) {
    switch (model.family) {
        case FadingFamily::IndependentRayleigh:
            return expected_rate_exponential(model.mean_snr_1, model.nodes);
        case FadingFamily::PointMass: return log2p1(model.point_snr_1);
        case FadingFamily::GridDensity: return expected_rate_grid_axis(model, true);
    }
    throw std::logic_error("expected_rate_sr: unknown family");
}

double expected_rate_rd(const FadingModel& model) {
    switch (model.family) {
        case FadingFamily::IndependentRayleigh:
            return expected_rate_exponential(model.mean_snr_2, model.nodes);
        case FadingFamily::PointMass: return log2p1(model.point_snr_2);
        case FadingFamily::GridDensity: return expected_rate_grid_axis(model, false);
    }
    throw std::logic_error("expected_rate_rd: unknown family");
}

FadingCapacityReport solve_rho(const FadingModel& model, double rel_tol) {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("solve_rho: rel_tol must be > 0");
    if (!(expected_rate_sr(model) > 0.0) || !(expected_rate_rd(model) > 0.0)) {
        throw std::invalid_argument("solve_rho: both hops need a positive mean rate");
    }

    FadingCapacityReport rep;
    rep.nodes = model.nodes;

    const auto balance = [&](const RatePair& rp) {
        return rp.c1_bits - rp.c2_bits;
    };
    const auto within_tol = [&](const RatePair& rp) {
        const double scale = std::max({std::fabs(rp.c1_bits), std::fabs(rp.c2_bits), 1e-300});
        return std::fabs(balance(rp)) <= rel_tol * scale;
    };
    const auto finish = [&](double rho, const RatePair& rp) {
        rep.rho_opt = rho;
        rep.c1_bits = rp.c1_bits;
        rep.c2_bits = rp.c2_bits;
        rep.capacity_bits = std::min(rp.c1_bits, rp.c2_bits);
        rep.balance_residual = std::fabs(balance(rp));
        return rep;
    };

    double lo = 1.0 / 64.0, hi = 64.0;
    RatePair rp_lo = rate_pair(lo, model);
    RatePair rp_hi = rate_pair(hi, model);
    int doublings = 0;
    while (balance(rp_lo) > 0.0 && doublings < 60) {
        hi = lo;
        rp_hi = rp_lo;
        lo *= 0.5;
        rp_lo = rate_pair(lo, model);
        ++doublings;
    }
    while (balance(rp_hi) < 0.0 && doublings < 60) {
        lo = hi;
        rp_lo = rp_hi;
        hi *= 2.0;
        rp_hi = rate_pair(hi, model);
        ++doublings;
    }
    if (balance(rp_lo) > 0.0) {
        rep.boundary = true;
        return finish(lo, rp_lo);
    }
    if (balance(rp_hi) < 0.0) {
        rep.boundary = true;
        return finish(hi, rp_hi);
    }

    for (int it = 0; it < 2000; ++it) {
        const double mid = std::sqrt(lo * hi);
        const RatePair rp = rate_pair(mid, model);
        rep.bisection_steps = it + 1;
        if (within_tol(rp)) return finish(mid, rp);
        if (balance(rp) < 0.0) {
            lo = mid;
            rp_lo = rp;
        } else {
            hi = mid;
            rp_hi = rp;
        }
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }

    // The bracket collapsed with a residual imbalance: probability mass sits
    // on the decision curve and g jumps across zero. Time-share the two
    // limiting configurations; the balanced value solves one linear equation.
    const double gm = balance(rp_lo);  // < 0
    const double gp = balance(rp_hi);  // >= 0
    const double den = gp - gm;
    const double pc = den > 0.0 ? gp / den : 0.0;
    rep.atom_on_boundary = true;
    rep.rho_opt = std::sqrt(lo * hi);
    rep.c1_bits = rp_hi.c1_bits + pc * (rp_lo.c1_bits - rp_hi.c1_bits);
    rep.c2_bits = rp_hi.c2_bits + pc * (rp_lo.c2_bits - rp_hi.c2_bits);
    rep.capacity_bits = std::min(rep.c1_bits, rep.c2_bits);
    rep.balance_residual = std::fabs(rep.c1_bits - rep.c2_bits);
    return rep;
}

DiscretizedFading quantize(const FadingModel& model, int cells_per_axis) {
    if (cells_per_axis < 1) throw std::invalid_argument("quantize: need at least one cell");
    DiscretizedFading out;
    const GaussLegendre& rule = gauss_legendre(32);

    switch (model.family) {
        case FadingFamily::IndependentRayleigh: {
            const std::size_t m = static_cast<std::size_t>(cells_per_axis);
            const auto cell_mean = [&](std::size_t c, double mean) {
                const double lo = static_cast<double>(c) / static_cast<double>(m);
                const double w = 1.0 / static_cast<double>(m);
                double acc = 0.0;
                for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                    acc += rule.weights[k] * log2p1(exp_quantile(lo + w * rule.nodes[k], mean));
                }
                return acc;  // conditional mean: mass of each quantile cell is 1/m
            };
            out.a.resize(m);
            out.b.resize(m);
            for (std::size_t c = 0; c < m; ++c) {
                out.a[c] = cell_mean(c, model.mean_snr_1);
                out.b[c] = cell_mean(c, model.mean_snr_2);
            }
            out.joint.probs = Matrix(m, m, 1.0 / (static_cast<double>(m) * static_cast<double>(m)));
            return out;
        }
        case FadingFamily::PointMass: {
            out.a = {log2p1(model.point_snr_1)};
            out.b = {log2p1(model.point_snr_2)};
            out.joint.probs = Matrix(1, 1, 1.0);
            return out;
        }
        case FadingFamily::GridDensity: {
            // The grid's own cells are the states; the density is uniform
            // within a cell, so the per-cell rate is a plain average.
            const Matrix& mass = model.grid_mass;
            const double w1 = model.grid_max_snr_1 / static_cast<double>(mass.rows);
            const double w2 = model.grid_max_snr_2 / static_cast<double>(mass.cols);
            const auto interval_mean = [&](double lo, double width) {
                double acc = 0.0;
                for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                    acc += rule.weights[k] * log2p1(lo + width * rule.nodes[k]);
                }
                return acc;
            };
            out.a.resize(mass.rows);
            out.b.resize(mass.cols);
            for (std::size_t i = 0; i < mass.rows; ++i) {
                out.a[i] = interval_mean(static_cast<double>(i) * w1, w1);
            }
            for (std::size_t j = 0; j < mass.cols; ++j) {
                out.b[j] = interval_mean(static_cast<double>(j) * w2, w2);
            }
            out.joint.probs = mass;
            return out;
        }
    }
    throw std::logic_error("quantize: unknown family");
}

}  // namespace relaycap
