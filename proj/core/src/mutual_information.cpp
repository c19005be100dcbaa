#include "relaycap/mutual_information.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaycap {

namespace {

// Output distribution induced by p over the rows of W, q(y) = sum_x p(x) W(y|x).
void output_distribution(const std::vector<double>& p, const Matrix& w, std::vector<double>& q) {
    q.assign(w.cols, 0.0);
    for (std::size_t x = 0; x < w.rows; ++x) {
        const double px = p[x];
        if (px == 0.0) continue;
        for (std::size_t y = 0; y < w.cols; ++y) {
            q[y] += px * w.at(x, y);
        }
    }
}

// D(p(.|x) || q) in bits. Terms with p(y|x) = 0 are skipped (0*log 0 = 0).
// A positive transition mass into an output with q(y) = 0 makes the
// divergence infinite; that can only happen for inputs whose probability has
// underflowed to zero and keeps the capacity upper bound honest.
double row_divergence_bits(const Matrix& w, std::size_t x, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t y = 0; y < w.cols; ++y) {
        const double wxy = w.at(x, y);
        if (wxy == 0.0) continue;
        if (q[y] == 0.0) return std::numeric_limits<double>::infinity();
        d += wxy * std::log2(wxy / q[y]);
    }
    return d;
}

}  // namespace

double mutual_information(const std::vector<double>& p_x, const StateChannel& ch) {
    const Matrix& w = ch.transition;
    if (p_x.size() != w.rows) {
        throw std::invalid_argument("mutual_information: input distribution has " +
                                    std::to_string(p_x.size()) + " entries, channel has " +
                                    std::to_string(w.rows) + " inputs");
    }
    std::vector<double> q;
    output_distribution(p_x, w, q);
    double info = 0.0;
    for (std::size_t x = 0; x < w.rows; ++x) {
        if (p_x[x] == 0.0) continue;
        info += p_x[x] * row_divergence_bits(w, x, q);
    }
    return info;
}

CapacityResult blahut_arimoto(const StateChannel& ch, double tol_bits, int max_iter) {
    const Matrix& w = ch.transition;
    if (w.empty()) throw std::invalid_argument("blahut_arimoto: empty channel");
    if (!(tol_bits > 0.0)) throw std::invalid_argument("blahut_arimoto: tol must be > 0");

    const std::size_t nx = w.rows;
    std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
    std::vector<double> q, div(nx, 0.0);

    CapacityResult res;
    res.upper_bound = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= max_iter; ++it) {
        output_distribution(p, w, q);
        double lower = 0.0;
        double upper = 0.0;   // max divergence over all inputs: capacity upper bound
        double shift = 0.0;   // max over supported inputs only: always finite
        for (std::size_t x = 0; x < nx; ++x) {
            div[x] = row_divergence_bits(w, x, q);
            if (div[x] > upper) upper = div[x];
            if (p[x] > 0.0) {
                lower += p[x] * div[x];
                if (div[x] > shift) shift = div[x];
            }
        }
        res.iterations = it;
        res.lower_bound = lower;
        if (upper < res.upper_bound) res.upper_bound = upper;
        res.argmax = p;
        if (res.upper_bound - lower <= tol_bits) {
            res.converged = true;
            break;
        }
        // Multiplicative update p(x) <- p(x) 2^(D_x - shift), then renormalize.
        double z = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            if (p[x] > 0.0) p[x] *= std::exp2(div[x] - shift);
            z += p[x];
        }
        for (std::size_t x = 0; x < nx; ++x) p[x] /= z;
    }

    res.capacity_bits = res.lower_bound < 0.0 ? 0.0 : res.lower_bound;
    return res;
}

}  // namespace relaycap
