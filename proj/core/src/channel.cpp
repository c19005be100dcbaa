#include "relaycap/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relaycap {

Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw std::invalid_argument("matrix_from: empty matrix");
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols) {
            throw std::invalid_argument("matrix_from: ragged rows");
        }
        for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

bool is_pmf(const std::vector<double>& p, double tol) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
        sum += v;
    }
    return std::fabs(sum - 1.0) <= tol;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_channel(const StateChannel& ch, const char* which, std::size_t state,
                   std::vector<std::string>& out) {
    if (ch.transition.empty()) {
        out.push_back(std::string(which) + "[" + std::to_string(state) + "] is empty");
        return;
    }
    for (std::size_t r = 0; r < ch.transition.rows; ++r) {
        double sum = 0.0;
        bool neg = false;
        for (std::size_t c = 0; c < ch.transition.cols; ++c) {
            const double v = ch.transition.at(r, c);
            if (!(v >= 0.0) || !std::isfinite(v)) neg = true;
            sum += v;
        }
        if (neg) {
            out.push_back("row " + std::to_string(r) + " of " + which + "[" +
                          std::to_string(state) + "] has a negative or non-finite entry");
        } else if (std::fabs(sum - 1.0) > kPmfTolerance) {
            out.push_back("row " + std::to_string(r) + " of " + which + "[" +
                          std::to_string(state) + "] sums to " + fmt(sum));
        }
    }
}

}  // namespace

std::vector<std::string> validate_spec(const RelayChannelSpec& spec) {
    std::vector<std::string> out;

    const std::size_t n1 = spec.states.labels_s1.size();
    const std::size_t n2 = spec.states.labels_s2.size();
    if (n1 == 0) out.push_back("states.labels_s1 is empty");
    if (n2 == 0) out.push_back("states.labels_s2 is empty");
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = i + 1; j < n1; ++j) {
            if (spec.states.labels_s1[i] == spec.states.labels_s1[j]) {
                out.push_back("duplicate label in labels_s1: \"" + spec.states.labels_s1[i] + "\"");
            }
        }
    }
    for (std::size_t i = 0; i < n2; ++i) {
        for (std::size_t j = i + 1; j < n2; ++j) {
            if (spec.states.labels_s2[i] == spec.states.labels_s2[j]) {
                out.push_back("duplicate label in labels_s2: \"" + spec.states.labels_s2[i] + "\"");
            }
        }
    }

    const Matrix& joint = spec.joint_pmf.probs;
    if (joint.rows != n1 || joint.cols != n2) {
        out.push_back("joint_pmf is " + std::to_string(joint.rows) + "x" +
                      std::to_string(joint.cols) + ", expected " + std::to_string(n1) + "x" +
                      std::to_string(n2));
    } else {
        double sum = 0.0;
        bool neg = false;
        for (double v : joint.data) {
            if (!(v >= 0.0) || !std::isfinite(v)) neg = true;
            sum += v;
        }
        if (neg) out.push_back("joint_pmf has a negative or non-finite entry");
        if (std::fabs(sum - 1.0) > kPmfTolerance) {
            out.push_back("joint_pmf sums to " + fmt(sum));
        }
    }

    if (spec.sr_channels.size() != n1) {
        out.push_back("sr_channels has " + std::to_string(spec.sr_channels.size()) +
                      " entries, expected " + std::to_string(n1));
    }
    if (spec.rd_channels.size() != n2) {
        out.push_back("rd_channels has " + std::to_string(spec.rd_channels.size()) +
                      " entries, expected " + std::to_string(n2));
    }
    for (std::size_t s = 0; s < spec.sr_channels.size(); ++s) {
        check_channel(spec.sr_channels[s], "sr_channels", s, out);
    }
    for (std::size_t s = 0; s < spec.rd_channels.size(); ++s) {
        check_channel(spec.rd_channels[s], "rd_channels", s, out);
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>>
marginal_state_pmfs(const JointStatePmf& joint) {
    const Matrix& p = joint.probs;
    std::vector<double> m1(p.rows, 0.0), m2(p.cols, 0.0);
    for (std::size_t i = 0; i < p.rows; ++i) {
        for (std::size_t j = 0; j < p.cols; ++j) {
            m1[i] += p.at(i, j);
            m2[j] += p.at(i, j);
        }
    }
    return {std::move(m1), std::move(m2)};
}

}  // namespace relaycap
