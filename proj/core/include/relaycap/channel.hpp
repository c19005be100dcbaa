#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace relaycap {

/// Dense row-major matrix of doubles. Probability tables in this library are
/// small, so a flat vector with explicit indexing beats anything fancier.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool empty() const { return data.empty(); }
};

/// Builds a Matrix from nested rows. Throws std::invalid_argument if the rows
/// are ragged or empty.
Matrix matrix_from(const std::vector<std::vector<double>>& rows);

/// State alphabets of the two hops. Labels are opaque strings; all numeric
/// code works on their dense indices.
struct StateSpace {
    std::vector<std::string> labels_s1;  // source-relay hop states
    std::vector<std::string> labels_s2;  // relay-destination hop states
};

/// Joint PMF p(s1, s2) over the state pairs, |S1| x |S2|.
struct JointStatePmf {
    Matrix probs;
};

/// One hop's transition matrix p(y|x) in one state. Rows are indexed by the
/// active input alphabet; the half-duplex silence symbol is not represented
/// here, silence is what link selection does.
struct StateChannel {
    Matrix transition;  // |X| x |Y|

    std::size_t input_size() const { return transition.rows; }
    std::size_t output_size() const { return transition.cols; }
};

/// Full description of a state-dependent half-duplex relay channel without a
/// source-destination link: state statistics plus one DMC per hop per state.
struct RelayChannelSpec {
    StateSpace states;
    JointStatePmf joint_pmf;
    std::vector<StateChannel> sr_channels;  // one per s1
    std::vector<StateChannel> rd_channels;  // one per s2
};

/// Absolute tolerance used everywhere a probability vector must sum to one.
inline constexpr double kPmfTolerance = 1e-12;

bool is_pmf(const std::vector<double>& p, double tol = kPmfTolerance);

/// Checks every structural invariant of the spec and returns a description of
/// each violation (with indices). An empty result means the spec is valid;
/// violations are data, not exceptions.
std::vector<std::string> validate_spec(const RelayChannelSpec& spec);

/// Row and column sums of the joint PMF: the marginal PMFs of S1 and S2.
std::pair<std::vector<double>, std::vector<double>>
marginal_state_pmfs(const JointStatePmf& joint);

}  // namespace relaycap
