#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "relaycap/channel.hpp"
#include "relaycap/fading.hpp"
#include "relaycap/simulator.hpp"
#include "relaycap/solver.hpp"

namespace relaycap::io {

enum class RunMode { Capacity, Simulate, Fading, OracleCheck, Example };

struct SimOptions {
    std::int64_t blocks = 100000;
    double epsilon = 0.0;
    std::uint64_t seed = 1;
    StateProcess process = StateProcess::Iid;
    Matrix markov;  // used when process == Markov
    std::int64_t decimation = 1000;
    std::string trace_path;  // empty: no CSV trace
    bool baseline = false;   // also run the alternating baseline
};

struct OracleOptions {
    std::uint64_t seed = 7;
    int trials = 200;
    int grid_steps = 2001;
};

struct ExampleOptions {
    std::string which = "all";  // fixed | onoff | rayleigh | all
    double a = 2.0;             // fixed-channel capacities
    double b = 1.0;
    int onoff_case = 3;
    double snr = 10.0;  // symmetric Rayleigh mean SNR
};

struct RunConfig {
    RunMode mode = RunMode::Capacity;
    bool has_spec = false;
    RelayChannelSpec spec;
    std::string spec_path;
    double tol = kDefaultBaTolBits;
    int max_iter = kDefaultBaMaxIter;
    bool has_fading = false;
    FadingModel fading;
    double fading_tol = 1e-9;
    SimOptions sim;
    OracleOptions oracle;
    ExampleOptions example;
    std::string out_path;  // empty: report goes to stdout
};

/// Schema violations, unknown fields, type mismatches and missing referenced
/// files all surface as ConfigError with a path-qualified message.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RunConfig parse_config(const std::string& json_text);

RelayChannelSpec spec_from_json(const std::string& json_text);
std::string spec_to_json(const RelayChannelSpec& spec);

std::string capacity_report_to_json(const CapacityReport& report, const StateSpace& states);

struct ParsedReport {
    CapacityReport report;
    StateSpace states;
};
ParsedReport capacity_report_from_json(const std::string& json_text);

/// Dispatches the configured mode, writes the JSON report (and CSV trace if
/// requested) and returns the process exit status: 0 only if every check in
/// the run passed. Partial output files are removed on failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace relaycap::io
