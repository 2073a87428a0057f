#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "altproj/instance_io.hpp"

namespace altproj {

enum class Command { geometry, iterate, numrange, ritt, fracpow, slowvec, suite };

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitContract = 3;
constexpr int kExitCapacity = 4;

struct ExperimentConfig {
    Command command = Command::geometry;
    std::string instance_path;
    std::optional<InstanceSpec> instance;  ///< takes precedence over instance_path
    std::string out_path;                  ///< empty writes CSV to the output stream
    std::optional<int> n_max;
    std::optional<Seed> seed;
    std::vector<Real> alphas{0.5, 1.0, 2.0};
    Real tol = 1e-10;
    int angles = 256;
    Real slack = 1e-7;
    Real eps = 0.1;
    std::string fixtures_dir;
    std::vector<int> only;
};

/// Executes one command; returns the process exit code. CSV goes to out_path
/// (atomically) or to `out`, verdicts and errors to `log`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& log);

}  // namespace altproj
