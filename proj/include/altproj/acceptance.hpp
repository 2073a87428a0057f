#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "altproj/instance_io.hpp"

namespace altproj {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    Seed seed = 20240611;
    /// Directory of *.inst fixtures; empty uses the built-in equivalents.
    std::string fixture_dir;
    /// Restrict to these criterion ids (empty = all).
    std::vector<int> only;
};

/// Seeded random family used across the battery: d in [2,12], N in {2,3,4}, ranks in [1,d-1].
std::vector<InstanceSpec> battery_instances(int count, Seed seed);

/// Fixture specs shipped with the repository (two lines, T = 0, block model, random, convex).
std::vector<std::pair<std::string, InstanceSpec>> builtin_fixtures();
std::vector<std::pair<std::string, InstanceSpec>> load_fixtures(const std::string& dir);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            std::ostream* progress = nullptr);

/// "PASS C01 two_subspace_law: detail".
std::string format_result(const CriterionResult& r);

}  // namespace altproj
