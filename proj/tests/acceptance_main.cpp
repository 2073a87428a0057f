// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <iostream>

#include "altproj/acceptance.hpp"

int main()
{
    altproj::AcceptanceOptions opt;
    opt.fixture_dir = ALTPROJ_FIXTURE_DIR;
    const auto results = altproj::run_acceptance(opt, &std::cout);
    int failed = 0;
    for (const auto& r : results)
        failed += r.passed ? 0 : 1;
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
