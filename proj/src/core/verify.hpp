#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cotypelab::verify {

struct SuiteReport {
    std::string suite;
    int cases = 0;
    int failures = 0;
    std::vector<std::string> messages;
    bool pass() const { return failures == 0; }
};

/// Named self-check suites over randomized instances.  Known names:
/// identities, symmetrization, sandwich, homogeneity, symmetry, triangle,
/// quality_monotone.  Deterministic for a fixed seed.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, int cases);

std::vector<std::string> suite_names();

}  // namespace cotypelab::verify
