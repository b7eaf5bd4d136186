#pragma once

#include "anisofem/triangulation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace anisofem {

struct CheckResult {
    std::string id;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    /// Multiplies every tolerance; 0 demands exact agreement.
    double tolerance_scale = 1.0;
    /// Lower-bound spread probes solve up to N = 512 and dominate the runtime.
    bool lemma_probes = true;
    /// Replaces the pattern C preset in the C signature check.
    std::optional<PatternSpec> pattern_c;
};

[[nodiscard]] std::vector<CheckResult> verify_stencils(const VerifyOptions& options = {});
[[nodiscard]] std::vector<CheckResult> verify_truncation(const VerifyOptions& options = {});
[[nodiscard]] std::vector<CheckResult> verify_lemmas(const VerifyOptions& options = {});
[[nodiscard]] std::vector<CheckResult> verify_metrics(const VerifyOptions& options = {});
[[nodiscard]] std::vector<CheckResult> verify_invariants(const VerifyOptions& options = {});

/// All groups above in order. Failures are reported, never thrown.
[[nodiscard]] std::vector<CheckResult> verify_suite(const VerifyOptions& options = {});

[[nodiscard]] bool all_passed(const std::vector<CheckResult>& results);

}  // namespace anisofem
