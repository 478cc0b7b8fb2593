#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collapse_oracle/discrimination.hpp"
#include "collapse_oracle/rng.hpp"
#include "collapse_oracle/scenario.hpp"

namespace collapse_oracle {

/// Samples are partitioned into chunks of this size; chunk i always draws
/// from substream i of the caller's stream, so results are independent of
/// worker count and scheduling.
inline constexpr std::int64_t kMonteCarloChunkSize = 4096;

/// Empirical reliability of a simulated yes-no experiment against its
/// analytic value. z_score is 0 when the analytic value is degenerate
/// (0 or 1).
struct EmpiricalReliability {
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    double estimate = 0.0;
    double analytic = 0.0;
    double z_score = 0.0;
};

/// Runs `trials` independent collapse-then-measure experiments: each trial
/// samples the collapse channel, then answers "yes" with probability
/// <psi'|E|psi'>, and counts a success when the answer matches whether the
/// collapse happened. Basis, Subspaces and Unsharp scenarios only.
EmpiricalReliability simulate_reliability(const StateVector& psi,
                                          const CollapseScenario& scenario, const Effect& e,
                                          std::int64_t trials, RngStream& rng);

/// Monte Carlo estimate of the sphere fraction where E beats blind guessing.
struct LambdaEstimate {
    double fraction = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    double p = 0.0;
    int dim = 0;
    double conjecture_bound = 0.0;
    /// At p = 1/2 blind guessing ties every effect on sphere average and
    /// the strict-inequality fraction needs a caveat in reports.
    bool p_is_half = false;
};

/// 1 - (1 - 1/d)^(d-1); approaches 1 - 1/e from below.
double lambda_conjecture_bound(int dim);

/// Fraction of Haar-uniform states psi with
/// reliability(psi, p, E) > max(p, 1-p), strict inequality.
LambdaEstimate estimate_lambda(const Effect& e, double p, std::int64_t n_samples, RngStream& rng);

enum class EffectSampling {
    RandomSpectral,        ///< Haar frame with iid uniform [0,1] eigenvalues.
    ProjectorComplement,   ///< I - |phi><phi| with phi Haar-uniform.
    Mixed,                 ///< Alternates between the two families.
};

const char* effect_sampling_name(EffectSampling s);

Effect sample_random_spectral_effect(int dim, RngStream& rng);
Effect sample_projector_complement_effect(int dim, RngStream& rng);

struct LambdaScanEntry {
    int effect_index = 0;
    std::string effect_kind;
    LambdaEstimate estimate;
};

/// Sweep over sampled effects and collapse probabilities, recording every
/// lambda estimate. Fractions above 1/2 and above the conjectured bound are
/// flagged, never treated as failures.
struct ConjectureScanReport {
    int dim = 0;
    std::vector<double> p_grid;
    std::string strategy;
    int n_effects = 0;
    std::int64_t n_samples = 0;
    double conjecture_bound = 0.0;
    double max_fraction = 0.0;
    bool any_above_half = false;
    bool any_conjecture_violation = false;  ///< fraction > bound + 4 std_error
    std::vector<LambdaScanEntry> entries;
};

ConjectureScanReport conjecture_scan(int dim, const std::vector<double>& p_grid,
                                     EffectSampling strategy, int n_effects,
                                     std::int64_t n_samples, RngStream& rng);

}  // namespace collapse_oracle
