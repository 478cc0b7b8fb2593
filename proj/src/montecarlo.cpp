#include "collapse_oracle/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace collapse_oracle {

namespace {

constexpr std::int64_t kChunkSize = kMonteCarloChunkSize;

int worker_cap() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("COLLAPSE_ORACLE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
    }
    return static_cast<int>(hw);
}

/// Runs `body(stream, chunk_length)` over fixed-size chunks; chunk i always
/// draws from base.substream(i), so the total count does not depend on the
/// number of workers or on scheduling.
template <typename Body>
std::int64_t chunked_count(std::int64_t n, const RngStream& base, const Body& body) {
    if (n <= 0) return 0;
    const std::int64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_chunks), 0);

    const auto run_chunk = [&](std::int64_t chunk) {
        RngStream stream = base.substream(static_cast<std::uint64_t>(chunk));
        const std::int64_t len = std::min(kChunkSize, n - chunk * kChunkSize);
        counts[static_cast<std::size_t>(chunk)] = body(stream, len);
    };

    const int workers = static_cast<int>(std::min<std::int64_t>(worker_cap(), n_chunks));
    if (workers <= 1) {
        for (std::int64_t chunk = 0; chunk < n_chunks; ++chunk) run_chunk(chunk);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::int64_t chunk = next.fetch_add(1); chunk < n_chunks;
                     chunk = next.fetch_add(1))
                    run_chunk(chunk);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    std::int64_t total = 0;
    for (std::int64_t c : counts) total += c;
    return total;
}

double binomial_z(double estimate, double analytic, std::int64_t trials) {
    if (analytic <= 0.0 || analytic >= 1.0) return 0.0;
    const double sigma = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(trials));
    return (estimate - analytic) / sigma;
}

}  // namespace

EmpiricalReliability simulate_reliability(const StateVector& psi,
                                          const CollapseScenario& scenario, const Effect& e,
                                          std::int64_t trials, RngStream& rng) {
    require(trials >= 1, Errc::OutOfRange, "at least one trial required");
    require(psi.dim() == scenario.state_dim() && psi.dim() == e.dim(), Errc::DimensionMismatch,
            "state, scenario and effect dimensions differ");

    const DensityMatrixPair pair = apply_collapse_channel(psi, scenario);
    const double analytic = reliability_pair(pair.rho1, pair.rho2, scenario.p(), e);

    const RngStream base = rng.split();
    const std::int64_t successes =
        chunked_count(trials, base, [&](RngStream& stream, std::int64_t len) {
            std::int64_t count = 0;
            for (std::int64_t i = 0; i < len; ++i) {
                const CollapseSampleOutcome outcome = sample_collapse(psi, scenario, stream);
                const double yes_prob = e.matrix()
                                            .quadratic_form(outcome.state.amplitudes(),
                                                            outcome.state.amplitudes())
                                            .real();
                const bool yes = stream.next_double() < yes_prob;
                if (yes == outcome.collapsed) ++count;
            }
            return count;
        });

    const double estimate = static_cast<double>(successes) / static_cast<double>(trials);
    return {successes, trials, estimate, analytic, binomial_z(estimate, analytic, trials)};
}

double lambda_conjecture_bound(int dim) {
    require(dim >= 2, Errc::OutOfRange, "dimension must be at least 2");
    return 1.0 - std::pow(1.0 - 1.0 / dim, dim - 1);
}

LambdaEstimate estimate_lambda(const Effect& e, double p, std::int64_t n_samples,
                               RngStream& rng) {
    require(n_samples >= 1, Errc::OutOfRange, "at least one sample required");
    require(std::isfinite(p) && p > 0.0 && p < 1.0, Errc::OutOfRange,
            "probability must lie in (0, 1)");
    const int d = e.dim();
    const CollapseBasis basis = CollapseBasis::standard(d);
    const double blind = std::max(p, 1.0 - p);

    const RngStream base = rng.split();
    const std::int64_t hits =
        chunked_count(n_samples, base, [&](RngStream& stream, std::int64_t len) {
            std::int64_t count = 0;
            for (std::int64_t i = 0; i < len; ++i) {
                const StateVector psi = sample_uniform_state(d, stream);
                if (reliability_known_psi(psi, p, e, basis) > blind) ++count;
            }
            return count;
        });

    const double fraction = static_cast<double>(hits) / static_cast<double>(n_samples);
    LambdaEstimate out;
    out.fraction = fraction;
    out.std_error = std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(n_samples));
    out.n_samples = n_samples;
    out.p = p;
    out.dim = d;
    out.conjecture_bound = lambda_conjecture_bound(d);
    out.p_is_half = p == 0.5;
    return out;
}

const char* effect_sampling_name(EffectSampling s) {
    switch (s) {
        case EffectSampling::RandomSpectral: return "random-spectral";
        case EffectSampling::ProjectorComplement: return "projector-complement";
        case EffectSampling::Mixed: return "mixed";
    }
    return "unknown";
}

Effect sample_random_spectral_effect(int dim, RngStream& rng) {
    require(dim >= 2, Errc::OutOfRange, "dimension must be at least 2");
    // Haar frame: Gaussian matrix, Gram-Schmidt on columns (twice, so the
    // Gram matrix is clean at the Effect validation tolerance).
    ComplexMatrix u(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) u(r, c) = Complex(rng.next_gaussian(), rng.next_gaussian());
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < dim; ++c) {
            for (int prev = 0; prev < c; ++prev) {
                Complex overlap = 0.0;
                for (int r = 0; r < dim; ++r) overlap += std::conj(u(r, prev)) * u(r, c);
                for (int r = 0; r < dim; ++r) u(r, c) -= overlap * u(r, prev);
            }
            double norm = 0.0;
            for (int r = 0; r < dim; ++r) norm += std::norm(u(r, c));
            norm = std::sqrt(norm);
            for (int r = 0; r < dim; ++r) u(r, c) /= norm;
        }
    }
    std::vector<double> eigenvalues(static_cast<std::size_t>(dim));
    for (double& lam : eigenvalues) lam = rng.next_double();

    ComplexMatrix e = ComplexMatrix::zero(dim, dim);
    for (int k = 0; k < dim; ++k)
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                e(r, c) += eigenvalues[static_cast<std::size_t>(k)] * u(r, k) * std::conj(u(c, k));
    return Effect::checked((e + e.adjoint()) * Complex(0.5, 0.0));
}

Effect sample_projector_complement_effect(int dim, RngStream& rng) {
    return Effect::projector_complement(sample_uniform_state(dim, rng));
}

ConjectureScanReport conjecture_scan(int dim, const std::vector<double>& p_grid,
                                     EffectSampling strategy, int n_effects,
                                     std::int64_t n_samples, RngStream& rng) {
    require(dim >= 2, Errc::OutOfRange, "dimension must be at least 2");
    require(n_effects >= 1, Errc::OutOfRange, "at least one effect required");
    require(!p_grid.empty(), Errc::OutOfRange, "empty probability grid");

    ConjectureScanReport report;
    report.dim = dim;
    report.p_grid = p_grid;
    report.strategy = effect_sampling_name(strategy);
    report.n_effects = n_effects;
    report.n_samples = n_samples;
    report.conjecture_bound = lambda_conjecture_bound(dim);

    for (int idx = 0; idx < n_effects; ++idx) {
        EffectSampling kind = strategy;
        if (strategy == EffectSampling::Mixed)
            kind = (idx % 2 == 0) ? EffectSampling::RandomSpectral
                                  : EffectSampling::ProjectorComplement;
        RngStream effect_stream = rng.split();
        const Effect e = (kind == EffectSampling::RandomSpectral)
                             ? sample_random_spectral_effect(dim, effect_stream)
                             : sample_projector_complement_effect(dim, effect_stream);
        for (double p : p_grid) {
            LambdaScanEntry entry;
            entry.effect_index = idx;
            entry.effect_kind = effect_sampling_name(kind);
            entry.estimate = estimate_lambda(e, p, n_samples, rng);
            const LambdaEstimate& est = entry.estimate;
            report.max_fraction = std::max(report.max_fraction, est.fraction);
            if (est.fraction > 0.5) report.any_above_half = true;
            if (est.fraction > report.conjecture_bound + 4.0 * est.std_error)
                report.any_conjecture_violation = true;
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

}  // namespace collapse_oracle
