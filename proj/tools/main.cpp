// collapse-oracle: command line front end for the collapse-detection
// reliability computations. Subcommands: rmax, ellipse, helstrom, simulate,
// lambda, scenario.
//
// Exit codes: 0 success, 2 usage/parse error, 3 degenerate-input notice,
// 4 input invariant violation.

#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collapse_oracle/discrimination.hpp"
#include "collapse_oracle/json_io.hpp"
#include "collapse_oracle/montecarlo.hpp"
#include "collapse_oracle/scenario.hpp"

using namespace collapse_oracle;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitInvariant = 4;

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::Parse:
        case Errc::OutOfRange:
        case Errc::DimensionMismatch:
        case Errc::WeightMismatch:
        case Errc::NonSquare:
            return kExitParse;
        case Errc::InvariantViolation:
        case Errc::InvalidScenario:
        case Errc::NotHermitian:
        case Errc::NullState:
            return kExitInvariant;
        default:
            return 1;
    }
}

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// --- output plumbing --------------------------------------------------------

struct OutputOptions {
    std::string format = "table";
    std::string out_path;
    bool gnuplot = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--format", opts.format, "Output format: table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out_path, "Write output to a file instead of stdout");
    cmd->add_flag("--gnuplot", opts.gnuplot, "Prefix row output with a gnuplot script header");
}

/// --seed is a global flag; commands without any stochastic step accept it
/// for interface uniformity (their output never depends on it).
void add_inert_seed_option(CLI::App* cmd) {
    auto seed = std::make_shared<std::uint64_t>(2024);
    cmd->add_option("--seed", *seed, "RNG seed (unused by this deterministic command)");
}

class OutputSink {
  public:
    explicit OutputSink(const OutputOptions& opts) : opts_(opts) {
        if (!opts.out_path.empty()) {
            file_.open(opts.out_path);
            require(file_.good(), Errc::Parse, "cannot open output file: " + opts.out_path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    const OutputOptions& opts_;
    std::ofstream file_;
};

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void emit_rows(const OutputOptions& opts, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::string& gnuplot_ylabel) {
    OutputSink sink(opts);
    std::ostream& os = sink.stream();
    if (opts.gnuplot && opts.format != "json") {
        os << "# gnuplot script header; feed this file to gnuplot after uncommenting\n";
        os << "# set datafile separator ','\n";
        os << "# set xlabel '" << header[0] << "'\n";
        os << "# set ylabel '" << gnuplot_ylabel << "'\n";
        os << "# plot '-' using 1:2 with lines title '" << header[1] << "'\n";
    }
    if (opts.format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json obj;
            for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
            out.push_back(std::move(obj));
        }
        os << out.dump(2) << "\n";
    } else if (opts.format == "csv") {
        for (std::size_t i = 0; i < header.size(); ++i)
            os << (i ? "," : "") << csv_field(header[i]);
        os << "\r\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_field(shortest(row[i]));
            os << "\r\n";
        }
    } else {
        os << std::left;
        os.precision(10);
        for (std::size_t i = 0; i < header.size(); ++i) {
            os.width(16);
            os << header[i];
        }
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os.width(16);
                os << row[i];
            }
            os << "\n";
        }
    }
}

void emit_json(const OutputOptions& opts, const nlohmann::json& payload) {
    OutputSink sink(opts);
    sink.stream() << payload.dump(2) << "\n";
}

// --- spec parsing -----------------------------------------------------------

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        require(used == text.size(), Errc::Parse, "trailing characters in " + what);
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        raise(Errc::Parse, "cannot parse " + what + ": '" + text + "'");
    }
}

/// "a:b:s" (inclusive of endpoints within half a step) or a single value.
std::vector<double> parse_grid(const std::string& spec) {
    const auto first = spec.find(':');
    if (first == std::string::npos) return {parse_double(spec, "grid value")};
    const auto second = spec.find(':', first + 1);
    require(second != std::string::npos, Errc::Parse,
            "grid must be start:stop:step, got '" + spec + "'");
    const double start = parse_double(spec.substr(0, first), "grid start");
    const double stop = parse_double(spec.substr(first + 1, second - first - 1), "grid stop");
    const double step = parse_double(spec.substr(second + 1), "grid step");
    require(step > 0.0, Errc::Parse, "grid step must be positive");
    require(stop >= start, Errc::Parse, "grid stop must not precede start");
    std::vector<double> values;
    for (double v = start; v <= stop + 0.5 * step; v += step) {
        values.push_back(std::min(v, stop));
        require(values.size() <= 2000000, Errc::Parse, "grid has too many points");
    }
    require(!values.empty(), Errc::Parse, "empty grid");
    return values;
}

std::vector<double> parse_weight_list(const std::string& spec) {
    std::vector<double> weights;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double w = parse_double(item, "weight");
        require(w >= 0.0, Errc::Parse, "weights must be nonnegative");
        weights.push_back(w);
    }
    require(!weights.empty(), Errc::Parse, "empty weight list");
    return weights;
}

/// psi-spec: comma-separated |psi_k|^2 weights (auto-normalized),
/// "uniform" (requires --dim), or "@file.json" with a full complex vector.
StateVector parse_psi_spec(const std::string& spec, int dim) {
    if (!spec.empty() && spec.front() == '@') return state_from_json(load_json_file(spec.substr(1)));
    if (spec == "uniform") {
        require(dim >= 2, Errc::Parse, "psi-spec 'uniform' requires --dim >= 2");
        std::vector<Complex> amp(static_cast<std::size_t>(dim), Complex(1.0));
        return StateVector::normalized(std::move(amp));
    }
    const std::vector<double> weights = parse_weight_list(spec);
    require(weights.size() >= 2, Errc::Parse, "psi needs at least two components");
    double total = 0.0;
    for (double w : weights) total += w;
    require(total > 0.0, Errc::Parse, "psi weights sum to zero");
    std::vector<Complex> amp(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) amp[k] = std::sqrt(weights[k] / total);
    return StateVector::normalized(std::move(amp));
}

/// effect-spec: zero | identity | blind | optimal | complement | random |
/// @file.json. "optimal" and "complement" are derived from (psi, p);
/// "random" draws one spectral effect from the seeded stream.
Effect parse_effect_spec(const std::string& spec, int dim, const StateVector* psi, double p,
                         RngStream* rng) {
    if (!spec.empty() && spec.front() == '@') return effect_from_json(load_json_file(spec.substr(1)));
    if (spec == "zero") return Effect::zero(dim);
    if (spec == "identity") return Effect::identity(dim);
    if (spec == "blind") return Effect::blind_guess(p, dim);
    if (spec == "optimal") {
        require(psi != nullptr, Errc::Parse, "effect-spec 'optimal' needs a state");
        return optimal_known_psi(*psi, p, CollapseBasis::standard(dim)).e_opt;
    }
    if (spec == "complement") {
        require(psi != nullptr, Errc::Parse, "effect-spec 'complement' needs a state");
        return Effect::projector_complement(*psi);
    }
    if (spec == "random") {
        require(rng != nullptr, Errc::Parse, "effect-spec 'random' needs a seed");
        return sample_random_spectral_effect(dim, *rng);
    }
    raise(Errc::Parse, "unknown effect-spec '" + spec +
                           "' (expected zero|identity|blind|optimal|complement|random|@file)");
}

std::vector<ComplexMatrix> block_projectors(const std::string& blocks_spec, int dim) {
    const std::vector<double> raw = parse_weight_list(blocks_spec);
    std::vector<int> blocks;
    int total = 0;
    for (double b : raw) {
        const int n = static_cast<int>(b);
        require(n >= 1 && b == n, Errc::Parse, "--blocks entries must be positive integers");
        blocks.push_back(n);
        total += n;
    }
    require(total == dim, Errc::Parse, "--blocks must sum to the state dimension");
    std::vector<ComplexMatrix> projectors;
    int offset = 0;
    for (int n : blocks) {
        ComplexMatrix proj = ComplexMatrix::zero(dim, dim);
        for (int i = 0; i < n; ++i) proj(offset + i, offset + i) = 1.0;
        projectors.push_back(std::move(proj));
        offset += n;
    }
    return projectors;
}

CollapseBasis basis_from_file_or_standard(const std::string& path, int dim) {
    if (path.empty()) return CollapseBasis::standard(dim);
    return CollapseBasis::from_columns(matrix_from_json(load_json_file(path)));
}

nlohmann::json run_meta(std::uint64_t seed, double wall_ms) {
    return {{"seed", seed},
            {"stream", 0},
            {"chunk_size", kMonteCarloChunkSize},
            {"wall_time_ms", wall_ms}};
}

// --- subcommands ------------------------------------------------------------

int cmd_rmax(const std::string& psi_spec, int dim, const std::string& p_spec,
             const OutputOptions& out) {
    const StateVector psi = parse_psi_spec(psi_spec, dim);
    const std::vector<double> p_values = parse_grid(p_spec);
    for (double p : p_values)
        require(p >= 0.0 && p <= 1.0, Errc::Parse, "p values must lie in [0, 1]");

    const CollapseBasis basis = CollapseBasis::standard(psi.dim());
    const DimensionReduction reduced = reduce_dimension(psi, basis);

    std::vector<std::vector<double>> rows;
    for (double p : p_values) {
        double r_max;
        if (p == 0.0 || p == 1.0)
            r_max = 1.0;
        else if (reduced.degenerate)
            r_max = std::max(p, 1.0 - p);
        else
            r_max = optimal_known_psi(reduced.state, p, reduced.basis).r_max;
        const ReliabilityBounds bounds = rmax_bounds_known_psi(psi, p);
        rows.push_back(
            {p, r_max, bounds.lower, bounds.upper, bounds.delta_upper, std::max(p, 1.0 - p)});
    }
    emit_rows(out, {"p", "r_max", "lower", "upper", "delta_upper", "blind_guess"}, rows, "R");
    if (reduced.degenerate) {
        std::cerr << "note: psi occupies a single basis ray, so the collapsed and uncollapsed "
                     "states coincide; no experiment is more reliable than blind guessing\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

int cmd_ellipse(double p, const std::string& grid_spec, const OutputOptions& out) {
    require(p >= 0.0 && p <= 1.0, Errc::Parse, "p must lie in [0, 1]");
    std::vector<std::vector<double>> rows;
    for (double w : parse_grid(grid_spec)) {
        require(w >= 0.0 && w <= 1.0, Errc::Parse, "|psi_1|^2 grid must lie in [0, 1]");
        const StateVector psi = StateVector::normalized(
            {Complex(std::sqrt(w)), Complex(std::sqrt(1.0 - w))});
        rows.push_back({w, rmax_2d_closed_form(psi, p)});
    }
    emit_rows(out, {"psi1_sq", "r_max"}, rows, "R^max at fixed p");
    return kExitOk;
}

int cmd_helstrom(const std::string& rho1_path, const std::string& rho2_path, double p,
                 const OutputOptions& out) {
    const DensityMatrix rho1 = density_from_json(load_json_file(rho1_path));
    const DensityMatrix rho2 = density_from_json(load_json_file(rho2_path));
    require(p >= 0.0 && p <= 1.0, Errc::Parse, "p must lie in [0, 1]");
    const DiscriminationResult res = helstrom(rho1, rho2, p);

    std::optional<BlindGuessThresholds> thresholds;
    try {
        thresholds = blind_guess_thresholds(rho1, rho2);
    } catch (const Error& e) {
        if (e.code() != Errc::RankDeficient) throw;
    }

    nlohmann::json payload = {{"p", p},
                              {"r_max", res.r_max},
                              {"lambda_plus", res.lambda_plus},
                              {"lambda_minus", res.lambda_minus},
                              {"e_opt", effect_to_json(res.e_opt)}};
    if (thresholds) {
        payload["p_lo"] = thresholds->p_lo;
        payload["p_hi"] = thresholds->p_hi;
    } else {
        payload["p_lo"] = nullptr;
        payload["p_hi"] = nullptr;
    }
    if (out.format == "json" || out.format == "csv") {
        emit_json(out, payload);
    } else {
        OutputSink sink(out);
        std::ostream& os = sink.stream();
        os << "r_max        " << shortest(res.r_max) << "\n";
        os << "lambda_plus  " << shortest(res.lambda_plus) << "\n";
        os << "lambda_minus " << shortest(res.lambda_minus) << "\n";
        if (thresholds) {
            os << "p_lo         " << shortest(thresholds->p_lo) << "\n";
            os << "p_hi         " << shortest(thresholds->p_hi) << "\n";
        } else {
            os << "p_lo         n/a (rank-deficient, not a collapse pair)\n";
            os << "p_hi         n/a (rank-deficient, not a collapse pair)\n";
        }
        os << "e_opt:\n";
        const ComplexMatrix& m = res.e_opt.matrix();
        os.precision(6);
        for (int r = 0; r < m.rows(); ++r) {
            for (int c = 0; c < m.cols(); ++c)
                os << "  (" << m(r, c).real() << (m(r, c).imag() < 0 ? "" : "+")
                   << m(r, c).imag() << "i)";
            os << "\n";
        }
    }
    return kExitOk;
}

int cmd_simulate(const std::string& psi_spec, int dim, double p, const std::string& effect_spec,
                 std::int64_t trials, std::uint64_t seed, const std::string& scenario_kind,
                 const std::string& blocks_spec, const OutputOptions& out) {
    const StateVector psi = parse_psi_spec(psi_spec, dim);
    require(p >= 0.0 && p <= 1.0, Errc::Parse, "p must lie in [0, 1]");
    RngStream rng(seed);
    const Effect effect = parse_effect_spec(effect_spec, psi.dim(), &psi, p, &rng);

    std::optional<CollapseScenario> scenario;
    if (scenario_kind == "basis") {
        scenario = CollapseScenario::basis(p, CollapseBasis::standard(psi.dim()));
    } else if (scenario_kind == "subspaces") {
        require(!blocks_spec.empty(), Errc::Parse, "--scenario subspaces requires --blocks");
        scenario = CollapseScenario::subspaces(p, block_projectors(blocks_spec, psi.dim()));
    } else {
        raise(Errc::Parse, "unknown scenario '" + scenario_kind + "' (basis|subspaces)");
    }

    const auto start = std::chrono::steady_clock::now();
    const EmpiricalReliability res = simulate_reliability(psi, *scenario, effect, trials, rng);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    nlohmann::json payload = empirical_reliability_to_json(res);
    payload["meta"] = run_meta(seed, wall_ms);
    emit_json(out, payload);
    return kExitOk;
}

int cmd_lambda(bool scan, const std::string& effect_spec, double p, const std::string& p_grid,
               int dim, std::int64_t samples, int n_effects, const std::string& strategy_name,
               std::uint64_t seed, const OutputOptions& out) {
    RngStream rng(seed);
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json payload;
    if (scan) {
        EffectSampling strategy;
        if (strategy_name == "mixed")
            strategy = EffectSampling::Mixed;
        else if (strategy_name == "random-spectral")
            strategy = EffectSampling::RandomSpectral;
        else if (strategy_name == "projector-complement")
            strategy = EffectSampling::ProjectorComplement;
        else
            raise(Errc::Parse, "unknown strategy '" + strategy_name + "'");
        const auto report =
            conjecture_scan(dim, parse_grid(p_grid), strategy, n_effects, samples, rng);
        payload = conjecture_scan_to_json(report);
    } else {
        const Effect effect = parse_effect_spec(effect_spec, dim, nullptr, p, &rng);
        require(effect.dim() == dim, Errc::Parse, "effect dimension does not match --dim");
        payload = lambda_estimate_to_json(estimate_lambda(effect, p, samples, rng));
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    payload["meta"] = run_meta(seed, wall_ms);
    emit_json(out, payload);
    return kExitOk;
}

int cmd_scenario(int variant, const std::string& state_path, double p, int dim_s, int dim_t,
                 const std::string& basis_path, const std::string& blocks_spec,
                 const std::string& ops_path, bool unsharp, const OutputOptions& out) {
    require(p >= 0.0 && p <= 1.0, Errc::Parse, "p must lie in [0, 1]");
    require(!state_path.empty(), Errc::Parse, "--state @file.json is required");
    require(state_path.front() == '@', Errc::Parse, "--state expects @file.json");
    const StateVector psi = state_from_json(load_json_file(state_path.substr(1)));

    std::optional<CollapseScenario> scenario;
    switch (variant) {
        case 1:
            require(dim_s >= 2 && dim_t >= 1, Errc::Parse, "variant 1 needs --dim-s and --dim-t");
            scenario = CollapseScenario::factor_s_basis(
                p, dim_t, basis_from_file_or_standard(basis_path, dim_s));
            break;
        case 2:
            require(dim_s >= 2 && dim_t >= 2, Errc::Parse, "variant 2 needs --dim-s and --dim-t");
            scenario = CollapseScenario::factor_t_basis(
                p, dim_s, basis_from_file_or_standard(basis_path, dim_t));
            break;
        case 3:
            require(dim_s >= 2 && dim_t >= 1, Errc::Parse, "variant 3 needs --dim-s and --dim-t");
            scenario = CollapseScenario::joint_basis(
                p, dim_s, dim_t, basis_from_file_or_standard(basis_path, dim_s * dim_t));
            break;
        case 4: {
            std::vector<ComplexMatrix> ops;
            if (!ops_path.empty()) {
                const nlohmann::json j = load_json_file(ops_path);
                require(j.contains("ops") && j.at("ops").is_array(), Errc::Parse,
                        "--ops file needs an 'ops' array of matrices");
                for (const auto& item : j.at("ops")) ops.push_back(matrix_from_json(item));
            } else {
                require(!blocks_spec.empty(), Errc::Parse,
                        "variant 4 needs --blocks or --ops @file");
                ops = block_projectors(blocks_spec, psi.dim());
            }
            scenario = unsharp ? CollapseScenario::unsharp(p, std::move(ops))
                               : CollapseScenario::subspaces(p, std::move(ops));
            break;
        }
        default:
            raise(Errc::Parse, "variant must be 1, 2, 3 or 4");
    }

    const DensityMatrixPair pair = apply_collapse_channel(psi, *scenario);
    const DiscriminationResult res = helstrom(pair.rho1, pair.rho2, p);

    nlohmann::json payload = {{"variant", variant},
                              {"p", p},
                              {"r_max", res.r_max},
                              {"blind_guess", std::max(p, 1.0 - p)},
                              {"rho1", density_to_json(pair.rho1)},
                              {"rho2", density_to_json(pair.rho2)},
                              {"e_opt", effect_to_json(res.e_opt)}};
    if (out.format == "table") {
        OutputSink sink(out);
        std::ostream& os = sink.stream();
        os << "variant      " << variant << "\n";
        os << "r_max        " << shortest(res.r_max) << "\n";
        os << "blind_guess  " << shortest(std::max(p, 1.0 - p)) << "\n";
        os << "rho1         " << density_to_json(pair.rho1).dump() << "\n";
        os << "rho2         " << density_to_json(pair.rho2).dump() << "\n";
    } else {
        emit_json(out, payload);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability of experiments that detect wave-function collapse"};
    app.require_subcommand(1);

    std::function<int()> action;

    // rmax
    {
        auto* cmd = app.add_subcommand(
            "rmax", "Maximal reliability and bounds for a known state over a p grid");
        auto psi = std::make_shared<std::string>();
        auto p_spec = std::make_shared<std::string>();
        auto dim = std::make_shared<int>(0);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--psi", *psi, "State spec: weights 'w1,w2,...', 'uniform', or @file.json")
            ->required();
        cmd->add_option("--p", *p_spec, "Collapse probability or grid start:stop:step")->required();
        cmd->add_option("--dim", *dim, "Dimension (required for --psi uniform)");
        add_inert_seed_option(cmd);
        add_output_options(cmd, *out);
        cmd->callback([=, &action] {
            action = [=] { return cmd_rmax(*psi, *dim, *p_spec, *out); };
        });
    }

    // ellipse
    {
        auto* cmd = app.add_subcommand(
            "ellipse", "d = 2 maximal reliability as a function of |psi_1|^2 at fixed p");
        auto p = std::make_shared<double>(0.5);
        auto grid = std::make_shared<std::string>("0:1:0.01");
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--p", *p, "Collapse probability")->required();
        cmd->add_option("--grid", *grid, "Grid over |psi_1|^2 (start:stop:step)")
            ->capture_default_str();
        add_inert_seed_option(cmd);
        add_output_options(cmd, *out);
        cmd->callback([=, &action] {
            action = [=] { return cmd_ellipse(*p, *grid, *out); };
        });
    }

    // helstrom
    {
        auto* cmd = app.add_subcommand(
            "helstrom", "Optimal discrimination of two density matrices from JSON files");
        auto rho1 = std::make_shared<std::string>();
        auto rho2 = std::make_shared<std::string>();
        auto p = std::make_shared<double>();
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--rho1", *rho1, "Density matrix JSON file (collapsed hypothesis)")
            ->required();
        cmd->add_option("--rho2", *rho2, "Density matrix JSON file (uncollapsed hypothesis)")
            ->required();
        cmd->add_option("--p", *p, "Prior probability of rho1")->required();
        add_inert_seed_option(cmd);
        add_output_options(cmd, *out);
        cmd->callback([=, &action] {
            action = [=] { return cmd_helstrom(*rho1, *rho2, *p, *out); };
        });
    }

    // simulate
    {
        auto* cmd = app.add_subcommand(
            "simulate", "Monte Carlo reliability of a concrete experiment");
        auto psi = std::make_shared<std::string>();
        auto dim = std::make_shared<int>(0);
        auto p = std::make_shared<double>();
        auto effect = std::make_shared<std::string>("blind");
        auto trials = std::make_shared<std::int64_t>(100000);
        auto seed = std::make_shared<std::uint64_t>(2024);
        auto scenario = std::make_shared<std::string>("basis");
        auto blocks = std::make_shared<std::string>();
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--psi", *psi, "State spec")->required();
        cmd->add_option("--dim", *dim, "Dimension (for --psi uniform)");
        cmd->add_option("--p", *p, "Collapse probability")->required();
        cmd->add_option("--effect", *effect,
                        "Effect spec: zero|identity|blind|optimal|complement|@file.json")
            ->capture_default_str();
        cmd->add_option("--trials", *trials, "Number of trials")->capture_default_str();
        cmd->add_option("--seed", *seed, "RNG seed")->capture_default_str();
        cmd->add_option("--scenario", *scenario, "Collapse structure: basis or subspaces")
            ->capture_default_str();
        cmd->add_option("--blocks", *blocks, "Subspace block sizes, e.g. '2,2'");
        add_output_options(cmd, *out);
        cmd->callback([=, &action] {
            action = [=] {
                return cmd_simulate(*psi, *dim, *p, *effect, *trials, *seed, *scenario, *blocks,
                                    *out);
            };
        });
    }

    // lambda
    {
        auto* cmd = app.add_subcommand(
            "lambda", "Fraction of the sphere where an effect beats blind guessing");
        auto scan = std::make_shared<bool>(false);
        auto effect = std::make_shared<std::string>("random");
        auto p = std::make_shared<double>(0.3);
        auto p_grid = std::make_shared<std::string>("0.25:0.75:0.25");
        auto dim = std::make_shared<int>(2);
        auto samples = std::make_shared<std::int64_t>(100000);
        auto n_effects = std::make_shared<int>(50);
        auto strategy = std::make_shared<std::string>("mixed");
        auto seed = std::make_shared<std::uint64_t>(2024);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_flag("--scan", *scan, "Sweep sampled effects over a p grid");
        cmd->add_option("--effect", *effect, "Effect spec for single estimates")
            ->capture_default_str();
        cmd->add_option("--p", *p, "Collapse probability (single estimate)")
            ->capture_default_str();
        cmd->add_option("--p-grid", *p_grid, "p grid for --scan")->capture_default_str();
        cmd->add_option("--dim", *dim, "Hilbert space dimension")->capture_default_str();
        cmd->add_option("--samples", *samples, "Uniform states per estimate")
            ->capture_default_str();
        cmd->add_option("--n-effects", *n_effects, "Effects per scan")->capture_default_str();
        cmd->add_option("--strategy", *strategy,
                        "Effect sampling: mixed|random-spectral|projector-complement")
            ->capture_default_str();
        cmd->add_option("--seed", *seed, "RNG seed")->capture_default_str();
        add_output_options(cmd, *out);
        cmd->callback([=, &action] {
            action = [=] {
                return cmd_lambda(*scan, *effect, *p, *p_grid, *dim, *samples, *n_effects,
                                  *strategy, *seed, *out);
            };
        });
    }

    // scenario
    {
        auto* cmd = app.add_subcommand(
            "scenario", "Build one of the four structured collapse scenarios and solve it");
        auto variant = std::make_shared<int>();
        auto state = std::make_shared<std::string>();
        auto p = std::make_shared<double>();
        auto dim_s = std::make_shared<int>(0);
        auto dim_t = std::make_shared<int>(0);
        auto basis = std::make_shared<std::string>();
        auto blocks = std::make_shared<std::string>();
        auto ops = std::make_shared<std::string>();
        auto unsharp = std::make_shared<bool>(false);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--variant", *variant, "1: collapse on S; 2: on T; 3: joint basis; 4: subspaces")
            ->required();
        cmd->add_option("--state", *state, "Joint (or plain, variant 4) state: @file.json")
            ->required();
        cmd->add_option("--p", *p, "Collapse probability")->required();
        cmd->add_option("--dim-s", *dim_s, "Dimension of S");
        cmd->add_option("--dim-t", *dim_t, "Dimension of T");
        cmd->add_option("--basis", *basis, "Collapse basis file (columns); standard if omitted");
        cmd->add_option("--blocks", *blocks, "Variant 4: block sizes, e.g. '2,2'");
        cmd->add_option("--ops", *ops, "Variant 4: JSON file with an 'ops' matrix list");
        cmd->add_flag("--unsharp", *unsharp, "Variant 4: treat --ops as unsharp operators");
        add_inert_seed_option(cmd);
        add_output_options(cmd, *out);
        cmd->callback([=, &action] {
            action = [=] {
                return cmd_scenario(*variant, *state, *p, *dim_s, *dim_t, *basis, *blocks, *ops,
                                    *unsharp, *out);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
