#include "collapse_oracle/json_io.hpp"

#include <fstream>

namespace collapse_oracle {

namespace {

void extract_parts(const nlohmann::json& j, std::size_t expected, std::vector<double>& re,
                   std::vector<double>& im) {
    require(j.is_object() && j.contains("dim") && j.contains("re") && j.contains("im"),
            Errc::Parse, "expected an object with dim/re/im fields");
    re = j.at("re").get<std::vector<double>>();
    im = j.at("im").get<std::vector<double>>();
    require(re.size() == expected && im.size() == expected, Errc::Parse,
            "re/im length does not match dim");
}

std::vector<Complex> combine(const std::vector<double>& re, const std::vector<double>& im) {
    std::vector<Complex> out(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) out[i] = Complex(re[i], im[i]);
    return out;
}

nlohmann::json parts_json(int dim, const std::vector<Complex>& entries) {
    std::vector<double> re(entries.size()), im(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        re[i] = entries[i].real();
        im[i] = entries[i].imag();
    }
    return {{"dim", dim}, {"re", re}, {"im", im}};
}

}  // namespace

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    require(m.is_square(), Errc::NonSquare, "only square matrices serialize with a single dim");
    return parts_json(m.rows(), m.entries());
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    const int dim = j.at("dim").get<int>();
    require(dim >= 1, Errc::Parse, "dim must be positive");
    std::vector<double> re, im;
    extract_parts(j, static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), re, im);
    ComplexMatrix m(dim, dim, combine(re, im));
    require(m.all_finite(), Errc::InvariantViolation, "matrix has non-finite entries");
    return m;
}

nlohmann::json state_to_json(const StateVector& psi) {
    return parts_json(psi.dim(), psi.amplitudes());
}

StateVector state_from_json(const nlohmann::json& j) {
    const int dim = j.at("dim").get<int>();
    require(dim >= 1, Errc::Parse, "dim must be positive");
    std::vector<double> re, im;
    extract_parts(j, static_cast<std::size_t>(dim), re, im);
    return StateVector(combine(re, im));
}

nlohmann::json density_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

DensityMatrix density_from_json(const nlohmann::json& j) {
    return DensityMatrix::checked(matrix_from_json(j));
}

nlohmann::json effect_to_json(const Effect& e) { return matrix_to_json(e.matrix()); }

Effect effect_from_json(const nlohmann::json& j) { return Effect::checked(matrix_from_json(j)); }

nlohmann::json empirical_reliability_to_json(const EmpiricalReliability& r) {
    return {{"successes", r.successes}, {"trials", r.trials},   {"estimate", r.estimate},
            {"analytic", r.analytic},   {"z_score", r.z_score}};
}

nlohmann::json lambda_estimate_to_json(const LambdaEstimate& est) {
    return {{"fraction", est.fraction},
            {"std_error", est.std_error},
            {"n_samples", est.n_samples},
            {"p", est.p},
            {"dim", est.dim},
            {"conjecture_bound", est.conjecture_bound},
            {"p_is_half", est.p_is_half}};
}

nlohmann::json conjecture_scan_to_json(const ConjectureScanReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const LambdaScanEntry& entry : report.entries) {
        nlohmann::json e = lambda_estimate_to_json(entry.estimate);
        e["effect_index"] = entry.effect_index;
        e["effect_kind"] = entry.effect_kind;
        entries.push_back(std::move(e));
    }
    return {{"dim", report.dim},
            {"p_grid", report.p_grid},
            {"strategy", report.strategy},
            {"n_effects", report.n_effects},
            {"n_samples", report.n_samples},
            {"conjecture_bound", report.conjecture_bound},
            {"max_fraction", report.max_fraction},
            {"any_above_half", report.any_above_half},
            {"any_conjecture_violation", report.any_conjecture_violation},
            {"entries", std::move(entries)}};
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), Errc::Parse, "cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::Parse, "invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace collapse_oracle
