// pybind11 bindings: numpy-facing wrappers over the discrimination,
// model and montecarlo operations. Vectors are 1-d complex128 arrays,
// operators are square 2-d complex128 arrays; the collapse basis is the
// standard basis throughout this layer.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "collapse_oracle/discrimination.hpp"
#include "collapse_oracle/linalg.hpp"
#include "collapse_oracle/montecarlo.hpp"
#include "collapse_oracle/scenario.hpp"

namespace py = pybind11;
using namespace collapse_oracle;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix matrix_from_numpy(const ComplexArray& arr) {
    require(arr.ndim() == 2, Errc::DimensionMismatch, "expected a 2-d array");
    const int rows = static_cast<int>(arr.shape(0));
    const int cols = static_cast<int>(arr.shape(1));
    ComplexMatrix m(rows, cols);
    auto view = arr.unchecked<2>();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = view(r, c);
    return m;
}

py::array_t<Complex> numpy_from_matrix(const ComplexMatrix& m) {
    py::array_t<Complex> arr({m.rows(), m.cols()});
    auto view = arr.mutable_unchecked<2>();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
    return arr;
}

std::vector<Complex> vector_from_numpy(const ComplexArray& arr) {
    require(arr.ndim() == 1, Errc::DimensionMismatch, "expected a 1-d array");
    auto view = arr.unchecked<1>();
    std::vector<Complex> out(static_cast<std::size_t>(arr.shape(0)));
    for (py::ssize_t i = 0; i < arr.shape(0); ++i) out[static_cast<std::size_t>(i)] = view(i);
    return out;
}

py::array_t<Complex> numpy_from_vector(const std::vector<Complex>& v) {
    py::array_t<Complex> arr(static_cast<py::ssize_t>(v.size()));
    auto view = arr.mutable_unchecked<1>();
    for (std::size_t i = 0; i < v.size(); ++i) view(static_cast<py::ssize_t>(i)) = v[i];
    return arr;
}

StateVector state_from_numpy(const ComplexArray& arr) {
    return StateVector(vector_from_numpy(arr));
}

py::dict dict_from_result(const DiscriminationResult& res) {
    py::dict out;
    out["r_max"] = res.r_max;
    out["lambda_plus"] = res.lambda_plus;
    out["lambda_minus"] = res.lambda_minus;
    out["e_opt"] = numpy_from_matrix(res.e_opt.matrix());
    out["helstrom_operand"] = numpy_from_matrix(res.helstrom_operand);
    out["negative_eigvec"] = res.negative_eigvec
                                 ? py::object(numpy_from_vector(res.negative_eigvec->amplitudes()))
                                 : py::object(py::none());
    out["boundary_kappa_family"] = res.boundary_kappa_family;
    return out;
}

py::dict dict_from_lambda(const LambdaEstimate& est) {
    py::dict out;
    out["fraction"] = est.fraction;
    out["std_error"] = est.std_error;
    out["n_samples"] = est.n_samples;
    out["p"] = est.p;
    out["dim"] = est.dim;
    out["conjecture_bound"] = est.conjecture_bound;
    out["p_is_half"] = est.p_is_half;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Maximal reliability of experiments detecting wave-function collapse";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "hermitian_eig",
        [](const ComplexArray& a) {
            const auto dec = hermitian_eig(matrix_from_numpy(a));
            return py::make_tuple(py::cast(dec.eigenvalues), numpy_from_matrix(dec.eigenvectors));
        },
        py::arg("a"), "Eigenvalues (ascending) and orthonormal eigenvector columns.");

    m.def(
        "diag_part",
        [](const ComplexArray& a) {
            const ComplexMatrix m = matrix_from_numpy(a);
            return numpy_from_matrix(diag_part(m, CollapseBasis::standard(m.rows())));
        },
        py::arg("a"), "Diagonal part relative to the standard basis.");

    m.def(
        "partial_trace_t",
        [](const ComplexArray& a, int dim_s, int dim_t) {
            return numpy_from_matrix(partial_trace_t(matrix_from_numpy(a), dim_s, dim_t));
        },
        py::arg("a"), py::arg("dim_s"), py::arg("dim_t"));

    m.def(
        "reliability_known_psi",
        [](const ComplexArray& psi, double p, const ComplexArray& effect) {
            const StateVector state = state_from_numpy(psi);
            return reliability_known_psi(state, p, Effect::checked(matrix_from_numpy(effect)),
                                         CollapseBasis::standard(state.dim()));
        },
        py::arg("psi"), py::arg("p"), py::arg("effect"));

    m.def(
        "reliability_density",
        [](const ComplexArray& rho, double p, const ComplexArray& effect) {
            const DensityMatrix density = DensityMatrix::checked(matrix_from_numpy(rho));
            return reliability_density(density, p, Effect::checked(matrix_from_numpy(effect)),
                                       CollapseBasis::standard(density.dim()));
        },
        py::arg("rho"), py::arg("p"), py::arg("effect"));

    m.def(
        "helstrom",
        [](const ComplexArray& rho1, const ComplexArray& rho2, double p) {
            return dict_from_result(helstrom(DensityMatrix::checked(matrix_from_numpy(rho1)),
                                             DensityMatrix::checked(matrix_from_numpy(rho2)), p));
        },
        py::arg("rho1"), py::arg("rho2"), py::arg("p"));

    m.def(
        "optimal_known_psi",
        [](const ComplexArray& psi, double p) {
            const StateVector state = state_from_numpy(psi);
            return dict_from_result(
                optimal_known_psi(state, p, CollapseBasis::standard(state.dim())));
        },
        py::arg("psi"), py::arg("p"));

    m.def(
        "collapse_pair",
        [](const ComplexArray& psi, double p) {
            const StateVector state = state_from_numpy(psi);
            const auto pair = apply_collapse_channel(
                state, CollapseScenario::basis(p, CollapseBasis::standard(state.dim())));
            return py::make_tuple(numpy_from_matrix(pair.rho1.matrix()),
                                  numpy_from_matrix(pair.rho2.matrix()));
        },
        py::arg("psi"), py::arg("p"),
        "(rho1, rho2) for basis collapse of a known state.");

    m.def(
        "rmax_2d_closed_form",
        [](const ComplexArray& psi, double p) {
            return rmax_2d_closed_form(state_from_numpy(psi), p);
        },
        py::arg("psi"), py::arg("p"));

    m.def(
        "rmax_bounds_known_psi",
        [](const ComplexArray& psi, double p) {
            const auto bounds = rmax_bounds_known_psi(state_from_numpy(psi), p);
            return py::make_tuple(bounds.lower, bounds.upper, bounds.delta_upper);
        },
        py::arg("psi"), py::arg("p"));

    m.def(
        "rmax_density_upper_bound",
        [](const ComplexArray& rho, double p) {
            const DensityMatrix density = DensityMatrix::checked(matrix_from_numpy(rho));
            return rmax_density_upper_bound(density, p, CollapseBasis::standard(density.dim()));
        },
        py::arg("rho"), py::arg("p"));

    m.def(
        "blind_guess_thresholds",
        [](const ComplexArray& rho1, const ComplexArray& rho2) {
            const auto th =
                blind_guess_thresholds(DensityMatrix::checked(matrix_from_numpy(rho1)),
                                       DensityMatrix::checked(matrix_from_numpy(rho2)));
            return py::make_tuple(th.p_lo, th.p_hi);
        },
        py::arg("rho1"), py::arg("rho2"));

    m.def(
        "stern_gerlach_direction",
        [](const ComplexArray& psi, double p) {
            const auto res = stern_gerlach_direction(state_from_numpy(psi), p);
            return py::make_tuple(py::cast(res.direction),
                                  numpy_from_vector(res.chi.amplitudes()));
        },
        py::arg("psi"), py::arg("p"));

    m.def(
        "f_psi",
        [](const ComplexArray& psi, double z) {
            const StateVector state = state_from_numpy(psi);
            return f_psi(state, z, CollapseBasis::standard(state.dim()));
        },
        py::arg("psi"), py::arg("z"));

    m.def(
        "f_psi_inverse",
        [](const ComplexArray& psi, double u) {
            const StateVector state = state_from_numpy(psi);
            return f_psi_inverse(state, u, CollapseBasis::standard(state.dim()));
        },
        py::arg("psi"), py::arg("u"));

    m.def(
        "sample_uniform_state",
        [](int dim, std::uint64_t seed, std::uint64_t stream) {
            RngStream rng(seed, stream);
            return numpy_from_vector(sample_uniform_state(dim, rng).amplitudes());
        },
        py::arg("dim"), py::arg("seed"), py::arg("stream") = 0);

    m.def(
        "simulate_reliability",
        [](const ComplexArray& psi, double p, const ComplexArray& effect, std::int64_t trials,
           std::uint64_t seed) {
            const StateVector state = state_from_numpy(psi);
            RngStream rng(seed);
            const auto res = simulate_reliability(
                state, CollapseScenario::basis(p, CollapseBasis::standard(state.dim())),
                Effect::checked(matrix_from_numpy(effect)), trials, rng);
            py::dict out;
            out["successes"] = res.successes;
            out["trials"] = res.trials;
            out["estimate"] = res.estimate;
            out["analytic"] = res.analytic;
            out["z_score"] = res.z_score;
            return out;
        },
        py::arg("psi"), py::arg("p"), py::arg("effect"), py::arg("trials"), py::arg("seed"));

    m.def(
        "estimate_lambda",
        [](const ComplexArray& effect, double p, std::int64_t n_samples, std::uint64_t seed) {
            RngStream rng(seed);
            return dict_from_lambda(
                estimate_lambda(Effect::checked(matrix_from_numpy(effect)), p, n_samples, rng));
        },
        py::arg("effect"), py::arg("p"), py::arg("n_samples"), py::arg("seed"));

    m.def("lambda_conjecture_bound", &lambda_conjecture_bound, py::arg("dim"));

    m.def(
        "conjecture_scan",
        [](int dim, const std::vector<double>& p_grid, const std::string& strategy, int n_effects,
           std::int64_t n_samples, std::uint64_t seed) {
            EffectSampling sampling = EffectSampling::Mixed;
            if (strategy == "random-spectral") sampling = EffectSampling::RandomSpectral;
            else if (strategy == "projector-complement")
                sampling = EffectSampling::ProjectorComplement;
            else
                require(strategy == "mixed", Errc::Parse, "unknown strategy: " + strategy);
            RngStream rng(seed);
            const auto report = conjecture_scan(dim, p_grid, sampling, n_effects, n_samples, rng);
            py::dict out;
            out["dim"] = report.dim;
            out["strategy"] = report.strategy;
            out["conjecture_bound"] = report.conjecture_bound;
            out["max_fraction"] = report.max_fraction;
            out["any_above_half"] = report.any_above_half;
            out["any_conjecture_violation"] = report.any_conjecture_violation;
            py::list entries;
            for (const auto& entry : report.entries) {
                py::dict e = dict_from_lambda(entry.estimate);
                e["effect_index"] = entry.effect_index;
                e["effect_kind"] = entry.effect_kind;
                entries.append(std::move(e));
            }
            out["entries"] = std::move(entries);
            return out;
        },
        py::arg("dim"), py::arg("p_grid"), py::arg("strategy"), py::arg("n_effects"),
        py::arg("n_samples"), py::arg("seed"));
}
