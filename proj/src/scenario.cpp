#include "collapse_oracle/scenario.hpp"

#include <cmath>

namespace collapse_oracle {

namespace {

constexpr double kStructureTol = 1e-9;
constexpr double kBranchNormFloor = 1e-30;

void validate_probability(double p) {
    // 0 and 1 are accepted for simulation even though the discrimination
    // question is only interesting for 0 < p < 1.
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, Errc::OutOfRange,
            "collapse probability must lie in [0, 1]");
}

void validate_subspaces(const std::vector<ComplexMatrix>& projectors) {
    require(!projectors.empty(), Errc::InvalidScenario, "no subspace projectors given");
    const int d = projectors.front().rows();
    require(static_cast<int>(projectors.size()) < d, Errc::InvalidScenario,
            "subspace count K must be smaller than the dimension");
    ComplexMatrix sum = ComplexMatrix::zero(d, d);
    for (const ComplexMatrix& p : projectors) {
        require(p.is_square() && p.rows() == d, Errc::InvalidScenario,
                "projector dimension mismatch");
        require(p.hermiticity_defect() <= kStructureTol, Errc::InvalidScenario,
                "projector is not Hermitian");
        require((p * p).max_abs_diff(p) <= kStructureTol, Errc::InvalidScenario,
                "operator is not idempotent");
        sum += p;
    }
    for (std::size_t i = 0; i < projectors.size(); ++i)
        for (std::size_t j = i + 1; j < projectors.size(); ++j)
            require((projectors[i] * projectors[j]).max_abs() <= kStructureTol,
                    Errc::InvalidScenario, "projectors are not mutually orthogonal");
    require(sum.max_abs_diff(ComplexMatrix::identity(d)) <= kStructureTol, Errc::InvalidScenario,
            "projectors do not sum to the identity");
}

void validate_unsharp(const std::vector<ComplexMatrix>& operators) {
    require(!operators.empty(), Errc::InvalidScenario, "no unsharp operators given");
    const int d = operators.front().rows();
    ComplexMatrix sum_sq = ComplexMatrix::zero(d, d);
    for (const ComplexMatrix& p : operators) {
        require(p.is_square() && p.rows() == d, Errc::InvalidScenario,
                "operator dimension mismatch");
        require(p.hermiticity_defect() <= kStructureTol, Errc::InvalidScenario,
                "unsharp operator is not Hermitian");
        const HermitianEigenDecomposition dec = hermitian_eig(p);
        require(dec.eigenvalues.front() >= -kDensityTol, Errc::InvalidScenario,
                "unsharp operator is not positive");
        sum_sq += p * p;
    }
    require(sum_sq.max_abs_diff(ComplexMatrix::identity(d)) <= kStructureTol,
            Errc::InvalidScenario, "operators squared do not sum to the identity");
}

// <b_k (x) .|psi> for a basis vector of S: a vector in T.
std::vector<Complex> partial_inner_s(const ComplexMatrix& basis_cols, int k,
                                     const std::vector<Complex>& psi, int dim_s, int dim_t) {
    std::vector<Complex> out(static_cast<std::size_t>(dim_t));
    for (int t = 0; t < dim_t; ++t) {
        Complex acc = 0.0;
        for (int s = 0; s < dim_s; ++s)
            acc += std::conj(basis_cols(s, k)) * psi[static_cast<std::size_t>(s * dim_t + t)];
        out[static_cast<std::size_t>(t)] = acc;
    }
    return out;
}

// <.(x) b_j|psi> for a basis vector of T: a vector in S.
std::vector<Complex> partial_inner_t(const ComplexMatrix& basis_cols, int j,
                                     const std::vector<Complex>& psi, int dim_s, int dim_t) {
    std::vector<Complex> out(static_cast<std::size_t>(dim_s));
    for (int s = 0; s < dim_s; ++s) {
        Complex acc = 0.0;
        for (int t = 0; t < dim_t; ++t)
            acc += std::conj(basis_cols(t, j)) * psi[static_cast<std::size_t>(s * dim_t + t)];
        out[static_cast<std::size_t>(s)] = acc;
    }
    return out;
}

}  // namespace

CollapseScenario CollapseScenario::basis(double p, CollapseBasis b) {
    validate_probability(p);
    return CollapseScenario(p, BasisStructure{std::move(b)});
}

CollapseScenario CollapseScenario::factor_s_basis(double p, int dim_t, CollapseBasis basis_s) {
    validate_probability(p);
    require(dim_t >= 1, Errc::InvalidScenario, "dim_t must be positive");
    return CollapseScenario(p, FactorSBasisStructure{dim_t, std::move(basis_s)});
}

CollapseScenario CollapseScenario::factor_t_basis(double p, int dim_s, CollapseBasis basis_t) {
    validate_probability(p);
    require(dim_s >= 1, Errc::InvalidScenario, "dim_s must be positive");
    return CollapseScenario(p, FactorTBasisStructure{dim_s, std::move(basis_t)});
}

CollapseScenario CollapseScenario::joint_basis(double p, int dim_s, int dim_t,
                                               CollapseBasis basis_st) {
    validate_probability(p);
    require(dim_s >= 1 && dim_t >= 1, Errc::InvalidScenario, "factor dimensions must be positive");
    require(basis_st.dim() == dim_s * dim_t, Errc::InvalidScenario,
            "joint basis dimension is not dim_s * dim_t");
    return CollapseScenario(p, JointBasisStructure{dim_s, dim_t, std::move(basis_st)});
}

CollapseScenario CollapseScenario::subspaces(double p, std::vector<ComplexMatrix> projectors) {
    validate_probability(p);
    validate_subspaces(projectors);
    return CollapseScenario(p, SubspacesStructure{std::move(projectors)});
}

CollapseScenario CollapseScenario::unsharp(double p, std::vector<ComplexMatrix> operators) {
    validate_probability(p);
    validate_unsharp(operators);
    return CollapseScenario(p, UnsharpStructure{std::move(operators)});
}

int CollapseScenario::state_dim() const {
    struct Visitor {
        int operator()(const BasisStructure& s) const { return s.basis.dim(); }
        int operator()(const FactorSBasisStructure& s) const { return s.basis_s.dim() * s.dim_t; }
        int operator()(const FactorTBasisStructure& s) const { return s.dim_s * s.basis_t.dim(); }
        int operator()(const JointBasisStructure& s) const { return s.basis_st.dim(); }
        int operator()(const SubspacesStructure& s) const { return s.projectors.front().rows(); }
        int operator()(const UnsharpStructure& s) const { return s.operators.front().rows(); }
    };
    return std::visit(Visitor{}, structure_);
}

int CollapseScenario::system_dim() const {
    struct Visitor {
        int operator()(const BasisStructure& s) const { return s.basis.dim(); }
        int operator()(const FactorSBasisStructure& s) const { return s.basis_s.dim(); }
        int operator()(const FactorTBasisStructure& s) const { return s.dim_s; }
        int operator()(const JointBasisStructure& s) const { return s.dim_s; }
        int operator()(const SubspacesStructure& s) const { return s.projectors.front().rows(); }
        int operator()(const UnsharpStructure& s) const { return s.operators.front().rows(); }
    };
    return std::visit(Visitor{}, structure_);
}

DensityMatrixPair apply_collapse_channel(const StateVector& psi,
                                         const CollapseScenario& scenario) {
    require(psi.dim() == scenario.state_dim(), Errc::DimensionMismatch,
            "state dimension does not match the scenario");
    const std::vector<Complex>& amp = psi.amplitudes();

    if (const auto* s = scenario.get_if<BasisStructure>()) {
        const ComplexMatrix rho2 = psi.projector();
        return {DensityMatrix::checked(diag_part(rho2, s->basis)),
                DensityMatrix::checked(rho2)};
    }

    if (const auto* s = scenario.get_if<SubspacesStructure>()) {
        const ComplexMatrix rho2 = psi.projector();
        const int d = psi.dim();
        ComplexMatrix rho1 = ComplexMatrix::zero(d, d);
        for (const ComplexMatrix& p : s->projectors) {
            const std::vector<Complex> branch = p.apply(amp);
            rho1 += ComplexMatrix::outer(branch, branch);
        }
        return {DensityMatrix::checked(std::move(rho1)), DensityMatrix::checked(rho2)};
    }

    if (const auto* s = scenario.get_if<UnsharpStructure>()) {
        const ComplexMatrix rho2 = psi.projector();
        const int d = psi.dim();
        ComplexMatrix rho1 = ComplexMatrix::zero(d, d);
        for (const ComplexMatrix& p : s->operators) {
            const std::vector<Complex> branch = p.apply(amp);
            rho1 += ComplexMatrix::outer(branch, branch);
        }
        return {DensityMatrix::checked(std::move(rho1)), DensityMatrix::checked(rho2)};
    }

    if (const auto* s = scenario.get_if<FactorSBasisStructure>()) {
        const int ds = s->basis_s.dim();
        const int dt = s->dim_t;
        const ComplexMatrix rho2 = partial_trace_t(psi.projector(), ds, dt);
        // Collapsed branch: b_k on S with weight ||<b_k|psi_ST>||^2.
        ComplexMatrix rho1 = ComplexMatrix::zero(ds, ds);
        for (int k = 0; k < ds; ++k) {
            const std::vector<Complex> tk = partial_inner_s(s->basis_s.columns(), k, amp, ds, dt);
            double w = 0.0;
            for (const Complex& z : tk) w += std::norm(z);
            for (int r = 0; r < ds; ++r)
                for (int c = 0; c < ds; ++c)
                    rho1(r, c) +=
                        w * s->basis_s.columns()(r, k) * std::conj(s->basis_s.columns()(c, k));
        }
        return {DensityMatrix::checked(std::move(rho1)), DensityMatrix::checked(rho2)};
    }

    if (const auto* s = scenario.get_if<FactorTBasisStructure>()) {
        const int ds = s->dim_s;
        const int dt = s->basis_t.dim();
        const ComplexMatrix rho2 = partial_trace_t(psi.projector(), ds, dt);
        // Collapsed branch, computed through the T-basis branches rather
        // than as a partial trace; the two routes agreeing is the content
        // of the no-signaling statement for this scenario.
        ComplexMatrix rho1 = ComplexMatrix::zero(ds, ds);
        for (int j = 0; j < dt; ++j) {
            const std::vector<Complex> sj = partial_inner_t(s->basis_t.columns(), j, amp, ds, dt);
            rho1 += ComplexMatrix::outer(sj, sj);
        }
        return {DensityMatrix::checked(std::move(rho1)), DensityMatrix::checked(rho2)};
    }

    const auto* s = scenario.get_if<JointBasisStructure>();
    const int ds = s->dim_s;
    const int dt = s->dim_t;
    const ComplexMatrix rho_st = psi.projector();
    const ComplexMatrix rho2 = partial_trace_t(rho_st, ds, dt);
    const ComplexMatrix rho1 = partial_trace_t(diag_part(rho_st, s->basis_st), ds, dt);
    return {DensityMatrix::checked(rho1), DensityMatrix::checked(rho2)};
}

CollapseSampleOutcome sample_collapse(const StateVector& psi, const CollapseScenario& scenario,
                                      RngStream& rng) {
    require(psi.dim() == scenario.state_dim(), Errc::DimensionMismatch,
            "state dimension does not match the scenario");

    std::vector<double> weights;
    const auto* basis = scenario.get_if<BasisStructure>();
    const auto* subspaces = scenario.get_if<SubspacesStructure>();
    const auto* unsharp = scenario.get_if<UnsharpStructure>();
    require(basis || subspaces || unsharp, Errc::InvalidScenario,
            "sampling supports basis, subspace and unsharp collapse only");

    if (basis) {
        weights = basis->basis.weights(psi);
    } else {
        const std::vector<ComplexMatrix>& ops =
            subspaces ? subspaces->projectors : unsharp->operators;
        weights.reserve(ops.size());
        for (const ComplexMatrix& p : ops) {
            double w = 0.0;
            for (const Complex& z : p.apply(psi.amplitudes())) w += std::norm(z);
            weights.push_back(w);
        }
    }

    if (rng.next_double() >= scenario.p()) return {psi, false, std::nullopt};

    // Inverse CDF over the cumulative Born weights with a single draw.
    const double u = rng.next_double();
    double total = 0.0;
    for (double w : weights) total += w;
    double acc = 0.0;
    int branch = static_cast<int>(weights.size()) - 1;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (u * total < acc) {
            branch = static_cast<int>(k);
            break;
        }
    }
    require(weights[static_cast<std::size_t>(branch)] >= kBranchNormFloor, Errc::ZeroNormBranch,
            "sampled a branch of negligible weight");

    if (basis) {
        const std::vector<Complex> coeff = basis->basis.coefficients(psi);
        const Complex c = coeff[static_cast<std::size_t>(branch)];
        const Complex phase = c / std::abs(c);
        std::vector<Complex> amp(static_cast<std::size_t>(psi.dim()));
        for (int r = 0; r < psi.dim(); ++r)
            amp[static_cast<std::size_t>(r)] = phase * basis->basis.columns()(r, branch);
        return {StateVector::normalized(std::move(amp)), true, branch};
    }
    const std::vector<ComplexMatrix>& ops = subspaces ? subspaces->projectors : unsharp->operators;
    std::vector<Complex> amp = ops[static_cast<std::size_t>(branch)].apply(psi.amplitudes());
    return {StateVector::normalized(std::move(amp)), true, branch};
}

DensityMatrix density_from_ensemble(const std::vector<StateVector>& states,
                                    const std::vector<double>& weights) {
    require(!states.empty(), Errc::WeightMismatch, "empty ensemble");
    require(states.size() == weights.size(), Errc::WeightMismatch,
            "one weight per state required");
    const int d = states.front().dim();
    double total = 0.0;
    for (double w : weights) {
        require(std::isfinite(w) && w >= 0.0, Errc::WeightMismatch, "weights must be nonnegative");
        total += w;
    }
    require(std::abs(total - 1.0) <= kUnitNormTol, Errc::WeightMismatch, "weights must sum to 1");

    ComplexMatrix rho = ComplexMatrix::zero(d, d);
    for (std::size_t i = 0; i < states.size(); ++i) {
        require(states[i].dim() == d, Errc::DimensionMismatch, "ensemble states differ in dim");
        if (weights[i] == 0.0) continue;
        const std::vector<Complex>& a = states[i].amplitudes();
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) rho(r, c) += weights[i] * a[r] * std::conj(a[c]);
    }
    return DensityMatrix::checked(std::move(rho));
}

StateVector sample_uniform_state(int dim, RngStream& rng) {
    require(dim >= 2, Errc::OutOfRange, "uniform states need dimension >= 2");
    std::vector<Complex> amp(static_cast<std::size_t>(dim));
    for (Complex& z : amp) {
        const double re = rng.next_gaussian();
        const double im = rng.next_gaussian();
        z = Complex(re, im);
    }
    return StateVector::normalized(std::move(amp));
}

}  // namespace collapse_oracle
