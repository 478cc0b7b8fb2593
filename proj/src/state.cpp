#include "collapse_oracle/state.hpp"

#include <cmath>

namespace collapse_oracle {

StateVector::StateVector(std::vector<Complex> amplitudes) : amp_(std::move(amplitudes)) {
    require(!amp_.empty(), Errc::OutOfRange, "state vector needs at least one amplitude");
    for (const Complex& z : amp_)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), Errc::InvariantViolation,
                "state vector has non-finite amplitudes");
    require(std::abs(norm() - 1.0) <= kUnitNormTol, Errc::InvariantViolation,
            "state vector is not normalized");
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
    double s = 0.0;
    for (const Complex& z : amplitudes) s += std::norm(z);
    const double n = std::sqrt(s);
    require(std::isfinite(n) && n > 1e-150, Errc::NullState, "cannot normalize a null vector");
    for (Complex& z : amplitudes) z /= n;
    return StateVector(std::move(amplitudes), Unchecked{});
}

StateVector StateVector::basis_state(int dim, int k) {
    require(dim >= 1 && k >= 0 && k < dim, Errc::OutOfRange, "basis state index");
    std::vector<Complex> amp(static_cast<std::size_t>(dim));
    amp[static_cast<std::size_t>(k)] = 1.0;
    return StateVector(std::move(amp), Unchecked{});
}

double StateVector::norm() const {
    double s = 0.0;
    for (const Complex& z : amp_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix StateVector::projector() const { return ComplexMatrix::outer(amp_, amp_); }

CollapseBasis CollapseBasis::standard(int dim) {
    require(dim >= 1, Errc::OutOfRange, "basis dimension");
    return CollapseBasis(ComplexMatrix::identity(dim), true);
}

CollapseBasis CollapseBasis::from_columns(ComplexMatrix columns) {
    require(columns.is_square(), Errc::NonSquare, "basis matrix must be square");
    require(columns.all_finite(), Errc::InvariantViolation, "basis has non-finite entries");
    const int d = columns.rows();
    // Gram = B^dagger B must be the identity within 1e-10.
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Complex g = 0.0;
            for (int r = 0; r < d; ++r) g += std::conj(columns(r, i)) * columns(r, j);
            const Complex expect = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            require(std::abs(g - expect) <= kUnitNormTol, Errc::InvariantViolation,
                    "basis columns are not orthonormal");
        }
    }
    bool standard = true;
    for (int i = 0; i < d && standard; ++i)
        for (int j = 0; j < d && standard; ++j)
            if (std::abs(columns(i, j) - (i == j ? Complex(1.0) : Complex(0.0))) != 0.0)
                standard = false;
    return CollapseBasis(std::move(columns), standard);
}

StateVector CollapseBasis::vector(int k) const {
    require(k >= 0 && k < dim(), Errc::OutOfRange, "basis vector index");
    std::vector<Complex> amp(static_cast<std::size_t>(dim()));
    for (int r = 0; r < dim(); ++r) amp[static_cast<std::size_t>(r)] = columns_(r, k);
    return StateVector::normalized(std::move(amp));
}

std::vector<Complex> CollapseBasis::coefficients(const StateVector& psi) const {
    require(psi.dim() == dim(), Errc::DimensionMismatch, "state/basis dimension mismatch");
    const int d = dim();
    std::vector<Complex> out(static_cast<std::size_t>(d));
    if (standard_) {
        out = psi.amplitudes();
        return out;
    }
    for (int k = 0; k < d; ++k) {
        Complex c = 0.0;
        for (int r = 0; r < d; ++r) c += std::conj(columns_(r, k)) * psi[r];
        out[static_cast<std::size_t>(k)] = c;
    }
    return out;
}

std::vector<double> CollapseBasis::weights(const StateVector& psi) const {
    const std::vector<Complex> coeff = coefficients(psi);
    std::vector<double> w(coeff.size());
    for (std::size_t k = 0; k < coeff.size(); ++k) w[k] = std::norm(coeff[k]);
    return w;
}

CollapseBasis CollapseBasis::rephased(const std::vector<double>& thetas) const {
    require(static_cast<int>(thetas.size()) == dim(), Errc::DimensionMismatch,
            "one phase per basis vector required");
    ComplexMatrix cols = columns_;
    for (int k = 0; k < dim(); ++k) {
        const Complex phase = std::polar(1.0, thetas[static_cast<std::size_t>(k)]);
        for (int r = 0; r < dim(); ++r) cols(r, k) *= phase;
    }
    return CollapseBasis::from_columns(std::move(cols));
}

DensityMatrix DensityMatrix::checked(ComplexMatrix m) {
    require(m.is_square(), Errc::NonSquare, "density matrix must be square");
    require(m.all_finite(), Errc::InvariantViolation, "density matrix has non-finite entries");
    require(m.hermiticity_defect() <= kDensityTol, Errc::InvariantViolation,
            "density matrix is not Hermitian");
    require(std::abs(m.trace() - Complex(1.0, 0.0)) <= kDensityTol, Errc::InvariantViolation,
            "density matrix trace is not 1");
    const HermitianEigenDecomposition dec = hermitian_eig(m);
    require(dec.eigenvalues.front() >= -kDensityTol, Errc::InvariantViolation,
            "density matrix is not positive semidefinite");
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    require(dim >= 1, Errc::OutOfRange, "dimension");
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= Complex(1.0 / dim, 0.0);
    return DensityMatrix(std::move(m));
}

}  // namespace collapse_oracle
