#pragma once

#include <utility>
#include <vector>

#include "collapse_oracle/matrix.hpp"

namespace collapse_oracle {

/// Spectral data of a Hermitian matrix. Eigenvalues ascending; column i of
/// `eigenvectors` belongs to eigenvalue i. Columns are orthonormal.
struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    int dim() const { return eigenvectors.rows(); }

    std::vector<Complex> eigenvector(int i) const;

    /// V diag(lambda) V^dagger, for reconstruction checks.
    ComplexMatrix reconstruct() const;
};

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// The input is symmetrized as (A + A^dagger)/2 before iterating; asymmetry
/// beyond 1e-8 in max norm is rejected as NotHermitian. Sweeps stop when the
/// off-diagonal Frobenius norm falls below 1e-12 * ||A||_F, capped at 100
/// sweeps (ConvergenceFailure beyond that).
HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// Groups adjacent (ascending) eigenvalues whose gaps are at most `tol` and
/// returns [begin, end) index ranges. Spectral projectors should be formed
/// per group, never per vector, so degenerate clusters stay basis-independent.
std::vector<std::pair<int, int>> eigenvalue_groups(const std::vector<double>& ascending,
                                                   double tol = 1e-9);

/// Sum of v v^dagger over eigenvector columns [begin, end).
ComplexMatrix spectral_projector(const HermitianEigenDecomposition& dec, int begin, int end);

/// Projector onto the span of all eigenvectors whose eigenvalue satisfies
/// the predicate; returns the zero matrix when none do.
template <typename Pred>
ComplexMatrix spectral_projector_where(const HermitianEigenDecomposition& dec, Pred&& pred) {
    const int d = dec.dim();
    ComplexMatrix proj = ComplexMatrix::zero(d, d);
    for (int i = 0; i < d; ++i) {
        if (!pred(dec.eigenvalues[i])) continue;
        const std::vector<Complex> v = dec.eigenvector(i);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) proj(r, c) += v[r] * std::conj(v[c]);
    }
    return proj;
}

}  // namespace collapse_oracle
