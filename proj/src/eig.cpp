#include "collapse_oracle/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace collapse_oracle {

namespace {

constexpr double kHermitianTol = 1e-8;
constexpr double kOffDiagFactor = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

}  // namespace

std::vector<Complex> HermitianEigenDecomposition::eigenvector(int i) const {
    const int d = dim();
    std::vector<Complex> v(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) v[r] = eigenvectors(r, i);
    return v;
}

ComplexMatrix HermitianEigenDecomposition::reconstruct() const {
    const int d = dim();
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        const double lam = eigenvalues[i];
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                m(r, c) += lam * eigenvectors(r, i) * std::conj(eigenvectors(c, i));
    }
    return m;
}

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& input) {
    require(input.is_square(), Errc::NonSquare, "eigendecomposition needs a square matrix");
    require(input.all_finite(), Errc::InvariantViolation, "matrix has non-finite entries");
    require(input.hermiticity_defect() <= kHermitianTol, Errc::NotHermitian,
            "matrix is not Hermitian within tolerance");

    const int d = input.rows();
    ComplexMatrix a = input.hermitian_part();
    for (int i = 0; i < d; ++i) a(i, i) = Complex(a(i, i).real(), 0.0);

    ComplexMatrix v = ComplexMatrix::identity(d);
    const double stop = kOffDiagFactor * a.frobenius_norm();

    bool converged = off_diagonal_norm(a) <= stop;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (int i = 0; i < d - 1; ++i) {
            for (int j = i + 1; j < d; ++j) {
                const Complex b = a(i, j);
                const double babs = std::abs(b);
                if (babs == 0.0) continue;

                // Zero a(i,j) with a unitary rotation in the (i,j) plane.
                // The complex phase of the pivot folds into the rotation so
                // the 2x2 subproblem reduces to the real symmetric case.
                const Complex phase = b / babs;
                const double aii = a(i, i).real();
                const double ajj = a(j, j).real();
                // Small-magnitude root of t^2 - 2 tau t - 1 = 0, which zeroes
                // the pivot under this rotation convention.
                const double tau = (ajj - aii) / (2.0 * babs);
                const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex sp = s * phase;  // rotation entries: R_ij = -sp, R_ji = conj(sp)*...

                a(i, i) = Complex(aii + t * babs, 0.0);
                a(j, j) = Complex(ajj - t * babs, 0.0);
                a(i, j) = 0.0;
                a(j, i) = 0.0;

                for (int k = 0; k < d; ++k) {
                    if (k == i || k == j) continue;
                    const Complex aki = a(k, i);
                    const Complex akj = a(k, j);
                    const Complex new_ki = c * aki + s * std::conj(phase) * akj;
                    const Complex new_kj = -sp * aki + c * akj;
                    a(k, i) = new_ki;
                    a(i, k) = std::conj(new_ki);
                    a(k, j) = new_kj;
                    a(j, k) = std::conj(new_kj);
                }
                for (int k = 0; k < d; ++k) {
                    const Complex vki = v(k, i);
                    const Complex vkj = v(k, j);
                    v(k, i) = c * vki + s * std::conj(phase) * vkj;
                    v(k, j) = -sp * vki + c * vkj;
                }
            }
        }
        converged = off_diagonal_norm(a) <= stop;
    }
    require(converged, Errc::ConvergenceFailure, "Jacobi sweeps exceeded the iteration cap");

    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](int x, int y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigenDecomposition dec;
    dec.eigenvalues.resize(static_cast<std::size_t>(d));
    dec.eigenvectors = ComplexMatrix(d, d);
    for (int i = 0; i < d; ++i) {
        dec.eigenvalues[i] = a(order[i], order[i]).real();
        for (int r = 0; r < d; ++r) dec.eigenvectors(r, i) = v(r, order[i]);
    }
    return dec;
}

std::vector<std::pair<int, int>> eigenvalue_groups(const std::vector<double>& ascending,
                                                   double tol) {
    std::vector<std::pair<int, int>> groups;
    const int n = static_cast<int>(ascending.size());
    int begin = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || ascending[i] - ascending[i - 1] > tol) {
            groups.emplace_back(begin, i);
            begin = i;
        }
    }
    return groups;
}

ComplexMatrix spectral_projector(const HermitianEigenDecomposition& dec, int begin, int end) {
    const int d = dec.dim();
    require(0 <= begin && begin <= end && end <= d, Errc::OutOfRange,
            "spectral projector index range");
    ComplexMatrix proj = ComplexMatrix::zero(d, d);
    for (int i = begin; i < end; ++i) {
        const std::vector<Complex> v = dec.eigenvector(i);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) proj(r, c) += v[r] * std::conj(v[c]);
    }
    return proj;
}

}  // namespace collapse_oracle
