#pragma once

#include <vector>

#include "collapse_oracle/eig.hpp"
#include "collapse_oracle/matrix.hpp"

namespace collapse_oracle {

inline constexpr double kUnitNormTol = 1e-10;
inline constexpr double kDensityTol = 1e-10;

/// Unit vector in a d-dimensional complex Hilbert space.
class StateVector {
  public:
    /// Validates ||psi|| = 1 within 1e-10.
    explicit StateVector(std::vector<Complex> amplitudes);

    /// Normalizes the given amplitudes; NullState if the norm is negligible.
    static StateVector normalized(std::vector<Complex> amplitudes);

    static StateVector basis_state(int dim, int k);

    int dim() const noexcept { return static_cast<int>(amp_.size()); }
    const std::vector<Complex>& amplitudes() const noexcept { return amp_; }
    const Complex& operator[](int k) const { return amp_[static_cast<std::size_t>(k)]; }

    double norm() const;

    /// |psi><psi|.
    ComplexMatrix projector() const;

  private:
    struct Unchecked {};
    StateVector(std::vector<Complex> amplitudes, Unchecked) : amp_(std::move(amplitudes)) {}

    std::vector<Complex> amp_;
};

/// Orthonormal basis b_1..b_d, stored as matrix columns. Only the rays
/// C b_k matter physically; everything downstream is invariant under
/// per-vector phase changes.
class CollapseBasis {
  public:
    static CollapseBasis standard(int dim);

    /// Columns of `columns` are the basis vectors; Gram matrix must equal
    /// the identity within 1e-10.
    static CollapseBasis from_columns(ComplexMatrix columns);

    int dim() const noexcept { return columns_.rows(); }
    bool is_standard() const noexcept { return standard_; }
    const ComplexMatrix& columns() const noexcept { return columns_; }

    StateVector vector(int k) const;

    /// <b_k|psi> for all k.
    std::vector<Complex> coefficients(const StateVector& psi) const;

    /// |<b_k|psi>|^2 for all k.
    std::vector<double> weights(const StateVector& psi) const;

    /// Basis {e^{i theta_k} b_k}; physically equivalent to this one.
    CollapseBasis rephased(const std::vector<double>& thetas) const;

  private:
    CollapseBasis(ComplexMatrix columns, bool standard)
        : columns_(std::move(columns)), standard_(standard) {}

    ComplexMatrix columns_;
    bool standard_ = false;
};

/// Hermitian, positive-semidefinite, unit-trace operator.
class DensityMatrix {
  public:
    /// Validates Hermiticity (1e-10), eigenvalues >= -1e-10 and unit trace
    /// (1e-10).
    static DensityMatrix checked(ComplexMatrix m);

    static DensityMatrix pure(const StateVector& psi);

    static DensityMatrix maximally_mixed(int dim);

    int dim() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }

    HermitianEigenDecomposition eig() const { return hermitian_eig(m_); }

  private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

}  // namespace collapse_oracle
