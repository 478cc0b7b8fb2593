#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "collapse_oracle/errors.hpp"

namespace collapse_oracle {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage. Small dimensions only (the
/// eigensolver is tuned for d up to a few hundred), so everything is a
/// plain value type with no view machinery.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
        require(rows > 0 && cols > 0, Errc::OutOfRange, "matrix dimensions must be positive");
    }

    ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        require(rows > 0 && cols > 0, Errc::OutOfRange, "matrix dimensions must be positive");
        require(data_.size() == static_cast<std::size_t>(rows) * cols, Errc::DimensionMismatch,
                "entry count does not match dimensions");
    }

    static ComplexMatrix zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim, dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    /// |a><b| for coefficient vectors a, b.
    static ComplexMatrix outer(const std::vector<Complex>& a, const std::vector<Complex>& b);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Complex& operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    const std::vector<Complex>& entries() const noexcept { return data_; }
    std::vector<Complex>& entries() noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    Complex trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    bool all_finite() const;

    /// (A + A^dagger)/2; requires a square matrix.
    ComplexMatrix hermitian_part() const;
    /// max |A - A^dagger| entry; requires a square matrix.
    double hermiticity_defect() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    /// A * v for a coefficient vector v.
    std::vector<Complex> apply(const std::vector<Complex>& v) const;

    /// <u|A|v>.
    Complex quadratic_form(const std::vector<Complex>& u, const std::vector<Complex>& v) const;

    double max_abs_diff(const ComplexMatrix& other) const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

/// Real part of tr(A * B); both square of equal dimension.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace collapse_oracle
