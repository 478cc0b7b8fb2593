#include "collapse_oracle/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace collapse_oracle {

ComplexMatrix ComplexMatrix::outer(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    require(!a.empty() && !b.empty(), Errc::OutOfRange, "outer product of empty vectors");
    ComplexMatrix m(static_cast<int>(a.size()), static_cast<int>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = a[i] * std::conj(b[j]);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = std::conj(data_[i]);
    return m;
}

Complex ComplexMatrix::trace() const {
    require(is_square(), Errc::NonSquare, "trace of a non-square matrix");
    Complex t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
    require(is_square(), Errc::NonSquare, "hermitian part of a non-square matrix");
    ComplexMatrix m(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    require(is_square(), Errc::NonSquare, "hermiticity defect of a non-square matrix");
    double m = 0.0;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, Errc::DimensionMismatch,
            "matrix addition shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, Errc::DimensionMismatch,
            "matrix subtraction shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
    for (Complex& z : data_) z *= scalar;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), Errc::DimensionMismatch, "matrix product shape mismatch");
    ComplexMatrix m(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int k = 0; k < a.cols(); ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex(0.0, 0.0)) continue;
            for (int c = 0; c < b.cols(); ++c) m(r, c) += ark * b(k, c);
        }
    }
    return m;
}

std::vector<Complex> ComplexMatrix::apply(const std::vector<Complex>& v) const {
    require(static_cast<int>(v.size()) == cols_, Errc::DimensionMismatch,
            "matrix-vector shape mismatch");
    std::vector<Complex> out(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) {
        Complex acc = 0.0;
        for (int c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

Complex ComplexMatrix::quadratic_form(const std::vector<Complex>& u,
                                      const std::vector<Complex>& v) const {
    require(static_cast<int>(u.size()) == rows_ && static_cast<int>(v.size()) == cols_,
            Errc::DimensionMismatch, "quadratic form shape mismatch");
    Complex acc = 0.0;
    for (int r = 0; r < rows_; ++r) {
        Complex row = 0.0;
        for (int c = 0; c < cols_; ++c) row += (*this)(r, c) * v[c];
        acc += std::conj(u[r]) * row;
    }
    return acc;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, Errc::DimensionMismatch,
            "matrix comparison shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        m = std::max(m, std::abs(data_[i] - other.data_[i]));
    return m;
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.is_square() && b.is_square() && a.rows() == b.rows(), Errc::DimensionMismatch,
            "trace product shape mismatch");
    // tr(AB) = sum_{r,c} A(r,c) B(c,r)
    Complex t = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) t += a(r, c) * b(c, r);
    return t.real();
}

}  // namespace collapse_oracle
