#include "collapse_oracle/linalg.hpp"

namespace collapse_oracle {

ComplexMatrix diag_part(const ComplexMatrix& a, const CollapseBasis& basis) {
    require(a.is_square(), Errc::NonSquare, "diag_part needs a square matrix");
    require(a.rows() == basis.dim(), Errc::DimensionMismatch, "matrix/basis dimension mismatch");
    const int d = a.rows();

    if (basis.is_standard()) {
        ComplexMatrix out = ComplexMatrix::zero(d, d);
        for (int k = 0; k < d; ++k) out(k, k) = a(k, k);
        return out;
    }

    const ComplexMatrix& b = basis.columns();
    ComplexMatrix out = ComplexMatrix::zero(d, d);
    for (int k = 0; k < d; ++k) {
        // <b_k|A|b_k>
        Complex diag = 0.0;
        for (int r = 0; r < d; ++r) {
            Complex row = 0.0;
            for (int c = 0; c < d; ++c) row += a(r, c) * b(c, k);
            diag += std::conj(b(r, k)) * row;
        }
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) out(r, c) += diag * b(r, k) * std::conj(b(c, k));
    }
    return out;
}

ComplexMatrix partial_trace_t(const ComplexMatrix& a, int dim_s, int dim_t) {
    require(dim_s >= 1 && dim_t >= 1, Errc::OutOfRange, "tensor factor dimensions");
    require(a.is_square(), Errc::NonSquare, "partial trace needs a square matrix");
    require(a.rows() == dim_s * dim_t, Errc::DimensionMismatch,
            "matrix dimension is not dim_s * dim_t");
    ComplexMatrix out(dim_s, dim_s);
    for (int s1 = 0; s1 < dim_s; ++s1) {
        for (int s2 = 0; s2 < dim_s; ++s2) {
            Complex acc = 0.0;
            for (int t = 0; t < dim_t; ++t) acc += a(s1 * dim_t + t, s2 * dim_t + t);
            out(s1, s2) = acc;
        }
    }
    return out;
}

}  // namespace collapse_oracle
