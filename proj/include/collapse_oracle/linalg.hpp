#pragma once

#include "collapse_oracle/matrix.hpp"
#include "collapse_oracle/state.hpp"

namespace collapse_oracle {

/// Diagonal part of A relative to the collapse basis:
/// sum_k |b_k><b_k| A |b_k><b_k|. Idempotent and trace-preserving.
ComplexMatrix diag_part(const ComplexMatrix& a, const CollapseBasis& basis);

/// Partial trace over the second tensor factor. A acts on S (x) T with
/// row index s * dim_t + t; the result acts on S alone and has the same
/// trace as A.
ComplexMatrix partial_trace_t(const ComplexMatrix& a, int dim_s, int dim_t);

}  // namespace collapse_oracle
