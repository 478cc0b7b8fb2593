#pragma once

#include <array>
#include <optional>
#include <vector>

#include "collapse_oracle/linalg.hpp"
#include "collapse_oracle/state.hpp"

namespace collapse_oracle {

/// Threshold below which |<b_k|psi>|^2 counts as a vanishing component; the
/// known-psi theory requires all components nonzero and callers reduce the
/// dimension first.
inline constexpr double kZeroComponentTol = 1e-12;

/// Eigenvalues of the Helstrom operand within this (scaled) distance of zero
/// belong to the kernel projector rather than to the positive or negative
/// spectral subspace.
inline constexpr double kSpectrumZeroTol = 1e-9;

/// Self-adjoint operator with spectrum in [0, 1]; the "yes" outcome of a
/// yes-no experiment.
class Effect {
  public:
    /// Validates Hermiticity (1e-10) and spectrum in [-1e-10, 1 + 1e-10].
    static Effect checked(ComplexMatrix m);

    static Effect zero(int dim);
    static Effect identity(int dim);

    /// E for blind guessing: 0 when p <= 1/2, I otherwise.
    static Effect blind_guess(double p, int dim);

    /// I - |phi><phi|.
    static Effect projector_complement(const StateVector& phi);

    int dim() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }

  private:
    explicit Effect(ComplexMatrix m) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

/// Output of the optimal-discrimination solvers.
///
/// r_max = (1-p) + lambda_plus = p - lambda_minus, with lambda_plus /
/// lambda_minus the sums of positive / negative eigenvalues of the Helstrom
/// operand A. e_opt is the canonical minimal optimizer P^+_A; any E between
/// P^+_A and P^+_A + P^0_A is equally good. negative_eigvec is present
/// exactly when A has a single (simple) negative eigenvalue.
/// boundary_kappa_family marks the known-psi boundary p = d/(d+1), where a
/// one-parameter family of optimizers exists and e_opt picks kappa = 1.
struct DiscriminationResult {
    double r_max = 0.0;
    Effect e_opt;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    ComplexMatrix helstrom_operand;
    std::optional<StateVector> negative_eigvec;
    bool boundary_kappa_family = false;
};

/// Reliability of effect E for detecting basis collapse of a known psi:
/// p <psi|diag E|psi> + (1-p) <psi|I - E|psi>.
double reliability_known_psi(const StateVector& psi, double p, const Effect& e,
                             const CollapseBasis& basis);

/// Same with the initial state known only through its density matrix:
/// tr[rho (p diag E + (1-p)(I - E))].
double reliability_density(const DensityMatrix& rho, double p, const Effect& e,
                           const CollapseBasis& basis);

/// General two-density-matrix reliability 1 - p + tr[A E] with
/// A = p rho1 - (1-p) rho2.
double reliability_pair(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                        const Effect& e);

/// Optimal discrimination between rho1 (prior p) and rho2 (prior 1-p):
/// spectral split of A = p rho1 - (1-p) rho2.
DiscriminationResult helstrom(const DensityMatrix& rho1, const DensityMatrix& rho2, double p);

/// f_psi(z) = sum_k |psi_k|^2 / (z + |psi_k|^2); a strictly decreasing
/// bijection [0,inf) -> (0,d]. All components must be nonzero.
double f_psi(const StateVector& psi, double z, const CollapseBasis& basis);

/// Inverse of f_psi on (0, d]; |f(z) - u| converges below 1e-12.
double f_psi_inverse(const StateVector& psi, double u, const CollapseBasis& basis);

/// Maximal reliability and optimal effect for a known psi with all basis
/// components nonzero: r_max = p for p >= d/(d+1), otherwise
/// p (1 + f^-1_psi(p/(1-p))). Computed through the f_psi bijection, not
/// through the eigensolver.
DiscriminationResult optimal_known_psi(const StateVector& psi, double p,
                                       const CollapseBasis& basis);

/// Known-psi problem restricted to the basis components psi actually
/// populates. `index_map[i]` is the original index of reduced component i;
/// `degenerate` flags the one-dimensional residual where collapse changes
/// nothing and blind guessing is optimal.
struct DimensionReduction {
    StateVector state;
    CollapseBasis basis;
    std::vector<int> index_map;
    bool degenerate = false;
};

DimensionReduction reduce_dimension(const StateVector& psi, const CollapseBasis& basis,
                                    double tol = kZeroComponentTol);

/// Closed form for d = 2 (standard basis weights): p for p >= 2/3, else
/// 1/2 + 1/2 sqrt((1-2p)^2 + 4p(2-3p)|psi_1|^2 |psi_2|^2).
double rmax_2d_closed_form(const StateVector& psi, double p);

/// Optimal collapse detection for a qubit as a Stern-Gerlach experiment:
/// the measurement direction w is the Bloch vector of psi dilated along z
/// by 1 - p/(1-p), and chi is the "yes" spin state (Bloch vector -w/||w||).
struct SternGerlachResult {
    std::array<double, 3> direction;
    StateVector chi;
};

SternGerlachResult stern_gerlach_direction(const StateVector& psi, double p);

/// Easily computable bounds: max(p, 1 - p sum_k |psi_k|^4) from below,
/// max(p, 1 - p/d) and the dimension-independent delta bound from above
/// (delta = max_k |psi_k|^2).
struct ReliabilityBounds {
    double lower = 0.0;
    double upper = 0.0;
    double delta_upper = 0.0;
};

ReliabilityBounds rmax_bounds_known_psi(const StateVector& psi, double p);

/// The delta bound evaluated directly at (p, delta); exposed for sweeps.
double rmax_delta_upper_bound(double p, double delta);

/// Spectral upper bound on the maximal reliability for an unknown state
/// with density matrix rho, valid for p < d/(d+1):
/// sum_i p_i R^max_p(phi_i) over the eigenpairs of rho, each term evaluated
/// after reducing phi_i to its populated components.
double rmax_density_upper_bound(const DensityMatrix& rho, double p, const CollapseBasis& basis);

/// Probability thresholds outside which blind guessing is optimal:
/// r_max = 1 - p for p <= p_lo and r_max = p for p >= p_hi. Requires full
/// rank; for a rank-deficient collapse pair (rho1 = diag rho2) the
/// specialized thresholds are returned instead.
struct BlindGuessThresholds {
    double p_lo = 0.0;
    double p_hi = 1.0;
};

BlindGuessThresholds blind_guess_thresholds(const DensityMatrix& rho1, const DensityMatrix& rho2);
BlindGuessThresholds blind_guess_thresholds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                            const CollapseBasis& collapse_basis);

}  // namespace collapse_oracle
