#include "collapse_oracle/discrimination.hpp"

#include <algorithm>
#include <cmath>

namespace collapse_oracle {

namespace {

constexpr double kEffectSpectrumTol = 1e-10;
constexpr double kBoundaryTol = 1e-12;
constexpr double kFInverseTol = 1e-12;
constexpr double kFullRankTol = 1e-10;
constexpr double kCollapsePairTol = 1e-9;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void validate_probability_01(double p) {
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, Errc::OutOfRange,
            "probability must lie in [0, 1]");
}

void validate_probability_open(double p) {
    require(std::isfinite(p) && p > 0.0 && p < 1.0, Errc::OutOfRange,
            "probability must lie in (0, 1)");
}

/// -1 below the known-psi boundary p = d/(d+1), 0 at it, +1 above.
int classify_boundary(double p, int d) {
    const double t = p * (d + 1) - d;
    if (std::abs(t) <= kBoundaryTol) return 0;
    return t > 0.0 ? 1 : -1;
}

std::vector<double> nonzero_weights(const StateVector& psi, const CollapseBasis& basis) {
    std::vector<double> w = basis.weights(psi);
    for (double wk : w)
        require(wk > kZeroComponentTol, Errc::ZeroComponent,
                "psi has a vanishing component in the collapse basis; reduce the dimension first");
    return w;
}

double f_of_weights(const std::vector<double>& w, double z) {
    double s = 0.0;
    for (double wk : w) s += wk / (z + wk);
    return s;
}

double f_inverse_of_weights(const std::vector<double>& w, double u) {
    const int d = static_cast<int>(w.size());
    require(u > 0.0 && u <= static_cast<double>(d), Errc::OutOfRange,
            "f_psi inverse argument must lie in (0, d]");

    double lo = 0.0;
    if (std::abs(f_of_weights(w, lo) - u) <= kFInverseTol) return lo;
    double hi = 1.0;
    while (f_of_weights(w, hi) >= u) {
        lo = hi;
        hi *= 2.0;
        require(hi < 1e300, Errc::ConvergenceFailure, "f_psi inverse bracket diverged");
    }

    // f is strictly decreasing: f(lo) >= u > f(hi). Bisection carries the
    // bracket to roundoff scale, Newton polishes the residual.
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        const double fz = f_of_weights(w, z);
        if (std::abs(fz - u) <= kFInverseTol) return z;
        if (fz > u)
            lo = z;
        else
            hi = z;
        z = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 20; ++it) {
        const double fz = f_of_weights(w, z);
        if (std::abs(fz - u) <= kFInverseTol) return z;
        if (fz > u)
            lo = z;
        else
            hi = z;
        double deriv = 0.0;
        for (double wk : w) deriv -= wk / ((z + wk) * (z + wk));
        double next = z - (fz - u) / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        z = next;
    }
    require(std::abs(f_of_weights(w, z) - u) <= kFInverseTol, Errc::ConvergenceFailure,
            "f_psi inverse did not converge");
    return z;
}

/// Coefficient vector of the non-positive eigenvector of the known-psi
/// Helstrom operand, phi_k proportional to c_k / (z + |c_k|^2).
std::vector<Complex> phi_coefficients(const std::vector<Complex>& coeff,
                                      const std::vector<double>& w, double z) {
    std::vector<Complex> phi(coeff.size());
    for (std::size_t k = 0; k < coeff.size(); ++k) phi[k] = coeff[k] / (z + w[k]);
    return phi;
}

StateVector state_in_basis(const std::vector<Complex>& coords, const CollapseBasis& basis) {
    if (basis.is_standard()) return StateVector::normalized(coords);
    const int d = basis.dim();
    std::vector<Complex> amp(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) {
        Complex acc = 0.0;
        for (int k = 0; k < d; ++k) acc += basis.columns()(r, k) * coords[static_cast<std::size_t>(k)];
        amp[static_cast<std::size_t>(r)] = acc;
    }
    return StateVector::normalized(std::move(amp));
}

}  // namespace

Effect Effect::checked(ComplexMatrix m) {
    require(m.is_square(), Errc::NonSquare, "effect must be a square matrix");
    require(m.all_finite(), Errc::InvariantViolation, "effect has non-finite entries");
    require(m.hermiticity_defect() <= kEffectSpectrumTol, Errc::InvariantViolation,
            "effect is not Hermitian");
    const HermitianEigenDecomposition dec = hermitian_eig(m);
    require(dec.eigenvalues.front() >= -kEffectSpectrumTol &&
                dec.eigenvalues.back() <= 1.0 + kEffectSpectrumTol,
            Errc::InvariantViolation, "effect spectrum leaves [0, 1]");
    return Effect(std::move(m));
}

Effect Effect::zero(int dim) { return Effect(ComplexMatrix::zero(dim, dim)); }

Effect Effect::identity(int dim) { return Effect(ComplexMatrix::identity(dim)); }

Effect Effect::blind_guess(double p, int dim) {
    validate_probability_01(p);
    return p <= 0.5 ? zero(dim) : identity(dim);
}

Effect Effect::projector_complement(const StateVector& phi) {
    ComplexMatrix m = ComplexMatrix::identity(phi.dim());
    m -= phi.projector();
    return Effect(std::move(m));
}

double reliability_known_psi(const StateVector& psi, double p, const Effect& e,
                             const CollapseBasis& basis) {
    validate_probability_01(p);
    require(psi.dim() == e.dim() && psi.dim() == basis.dim(), Errc::DimensionMismatch,
            "state, effect and basis dimensions differ");
    const std::vector<double> w = basis.weights(psi);
    double yes_given_collapse = 0.0;
    const ComplexMatrix& m = e.matrix();
    if (basis.is_standard()) {
        for (int k = 0; k < psi.dim(); ++k)
            yes_given_collapse += m(k, k).real() * w[static_cast<std::size_t>(k)];
    } else {
        for (int k = 0; k < basis.dim(); ++k) {
            std::vector<Complex> bk(static_cast<std::size_t>(basis.dim()));
            for (int r = 0; r < basis.dim(); ++r) bk[static_cast<std::size_t>(r)] = basis.columns()(r, k);
            yes_given_collapse += m.quadratic_form(bk, bk).real() * w[static_cast<std::size_t>(k)];
        }
    }
    const double yes_given_intact = m.quadratic_form(psi.amplitudes(), psi.amplitudes()).real();
    return clamp01(p * yes_given_collapse + (1.0 - p) * (1.0 - yes_given_intact));
}

double reliability_density(const DensityMatrix& rho, double p, const Effect& e,
                           const CollapseBasis& basis) {
    validate_probability_01(p);
    require(rho.dim() == e.dim() && rho.dim() == basis.dim(), Errc::DimensionMismatch,
            "density, effect and basis dimensions differ");
    // tr[rho diag E] = tr[diag(rho) E]; both traces are over the basis rays.
    const ComplexMatrix rho_diag = diag_part(rho.matrix(), basis);
    const double collapse_term = trace_product_real(rho_diag, e.matrix());
    const double intact_term = trace_product_real(rho.matrix(), e.matrix());
    return clamp01(p * collapse_term + (1.0 - p) * (1.0 - intact_term));
}

double reliability_pair(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                        const Effect& e) {
    validate_probability_01(p);
    require(rho1.dim() == rho2.dim() && rho1.dim() == e.dim(), Errc::DimensionMismatch,
            "density matrices and effect dimensions differ");
    ComplexMatrix a = rho1.matrix();
    a *= Complex(p, 0.0);
    ComplexMatrix b = rho2.matrix();
    b *= Complex(1.0 - p, 0.0);
    a -= b;
    return clamp01(1.0 - p + trace_product_real(a, e.matrix()));
}

DiscriminationResult helstrom(const DensityMatrix& rho1, const DensityMatrix& rho2, double p) {
    validate_probability_01(p);
    require(rho1.dim() == rho2.dim(), Errc::DimensionMismatch,
            "density matrices differ in dimension");
    const int d = rho1.dim();

    ComplexMatrix a = rho1.matrix();
    a *= Complex(p, 0.0);
    ComplexMatrix b = rho2.matrix();
    b *= Complex(1.0 - p, 0.0);
    a -= b;

    const HermitianEigenDecomposition dec = hermitian_eig(a);
    const double zero_tol = kSpectrumZeroTol * std::max(1.0, a.max_abs());

    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    int negative_count = 0;
    int negative_index = -1;
    for (int i = 0; i < d; ++i) {
        const double lam = dec.eigenvalues[i];
        if (lam > zero_tol) {
            lambda_plus += lam;
        } else if (lam < -zero_tol) {
            lambda_minus += lam;
            ++negative_count;
            negative_index = i;
        }
    }

    DiscriminationResult result{
        clamp01(1.0 - p + lambda_plus),
        Effect::checked(
            spectral_projector_where(dec, [zero_tol](double lam) { return lam > zero_tol; })),
        lambda_plus,
        lambda_minus,
        a,
        std::nullopt,
        false};
    if (negative_count == 1)
        result.negative_eigvec = StateVector::normalized(dec.eigenvector(negative_index));
    return result;
}

double f_psi(const StateVector& psi, double z, const CollapseBasis& basis) {
    require(std::isfinite(z) && z >= 0.0, Errc::OutOfRange, "f_psi argument must be >= 0");
    return f_of_weights(nonzero_weights(psi, basis), z);
}

double f_psi_inverse(const StateVector& psi, double u, const CollapseBasis& basis) {
    return f_inverse_of_weights(nonzero_weights(psi, basis), u);
}

DiscriminationResult optimal_known_psi(const StateVector& psi, double p,
                                       const CollapseBasis& basis) {
    validate_probability_open(p);
    require(psi.dim() == basis.dim(), Errc::DimensionMismatch, "state/basis dimension mismatch");
    const std::vector<Complex> coeff = basis.coefficients(psi);
    std::vector<double> w(coeff.size());
    for (std::size_t k = 0; k < coeff.size(); ++k) {
        w[k] = std::norm(coeff[k]);
        require(w[k] > kZeroComponentTol, Errc::ZeroComponent,
                "psi has a vanishing component in the collapse basis; reduce the dimension first");
    }
    const int d = psi.dim();

    ComplexMatrix operand = diag_part(psi.projector(), basis);
    operand *= Complex(p, 0.0);
    ComplexMatrix uncollapsed = psi.projector();
    uncollapsed *= Complex(1.0 - p, 0.0);
    operand -= uncollapsed;

    const int side = classify_boundary(p, d);
    if (side > 0) {
        return {p, Effect::identity(d), 2.0 * p - 1.0, 0.0, std::move(operand), std::nullopt,
                false};
    }
    if (side == 0) {
        // At the boundary the operand has a simple zero eigenvalue and the
        // optimizers form the family I - kappa |phi><phi|; kappa = 1 keeps
        // e_opt equal to the minimal choice used everywhere else.
        const StateVector phi = state_in_basis(phi_coefficients(coeff, w, 0.0), basis);
        return {p,    Effect::projector_complement(phi), 2.0 * p - 1.0, 0.0, std::move(operand),
                std::nullopt, true};
    }

    const double u = p / (1.0 - p);
    const double z = f_inverse_of_weights(w, u);
    const double alpha = -p * z;
    const StateVector phi = state_in_basis(phi_coefficients(coeff, w, z), basis);
    return {clamp01(p * (1.0 + z)),
            Effect::projector_complement(phi),
            (2.0 * p - 1.0) - alpha,
            alpha,
            std::move(operand),
            phi,
            false};
}

DimensionReduction reduce_dimension(const StateVector& psi, const CollapseBasis& basis,
                                    double tol) {
    require(psi.dim() == basis.dim(), Errc::DimensionMismatch, "state/basis dimension mismatch");
    const std::vector<Complex> coeff = basis.coefficients(psi);
    std::vector<int> surviving;
    for (int k = 0; k < psi.dim(); ++k)
        if (std::norm(coeff[static_cast<std::size_t>(k)]) > tol) surviving.push_back(k);
    require(!surviving.empty(), Errc::NullState, "all components below the reduction tolerance");

    std::vector<Complex> reduced;
    reduced.reserve(surviving.size());
    for (int k : surviving) reduced.push_back(coeff[static_cast<std::size_t>(k)]);
    const bool degenerate = surviving.size() == 1;
    return {StateVector::normalized(std::move(reduced)),
            CollapseBasis::standard(static_cast<int>(surviving.size())), std::move(surviving),
            degenerate};
}

double rmax_2d_closed_form(const StateVector& psi, double p) {
    validate_probability_01(p);
    require(psi.dim() == 2, Errc::DimensionMismatch, "closed form is specific to d = 2");
    if (p >= 2.0 / 3.0) return p;
    const double w1 = std::norm(psi[0]);
    const double w2 = std::norm(psi[1]);
    const double q = 1.0 - 2.0 * p;
    return clamp01(0.5 + 0.5 * std::sqrt(q * q + 4.0 * p * (2.0 - 3.0 * p) * w1 * w2));
}

SternGerlachResult stern_gerlach_direction(const StateVector& psi, double p) {
    require(psi.dim() == 2, Errc::DimensionMismatch, "Stern-Gerlach form is specific to d = 2");
    require(std::isfinite(p) && p > 0.0 && p < 2.0 / 3.0, Errc::OutOfRange,
            "blind guessing is optimal for p >= 2/3");
    const Complex a1 = psi[0];
    const Complex a2 = psi[1];
    const double w1 = std::norm(a1);
    const double w2 = std::norm(a2);
    require(w1 > kZeroComponentTol && w2 > kZeroComponentTol, Errc::BasisState,
            "psi is (up to phase) a basis state");

    const Complex cross = std::conj(a1) * a2;
    const double dilation = 1.0 - p / (1.0 - p);
    const std::array<double, 3> w = {2.0 * cross.real(), 2.0 * cross.imag(),
                                     dilation * (w1 - w2)};

    // Work in the gauge with real positive components, where the optimal
    // effect has the closed form below, then restore the phases.
    const double m1 = std::sqrt(w1);
    const double m2 = std::sqrt(w2);
    const double wx = 2.0 * m1 * m2;
    const double wz = dilation * (w1 - w2);
    const double wnorm = std::hypot(wx, wz);
    const double s_plus = std::sqrt(wnorm + wz);
    const double s_minus = std::sqrt(wnorm - wz);
    const Complex phase1 = a1 / std::abs(a1);
    const Complex phase2 = a2 / std::abs(a2);
    StateVector chi = StateVector::normalized({-s_minus * phase1, s_plus * phase2});
    return {w, std::move(chi)};
}

ReliabilityBounds rmax_bounds_known_psi(const StateVector& psi, double p) {
    validate_probability_01(p);
    const int d = psi.dim();
    double purity = 0.0;  // sum_k |psi_k|^4
    double delta = 0.0;
    for (int k = 0; k < d; ++k) {
        const double wk = std::norm(psi[k]);
        purity += wk * wk;
        delta = std::max(delta, wk);
    }
    return {std::max(p, 1.0 - p * purity), std::max(p, 1.0 - p / d),
            rmax_delta_upper_bound(p, delta)};
}

double rmax_delta_upper_bound(double p, double delta) {
    validate_probability_01(p);
    require(delta >= 0.0 && delta <= 1.0 + 1e-12, Errc::OutOfRange,
            "delta is a squared amplitude");
    const double q = 1.0 - p;
    const double disc =
        std::max(0.0, q * q + 2.0 * p * q * delta - (4.0 - 5.0 * p) * p * delta * delta);
    return 0.5 * (1.0 + p * (1.0 - delta) + std::sqrt(disc));
}

double rmax_density_upper_bound(const DensityMatrix& rho, double p, const CollapseBasis& basis) {
    validate_probability_open(p);
    require(rho.dim() == basis.dim(), Errc::DimensionMismatch, "density/basis dimension mismatch");
    const int d = rho.dim();
    require(classify_boundary(p, d) < 0, Errc::OutOfRange,
            "spectral bound applies for p < d/(d+1); above, r_max = p exactly");

    const HermitianEigenDecomposition dec = rho.eig();
    double bound = 0.0;
    for (int i = 0; i < d; ++i) {
        const double pi = dec.eigenvalues[i];
        if (pi <= kZeroComponentTol) continue;
        const StateVector phi = StateVector::normalized(dec.eigenvector(i));
        const DimensionReduction red = reduce_dimension(phi, basis);
        double term;
        if (red.degenerate) {
            term = std::max(p, 1.0 - p);
        } else if (classify_boundary(p, red.state.dim()) >= 0) {
            term = p;
        } else {
            const std::vector<double> w = red.basis.weights(red.state);
            term = p * (1.0 + f_inverse_of_weights(w, p / (1.0 - p)));
        }
        bound += pi * term;
    }
    return bound;
}

BlindGuessThresholds blind_guess_thresholds(const DensityMatrix& rho1,
                                            const DensityMatrix& rho2) {
    return blind_guess_thresholds(rho1, rho2, CollapseBasis::standard(rho1.dim()));
}

BlindGuessThresholds blind_guess_thresholds(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                            const CollapseBasis& collapse_basis) {
    require(rho1.dim() == rho2.dim(), Errc::DimensionMismatch,
            "density matrices differ in dimension");
    require(collapse_basis.dim() == rho1.dim(), Errc::DimensionMismatch,
            "basis dimension mismatch");
    const int d = rho1.dim();

    const HermitianEigenDecomposition dec1 = rho1.eig();
    const HermitianEigenDecomposition dec2 = rho2.eig();
    const double min1 = dec1.eigenvalues.front();
    const double max1 = dec1.eigenvalues.back();
    const double min2 = dec2.eigenvalues.front();
    const double max2 = dec2.eigenvalues.back();

    if (min1 > kFullRankTol && min2 > kFullRankTol)
        return {min2 / (max1 + min2), max2 / (min1 + max2)};

    // Collapse pair specialization: rho1 = diag(rho2) relative to the
    // collapse basis. The lower threshold uses the largest basis weight of
    // rho2; the upper one is the universal d/(d+1).
    const ComplexMatrix rho2_diag = diag_part(rho2.matrix(), collapse_basis);
    require(rho1.matrix().max_abs_diff(rho2_diag) <= kCollapsePairTol, Errc::RankDeficient,
            "thresholds need full-rank inputs or a collapse pair rho1 = diag rho2");
    const double pd = std::max(min2, 0.0);
    double max_weight = 0.0;
    for (int k = 0; k < d; ++k) {
        std::vector<Complex> bk(static_cast<std::size_t>(d));
        for (int r = 0; r < d; ++r) bk[static_cast<std::size_t>(r)] = collapse_basis.columns()(r, k);
        max_weight = std::max(max_weight, rho2.matrix().quadratic_form(bk, bk).real());
    }
    const double p_lo = (pd + max_weight > 0.0) ? pd / (max_weight + pd) : 0.0;
    return {p_lo, static_cast<double>(d) / (d + 1)};
}

}  // namespace collapse_oracle
