#include <doctest.h>

#include <cmath>

#include "collapse_oracle/discrimination.hpp"
#include "collapse_oracle/montecarlo.hpp"
#include "test_helpers.hpp"

using namespace collapse_oracle;
using namespace test_helpers;

namespace {

const CollapseBasis kBasis2 = CollapseBasis::standard(2);

DensityMatrixPair collapse_pair(const StateVector& psi, double p) {
    return apply_collapse_channel(psi, CollapseScenario::basis(p, CollapseBasis::standard(psi.dim())));
}

/// Independent route to the delta bound: numerically invert the finite-d
/// majorant of f_psi, g_d(z) = delta/(z+delta) + (1-delta)/(z+(1-delta)/(d-1)),
/// at u = p/(1-p) and return p(1+z).
double finite_d_delta_bound(double p, double delta, int d) {
    const double u = p / (1.0 - p);
    const auto g = [&](double z) {
        return delta / (z + delta) + (1.0 - delta) / (z + (1.0 - delta) / (d - 1));
    };
    double lo = 0.0, hi = 1.0;
    while (g(hi) >= u) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > u ? lo : hi) = mid;
    }
    return p * (1.0 + 0.5 * (lo + hi));
}

}  // namespace

TEST_SUITE("discrimination") {

TEST_CASE("effect validation and canonical constructors") {
    CHECK_NOTHROW(Effect::checked(ComplexMatrix::identity(3)));
    ComplexMatrix over = ComplexMatrix::identity(2);
    over(0, 0) = 1.5;
    CHECK(thrown_code([&] { Effect::checked(over); }) == Errc::InvariantViolation);
    ComplexMatrix negative(2, 2);
    negative(0, 0) = -0.2;
    negative(1, 1) = 0.5;
    CHECK(thrown_code([&] { Effect::checked(negative); }) == Errc::InvariantViolation);

    CHECK(Effect::blind_guess(0.3, 2).matrix().max_abs() == 0.0);
    CHECK(Effect::blind_guess(0.5, 2).matrix().max_abs() == 0.0);
    CHECK(Effect::blind_guess(0.7, 2).matrix().max_abs_diff(ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("reliability_known_psi: trivial and uniform-psi examples") {
    RngStream rng(1);
    for (int d : {2, 4}) {
        const CollapseBasis basis = CollapseBasis::standard(d);
        const StateVector psi = sample_uniform_state(d, rng);
        CHECK(reliability_known_psi(psi, 0.35, Effect::zero(d), basis) ==
              doctest::Approx(0.65).epsilon(1e-14));
        CHECK(reliability_known_psi(psi, 0.35, Effect::identity(d), basis) ==
              doctest::Approx(0.35).epsilon(1e-14));

        const StateVector uniform = uniform_amplitude_state(d);
        const Effect opt = Effect::projector_complement(uniform);
        CHECK(reliability_known_psi(uniform, 0.4, opt, basis) ==
              doctest::Approx(1.0 - 0.4 / d).epsilon(1e-12));
    }
}

TEST_CASE("reliability_density: maximally mixed formula, blind guess, purity consistency") {
    RngStream rng(2);
    const int d = 3;
    const CollapseBasis basis = CollapseBasis::standard(d);
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(d);
    for (int trial = 0; trial < 20; ++trial) {
        RngStream er = rng.split();
        const Effect e = sample_random_spectral_effect(d, er);
        const double p = 0.1 + 0.8 * rng.next_double();
        const double expected =
            (1.0 - p) + (2.0 * p - 1.0) * e.matrix().trace().real() / d;
        CHECK(reliability_density(mixed, p, e, basis) ==
              doctest::Approx(expected).epsilon(0).scale(0).epsilon(1e-12));
        CHECK(std::abs(reliability_density(mixed, 0.5, e, basis) - 0.5) <= 1e-12);

        const DensityMatrix rho = random_density(d, 2, rng);
        CHECK(std::abs(reliability_density(rho, p, Effect::blind_guess(p, d), basis) -
                       std::max(p, 1.0 - p)) <= 1e-12);

        const StateVector psi = sample_uniform_state(d, rng);
        CHECK(std::abs(reliability_density(DensityMatrix::pure(psi), p, e, basis) -
                       reliability_known_psi(psi, p, e, basis)) <= 1e-12);
    }
}

TEST_CASE("helstrom: equal densities, orthogonal pure states, hand-computed collapse value") {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(3);
    for (double p : {0.2, 0.5, 0.8}) {
        const auto res = helstrom(mixed, mixed, p);
        CHECK(res.r_max == doctest::Approx(std::max(p, 1.0 - p)).epsilon(1e-12));
    }

    const DensityMatrix zero = DensityMatrix::pure(StateVector::basis_state(2, 0));
    const DensityMatrix one = DensityMatrix::pure(StateVector::basis_state(2, 1));
    for (double p : {0.1, 0.5, 0.9}) {
        const auto res = helstrom(zero, one, p);
        CHECK(res.r_max == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Collapse pair for weights (0.2, 0.8) at p = 1/2: by the d = 2 closed
    // form, r_max = 1/2 + 1/2 sqrt(4 * 1/2 * 1/2 * 0.16) = 0.7.
    const StateVector psi = state_from_weights({0.2, 0.8});
    const auto pair = collapse_pair(psi, 0.5);
    const auto res = helstrom(pair.rho1, pair.rho2, 0.5);
    CHECK(res.r_max == doctest::Approx(0.7).epsilon(1e-12));
    REQUIRE(res.negative_eigvec.has_value());
}

TEST_CASE("helstrom: spectral identities on random pairs") {
    RngStream rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_double() * 3.0);
        const DensityMatrix rho1 = random_density(d, 1 + trial % d, rng);
        const DensityMatrix rho2 = random_density(d, d, rng);
        const double p = 0.01 + 0.98 * rng.next_double();
        const auto res = helstrom(rho1, rho2, p);

        // (1-p) + lambda_plus = p - lambda_minus, since tr A = 2p - 1.
        CHECK(std::abs((1.0 - p + res.lambda_plus) - (p - res.lambda_minus)) <= 1e-9);
        // The canonical optimizer attains r_max in the raw functional.
        CHECK(std::abs(reliability_pair(rho1, rho2, p, res.e_opt) - res.r_max) <= 1e-9);
        // Blind guessing is never better than the optimum.
        CHECK(res.r_max >= std::max(p, 1.0 - p) - 1e-12);
        // The operand is what the definition says it is.
        ComplexMatrix a = rho1.matrix();
        a *= Complex(p, 0.0);
        ComplexMatrix b = rho2.matrix();
        b *= Complex(1.0 - p, 0.0);
        a -= b;
        CHECK(res.helstrom_operand.max_abs_diff(a) <= 1e-14);
    }
}

TEST_CASE("helstrom: small grid search never beats the spectral optimum at d = 2") {
    RngStream rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const StateVector psi = sample_uniform_state(2, rng);
        const double p = 0.05 + 0.9 * rng.next_double();
        const auto pair = collapse_pair(psi, p);
        const auto res = helstrom(pair.rho1, pair.rho2, p);

        double best = 0.0;
        const int frames = 14, eigs = 5;
        for (int it = 0; it < frames; ++it) {
            const double theta = 0.5 * M_PI * it / (frames - 1);
            for (int ip = 0; ip < frames; ++ip) {
                const double phi = 2.0 * M_PI * ip / frames;
                for (int il = 0; il < frames; ++il) {
                    const double lam = 2.0 * M_PI * il / frames;
                    const std::vector<Complex> u1 = {std::cos(theta),
                                                     std::polar(std::sin(theta), phi)};
                    const std::vector<Complex> u2 = {-std::polar(std::sin(theta), lam),
                                                     std::polar(std::cos(theta), phi + lam)};
                    const double q1 = res.helstrom_operand.quadratic_form(u1, u1).real();
                    const double q2 = res.helstrom_operand.quadratic_form(u2, u2).real();
                    for (int e1 = 0; e1 < eigs; ++e1)
                        for (int e2 = 0; e2 < eigs; ++e2)
                            best = std::max(best, 1.0 - p + q1 * e1 / (eigs - 1.0) +
                                                      q2 * e2 / (eigs - 1.0));
                }
            }
        }
        CHECK(best <= res.r_max + 1e-9);
        CHECK(res.r_max - best <= 0.05);
    }
}

TEST_CASE("f_psi: range endpoints and the uniform closed form") {
    const int d = 4;
    const CollapseBasis basis = CollapseBasis::standard(d);
    const StateVector uniform = uniform_amplitude_state(d);
    CHECK(f_psi(uniform, 0.0, basis) == doctest::Approx(static_cast<double>(d)).epsilon(1e-12));
    CHECK(f_psi(uniform, 1e12, basis) < 1e-10 * d);
    for (double z : {0.1, 0.7, 3.0})
        CHECK(f_psi(uniform, z, basis) == doctest::Approx(1.0 / (z + 1.0 / d)).epsilon(1e-12));

    RngStream rng(5);
    const StateVector psi = sample_uniform_state(3, rng);
    const CollapseBasis basis3 = CollapseBasis::standard(3);
    double prev = f_psi(psi, 0.0, basis3);
    for (double z : {0.2, 0.5, 1.0, 5.0, 50.0}) {
        const double cur = f_psi(psi, z, basis3);
        CHECK(cur < prev);
        prev = cur;
    }

    const StateVector with_zero = StateVector::normalized({Complex(1.0), Complex(0.0)});
    CHECK(thrown_code([&] { f_psi(with_zero, 1.0, kBasis2); }) == Errc::ZeroComponent);
}

TEST_CASE("f_psi_inverse: boundary, uniform case, random round trips") {
    const int d = 5;
    const CollapseBasis basis = CollapseBasis::standard(d);
    const StateVector uniform = uniform_amplitude_state(d);
    CHECK(f_psi_inverse(uniform, static_cast<double>(d), basis) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f_psi_inverse(uniform, 1.0, basis) == doctest::Approx(1.0 - 1.0 / d).epsilon(1e-12));

    RngStream rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next_double() * 4.0);
        const CollapseBasis b = CollapseBasis::standard(dim);
        const StateVector psi = sample_uniform_state(dim, rng);
        const double u = rng.next_double_pos() * dim;
        const double z = f_psi_inverse(psi, u, b);
        CHECK(std::abs(f_psi(psi, z, b) - u) <= 1e-10);
    }

    CHECK(thrown_code([&] { f_psi_inverse(uniform_amplitude_state(d), 5.5, basis); }) ==
          Errc::OutOfRange);
    CHECK(thrown_code([&] { f_psi_inverse(uniform_amplitude_state(d), 0.0, basis); }) ==
          Errc::OutOfRange);
}

TEST_CASE("optimal_known_psi: blind-guess regime, uniform psi, d = 2 value") {
    RngStream rng(7);

    // p = 0.9 >= 2/3 at d = 2 puts the optimum at blind guessing with E = I.
    const StateVector psi2 = sample_uniform_state(2, rng);
    const auto blind = optimal_known_psi(psi2, 0.9, kBasis2);
    CHECK(blind.r_max == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(blind.e_opt.matrix().max_abs_diff(ComplexMatrix::identity(2)) == 0.0);
    CHECK_FALSE(blind.negative_eigvec.has_value());

    // Uniform amplitudes: optimal effect is I - |psi><psi| independent of p.
    for (int d : {3, 5}) {
        const CollapseBasis basis = CollapseBasis::standard(d);
        const StateVector uniform = uniform_amplitude_state(d);
        const ComplexMatrix expected = Effect::projector_complement(uniform).matrix();
        for (double p : {0.1, 0.35, 0.6}) {
            if (p >= static_cast<double>(d) / (d + 1)) continue;
            const auto res = optimal_known_psi(uniform, p, basis);
            CHECK(std::abs(res.r_max - (1.0 - p / d)) <= 1e-10);
            CHECK(res.e_opt.matrix().max_abs_diff(expected) <= 1e-10);
        }
    }

    // Hand value: weights (0.05, 0.95), p = 1/2 gives 1/2 + 1/2 sqrt(0.0475).
    const auto res = optimal_known_psi(state_from_weights({0.05, 0.95}), 0.5, kBasis2);
    CHECK(res.r_max == doctest::Approx(0.5 + 0.5 * std::sqrt(0.0475)).epsilon(1e-12));

    CHECK(thrown_code([&] {
              optimal_known_psi(StateVector::basis_state(2, 0), 0.4, kBasis2);
          }) == Errc::ZeroComponent);
}

TEST_CASE("optimal_known_psi: boundary p = d/(d+1) keeps r_max = p with the kappa family") {
    RngStream rng(8);
    for (int d : {2, 3, 4}) {
        const CollapseBasis basis = CollapseBasis::standard(d);
        const StateVector psi = sample_uniform_state(d, rng);
        const double p = static_cast<double>(d) / (d + 1);
        const auto res = optimal_known_psi(psi, p, basis);
        CHECK(res.r_max == doctest::Approx(p).epsilon(1e-12));
        CHECK(res.boundary_kappa_family);
        // kappa = 1 canonical choice coincides with the minimal projector
        // P^+_A; E = I (kappa = 0) is optimal too.
        const auto pair = collapse_pair(psi, p);
        CHECK(std::abs(reliability_pair(pair.rho1, pair.rho2, p, res.e_opt) - p) <= 1e-9);
        CHECK(std::abs(reliability_pair(pair.rho1, pair.rho2, p, Effect::identity(d)) - p) <=
              1e-9);
    }
}

TEST_CASE("consistency chain: bijection route, spectral route and d = 2 closed form agree") {
    RngStream rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_double() * 3.0);
        const CollapseBasis basis = CollapseBasis::standard(d);
        const StateVector psi = sample_uniform_state(d, rng);
        const double p = 0.01 + 0.98 * rng.next_double();

        const auto direct = optimal_known_psi(psi, p, basis);
        const auto pair = collapse_pair(psi, p);
        const auto spectral = helstrom(pair.rho1, pair.rho2, p);

        CHECK(std::abs(direct.r_max - spectral.r_max) <= 1e-9);
        CHECK(std::abs(direct.lambda_minus - spectral.lambda_minus) <= 1e-9);
        CHECK(direct.e_opt.matrix().max_abs_diff(spectral.e_opt.matrix()) <= 1e-7);
        if (d == 2) CHECK(std::abs(direct.r_max - rmax_2d_closed_form(psi, p)) <= 1e-9);

        // Spectrum structure of the operand: one simple negative eigenvalue
        // below the boundary, none above it.
        const double boundary = static_cast<double>(d) / (d + 1);
        if (p < boundary - 1e-9) {
            CHECK(spectral.negative_eigvec.has_value());
        } else if (p > boundary + 1e-9) {
            CHECK_FALSE(spectral.negative_eigvec.has_value());
            CHECK(spectral.r_max == doctest::Approx(p).epsilon(1e-9));
        }
    }
}

TEST_CASE("reduce_dimension: identity map, exact zeros, basis-state degeneracy") {
    RngStream rng(10);
    const StateVector full = sample_uniform_state(3, rng);
    const auto same = reduce_dimension(full, CollapseBasis::standard(3));
    CHECK(same.index_map == std::vector<int>{0, 1, 2});
    CHECK_FALSE(same.degenerate);
    CHECK(same.state.dim() == 3);

    const auto degenerate =
        reduce_dimension(StateVector::basis_state(4, 2), CollapseBasis::standard(4));
    CHECK(degenerate.degenerate);
    CHECK(degenerate.index_map == std::vector<int>{2});
    CHECK(degenerate.state.dim() == 1);

    const StateVector padded =
        StateVector::normalized({Complex(std::sqrt(0.5)), Complex(std::sqrt(0.5)), Complex(0.0)});
    const auto reduced = reduce_dimension(padded, CollapseBasis::standard(3));
    CHECK(reduced.index_map == std::vector<int>{0, 1});
    CHECK(std::norm(reduced.state[0]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(reduced.state[1]) == doctest::Approx(0.5).epsilon(1e-12));

    // A reduction tolerance above every weight leaves nothing (only
    // reachable with tol >= 1/d).
    CHECK(thrown_code([&] { reduce_dimension(padded, CollapseBasis::standard(3), 2.0); }) ==
          Errc::NullState);
}

TEST_CASE("rmax_2d_closed_form: figure values and endpoint degeneration") {
    CHECK(rmax_2d_closed_form(state_from_weights({0.5, 0.5}), 0.5) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(rmax_2d_closed_form(state_from_weights({0.2, 0.8}), 0.5) ==
          doctest::Approx(0.7).epsilon(1e-12));
    for (double p : {0.2, 0.5, 0.8}) {
        CHECK(rmax_2d_closed_form(StateVector::basis_state(2, 0), p) ==
              doctest::Approx(std::max(p, 1.0 - p)).epsilon(1e-12));
        CHECK(rmax_2d_closed_form(StateVector::basis_state(2, 1), p) ==
              doctest::Approx(std::max(p, 1.0 - p)).epsilon(1e-12));
    }
    CHECK(thrown_code([] {
              rmax_2d_closed_form(uniform_amplitude_state(3), 0.5);
          }) == Errc::DimensionMismatch);
}

TEST_CASE("stern_gerlach_direction: equator state, dilation factor, purity") {
    const StateVector equator = state_from_weights({0.5, 0.5});
    const auto res = stern_gerlach_direction(equator, 0.3);
    CHECK(res.direction[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.direction[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.direction[2] == doctest::Approx(0.0).epsilon(1e-12));
    // chi's Bloch vector points along -x and E_opt = |chi><chi| = I - |psi><psi|.
    const ComplexMatrix expected = Effect::projector_complement(equator).matrix();
    CHECK(res.chi.projector().max_abs_diff(expected) <= 1e-12);

    // At p = 1/2 the dilation factor vanishes.
    RngStream rng(11);
    const StateVector psi = sample_uniform_state(2, rng);
    const auto flat = stern_gerlach_direction(psi, 0.5);
    CHECK(std::abs(flat.direction[2]) <= 1e-12);

    // Bloch vector of the returned chi is a unit vector opposite to w.
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector s = sample_uniform_state(2, rng);
        const double p = 0.05 + 0.6 * rng.next_double();
        if (p >= 2.0 / 3.0) continue;
        const auto r = stern_gerlach_direction(s, p);
        const Complex cross = std::conj(r.chi[0]) * r.chi[1];
        const std::array<double, 3> bloch = {2.0 * cross.real(), 2.0 * cross.imag(),
                                             std::norm(r.chi[0]) - std::norm(r.chi[1])};
        const double bloch_norm =
            std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]);
        CHECK(bloch_norm == doctest::Approx(1.0).epsilon(1e-10));
        const double wnorm = std::sqrt(r.direction[0] * r.direction[0] +
                                       r.direction[1] * r.direction[1] +
                                       r.direction[2] * r.direction[2]);
        for (int i = 0; i < 3; ++i)
            CHECK(bloch[static_cast<std::size_t>(i)] ==
                  doctest::Approx(-r.direction[static_cast<std::size_t>(i)] / wnorm)
                      .epsilon(1e-9));

        // |chi><chi| is the optimal effect from the closed theory.
        const auto opt = optimal_known_psi(s, p, kBasis2);
        CHECK(r.chi.projector().max_abs_diff(opt.e_opt.matrix()) <= 1e-9);
    }

    CHECK(thrown_code([] {
              stern_gerlach_direction(StateVector::basis_state(2, 0), 0.3);
          }) == Errc::BasisState);
    CHECK(thrown_code([&] { stern_gerlach_direction(equator, 0.7); }) == Errc::OutOfRange);
}

TEST_CASE("rmax_bounds_known_psi: tightness, delta bound numbers, ordering") {
    // Uniform amplitudes make lower and upper coincide at 1 - p/d.
    for (int d : {2, 4, 8}) {
        const auto bounds = rmax_bounds_known_psi(uniform_amplitude_state(d), 0.3);
        CHECK(bounds.lower == doctest::Approx(1.0 - 0.3 / d).epsilon(1e-12));
        CHECK(bounds.upper == doctest::Approx(1.0 - 0.3 / d).epsilon(1e-12));
    }

    // delta >= 1/2 at p = 1/2 caps the bound at 0.91.
    for (double delta : {0.5, 0.6, 0.75, 0.9}) {
        CHECK(rmax_delta_upper_bound(0.5, delta) <= 0.91);
    }
    // delta -> 1 recovers blind guessing.
    for (double p : {0.2, 0.5, 0.8})
        CHECK(rmax_delta_upper_bound(p, 1.0) == doctest::Approx(std::max(p, 1.0 - p)).epsilon(1e-12));

    // Monotone approach of the finite-d majorant bound to the printed
    // dimension-independent form.
    for (double p : {0.25, 0.5}) {
        for (double delta : {0.3, 0.5, 0.8}) {
            const double b10 = finite_d_delta_bound(p, delta, 10);
            const double b100 = finite_d_delta_bound(p, delta, 100);
            const double b1000 = finite_d_delta_bound(p, delta, 1000);
            const double printed = rmax_delta_upper_bound(p, delta);
            CHECK(b10 <= b100 + 1e-12);
            CHECK(b100 <= b1000 + 1e-12);
            CHECK(b1000 <= printed + 1e-9);
            CHECK(printed - b1000 <= 5e-3);
        }
    }

    // Sandwich on random instances.
    RngStream rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_double() * 5.0);
        const StateVector psi = sample_uniform_state(d, rng);
        const double p = 0.01 + 0.98 * rng.next_double();
        const auto bounds = rmax_bounds_known_psi(psi, p);
        const double r = optimal_known_psi(psi, p, CollapseBasis::standard(d)).r_max;
        CHECK(bounds.lower <= r + 1e-9);
        CHECK(r <= bounds.upper + 1e-9);
        CHECK(r <= bounds.delta_upper + 1e-9);
    }
}

TEST_CASE("rmax_density_upper_bound: pure states, maximally mixed, random dominance") {
    RngStream rng(13);
    const int d = 3;
    const CollapseBasis basis = CollapseBasis::standard(d);

    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = sample_uniform_state(d, rng);
        const double p = 0.05 + rng.next_double() * (static_cast<double>(d) / (d + 1) - 0.1);
        const double bound = rmax_density_upper_bound(DensityMatrix::pure(psi), p, basis);
        CHECK(bound == doctest::Approx(optimal_known_psi(psi, p, basis).r_max).epsilon(1e-9));
    }

    // I/d: the solver's eigenbasis is the standard basis, every term reduces
    // to one dimension, so the bound lands exactly on max(p, 1-p).
    for (double p : {0.2, 0.45, 0.6}) {
        const DensityMatrix mixed = DensityMatrix::maximally_mixed(d);
        const double bound = rmax_density_upper_bound(mixed, p, basis);
        CHECK(bound == doctest::Approx(std::max(p, 1.0 - p)).epsilon(1e-10));
        const auto exact = helstrom(
            DensityMatrix::checked(diag_part(mixed.matrix(), basis)), mixed, p);
        CHECK(bound >= exact.r_max - 1e-9);
    }

    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = random_density(d, 2, rng);
        const double p = 0.3;
        const double bound = rmax_density_upper_bound(rho, p, basis);
        const auto exact =
            helstrom(DensityMatrix::checked(diag_part(rho.matrix(), basis)), rho, p);
        CHECK(bound >= exact.r_max - 1e-9);
    }

    CHECK(thrown_code([&] {
              rmax_density_upper_bound(DensityMatrix::maximally_mixed(d), 0.9, basis);
          }) == Errc::OutOfRange);
}

TEST_CASE("blind_guess_thresholds: mixed identity, collapse specialization, random full rank") {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
    const auto half = blind_guess_thresholds(mixed, mixed);
    CHECK(half.p_lo == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(half.p_hi == doctest::Approx(0.5).epsilon(1e-12));

    RngStream rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_double() * 2.0);
        const DensityMatrix rho1 = random_full_rank_density(d, rng);
        const DensityMatrix rho2 = random_full_rank_density(d, rng);
        const auto th = blind_guess_thresholds(rho1, rho2);
        CHECK(th.p_lo <= 0.5 + 1e-12);
        CHECK(th.p_hi >= 0.5 - 1e-12);

        const auto below = helstrom(rho1, rho2, th.p_lo * 0.5);
        CHECK(below.r_max == doctest::Approx(1.0 - th.p_lo * 0.5).epsilon(1e-9));
        CHECK(below.e_opt.matrix().max_abs() <= 1e-9);
        const double p_above = std::min(1.01 * th.p_hi, 0.5 * (1.0 + th.p_hi));
        CHECK(helstrom(rho1, rho2, p_above).r_max == doctest::Approx(p_above).epsilon(1e-9));
    }

    // Full-rank collapse pair: the general p_lo equals the collapse-specific
    // expression p_d / (max_k <b_k|rho|b_k> + p_d).
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 3;
        const CollapseBasis basis = CollapseBasis::standard(d);
        const DensityMatrix rho = random_full_rank_density(d, rng);
        const DensityMatrix diag = DensityMatrix::checked(diag_part(rho.matrix(), basis));
        const auto th = blind_guess_thresholds(diag, rho);
        const auto dec = rho.eig();
        double max_weight = 0.0;
        for (int k = 0; k < d; ++k) max_weight = std::max(max_weight, rho.matrix()(k, k).real());
        const double pd = dec.eigenvalues.front();
        CHECK(th.p_lo == doctest::Approx(pd / (max_weight + pd)).epsilon(1e-9));
        CHECK(th.p_lo <= 0.5 + 1e-12);
    }

    // Rank-deficient collapse pair falls back to p_hi = d/(d+1).
    const StateVector psi = state_from_weights({0.3, 0.3, 0.4});
    const auto pair = collapse_pair(psi, 0.5);
    const auto th = blind_guess_thresholds(pair.rho1, pair.rho2);
    CHECK(th.p_hi == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(th.p_lo == doctest::Approx(0.0).epsilon(1e-12));

    // Rank-deficient non-collapse pair is rejected.
    const DensityMatrix pure1 = DensityMatrix::pure(state_from_weights({0.5, 0.5}));
    const DensityMatrix pure2 = DensityMatrix::pure(StateVector::basis_state(2, 0));
    CHECK(thrown_code([&] { blind_guess_thresholds(pure2, pure1); }) == Errc::RankDeficient);
}

TEST_CASE("imperfection: no experiment reaches reliability 1 on collapse problems") {
    RngStream rng(15);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_double() * 3.0);
        const StateVector psi = sample_uniform_state(d, rng);
        const double p = 0.01 + 0.98 * rng.next_double();
        RngStream er = rng.split();
        const Effect e = sample_random_spectral_effect(d, er);
        CHECK(reliability_known_psi(psi, p, e, CollapseBasis::standard(d)) < 1.0 - 1e-6);
        if (trial % 10 == 0) {
            const auto pair = collapse_pair(psi, p);
            CHECK(helstrom(pair.rho1, pair.rho2, p).r_max < 1.0 - 1e-6);
        }
    }
}

}  // TEST_SUITE
