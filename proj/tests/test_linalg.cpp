#include <doctest.h>

#include <cmath>

#include "collapse_oracle/eig.hpp"
#include "collapse_oracle/linalg.hpp"
#include "collapse_oracle/montecarlo.hpp"
#include "test_helpers.hpp"

using namespace collapse_oracle;
using namespace test_helpers;

TEST_SUITE("linalg") {

TEST_CASE("hermitian_eig: identity") {
    const auto dec = hermitian_eig(ComplexMatrix::identity(3));
    for (double lam : dec.eigenvalues) CHECK(lam == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors)
              .max_abs_diff(ComplexMatrix::identity(3)) <= 1e-10);
}

TEST_CASE("hermitian_eig: already diagonal") {
    ComplexMatrix a(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = 2.0;
    const auto dec = hermitian_eig(a);
    CHECK(dec.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(dec.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(dec.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(dec.eigenvectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig: collapse operand has one negative eigenvalue") {
    // A = p diag|psi><psi| - (1-p)|psi><psi| at d=2, weights (0.2, 0.8),
    // p = 1/2 reduces by hand to [[0, -0.2], [-0.2, 0]]: eigenvalues -0.2, 0.2.
    const StateVector psi = state_from_weights({0.2, 0.8});
    ComplexMatrix a = diag_part(psi.projector(), CollapseBasis::standard(2));
    a *= Complex(0.5, 0.0);
    ComplexMatrix b = psi.projector();
    b *= Complex(0.5, 0.0);
    a -= b;
    CHECK(std::abs(a(0, 1) + 0.2) <= 1e-15);

    const auto dec = hermitian_eig(a);
    CHECK(dec.eigenvalues[0] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(dec.eigenvalues[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("hermitian_eig: reconstruction and orthonormality on random inputs") {
    RngStream rng(20240901);
    for (int dim : {2, 3, 5, 8, 17, 40}) {
        ComplexMatrix a = random_hermitian(dim, rng);
        a *= Complex(1.0 / std::max(1.0, a.max_abs()), 0.0);  // ||A||_max <= 1
        const auto dec = hermitian_eig(a);
        CHECK(dec.reconstruct().max_abs_diff(a.hermitian_part()) <= 1e-10);
        CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors)
                  .max_abs_diff(ComplexMatrix::identity(dim)) <= 1e-10);
        for (std::size_t i = 1; i < dec.eigenvalues.size(); ++i)
            CHECK(dec.eigenvalues[i - 1] <= dec.eigenvalues[i]);

        double trace = 0.0;
        for (double lam : dec.eigenvalues) trace += lam;
        CHECK(std::abs(trace - a.trace().real()) <= 1e-10);
    }
}

TEST_CASE("hermitian_eig: error paths") {
    CHECK(thrown_code([] { hermitian_eig(ComplexMatrix(2, 3)); }) == Errc::NonSquare);
    ComplexMatrix skew(2, 2);
    skew(0, 1) = Complex(0.5, 0.0);
    skew(1, 0) = Complex(-0.5, 0.0);
    CHECK(thrown_code([&] { hermitian_eig(skew); }) == Errc::NotHermitian);
    // Asymmetry below the 1e-8 tolerance is symmetrized away.
    ComplexMatrix nearly(2, 2);
    nearly(0, 1) = Complex(0.5, 0.0);
    nearly(1, 0) = Complex(0.5 + 1e-9, 0.0);
    CHECK_NOTHROW(hermitian_eig(nearly));
}

TEST_CASE("diag_part: fixed point, hand case, off-diagonal kill") {
    const CollapseBasis basis = CollapseBasis::standard(2);

    ComplexMatrix diag(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    CHECK(diag_part(diag, basis).max_abs_diff(diag) == 0.0);

    // |psi><psi| for psi = (1,1)/sqrt(2) has every entry 1/2; its diagonal
    // part is I/2.
    const StateVector psi = state_from_weights({0.5, 0.5});
    ComplexMatrix expected = ComplexMatrix::identity(2);
    expected *= Complex(0.5, 0.0);
    CHECK(diag_part(psi.projector(), basis).max_abs_diff(expected) <= 1e-15);

    ComplexMatrix off(2, 2);
    off(0, 1) = Complex(1.0, 2.0);
    off(1, 0) = Complex(1.0, -2.0);
    CHECK(diag_part(off, basis).max_abs() == 0.0);
}

TEST_CASE("diag_part: idempotent, trace-preserving, symmetric trace identity") {
    RngStream rng(7311);
    for (int dim : {2, 3, 6}) {
        const CollapseBasis standard = CollapseBasis::standard(dim);
        // Also exercise a genuinely non-standard basis from a Haar frame.
        RngStream frame_rng = rng.split();
        ComplexMatrix cols(dim, dim);
        {
            const Effect e = sample_random_spectral_effect(dim, frame_rng);
            const auto dec = hermitian_eig(e.matrix());
            cols = dec.eigenvectors;
        }
        const CollapseBasis haar = CollapseBasis::from_columns(cols);

        for (const CollapseBasis& basis : {standard, haar}) {
            const ComplexMatrix x = random_hermitian(dim, rng);
            const ComplexMatrix y = random_hermitian(dim, rng);
            const ComplexMatrix dx = diag_part(x, basis);

            CHECK(diag_part(dx, basis).max_abs_diff(dx) <= 1e-12);
            CHECK(dx.trace().real() == doctest::Approx(x.trace().real()).epsilon(1e-12));
            CHECK(dx.hermiticity_defect() <= 1e-12);
            // tr(X diag Y) = tr(Y diag X)
            CHECK(trace_product_real(x, diag_part(y, basis)) ==
                  doctest::Approx(trace_product_real(y, dx)).epsilon(1e-10));
        }
    }
}

TEST_CASE("diag_part: dimension mismatch") {
    CHECK(thrown_code([] {
              diag_part(ComplexMatrix::identity(3), CollapseBasis::standard(2));
          }) == Errc::DimensionMismatch);
}

TEST_CASE("partial_trace_t: product state, Bell state, identity") {
    RngStream rng(5150);
    const StateVector s = sample_uniform_state(2, rng);
    const StateVector t = sample_uniform_state(3, rng);
    std::vector<Complex> joint(6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) joint[static_cast<std::size_t>(i * 3 + j)] = s[i] * t[j];
    const StateVector st = StateVector::normalized(std::move(joint));
    CHECK(partial_trace_t(st.projector(), 2, 3).max_abs_diff(s.projector()) <= 1e-12);

    // Bell state (|00> + |11>)/sqrt(2): explicit 4x4 sum over the T basis
    // leaves I/2 on S.
    const StateVector bell =
        StateVector::normalized({Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)});
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= Complex(0.5, 0.0);
    CHECK(partial_trace_t(bell.projector(), 2, 2).max_abs_diff(half) <= 1e-15);

    ComplexMatrix mixed = ComplexMatrix::identity(6);
    mixed *= Complex(1.0 / 6.0, 0.0);
    ComplexMatrix third = ComplexMatrix::identity(2);
    third *= Complex(0.5, 0.0);
    CHECK(partial_trace_t(mixed, 2, 3).max_abs_diff(third) <= 1e-15);
}

TEST_CASE("partial_trace_t: trace preservation and positivity") {
    RngStream rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = random_density(6, 4, rng);
        const ComplexMatrix reduced = partial_trace_t(rho.matrix(), 2, 3);
        CHECK(reduced.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        const auto dec = hermitian_eig(reduced);
        CHECK(dec.eigenvalues.front() >= -1e-10);
    }
    CHECK(thrown_code([] { partial_trace_t(ComplexMatrix::identity(5), 2, 3); }) ==
          Errc::DimensionMismatch);
}

TEST_CASE("eigenvalue_groups: clusters degenerate eigenvalues") {
    const std::vector<double> lams = {-1.0, 0.0, 1e-10, 0.5, 0.5 + 5e-10, 2.0};
    const auto groups = eigenvalue_groups(lams, 1e-9);
    REQUIRE(groups.size() == 4);
    CHECK(groups[0] == std::pair<int, int>{0, 1});
    CHECK(groups[1] == std::pair<int, int>{1, 3});
    CHECK(groups[2] == std::pair<int, int>{3, 5});
    CHECK(groups[3] == std::pair<int, int>{5, 6});
}

TEST_CASE("spectral_projector: degenerate group is basis independent") {
    // I on a 2d subspace: any orthonormal pair spans it, so the grouped
    // projector must come out as the subspace projector exactly.
    ComplexMatrix a(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    a(2, 2) = -1.0;
    const auto dec = hermitian_eig(a);
    const auto groups = eigenvalue_groups(dec.eigenvalues);
    REQUIRE(groups.size() == 2);
    const ComplexMatrix proj = spectral_projector(dec, groups[1].first, groups[1].second);
    ComplexMatrix expected(3, 3);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    CHECK(proj.max_abs_diff(expected) <= 1e-12);
}

}  // TEST_SUITE
