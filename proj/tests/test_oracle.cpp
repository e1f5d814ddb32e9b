#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sqwell/error.hpp"
#include "sqwell/metric.hpp"
#include "sqwell/oracle.hpp"

using namespace sqwell;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid layout") {
    const GridSpec g(16);
    CHECK(g.dim() == 30);
    CHECK(g.node(8) == 0.0);
    for (int j = 1; j < 16; ++j) CHECK(g.node(16 - j) == -g.node(j));
    CHECK_THROWS_AS(GridSpec(15), Error);
    CHECK_THROWS_AS(GridSpec(6), Error);
}

TEST_CASE("discrete structure identities are exact") {
    for (const CouplingPair c : {CouplingPair(1, 1), CouplingPair(0.7, 2.3), CouplingPair(1, -1)}) {
        const GridSpec g(64);
        const OperatorRep h = build_hamiltonian(c, g);
        const OperatorRep s = grid_pseudo_metric(g);
        CHECK(s.entries * s.entries == Eigen::MatrixXcd::Identity(g.dim(), g.dim()));
        CHECK(s.entries == s.entries.adjoint());
        CHECK(s.entries * h.entries * s.entries == h.entries.adjoint());
    }
}

TEST_CASE("grid commutator with Omega") {
    const GridSpec g(64);
    for (const CouplingPair c : {CouplingPair(1, 1), CouplingPair(1, 4), CouplingPair(3, 3)}) {
        const OperatorRep h = build_hamiltonian(c, g);
        const OperatorRep omega = channel_operator(spin_operator(c).entries, g);
        CHECK(h.entries * omega.entries == omega.entries * h.entries);
    }
    const CouplingPair c(0.7, 2.3);
    const OperatorRep h = build_hamiltonian(c, g);
    const OperatorRep omega = channel_operator(spin_operator(c).entries, g);
    CHECK(max_abs(h.entries * omega.entries - omega.entries * h.entries) <= 4e-16 * max_abs(h.entries) * max_abs(omega.entries));
}

TEST_CASE("second-order agreement with the secular roots") {
    const CouplingPair c(1, 1);
    const Spectrum sp = spectrum(c, 3);
    const std::vector<cplx> fine = eigenvalues(build_hamiltonian(c, GridSpec(256)));
    const std::vector<cplx> coarse = eigenvalues(build_hamiltonian(c, GridSpec(128)));
    CHECK(real_or_conjugate_paired(fine, 1e-8));
    const SpectrumComparison cmp = compare_spectrum(sp.levels, fine, 4, coarse);
    CHECK_FALSE(cmp.multiplicity_mismatch);
    CHECK(cmp.max_rel_error <= 5e-3);
    REQUIRE(cmp.richardson_order);
    CHECK(*cmp.richardson_order == doctest::Approx(2.0).epsilon(0.05));
    for (const LevelComparison& l : cmp.levels) {
        CHECK(l.multiplicity == 2);
        CHECK(l.max_imag <= 1e-6);
        CHECK(l.splitting <= 1e-6);
        CHECK(l.numeric < l.analytic);  // the three-point Laplacian underestimates
    }
}

TEST_CASE("grid eigenvalues at M = 512 (numpy reference)") {
    const std::vector<cplx> ev = eigenvalues(build_hamiltonian({1, 1}, GridSpec(512)));
    const double ref[] = {2.56995065, 9.79215043, 22.217392, 39.4573793};
    for (int i = 0; i < 4; ++i) {
        CHECK(ev[2 * i].real() == doctest::Approx(ref[i]).epsilon(2e-8));
        CHECK(ev[2 * i + 1].real() == doctest::Approx(ref[i]).epsilon(2e-8));
    }
}

TEST_CASE("eigenvectors align with the analytic doublets") {
    const CouplingPair c(1, 1);
    const GridSpec g(256);
    const std::vector<EigenPair> pairs = eigenpairs(build_hamiltonian(c, g), 4);
    const ModeBasis basis = build_mode_basis(c, 2);
    for (int n = 0; n < 2; ++n) {
        const std::vector<Eigen::VectorXcd> span{pairs[2 * n].vector, pairs[2 * n + 1].vector};
        for (int s = 0; s < 2; ++s) CHECK(subspace_alignment(basis.states[2 * n + s].ket(), span, g) >= 1 - 1e-4);
    }
    CHECK_THROWS_AS(eigenpairs(build_hamiltonian(c, GridSpec(8)), 15), Error);
}

TEST_CASE("negative-product oracle contradicts the reduced formula") {
    // The grid spectrum at Y = 1, Z = -1 is real, doubly degenerate and
    // converges to 2.3672, 9.9438, 22.193, not to s^2 -+ 1.
    const CouplingPair c(1, -1);
    const std::vector<cplx> ev = eigenvalues(build_hamiltonian(c, GridSpec(512)));
    CHECK(ev[0].real() == doctest::Approx(2.3672).epsilon(2e-4));
    CHECK(ev[1].real() == doctest::Approx(2.3672).epsilon(2e-4));
    CHECK(std::abs(ev[0].imag()) <= 1e-8);
    CHECK(ev[2].real() == doctest::Approx(9.9438).epsilon(2e-4));
    const Spectrum sp = spectrum(c, 2);
    const SpectrumComparison cmp = compare_spectrum(sp.levels, ev, 2);
    CHECK(cmp.multiplicity_mismatch);
    CHECK(cmp.max_rel_error > 0.3);
}

TEST_CASE("criticality on the grid") {
    const GridSpec g(128);
    const std::vector<double> cs{4.0, 5.0};
    const std::vector<CriticalityPoint> pts = criticality_scan(cs, g);
    CHECK(pts[0].max_imag <= 1e-6);
    CHECK(pts[1].max_imag > 0.1);
    const std::vector<double> bad{5.0, 4.0};
    CHECK_THROWS_AS(criticality_scan(bad, g), Error);
    const GridBracket b = grid_critical_bracket(g, 4.0, 5.0, 0.05);
    CHECK(b.first_complex - b.last_real <= 0.05);
    CHECK(b.last_real <= 4.49);
    CHECK(b.first_complex >= 4.45);
    CHECK_THROWS_AS(grid_critical_bracket(g, 4.6, 5.0, 0.05), Error);
}

TEST_CASE("real or conjugate paired") {
    const std::vector<cplx> ok{{1, 0}, {2, 1}, {2, -1}};
    const std::vector<cplx> bad{{1, 0}, {2, 1}};
    CHECK(real_or_conjugate_paired(ok, 1e-12));
    CHECK_FALSE(real_or_conjugate_paired(bad, 1e-12));
}
