#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sqwell/error.hpp"
#include "sqwell/metric.hpp"

using namespace sqwell;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Validation;
}

}  // namespace

TEST_CASE("diagonal overlap is sigma q <phi|P|phi> sqrt(4YZ)") {
    const ModeBasis basis = build_mode_basis({1, 1}, 1);
    const Eigen::MatrixXcd b = biorthogonality_matrix(basis.states, basis.left);
    // 2 * 0.97322042162262844 from mpmath
    CHECK(b(0, 0).real() == doctest::Approx(1.9464408432452569).epsilon(1e-13));
    CHECK(b(1, 1).real() == doctest::Approx(1.9464408432452569).epsilon(1e-13));
    CHECK(std::abs(b(0, 1)) <= 1e-13);
}

TEST_CASE("biorthogonality, closed form and quadrature") {
    const ModeBasis basis = build_mode_basis({1, 1}, 6);
    const Eigen::MatrixXcd b = biorthogonality_matrix(basis.states, basis.left);
    const Eigen::MatrixXcd bq = biorthogonality_matrix(basis.states, basis.left, OverlapMethod::Quadrature, 4096);
    CHECK(max_abs(b - bq) <= 1e-9);
    const double diag = b.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        CHECK(b(i, i).real() > 0);
        CHECK(std::abs(b(i, i).imag()) <= 1e-14);
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            if (i != j) CHECK(std::abs(b(i, j)) <= 1e-9 * diag);
        }
    }
}

TEST_CASE("metric properties") {
    for (const CouplingPair c : {CouplingPair(1, 1), CouplingPair(0.5, 2), CouplingPair(2, 2), CouplingPair(1e-3, 1e-3)}) {
        const ModeBasis basis = build_mode_basis(c, 16);
        const MetricWeights w = MetricWeights::uniform(16);
        const OperatorRep theta = build_theta_metric(basis, w, BasisSpec::mode());
        CAPTURE(c.y());
        CHECK(theta.form == ModeForm::Gram);
        CHECK(theta.entries == theta.entries.adjoint());
        const Signature sig = metric_signature(theta);
        CHECK(sig.positive == 32);
        CHECK(sig.min_eigenvalue > 0);
        CHECK(quasi_hermiticity_defect(mode_operator(basis, OperatorKind::Hamiltonian), theta) <= 1e-8);
        CHECK(quasi_hermiticity_defect(mode_operator(basis, OperatorKind::Spin), theta) <= 1e-8);
        const OperatorRep inv = inverse_theta_metric(basis, w, BasisSpec::mode());
        CHECK(max_abs(inv.entries * theta.entries - Eigen::MatrixXcd::Identity(32, 32)) <= 1e-8);
    }
}

TEST_CASE("mode operators are diagonal") {
    const ModeBasis basis = build_mode_basis({1, 1}, 4);
    const OperatorRep h = mode_operator(basis, OperatorKind::Hamiltonian);
    const OperatorRep omega = mode_operator(basis, OperatorKind::Spin);
    const OperatorRep id = mode_operator(basis, OperatorKind::Identity);
    for (Eigen::Index i = 0; i < 8; ++i) {
        CHECK(std::abs(h.entries(i, i) - basis.states[i].energy()) <= 1e-11 * basis.states[i].energy());
        CHECK(std::abs(omega.entries(i, i) - double(basis.states[i].sigma)) <= 1e-12);
    }
    CHECK(max_abs(id.entries - Eigen::MatrixXcd::Identity(8, 8)) <= 1e-12);
    const OperatorRep rec = spectral_reconstruct(basis, OperatorKind::Hamiltonian, BasisSpec::mode());
    CHECK(max_abs(rec.entries - h.entries) <= 1e-10);
}

TEST_CASE("grid representation of the metric") {
    const ModeBasis basis = build_mode_basis({1, 1}, 3);
    const MetricWeights w = MetricWeights::uniform(3);
    const OperatorRep theta = build_theta_metric(basis, w, BasisSpec::grid(128));
    CHECK(theta.basis == BasisKind::Grid);
    CHECK(theta.entries == theta.entries.adjoint());
    const Signature sig = metric_signature(theta, 1e-10);
    CHECK(sig.positive == 6);
    CHECK(sig.negative == 0);
    // Theta Theta^-1 projects onto the retained span
    const OperatorRep inv = inverse_theta_metric(basis, w, BasisSpec::grid(128));
    const OperatorRep proj = spectral_reconstruct(basis, OperatorKind::Identity, BasisSpec::grid(128));
    const Eigen::MatrixXcd p = proj.entries * proj.entries;
    CHECK(max_abs(p - proj.entries) <= 1e-3);
    CHECK(max_abs(inv.entries * theta.entries - proj.entries) <= 1e-3);
}

TEST_CASE("channel weight block") {
    const Eigen::Matrix2d eq = channel_weight_block({1.5, 1.5}, 2.0, 2.0);
    CHECK(eq(0, 1) == 0.0);
    CHECK(eq(1, 0) == 0.0);
    CHECK(eq(0, 0) == 6.0);
    const Eigen::Matrix2d neq = channel_weight_block({1, 4}, 3.0, 1.0);
    CHECK(neq(0, 1) == 4.0);
    CHECK(neq(1, 1) == 16.0);
}

TEST_CASE("theta involution on functions") {
    const ModeBasis basis = build_mode_basis({1, 1}, 2);
    const TwoChannelFunction k = basis.states[2].ket();
    const TwoChannelFunction back = apply_theta(apply_theta(k));
    for (double x : {-0.8, -0.1, 0.4}) CHECK(back(x) == k(x));
    const SampledPair sampled = apply_theta(SampledPair(k));
    CHECK(sampled(0.3) == apply_theta(k)(0.3));
}

TEST_CASE("weights") {
    std::istringstream in("# n S+ S-\n0 2 3\n\n2 0.5 0.25  # tail\n");
    const MetricWeights w = parse_weights(in, 4);
    CHECK(w.plus(0) == 2.0);
    CHECK(w.minus(0) == 3.0);
    CHECK(w.plus(1) == 1.0);
    CHECK(w.minus(2) == 0.25);
    CHECK(w.weight(2, -1) == 0.25);

    std::istringstream dup("0 1 1\n0 2 2\n");
    CHECK(code_of([&] { parse_weights(dup, 2); }) == ErrorCode::Validation);
    std::istringstream range("5 1 1\n");
    CHECK(code_of([&] { parse_weights(range, 2); }) == ErrorCode::Validation);
    std::istringstream junk("0 1\n");
    CHECK(code_of([&] { parse_weights(junk, 2); }) == ErrorCode::Validation);
    std::istringstream extra("0 1 1 1\n");
    CHECK(code_of([&] { parse_weights(extra, 2); }) == ErrorCode::Validation);

    const MetricWeights neg({1, -1}, {1, 1});
    CHECK(code_of([&] { neg.validate(); }) == ErrorCode::Validation);
    neg.validate(true);
    CHECK(code_of([&] { MetricWeights({0.0}, {1.0}).validate(true); }) == ErrorCode::Validation);
    CHECK(MetricWeights::uniform(2).scaled(3).plus(1) == 3.0);
}

TEST_CASE("indefinite weights give a pseudo-metric only when allowed") {
    const ModeBasis basis = build_mode_basis({1, 1}, 3);
    const MetricWeights w({1, -1, 1}, {1, 1, -2});
    CHECK(code_of([&] { build_theta_metric(basis, w, BasisSpec::mode()); }) == ErrorCode::Validation);
    const OperatorRep theta = build_theta_metric(basis, w, BasisSpec::mode(), true);
    const Signature sig = metric_signature(theta);
    CHECK(sig.negative == 2);
    CHECK(sig.positive == 4);
    // still intertwines H
    CHECK(quasi_hermiticity_defect(mode_operator(basis, OperatorKind::Hamiltonian), theta) <= 1e-8);
}

TEST_CASE("general R must be diagonal") {
    const ModeBasis basis = build_mode_basis({1, 1}, 2);
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(4, 4);
    r(0, 0) = 2.0;
    const MetricWeights w = weights_from_general(r, basis.states);
    CHECK(w.plus(0) == 2.0);
    CHECK(w.minus(1) == 1.0);
    r(0, 1) = 0.5;
    CHECK(code_of([&] { weights_from_general(r, basis.states); }) == ErrorCode::Validation);
    CHECK(code_of([&] { weights_from_general(Eigen::MatrixXd::Identity(3, 3), basis.states); }) ==
          ErrorCode::DimensionMismatch);
}

TEST_CASE("metric preconditions") {
    CHECK(code_of([] { spin_operator({1, -1}); }) == ErrorCode::Domain);
    const ModeBasis tiny = build_mode_basis({1e-14, 1e-14}, 2);
    CHECK(code_of([&] { build_theta_metric(tiny, MetricWeights::uniform(2), BasisSpec::mode()); }) == ErrorCode::Domain);
    const ModeBasis basis = build_mode_basis({1, 1}, 3);
    CHECK(code_of([&] { build_theta_metric(basis, MetricWeights::uniform(2), BasisSpec::mode()); }) ==
          ErrorCode::Validation);
    CHECK(code_of([&] { build_mode_basis({5, 5}, 1); }) == ErrorCode::RootLost);
    CHECK(code_of([&] { build_mode_basis({1, -1}, 1); }) == ErrorCode::Domain);
    const OperatorRep a = OperatorRep::mode(Eigen::MatrixXcd::Identity(2, 2), 1, ModeForm::Coefficients);
    const OperatorRep b = OperatorRep::mode(Eigen::MatrixXcd::Identity(4, 4), 2, ModeForm::Gram);
    CHECK(code_of([&] { quasi_hermiticity_defect(a, b); }) == ErrorCode::DimensionMismatch);
}
