#include "sqwell/verify.hpp"

#include <cmath>
#include <limits>

#include "sqwell/error.hpp"

namespace sqwell {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

CheckResult at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, value <= threshold, false, {}};
}

CheckResult skipped(std::string name, std::string why) {
    return {std::move(name), 0.0, 0.0, true, true, std::move(why)};
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void spectrum_checks(const CouplingPair& c, const Spectrum& sp, double tol, std::vector<CheckResult>& out) {
    double g_max = 0.0;
    double st_max = 0.0;
    double energy_max = 0.0;
    double box_max = 0.0;
    const double strength = c.strength();
    for (const LevelSolution& l : sp.levels) {
        switch (l.branch) {
            case BranchClass::PositiveProduct:
                g_max = std::max(g_max, std::abs(residual(l.s, strength)));
                st_max = std::max(st_max, std::abs(2 * l.s * l.t - strength) / std::max(1.0, strength));
                energy_max = std::max(energy_max, std::abs(l.E - (l.s * l.s - l.t * l.t)) / std::abs(l.E));
                break;
            case BranchClass::NegativeProduct: {
                const double shift = static_cast<int>(l.sublabel) * strength;
                box_max = std::max(box_max, std::abs(l.s - box_wavenumber(l.n)));
                energy_max = std::max(energy_max, std::abs(l.E - (l.s * l.s + shift)) / std::abs(l.E));
                break;
            }
            case BranchClass::Decoupled:
                box_max = std::max(box_max, std::abs(l.s - box_wavenumber(l.n)));
                energy_max = std::max(energy_max, std::abs(l.E - l.s * l.s) / std::abs(l.E));
                break;
        }
    }
    if (classify_branch(c) == BranchClass::PositiveProduct) {
        out.push_back(at_most("secular_residual", g_max, tol));
        out.push_back(at_most("st_product", st_max, 1e-10));
    } else {
        out.push_back(at_most("box_wavenumber", box_max, 1e-12));
    }
    out.push_back(at_most("energy_formula", energy_max, 4 * kUlp));
}

void state_checks(const ModeBasis& basis, std::vector<CheckResult>& out) {
    const CouplingPair& c = basis.coupling;
    double ratio = 0.0;
    double matching = 0.0;
    double energy_split = 0.0;
    for (std::size_t k = 0; k < basis.states.size(); ++k) {
        const ChannelState& st = basis.states[k];
        const double expected = st.sigma * std::sqrt(c.z() / c.y());
        ratio = std::max(ratio, std::abs(st.A / st.B - expected));
        matching = std::max(matching, matching_residual(st));
        if (k % 2 == 1) energy_split = std::max(energy_split, std::abs(st.energy() - basis.states[k - 1].energy()));
    }
    out.push_back(at_most("amplitude_ratio", ratio, 1e-10));
    out.push_back(at_most("matching_residual", matching, 1e-10));
    out.push_back(at_most("doublet_energy_split", energy_split, 0.0));
}

void metric_checks(const ModeBasis& basis, const SuiteConfig& cfg, std::vector<CheckResult>& out) {
    const Eigen::MatrixXcd b = biorthogonality_matrix(basis.states, basis.left);
    double diag_max = 0.0;
    double diag_min = std::numeric_limits<double>::infinity();
    double off = 0.0;
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        diag_max = std::max(diag_max, std::abs(b(i, i)));
        diag_min = std::min(diag_min, b(i, i).real());
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            if (i != j) off = std::max(off, std::abs(b(i, j)));
        }
    }
    out.push_back(at_most("biorthogonality_offdiag", off / diag_max, 1e-9));
    CheckResult diag{"biorthogonality_diag_min", diag_min / diag_max, 0.0, diag_min > 0, false, "must be > 0"};
    out.push_back(diag);

    const MetricWeights w = cfg.weights.levels() == 0 ? MetricWeights::uniform(basis.levels()) : cfg.weights;
    const OperatorRep theta = build_theta_metric(basis, w, BasisSpec::mode(), cfg.allow_indefinite);
    out.push_back(at_most("metric_hermitian", max_abs(theta.entries - theta.entries.adjoint()), 0.0));
    const Signature sig = metric_signature(theta);
    CheckResult pos{"metric_min_eigenvalue", sig.min_eigenvalue, 0.0, sig.min_eigenvalue > 0, false, "must be > 0"};
    if (cfg.allow_indefinite) {
        pos.skipped = true;
        pos.passed = true;
        pos.note = "indefinite weights allowed";
    }
    out.push_back(pos);
    out.push_back(at_most("defect_H", quasi_hermiticity_defect(mode_operator(basis, OperatorKind::Hamiltonian), theta), 1e-8));
    out.push_back(at_most("defect_Omega", quasi_hermiticity_defect(mode_operator(basis, OperatorKind::Spin), theta), 1e-8));
    const OperatorRep inv = inverse_theta_metric(basis, w, BasisSpec::mode());
    const Eigen::MatrixXcd id = inv.entries * theta.entries;
    out.push_back(at_most("inverse_identity", max_abs(id - Eigen::MatrixXcd::Identity(id.rows(), id.cols())), 1e-8));
}

void grid_checks(const SuiteConfig& cfg, const Spectrum& sp, std::vector<CheckResult>& out) {
    const CouplingPair& c = cfg.coupling;
    const GridSpec g(cfg.grid);
    const OperatorRep h = build_hamiltonian(c, g);
    const OperatorRep s = grid_pseudo_metric(g);

    const Eigen::MatrixXcd ss = s.entries * s.entries;
    out.push_back(at_most("theta_involution", max_abs(ss - Eigen::MatrixXcd::Identity(ss.rows(), ss.cols())), 0.0));
    out.push_back(at_most("pseudo_hermiticity_grid", max_abs(s.entries * h.entries * s.entries - h.entries.adjoint()), 0.0));

    if (c.y() > 0 && c.z() > 0) {
        const OperatorRep omega = channel_operator(spin_operator(c).entries, g);
        const Eigen::MatrixXcd comm = h.entries * omega.entries - omega.entries * h.entries;
        // Exact when sqrt(Z/Y) and sqrt(Y/Z) reproduce Z and Y bit for bit; a few ulp otherwise.
        out.push_back(at_most("commutator_H_Omega", max_abs(comm) / (max_abs(h.entries) * max_abs(omega.entries)), 4 * kUlp));
    } else {
        out.push_back(skipped("commutator_H_Omega", "Omega needs Y > 0 and Z > 0"));
    }

    const std::vector<cplx> ev = eigenvalues(h);
    out.push_back({"oracle_real_or_paired", 0.0, 1e-8, real_or_conjugate_paired(ev, 1e-8), false, {}});

    int targets = 0;
    for (std::size_t i = 0; i < sp.levels.size(); ++i) {
        if (i == 0 || sp.levels[i].n != sp.levels[i - 1].n || sp.levels[i].E != sp.levels[i - 1].E) ++targets;
    }
    const int k = std::min(4, targets);
    const SpectrumComparison cmp = compare_spectrum(sp.levels, ev, k);
    out.push_back(at_most("oracle_rel_error", cmp.max_rel_error, 5e-3));
    double split = 0.0;
    double imag = 0.0;
    for (const LevelComparison& l : cmp.levels) {
        split = std::max(split, l.splitting);
        imag = std::max(imag, l.max_imag);
    }
    out.push_back(at_most("oracle_max_imag", imag, 1e-6));
    CheckResult mult = at_most("oracle_cluster_spread", split, 1e-6);
    if (cmp.multiplicity_mismatch) {
        mult.passed = false;
        mult.note = "cluster multiplicity differs from the analytic degeneracy";
    }
    out.push_back(mult);
}

}  // namespace

std::vector<CheckResult> invariant_suite(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const CouplingPair& c = cfg.coupling;
    const Spectrum sp = spectrum(c, cfg.levels - 1, cfg.tol);
    if (sp.truncated) {
        throw Error(ErrorCode::RootLost, "level " + std::to_string(*sp.lost_level) + " is past its critical coupling");
    }
    spectrum_checks(c, sp, cfg.tol, out);

    if (c.y() > 0 && c.z() > 0 && c.strength() >= kMinMetricStrength) {
        const ModeBasis basis = build_mode_basis(c, cfg.levels, cfg.tol);
        state_checks(basis, out);
        metric_checks(basis, cfg, out);
    } else {
        for (const char* name : {"amplitude_ratio", "matching_residual", "doublet_energy_split", "biorthogonality_offdiag",
                                 "biorthogonality_diag_min", "metric_hermitian", "metric_min_eigenvalue", "defect_H",
                                 "defect_Omega", "inverse_identity"}) {
            out.push_back(skipped(name, "states and metrics need Y > 0 and Z > 0"));
        }
    }
    grid_checks(cfg, sp, out);
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) noexcept {
    for (const CheckResult& r : results) {
        if (!r.passed) return false;
    }
    return true;
}

}  // namespace sqwell
