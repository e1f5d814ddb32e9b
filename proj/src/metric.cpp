#include "sqwell/metric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "sqwell/error.hpp"

namespace sqwell {

namespace {

TwoChannelFunction scaled(const TwoChannelFunction& f, cplx factor) {
    return {f.upper.scaled(factor), f.lower.scaled(factor)};
}

void require_metric_strength(const CouplingPair& c) {
    if (!(c.strength() >= kMinMetricStrength)) {
        throw Error(ErrorCode::Domain,
                    "sqrt(YZ) below 1e-6: biorthogonal overlaps vanish, use the Hermitian limit Theta = I");
    }
}

void require_weights_cover(const MetricWeights& w, const ModeBasis& basis) {
    if (w.levels() < basis.levels()) {
        throw Error(ErrorCode::Validation, "weights cover " + std::to_string(w.levels()) + " levels, basis has " +
                                               std::to_string(basis.levels()));
    }
}

// Hermitian completion from the upper triangle; diagonal forced real.
void make_hermitian(Eigen::MatrixXcd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, i) = m(i, i).real();
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) m(j, i) = std::conj(m(i, j));
    }
}

std::vector<cplx> diagonal_overlaps(const ModeBasis& basis) {
    std::vector<cplx> out(basis.states.size());
    double largest = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = inner(basis.left[k].bra, basis.states[k].ket());
        largest = std::max(largest, std::abs(out[k]));
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!(std::abs(out[k]) > 1e-14 * largest)) {
            throw Error(ErrorCode::NormalizationSingular,
                        "<<n,s|n,s> vanishes for n = " + std::to_string(basis.states[k].level->n));
        }
    }
    return out;
}

double spectral_weight(const ChannelState& st, OperatorKind kind) {
    switch (kind) {
        case OperatorKind::Identity: return 1.0;
        case OperatorKind::Hamiltonian: return st.energy();
        case OperatorKind::Spin: return st.sigma;
    }
    return 0.0;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

MetricWeights::MetricWeights(std::vector<double> plus, std::vector<double> minus)
    : plus_(std::move(plus)), minus_(std::move(minus)) {
    if (plus_.size() != minus_.size()) throw Error(ErrorCode::Validation, "S_plus and S_minus lengths differ");
}

MetricWeights MetricWeights::uniform(int levels, double value) {
    if (levels < 0) throw Error(ErrorCode::Validation, "negative level count");
    return {std::vector<double>(levels, value), std::vector<double>(levels, value)};
}

double MetricWeights::weight(int n, int sigma) const { return sigma == 1 ? plus_.at(n) : minus_.at(n); }

MetricWeights MetricWeights::scaled(double factor) const {
    MetricWeights out = *this;
    for (double& v : out.plus_) v *= factor;
    for (double& v : out.minus_) v *= factor;
    return out;
}

void MetricWeights::validate(bool allow_indefinite) const {
    for (int n = 0; n < levels(); ++n) {
        for (int sigma : {1, -1}) {
            const double s = weight(n, sigma);
            const std::string name = "S(" + std::to_string(n) + (sigma == 1 ? ",+)" : ",-)");
            if (!std::isfinite(s) || s == 0.0) {
                throw Error(ErrorCode::Validation, name + " must be finite and non-zero");
            }
            if (s < 0.0 && !allow_indefinite) {
                throw Error(ErrorCode::Validation,
                            name + " = " + std::to_string(s) + " is negative; only the unsafe mode builds pseudo-metrics");
            }
        }
    }
}

MetricWeights parse_weights(std::istream& in, int levels) {
    std::vector<double> plus(levels, 1.0);
    std::vector<double> minus(levels, 1.0);
    std::vector<bool> seen(levels, false);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        long long n = 0;
        double sp = 0.0;
        double sm = 0.0;
        if (!(fields >> n)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw Error(ErrorCode::Validation, "weight line " + std::to_string(line_no) + ": expected `n S_plus S_minus`");
        }
        std::string extra;
        if (!(fields >> sp >> sm) || (fields >> extra)) {
            throw Error(ErrorCode::Validation, "weight line " + std::to_string(line_no) + ": expected `n S_plus S_minus`");
        }
        if (n < 0 || n >= levels) {
            throw Error(ErrorCode::Validation, "weight line " + std::to_string(line_no) + ": level " + std::to_string(n) +
                                                   " outside 0.." + std::to_string(levels - 1));
        }
        if (seen[n]) {
            throw Error(ErrorCode::Validation, "weight line " + std::to_string(line_no) + ": duplicate level " + std::to_string(n));
        }
        if (!std::isfinite(sp) || !std::isfinite(sm)) {
            throw Error(ErrorCode::Validation, "weight line " + std::to_string(line_no) + ": non-finite weight");
        }
        seen[n] = true;
        plus[n] = sp;
        minus[n] = sm;
    }
    return {std::move(plus), std::move(minus)};
}

MetricWeights read_weight_file(const std::filesystem::path& path, int levels) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Validation, "cannot open weight file " + path.string());
    return parse_weights(in, levels);
}

MetricWeights weights_from_general(const Eigen::MatrixXd& r, const std::vector<ChannelState>& states) {
    const auto dim = static_cast<Eigen::Index>(states.size());
    if (r.rows() != dim || r.cols() != dim || dim % 2 != 0) {
        throw Error(ErrorCode::DimensionMismatch, "R must be square over the retained (n, sigma) states");
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (i == j || r(i, j) == 0.0) continue;
            if (states[i].energy() != states[j].energy() || states[i].sigma != states[j].sigma) {
                throw Error(ErrorCode::Validation,
                            "R couples states with different energy or spin; R (E - F) = 0 and R (sigma - tau) = 0 "
                            "force R to be diagonal");
            }
        }
    }
    std::vector<double> plus(dim / 2);
    std::vector<double> minus(dim / 2);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const int n = states[i].level->n;
        if (n < 0 || n >= dim / 2) throw Error(ErrorCode::Validation, "states must cover levels 0..N-1");
        (states[i].sigma == 1 ? plus : minus)[n] = r(i, i);
    }
    return {std::move(plus), std::move(minus)};
}

TwoChannelFunction apply_theta(const TwoChannelFunction& v) {
    return {v.lower.reflected(), v.upper.reflected()};
}

SampledPair apply_theta(SampledPair v) {
    return [f = std::move(v)](double x) {
        const auto [upper, lower] = f(-x);
        return std::pair<cplx, cplx>{lower, upper};
    };
}

LeftState left_vector(const ChannelState& state) {
    LeftState out;
    out.q = state.q;
    out.n = state.level->n;
    out.sigma = state.sigma;
    out.E = state.energy();
    out.bra = scaled(apply_theta(state.ket()), static_cast<double>(state.q));
    return out;
}

ModeBasis build_mode_basis(const CouplingPair& c, int levels, double tol) {
    if (levels < 1) throw Error(ErrorCode::Validation, "need at least one retained level");
    ModeBasis basis;
    basis.coupling = c;
    for (int n = 0; n < levels; ++n) {
        const auto level = std::make_shared<const LevelSolution>(solve_level(n, c, tol));
        for (int sigma : {1, -1}) {
            basis.states.push_back(solve_coefficients(level, c, sigma));
            basis.left.push_back(left_vector(basis.states.back()));
        }
    }
    return basis;
}

Eigen::MatrixXcd biorthogonality_matrix(const std::vector<ChannelState>& states, const std::vector<LeftState>& left,
                                        OverlapMethod method, int panels) {
    if (states.size() != left.size()) throw Error(ErrorCode::DimensionMismatch, "state and left lists differ in length");
    const auto dim = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            const TwoChannelFunction& bra = left[i].bra;
            const TwoChannelFunction ket = states[j].ket();
            if (method == OverlapMethod::ClosedForm) {
                g(i, j) = inner(bra, ket);
            } else {
                g(i, j) = quadrature_overlap([&](double x) { return bra.upper.value(x); },
                                             [&](double x) { return ket.upper.value(x); }, panels) +
                          quadrature_overlap([&](double x) { return bra.lower.value(x); },
                                             [&](double x) { return ket.lower.value(x); }, panels);
            }
        }
    }
    return g;
}

OperatorRep spin_operator(const CouplingPair& c) {
    if (!(c.y() > 0.0 && c.z() > 0.0)) throw Error(ErrorCode::Domain, "spin operator needs Y > 0 and Z > 0");
    Eigen::Matrix2cd omega;
    omega << 0.0, std::sqrt(c.z() / c.y()), std::sqrt(c.y() / c.z()), 0.0;
    return OperatorRep::channel(omega);
}

Eigen::Matrix2d channel_weight_block(const CouplingPair& c, double s_plus, double s_minus) {
    const double sum = s_plus + s_minus;
    const double diff = c.strength() * (s_plus - s_minus);
    Eigen::Matrix2d m;
    m << c.y() * sum, diff, diff, c.z() * sum;
    return m;
}

OperatorRep build_theta_metric(const ModeBasis& basis, const MetricWeights& weights, const BasisSpec& rep,
                               bool allow_indefinite) {
    require_metric_strength(basis.coupling);
    require_weights_cover(weights, basis);
    weights.validate(allow_indefinite);
    const auto dim = static_cast<Eigen::Index>(basis.states.size());

    if (rep.kind == BasisKind::Mode) {
        const Eigen::MatrixXcd b = biorthogonality_matrix(basis.states, basis.left);
        Eigen::VectorXd s(dim);
        for (Eigen::Index k = 0; k < dim; ++k) s(k) = weights.weight(basis.states[k].level->n, basis.states[k].sigma);
        Eigen::MatrixXcd gram = b.adjoint() * s.asDiagonal() * b;
        make_hermitian(gram);
        return OperatorRep::mode(std::move(gram), basis.levels(), ModeForm::Gram);
    }
    if (rep.kind == BasisKind::Grid) {
        const GridSpec g(rep.grid_intervals);
        Eigen::MatrixXcd theta = Eigen::MatrixXcd::Zero(g.dim(), g.dim());
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Eigen::VectorXcd l = sample_on_grid(basis.left[k].bra, g);
            const double w = weights.weight(basis.states[k].level->n, basis.states[k].sigma) * g.spacing();
            theta.noalias() += w * l * l.adjoint();
        }
        make_hermitian(theta);
        return OperatorRep::grid(std::move(theta), g.intervals());
    }
    throw Error(ErrorCode::Unsupported, "metric needs a MODE or GRID representation");
}

OperatorRep inverse_theta_metric(const ModeBasis& basis, const MetricWeights& weights, const BasisSpec& rep) {
    require_metric_strength(basis.coupling);
    require_weights_cover(weights, basis);
    weights.validate(true);
    const std::vector<cplx> norms = diagonal_overlaps(basis);
    const auto dim = static_cast<Eigen::Index>(basis.states.size());
    Eigen::VectorXd coeff(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double s = weights.weight(basis.states[k].level->n, basis.states[k].sigma);
        coeff(k) = 1.0 / (s * std::norm(norms[k]));
    }

    if (rep.kind == BasisKind::Mode) {
        return OperatorRep::mode(coeff.cast<cplx>().asDiagonal(), basis.levels(), ModeForm::Coefficients);
    }
    if (rep.kind == BasisKind::Grid) {
        const GridSpec g(rep.grid_intervals);
        Eigen::MatrixXcd inv = Eigen::MatrixXcd::Zero(g.dim(), g.dim());
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Eigen::VectorXcd v = sample_on_grid(basis.states[k].ket(), g);
            inv.noalias() += (coeff(k) * g.spacing()) * v * v.adjoint();
        }
        make_hermitian(inv);
        return OperatorRep::grid(std::move(inv), g.intervals());
    }
    throw Error(ErrorCode::Unsupported, "inverse metric needs a MODE or GRID representation");
}

OperatorRep mode_operator(const ModeBasis& basis, OperatorKind kind) {
    const std::vector<cplx> norms = diagonal_overlaps(basis);
    const auto dim = static_cast<Eigen::Index>(basis.states.size());
    Eigen::Matrix2cd omega = Eigen::Matrix2cd::Identity();
    if (kind == OperatorKind::Spin) omega = spin_operator(basis.coupling).entries;

    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const TwoChannelFunction ket = basis.states[j].ket();
        TwoChannelFunction image = ket;
        if (kind == OperatorKind::Hamiltonian) image = apply_hamiltonian(ket, basis.coupling);
        if (kind == OperatorKind::Spin) image = apply_channel_matrix(omega, ket);
        for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = inner(basis.left[i].bra, image) / norms[i];
    }
    return OperatorRep::mode(std::move(m), basis.levels(), ModeForm::Coefficients);
}

double quasi_hermiticity_defect(const OperatorRep& op, const OperatorRep& metric) {
    if (op.dim() != metric.dim() || op.entries.cols() != metric.entries.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "operator and metric dimensions differ");
    }
    const Eigen::MatrixXcd d = op.entries.adjoint() * metric.entries - metric.entries * op.entries;
    const double scale = max_abs(metric.entries) * max_abs(op.entries);
    return scale > 0 ? max_abs(d) / scale : max_abs(d);
}

OperatorRep spectral_reconstruct(const ModeBasis& basis, OperatorKind kind, const BasisSpec& rep) {
    require_metric_strength(basis.coupling);
    const std::vector<cplx> norms = diagonal_overlaps(basis);
    const auto dim = static_cast<Eigen::Index>(basis.states.size());

    if (rep.kind == BasisKind::Mode) {
        const Eigen::MatrixXcd b = biorthogonality_matrix(basis.states, basis.left);
        Eigen::VectorXcd lambda(dim);
        Eigen::VectorXcd inv_norm(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            lambda(k) = spectral_weight(basis.states[k], kind) / norms[k];
            inv_norm(k) = 1.0 / norms[k];
        }
        Eigen::MatrixXcd m = inv_norm.asDiagonal() * b * lambda.asDiagonal() * b;
        return OperatorRep::mode(std::move(m), basis.levels(), ModeForm::Coefficients);
    }
    if (rep.kind == BasisKind::Grid) {
        const GridSpec g(rep.grid_intervals);
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.dim(), g.dim());
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Eigen::VectorXcd ket = sample_on_grid(basis.states[k].ket(), g);
            const Eigen::VectorXcd bra = sample_on_grid(basis.left[k].bra, g);
            m.noalias() += (spectral_weight(basis.states[k], kind) * g.spacing() / norms[k]) * ket * bra.adjoint();
        }
        return OperatorRep::grid(std::move(m), g.intervals());
    }
    throw Error(ErrorCode::Unsupported, "spectral reconstruction needs a MODE or GRID representation");
}

Signature metric_signature(const OperatorRep& metric, double rel_tol) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(metric.entries, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "Hermitian eigensolve failed");
    const Eigen::VectorXd ev = es.eigenvalues();
    Signature sig;
    sig.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    if (ev.size() == 0) return sig;
    sig.min_eigenvalue = ev.minCoeff();
    sig.max_eigenvalue = ev.maxCoeff();
    const double cutoff = rel_tol * ev.cwiseAbs().maxCoeff();
    for (double v : sig.eigenvalues) {
        if (v > cutoff) {
            ++sig.positive;
        } else if (v < -cutoff) {
            ++sig.negative;
        } else {
            ++sig.zero;
        }
    }
    return sig;
}

}  // namespace sqwell
