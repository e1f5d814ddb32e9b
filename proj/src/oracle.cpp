#include "sqwell/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/QR>

#include "sqwell/error.hpp"

namespace sqwell {

namespace {

bool by_real_then_imag(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

struct Decomposition {
    std::vector<cplx> values;
    Eigen::MatrixXcd vectors;  // empty unless requested
};

Decomposition zgeev(const Eigen::MatrixXcd& m, bool want_vectors) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "eigensolve needs a non-empty square matrix");
    }
    const auto n = static_cast<lapack_int>(m.rows());
    Eigen::MatrixXcd work = m;  // zgeev overwrites its input
    Decomposition out;
    out.values.resize(n);
    if (want_vectors) out.vectors.resize(n, n);
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n, out.values.data(),
                      nullptr, 1, want_vectors ? out.vectors.data() : nullptr, n);
    if (info != 0) {
        throw Error(ErrorCode::NumericalFailure, "zgeev failed with info = " + std::to_string(info));
    }
    return out;
}

struct Cluster {
    double mean = 0.0;
    double spread = 0.0;
    double max_imag = 0.0;
    int size = 0;
};

std::vector<Cluster> cluster(std::span<const cplx> values) {
    std::vector<cplx> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), by_real_then_imag);
    std::vector<Cluster> out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const cplx first = sorted[i];
        std::size_t j = i;
        Cluster c;
        double lo = first.real();
        double hi = first.real();
        while (j < sorted.size() && std::abs(sorted[j] - first) <= 1e-6 * std::max(1.0, std::abs(first))) {
            c.mean += sorted[j].real();
            c.max_imag = std::max(c.max_imag, std::abs(sorted[j].imag()));
            lo = std::min(lo, sorted[j].real());
            hi = std::max(hi, sorted[j].real());
            ++j;
        }
        c.size = static_cast<int>(j - i);
        c.mean /= c.size;
        c.spread = hi - lo;
        out.push_back(c);
        i = j;
    }
    return out;
}

double lowest_max_imag(const GridSpec& g, double c, int lowest) {
    const std::vector<cplx> ev = eigenvalues(build_hamiltonian(CouplingPair(c, c), g));
    double m = 0.0;
    for (int i = 0; i < lowest && i < static_cast<int>(ev.size()); ++i) m = std::max(m, std::abs(ev[i].imag()));
    return m;
}

}  // namespace

GridSpec::GridSpec(int intervals) : m_(intervals) {
    if (intervals < 8 || intervals % 2 != 0) {
        throw Error(ErrorCode::Validation, "grid needs an even number of intervals M >= 8");
    }
}

OperatorRep build_hamiltonian(const CouplingPair& c, const GridSpec& g) {
    const int n = g.interior();
    const double inv_h2 = static_cast<double>(g.intervals()) * g.intervals() / 4.0;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(g.dim(), g.dim());
    for (int ch = 0; ch < 2; ++ch) {
        const int base = ch * n;
        for (int i = 0; i < n; ++i) {
            h(base + i, base + i) = 2 * inv_h2;
            if (i + 1 < n) {
                h(base + i, base + i + 1) = -inv_h2;
                h(base + i + 1, base + i) = -inv_h2;
            }
        }
    }
    const PotentialSpec v(c);
    for (int j = 1; j <= n; ++j) {
        const double x = g.node(j);
        h(j - 1, n + j - 1) = v.upper_coupling(x);
        h(n + j - 1, j - 1) = v.lower_coupling(x);
    }
    return OperatorRep::grid(std::move(h), g.intervals());
}

OperatorRep channel_operator(const Eigen::Matrix2cd& block, const GridSpec& g) {
    const int n = g.interior();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.dim(), g.dim());
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (block(a, b) == cplx{}) continue;
            for (int i = 0; i < n; ++i) m(a * n + i, b * n + i) = block(a, b);
        }
    }
    return OperatorRep::grid(std::move(m), g.intervals());
}

OperatorRep grid_pseudo_metric(const GridSpec& g) {
    const int n = g.interior();
    const int m = g.intervals();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(g.dim(), g.dim());
    for (int j = 1; j <= n; ++j) {
        s(j - 1, n + (m - j) - 1) = 1.0;
        s(n + j - 1, (m - j) - 1) = 1.0;
    }
    return OperatorRep::grid(std::move(s), m);
}

Eigen::VectorXcd sample_on_grid(const SampledPair& f, const GridSpec& g) {
    const int n = g.interior();
    Eigen::VectorXcd v(g.dim());
    for (int j = 1; j <= n; ++j) {
        const auto [up, low] = f(g.node(j));
        v(j - 1) = up;
        v(n + j - 1) = low;
    }
    return v;
}

std::vector<cplx> eigenvalues(const OperatorRep& rep) {
    std::vector<cplx> values = zgeev(rep.entries, false).values;
    std::sort(values.begin(), values.end(), by_real_then_imag);
    return values;
}

std::vector<EigenPair> eigenpairs(const OperatorRep& rep, int k) {
    if (k < 0 || k > rep.dim()) throw Error(ErrorCode::Validation, "requested more eigenpairs than dim");
    const Decomposition d = zgeev(rep.entries, true);
    std::vector<int> order(d.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return by_real_then_imag(d.values[a], d.values[b]); });
    std::vector<EigenPair> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXcd v = d.vectors.col(order[i]);
        v.normalize();
        out.push_back({d.values[order[i]], std::move(v)});
    }
    return out;
}

bool real_or_conjugate_paired(std::span<const cplx> values, double tol) {
    for (const cplx v : values) {
        const double scale = tol * std::max(1.0, std::abs(v));
        if (std::abs(v.imag()) <= scale) continue;
        const bool paired = std::any_of(values.begin(), values.end(),
                                        [&](cplx w) { return std::abs(w - std::conj(v)) <= scale; });
        if (!paired) return false;
    }
    return true;
}

SpectrumComparison compare_spectrum(std::span<const LevelSolution> analytic, std::span<const cplx> numeric,
                                    int k, std::span<const cplx> coarse) {
    struct Target {
        int n;
        double E;
        int expected;
    };
    std::vector<Target> targets;
    for (const LevelSolution& l : analytic) {
        if (!targets.empty() && targets.back().E == l.E && targets.back().n == l.n) {
            if (l.branch == BranchClass::NegativeProduct) ++targets.back().expected;
            continue;
        }
        targets.push_back({l.n, l.E, l.branch == BranchClass::NegativeProduct ? 1 : 2});
    }
    std::sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) { return a.E < b.E; });

    const std::vector<Cluster> fine = cluster(numeric);
    const std::vector<Cluster> rough = cluster(coarse);
    if (k < 0 || static_cast<int>(targets.size()) < k || static_cast<int>(fine.size()) < k) {
        throw Error(ErrorCode::Validation, "compare_spectrum needs at least k levels on both sides");
    }

    SpectrumComparison out;
    double order_sum = 0.0;
    int order_count = 0;
    for (int i = 0; i < k; ++i) {
        LevelComparison lc;
        lc.n = targets[i].n;
        lc.analytic = targets[i].E;
        lc.numeric = fine[i].mean;
        lc.abs_error = std::abs(lc.numeric - lc.analytic);
        lc.rel_error = lc.abs_error / std::max(std::abs(lc.analytic), 1e-300);
        lc.splitting = fine[i].spread;
        lc.max_imag = fine[i].max_imag;
        lc.multiplicity = fine[i].size;
        lc.expected_multiplicity = targets[i].expected;
        if (lc.multiplicity != lc.expected_multiplicity) out.multiplicity_mismatch = true;
        if (i < static_cast<int>(rough.size())) {
            const double coarse_err = std::abs(rough[i].mean - lc.analytic);
            if (coarse_err > 0 && lc.abs_error > 0) {
                lc.order = std::log2(coarse_err / lc.abs_error);
                order_sum += *lc.order;
                ++order_count;
            }
        }
        out.max_rel_error = std::max(out.max_rel_error, lc.rel_error);
        out.levels.push_back(lc);
    }
    if (order_count > 0) out.richardson_order = order_sum / order_count;
    return out;
}

double subspace_alignment(const TwoChannelFunction& ket, std::span<const Eigen::VectorXcd> vectors,
                          const GridSpec& g) {
    const Eigen::VectorXcd v = sample_on_grid(ket, g);
    if (vectors.empty() || v.norm() == 0) return 0.0;
    Eigen::MatrixXcd basis(g.dim(), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = vectors[i];
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(basis.rows(), basis.cols());
    return (q.adjoint() * v).norm() / v.norm();
}

std::vector<CriticalityPoint> criticality_scan(std::span<const double> c_values, const GridSpec& g, int lowest) {
    for (std::size_t i = 1; i < c_values.size(); ++i) {
        if (!(c_values[i] > c_values[i - 1])) throw Error(ErrorCode::Validation, "c values must increase");
    }
    std::vector<CriticalityPoint> out;
    out.reserve(c_values.size());
    for (double c : c_values) out.push_back({c, lowest_max_imag(g, c, lowest)});
    return out;
}

GridBracket grid_critical_bracket(const GridSpec& g, double c_lo, double c_hi, double width,
                                  double imag_threshold, int lowest) {
    if (!(width > 0)) throw Error(ErrorCode::InvalidTolerance, "bracket width must be > 0");
    GridBracket out;
    const auto complex_at = [&](double c) {
        ++out.evaluations;
        return lowest_max_imag(g, c, lowest) > imag_threshold;
    };
    if (complex_at(c_lo) || !complex_at(c_hi)) {
        throw Error(ErrorCode::BracketFailure, "grid spectrum must be real at c_lo and complex at c_hi");
    }
    while (c_hi - c_lo > width) {
        const double mid = c_lo + (c_hi - c_lo) / 2;
        if (complex_at(mid)) {
            c_hi = mid;
        } else {
            c_lo = mid;
        }
    }
    out.last_real = c_lo;
    out.first_complex = c_hi;
    return out;
}

}  // namespace sqwell
