#pragma once

// Finite-difference oracle for the full coupled-channel Hamiltonian.
// Second-order central differences on the interior nodes x_j = (2j - M)/M,
// j = 1..M-1, Dirichlet walls eliminated. M is even so x = 0 is a node,
// where the off-diagonal potential takes the mean of its jump (zero).

#include <optional>
#include <span>
#include <vector>

#include "sqwell/operator_rep.hpp"
#include "sqwell/secular.hpp"
#include "sqwell/wavefunctions.hpp"

namespace sqwell {

class GridSpec {
public:
    /// Throws Error(Validation) unless M is even and >= 8.
    explicit GridSpec(int intervals);

    int intervals() const noexcept { return m_; }
    double spacing() const noexcept { return 2.0 / m_; }
    int interior() const noexcept { return m_ - 1; }
    Eigen::Index dim() const noexcept { return 2 * static_cast<Eigen::Index>(m_ - 1); }
    /// x_j for j in [1, M-1]; exact zero at j = M/2 and x_{M-j} = -x_j.
    double node(int j) const noexcept { return static_cast<double>(2 * j - m_) / m_; }

private:
    int m_;
};

OperatorRep build_hamiltonian(const CouplingPair& c, const GridSpec& g);

/// A constant channel matrix acting as block (x) identity on the grid.
OperatorRep channel_operator(const Eigen::Matrix2cd& block, const GridSpec& g);

/// Discrete pseudo-metric: channel swap composed with index reversal.
OperatorRep grid_pseudo_metric(const GridSpec& g);

using SampledPair = std::function<std::pair<cplx, cplx>(double)>;

/// Node values of a two-channel function in the GRID layout.
Eigen::VectorXcd sample_on_grid(const SampledPair& f, const GridSpec& g);

struct EigenPair {
    cplx value;
    Eigen::VectorXcd vector;  ///< unit 2-norm right eigenvector
};

/// All eigenvalues, sorted by real part then imaginary part.
std::vector<cplx> eigenvalues(const OperatorRep& rep);

/// The k eigenpairs of smallest real part. Throws Error(Validation) for
/// k > dim and Error(NumericalFailure) if LAPACK does not converge.
std::vector<EigenPair> eigenpairs(const OperatorRep& rep, int k);

/// True when every eigenvalue is real (|Im| <= tol * max(1,|E|)) or has a
/// conjugate partner within the same tolerance.
bool real_or_conjugate_paired(std::span<const cplx> values, double tol);

struct LevelComparison {
    int n = 0;
    double analytic = 0.0;
    double numeric = 0.0;      ///< mean real part of the matched cluster
    double abs_error = 0.0;
    double rel_error = 0.0;
    double splitting = 0.0;    ///< spread of the cluster
    double max_imag = 0.0;
    int multiplicity = 0;
    int expected_multiplicity = 0;
    std::optional<double> order;  ///< log2(err_coarse / err_fine)
};

struct SpectrumComparison {
    std::vector<LevelComparison> levels;
    double max_rel_error = 0.0;
    std::optional<double> richardson_order;  ///< mean over levels
    bool multiplicity_mismatch = false;
};

/// Clusters numeric eigenvalues within 1e-6 |E| and matches the first k
/// clusters to the first k distinct analytic energies. Passing the spectrum
/// of the half-resolution grid as `coarse` adds the convergence order.
SpectrumComparison compare_spectrum(std::span<const LevelSolution> analytic,
                                    std::span<const cplx> numeric, int k,
                                    std::span<const cplx> coarse = {});

/// Norm of the projection of the sampled analytic ket onto span(vectors),
/// relative to the ket's norm: the cosine between the ket and that span.
double subspace_alignment(const TwoChannelFunction& ket, std::span<const Eigen::VectorXcd> vectors,
                          const GridSpec& g);

struct CriticalityPoint {
    double c = 0.0;
    double max_imag = 0.0;  ///< over the `lowest` eigenvalues of smallest real part
};

/// Y = Z = c at each entry; c_values must be increasing.
std::vector<CriticalityPoint> criticality_scan(std::span<const double> c_values, const GridSpec& g,
                                               int lowest = 4);

struct GridBracket {
    double last_real = 0.0;
    double first_complex = 0.0;
    int evaluations = 0;
};

/// Bisection on the grid predicate max|Im E| > imag_threshold starting from a
/// real lower end and complex upper end, down to width <= width.
GridBracket grid_critical_bracket(const GridSpec& g, double c_lo, double c_hi, double width,
                                  double imag_threshold = 1e-6, int lowest = 4);

}  // namespace sqwell
