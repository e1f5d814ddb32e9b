#pragma once

// Pseudo-metric theta = [[0, P], [P, 0]], left eigenvectors
// |E,sigma>> = q theta |E,sigma>, and the physical metrics
//
//   Theta = sum_{n,sigma} S_{n,sigma} |n,sigma>> <<n,sigma|,   S > 0.
//
// Mode-basis objects use the retained states ordered (0,+), (0,-), (1,+), ...

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sqwell/operator_rep.hpp"
#include "sqwell/oracle.hpp"
#include "sqwell/wavefunctions.hpp"

namespace sqwell {

/// Metric construction refuses sqrt(YZ) below this: the diagonal overlaps
/// scale with sqrt(4YZ) and Theta degenerates to the Hermitian limit.
inline constexpr double kMinMetricStrength = 1e-6;

class MetricWeights {
public:
    MetricWeights() = default;
    MetricWeights(std::vector<double> plus, std::vector<double> minus);

    static MetricWeights uniform(int levels, double value = 1.0);

    int levels() const noexcept { return static_cast<int>(plus_.size()); }
    double weight(int n, int sigma) const;
    double plus(int n) const { return plus_.at(n); }
    double minus(int n) const { return minus_.at(n); }
    MetricWeights scaled(double factor) const;

    /// Finite and non-zero always; strictly positive unless allow_indefinite.
    void validate(bool allow_indefinite = false) const;

private:
    std::vector<double> plus_;
    std::vector<double> minus_;
};

/// Lines `n S_plus S_minus` for n in [0, levels); missing levels get 1 1.
/// Blank lines and text after '#' are ignored.
MetricWeights parse_weights(std::istream& in, int levels);
MetricWeights read_weight_file(const std::filesystem::path& path, int levels);

/// Accepts a general R_{(n sigma),(m tau)} only if it vanishes whenever the
/// energies or the spin labels differ, and returns its diagonal.
MetricWeights weights_from_general(const Eigen::MatrixXd& r, const std::vector<ChannelState>& states);

TwoChannelFunction apply_theta(const TwoChannelFunction& v);
SampledPair apply_theta(SampledPair v);

struct LeftState {
    TwoChannelFunction bra;  ///< q theta |n, sigma>
    int q = +1;
    int n = 0;
    int sigma = +1;
    double E = 0.0;
};

LeftState left_vector(const ChannelState& state);

struct ModeBasis {
    CouplingPair coupling{0.0, 0.0};
    std::vector<ChannelState> states;
    std::vector<LeftState> left;

    int levels() const noexcept { return static_cast<int>(states.size() / 2); }
};

/// Solves levels 0..levels-1 and both doublet members of each.
ModeBasis build_mode_basis(const CouplingPair& c, int levels, double tol = kDefaultRootTol);

enum class OverlapMethod { ClosedForm, Quadrature };

/// G_ij = <<i|j>.
Eigen::MatrixXcd biorthogonality_matrix(const std::vector<ChannelState>& states,
                                        const std::vector<LeftState>& left,
                                        OverlapMethod method = OverlapMethod::ClosedForm,
                                        int panels = 4096);

/// Omega = [[0, sqrt(Z/Y)], [sqrt(Y/Z), 0]]. Throws Error(Domain) unless Y, Z > 0.
OperatorRep spin_operator(const CouplingPair& c);

/// Per-level channel weights sum_sigma S_sigma (sigma sqrt(Y), sqrt(Z))^T (sigma sqrt(Y), sqrt(Z)):
/// [[Y (S+ + S-), sqrt(YZ)(S+ - S-)], [sqrt(YZ)(S+ - S-), Z (S+ + S-)]].
Eigen::Matrix2d channel_weight_block(const CouplingPair& c, double s_plus, double s_minus);

/// Theta in MODE (Gram form) or GRID representation. Hermitian by construction.
OperatorRep build_theta_metric(const ModeBasis& basis, const MetricWeights& weights,
                               const BasisSpec& rep, bool allow_indefinite = false);

/// Theta^{-1} = sum |n,s> (1/S) / |<<n,s|n,s>|^2 <n,s|. MODE gives the
/// coefficient matrix K with Theta^{-1} = sum_ij |i> K_ij <j|.
OperatorRep inverse_theta_metric(const ModeBasis& basis, const MetricWeights& weights,
                                 const BasisSpec& rep);

enum class OperatorKind { Identity, Hamiltonian, Spin };

/// H or Omega applied to every retained state in closed form and read off
/// with the left states (MODE coefficient form).
OperatorRep mode_operator(const ModeBasis& basis, OperatorKind kind);

/// ||A^dagger M - M A||_max / (||M||_max ||A||_max).
double quasi_hermiticity_defect(const OperatorRep& op, const OperatorRep& metric);

/// sum |n,s> lambda <<n,s| / <<n,s|n,s> with lambda = 1, E or sigma.
/// Throws Error(NormalizationSingular) if a diagonal overlap vanishes.
OperatorRep spectral_reconstruct(const ModeBasis& basis, OperatorKind kind, const BasisSpec& rep);

struct Signature {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    std::vector<double> eigenvalues;
};

/// Inertia of a Hermitian representation; |lambda| <= rel_tol * max|lambda| counts as zero.
Signature metric_signature(const OperatorRep& metric, double rel_tol = 1e-12);

}  // namespace sqwell
