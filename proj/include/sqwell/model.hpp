#pragma once

// Two-channel square well on the box (-1, 1), units hbar = 2m = 1.
//
//   H = -d^2/dx^2 * I_2 + V(x),   V(x) = sgn(-x) * [[0, iZ], [iY, 0]]
//
// with Dirichlet walls at x = +-1. V vanishes at x = 0 (mean of the jump).

#include <complex>
#include <span>
#include <string_view>

#include <Eigen/Core>

namespace sqwell {

using cplx = std::complex<double>;

enum class BranchClass { PositiveProduct, NegativeProduct, Decoupled };

std::string_view to_string(BranchClass b) noexcept;

class CouplingPair {
public:
    /// Throws Error(Validation) for non-finite Y or Z.
    CouplingPair(double y, double z);

    double y() const noexcept { return y_; }
    double z() const noexcept { return z_; }
    double product() const noexcept { return y_ * z_; }
    /// sqrt(|YZ|), the only combination the spectrum depends on.
    double strength() const noexcept;

private:
    double y_;
    double z_;
};

BranchClass classify_branch(const CouplingPair& c) noexcept;

/// Closed-form accessor for V_eff(x) on [-1, 1].
class PotentialSpec {
public:
    explicit PotentialSpec(CouplingPair c) : c_(c) {}

    const CouplingPair& coupling() const noexcept { return c_; }

    /// +1 on (-1,0), -1 on (0,1), 0 at x = 0.
    static double side(double x) noexcept;

    /// Upper-right entry (couples the lower channel into the upper one): +-iZ.
    cplx upper_coupling(double x) const;
    /// Lower-left entry: +-iY.
    cplx lower_coupling(double x) const;
    cplx diagonal(double) const noexcept { return {0.0, 0.0}; }

    Eigen::Matrix2cd at(double x) const;

private:
    CouplingPair c_;
};

struct SymmetryReport {
    double max_defect = 0.0;
    std::size_t samples = 0;
};

/// max over samples of |conj(W(x)) - W(-x)| for both couplings, together with
/// |V_a(x) - conj(V_b(-x))|. Samples must lie in (-1, 1) and avoid x = 0.
SymmetryReport check_potential_symmetry(const PotentialSpec& p, std::span<const double> samples);

}  // namespace sqwell
