#pragma once

// Piecewise-trigonometric bound states
//
//   phi(x) = A sin(kappa (x+1))            on (-1, 0)
//          = conj(A) sin(conj(kappa)(1-x)) on (0, 1)
//
// and chi the same with B. The doublet partner sigma = -1 has the conjugate
// wavenumber, so its phi is the mirror image of the sigma = +1 one. Both
// share one LevelSolution.

#include <functional>
#include <memory>
#include <utility>

#include "sqwell/model.hpp"
#include "sqwell/secular.hpp"

namespace sqwell {

/// f(x) = left_amp sin(left_k (x+1)) on [-1,0], right_amp sin(right_k (1-x)) on [0,1].
/// At x = 0 the two one-sided limits are averaged.
struct SineSegments {
    cplx left_amp{};
    cplx left_k{};
    cplx right_amp{};
    cplx right_k{};

    cplx value(double x) const;
    cplx derivative(double x) const;
    /// (P f)(x) = f(-x).
    SineSegments reflected() const;
    SineSegments scaled(cplx factor) const;
};

/// Closed form of the integral of conj(f) g over (-1, 1).
cplx inner(const SineSegments& f, const SineSegments& g);

struct TwoChannelFunction {
    SineSegments upper;
    SineSegments lower;

    std::pair<cplx, cplx> operator()(double x) const {
        return {upper.value(x), lower.value(x)};
    }
};

cplx inner(const TwoChannelFunction& f, const TwoChannelFunction& g);

/// H f in closed form. Both channels must share their segment wavenumbers.
TwoChannelFunction apply_hamiltonian(const TwoChannelFunction& f, const CouplingPair& c);

/// Constant 2x2 channel matrix applied to f.
TwoChannelFunction apply_channel_matrix(const Eigen::Matrix2cd& m, const TwoChannelFunction& f);

enum class NormKind { UnitL2 };

struct ChannelState {
    std::shared_ptr<const LevelSolution> level;
    CouplingPair coupling{0.0, 0.0};
    int sigma = +1;
    cplx kappa{};  ///< s - i sigma t
    cplx A{};
    cplx B{};      ///< sigma sqrt(Y/Z) A, so that A/B = sigma sqrt(Z/Y)
    int q = +1;    ///< quasi-parity, sigma * sign(<phi|P|phi>)
    NormKind norm_kind = NormKind::UnitL2;

    double energy() const { return level->E; }
    SineSegments upper() const;  ///< phi
    SineSegments lower() const;  ///< chi
    /// (sqrt(Z) phi, sigma sqrt(Y) phi), the ket the metric is built from.
    TwoChannelFunction ket() const;
};

/// Builds the sigma-member of the doublet of `level`. phi has unit L2 norm;
/// the phase makes phi(0) real and >= 0, or phi'(0) positive imaginary when
/// phi(0) vanishes. Accepts the positive-product branch and the fully
/// decoupled Y = Z = 0 limit (where B = sigma A).
ChannelState solve_coefficients(std::shared_ptr<const LevelSolution> level, const CouplingPair& c,
                                int sigma);

/// (phi(x), chi(x)). Throws Error(Domain) for |x| > 1.
std::pair<cplx, cplx> evaluate(const ChannelState& state, double x);

/// Largest jump of phi, phi', chi, chi' across x = 0 relative to the
/// segment amplitude (derivatives additionally by |kappa|).
double matching_residual(const ChannelState& state);

/// <phi|P|phi> = integral of conj(phi(x)) phi(-x); real for these states.
double parity_overlap(const ChannelState& state);

using SampledFunction = std::function<cplx(double)>;

/// Integral of conj(f) g by composite two-point Gauss-Legendre, panels/2
/// panels on each of (-1,0) and (0,1); no node touches x = 0 or the walls.
/// Error O(panels^-4). panels must be even and >= 2.
cplx quadrature_overlap(const SampledFunction& f, const SampledFunction& g, int panels);

}  // namespace sqwell
