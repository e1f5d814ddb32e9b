#pragma once

// Quantization condition  g(s) = s sin 2s + t sinh 2t = 0,  t = sqrt(YZ) / (2s),
// for the complex wavenumber kappa = s - i t of the YZ > 0 branch.
//
// Roots come in pairs: s_{2k} and s_{2k+1} live in the cell
// [(2k+1) pi/2, (k+1) pi], where sin 2s <= 0. Outside those cells g > 0.
// As sqrt(YZ) grows the pair approaches and merges at c_crit(k); beyond
// that point the two levels turn complex.

#include <optional>
#include <vector>

#include "sqwell/model.hpp"

namespace sqwell {

inline constexpr double kDefaultRootTol = 1e-12;
inline constexpr double kDefaultCriticalTol = 1e-3;

enum class Sublabel { Minus = -1, None = 0, Plus = +1 };

struct LevelSolution {
    int n = 0;
    double s = 0.0;
    double t = 0.0;
    double eps = 0.0;  ///< s = (n+1) pi/2 + (-1)^n eps
    double E = 0.0;
    BranchClass branch = BranchClass::Decoupled;
    double residual = 0.0;
    /// Selects E = s^2 +- sqrt(-YZ) on the negative-product branch.
    Sublabel sublabel = Sublabel::None;
    /// Set when exactly one of Y, Z vanishes: the coupling is a Jordan block.
    bool non_diagonalizable = false;
};

/// g(s) for c = sqrt(YZ) >= 0. Throws Error(Domain) for s <= 0 or c < 0.
double residual(double s, double c);

/// Unperturbed wavenumber (n+1) pi/2.
double box_wavenumber(int n);

/// Number of real roots (0 or 2) of g in pair cell k at coupling c > 0.
int roots_in_pair_cell(int k, double c);

/// Solves level n. For the negative-product branch `sub` picks the sign of
/// the +-sqrt(-YZ) shift (None means Plus); it is ignored otherwise.
/// Throws Error(RootLost) above the pair's critical coupling and
/// Error(InvalidTolerance) for tol <= 0.
LevelSolution solve_level(int n, const CouplingPair& c, double tol = kDefaultRootTol,
                          Sublabel sub = Sublabel::None);

struct Spectrum {
    std::vector<LevelSolution> levels;
    bool truncated = false;              ///< stopped at the first lost root
    std::optional<int> lost_level;
};

/// Levels 0..n_max. Negative-product couplings list both sublabels for each
/// n (Minus first); a Jordan-block coupling lists every level twice with the
/// non_diagonalizable flag set.
Spectrum spectrum(const CouplingPair& c, int n_max, double tol = kDefaultRootTol);

/// eps_n ~ 2YZ/((n+1)^3 pi^3) [+ 4 Y^2 Z^2 / (3 (n+1)^5 pi^5)] for order 1 [2].
double perturbative_eps(int n, const CouplingPair& c, int order);

struct CriticalResult {
    int pair_index = 0;
    double c_crit = 0.0;
    double bracket_width = 0.0;
    int evaluations = 0;
};

/// Bisection on c for the merger of s_{2k} and s_{2k+1}.
CriticalResult critical_coupling(int pair_index, double tol = kDefaultCriticalTol);

}  // namespace sqwell
