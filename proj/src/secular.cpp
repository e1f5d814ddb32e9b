#include "sqwell/secular.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "sqwell/error.hpp"

namespace sqwell {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMeshIntervals = 32;  // pi/64 steps across a pi/2-wide pair cell

struct Bracket {
    double lo;
    double hi;
};

struct CellRoots {
    int count = 0;
    Bracket lower{};
    Bracket upper{};
};

double cell_begin(int k) { return (2 * k + 1) * kPi / 2; }
double cell_end(int k) { return (k + 1) * kPi; }

double g(double s, double c) {
    const double t = c / (2 * s);
    return s * std::sin(2 * s) + t * std::sinh(2 * t);
}

// Endpoints of the pair cell have g > 0 for c > 0 (sin 2s = 0 there), so
// real roots come in pairs. The mesh resolves well-separated pairs; close
// to the merger both roots can share one mesh interval, which the minimum
// search catches.
CellRoots locate_roots(int k, double c) {
    const double lo = cell_begin(k);
    const double hi = cell_end(k);
    const double step = (hi - lo) / kMeshIntervals;

    std::vector<double> mesh(kMeshIntervals + 1);
    std::vector<double> values(kMeshIntervals + 1);
    for (int j = 0; j <= kMeshIntervals; ++j) {
        mesh[j] = j == kMeshIntervals ? hi : lo + j * step;
        values[j] = g(mesh[j], c);
    }

    std::vector<Bracket> changes;
    for (int j = 0; j < kMeshIntervals; ++j) {
        if ((values[j] > 0) != (values[j + 1] > 0)) changes.push_back({mesh[j], mesh[j + 1]});
    }
    // For tiny sqrt(YZ) a root can sit closer to a cell end than the rounding
    // of (2k+1) pi/2 or (k+1) pi; the rounded end is then the best double.
    if (changes.size() == 1 && values.front() <= 0) changes.insert(changes.begin(), {lo, lo});
    if (changes.size() == 1 && values.back() <= 0) changes.push_back({hi, hi});
    if (changes.size() == 2) return {2, changes[0], changes[1]};
    if (!changes.empty()) {
        throw Error(ErrorCode::NumericalFailure,
                    "unexpected " + std::to_string(changes.size()) + " sign changes of g in pair cell " +
                        std::to_string(k));
    }

    int jmin = 0;
    for (int j = 1; j <= kMeshIntervals; ++j) {
        if (values[j] < values[jmin]) jmin = j;
    }
    const double a = mesh[std::max(jmin - 1, 0)];
    const double b = mesh[std::min(jmin + 1, kMeshIntervals)];
    const auto [s_min, g_min] = boost::math::tools::brent_find_minima(
        [c](double s) { return g(s, c); }, a, b, std::numeric_limits<double>::digits / 2);
    if (!(g_min < 0)) return {};
    return {2, {lo, s_min}, {s_min, hi}};
}

// Bisection down to adjacent doubles; returns the endpoint with smaller |f|.
template <class F>
double bisect(const F& f, double a, double b) {
    const bool a_positive = f(a) > 0;
    for (;;) {
        const double m = a + (b - a) / 2;
        if (m <= a || m >= b) break;
        if ((f(m) > 0) == a_positive) {
            a = m;
        } else {
            b = m;
        }
    }
    return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

void check_tolerance(double tol) {
    if (!(tol > 0)) throw Error(ErrorCode::InvalidTolerance, "tol must be > 0");
}

}  // namespace

double residual(double s, double c) {
    if (!(s > 0)) throw Error(ErrorCode::Domain, "residual requires s > 0");
    if (!(c >= 0)) throw Error(ErrorCode::Domain, "residual requires c = sqrt(YZ) >= 0");
    return g(s, c);
}

double box_wavenumber(int n) { return (n + 1) * kPi / 2; }

int roots_in_pair_cell(int k, double c) {
    if (k < 0) throw Error(ErrorCode::Validation, "pair index must be >= 0");
    if (!(c > 0)) throw Error(ErrorCode::Domain, "pair-cell root count requires c > 0");
    return locate_roots(k, c).count;
}

LevelSolution solve_level(int n, const CouplingPair& c, double tol, Sublabel sub) {
    if (n < 0) throw Error(ErrorCode::Validation, "level index must be >= 0");
    check_tolerance(tol);

    LevelSolution out;
    out.n = n;
    out.branch = classify_branch(c);
    const double s0 = box_wavenumber(n);

    switch (out.branch) {
        case BranchClass::Decoupled:
            out.s = s0;
            out.E = s0 * s0;
            out.non_diagonalizable = c.y() != 0.0 || c.z() != 0.0;
            out.residual = g(s0, 0.0);
            return out;

        case BranchClass::NegativeProduct: {
            out.s = s0;
            out.sublabel = sub == Sublabel::Minus ? Sublabel::Minus : Sublabel::Plus;
            const double shift = c.strength();
            out.E = out.sublabel == Sublabel::Plus ? s0 * s0 + shift : s0 * s0 - shift;
            out.residual = g(s0, 0.0);
            return out;
        }

        case BranchClass::PositiveProduct: break;
    }

    const double strength = c.strength();
    const int k = n / 2;
    const CellRoots roots = locate_roots(k, strength);
    if (roots.count == 0) {
        throw Error(ErrorCode::RootLost,
                    "level " + std::to_string(n) + ": no real root of s sin 2s + t sinh 2t in [" +
                        std::to_string(cell_begin(k)) + ", " + std::to_string(cell_end(k)) +
                        "] at sqrt(YZ) = " + std::to_string(strength) +
                        "; the pair has merged and the energies are complex");
    }
    const Bracket br = n % 2 == 0 ? roots.lower : roots.upper;
    const auto f = [strength](double s) { return g(s, strength); };

    out.s = bisect(f, br.lo, br.hi);
    out.t = strength / (2 * out.s);
    out.E = out.s * out.s - out.t * out.t;
    out.eps = (n % 2 == 0 ? 1.0 : -1.0) * (out.s - s0);
    out.residual = f(out.s);
    if (!(std::abs(out.residual) <= tol)) {
        throw Error(ErrorCode::NumericalFailure,
                    "level " + std::to_string(n) + ": residual " + std::to_string(out.residual) +
                        " above tol at machine-precision root");
    }
    return out;
}

Spectrum spectrum(const CouplingPair& c, int n_max, double tol) {
    if (n_max < 0) throw Error(ErrorCode::Validation, "n_max must be >= 0");
    check_tolerance(tol);

    Spectrum out;
    const BranchClass branch = classify_branch(c);
    for (int n = 0; n <= n_max; ++n) {
        try {
            if (branch == BranchClass::NegativeProduct) {
                out.levels.push_back(solve_level(n, c, tol, Sublabel::Minus));
                out.levels.push_back(solve_level(n, c, tol, Sublabel::Plus));
                continue;
            }
            const LevelSolution level = solve_level(n, c, tol);
            out.levels.push_back(level);
            if (level.non_diagonalizable) out.levels.push_back(level);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::RootLost) {
                out.truncated = true;
                out.lost_level = n;
                break;
            }
            throw Error(e.code(), "spectrum failed at n = " + std::to_string(n) + ": " + e.detail());
        }
    }
    return out;
}

double perturbative_eps(int n, const CouplingPair& c, int order) {
    if (n < 0) throw Error(ErrorCode::Validation, "level index must be >= 0");
    if (order != 1 && order != 2) throw Error(ErrorCode::Validation, "order must be 1 or 2");
    if (classify_branch(c) == BranchClass::NegativeProduct) {
        throw Error(ErrorCode::Domain, "perturbative shift is defined for YZ >= 0 only");
    }
    const double yz = c.product();
    const double npi = (n + 1) * kPi;
    double eps = 2 * yz / std::pow(npi, 3);
    if (order == 2) eps += 4 * yz * yz / (3 * std::pow(npi, 5));
    return eps;
}

CriticalResult critical_coupling(int pair_index, double tol) {
    if (pair_index < 0) throw Error(ErrorCode::Validation, "pair index must be >= 0");
    check_tolerance(tol);

    CriticalResult out;
    out.pair_index = pair_index;
    const auto real_pair = [&](double c) {
        ++out.evaluations;
        return locate_roots(pair_index, c).count == 2;
    };

    constexpr double kScanLimit = 1e4;
    double lo = 0.0;  // c = 0: roots sit on the cell edges
    double hi = 1.0;
    while (real_pair(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > kScanLimit) {
            throw Error(ErrorCode::BracketFailure, "no merger of pair " + std::to_string(pair_index) +
                                                       " found for sqrt(YZ) <= " + std::to_string(kScanLimit));
        }
    }
    while (hi - lo > tol) {
        const double mid = lo + (hi - lo) / 2;
        if (real_pair(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.c_crit = lo + (hi - lo) / 2;
    out.bracket_width = hi - lo;
    return out;
}

}  // namespace sqwell
