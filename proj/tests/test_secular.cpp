#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqwell/error.hpp"
#include "sqwell/secular.hpp"

using namespace sqwell;
using std::numbers::pi;

namespace {

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

// Roots of s sin 2s + t sinh 2t = 0 from 30-digit mpmath root finding.
TEST_CASE("roots at sqrt(YZ) = 1") {
    const double s[] = {1.6321181284233419676, 3.1333267472645299784, 4.7147922655259664091, 6.2821726948629247247};
    const double e[] = {2.5699590331232940547, 9.7922723872108518961, 22.218019671900212348, 39.459359152466304354};
    for (int n = 0; n < 4; ++n) {
        const LevelSolution l = solve_level(n, {1, 1});
        CHECK(l.s == doctest::Approx(s[n]).epsilon(1e-14));
        CHECK(l.E == doctest::Approx(e[n]).epsilon(1e-14));
        CHECK(l.branch == BranchClass::PositiveProduct);
        CHECK(std::abs(l.residual) <= 1e-12);
        CHECK(std::abs(2 * l.s * l.t - 1) <= 1e-15);
        CHECK(l.s == doctest::Approx(box_wavenumber(n) + ((n % 2) ? -1 : 1) * l.eps).epsilon(1e-15));
    }
    CHECK(solve_level(9, {1, 1}).s == doctest::Approx(15.707898720504835).epsilon(1e-14));
}

TEST_CASE("roots at other couplings") {
    CHECK(solve_level(0, {3, 3}).s == doctest::Approx(2.0153420549428558168).epsilon(1e-14));
    CHECK(solve_level(1, {3, 3}).s == doctest::Approx(3.0481405352612760628).epsilon(1e-14));
    CHECK(solve_level(3, {3, 3}).E == doctest::Approx(39.302417994838234878).epsilon(1e-14));
    // only the product matters
    CHECK(solve_level(0, {1, 4}).s == doctest::Approx(1.7905503009752452106).epsilon(1e-14));
    CHECK(solve_level(0, {1, 4}).s == solve_level(0, {4, 1}).s);
    CHECK(solve_level(2, {-2, -2}).E == doctest::Approx(22.254070916980817923).epsilon(1e-14));
}

TEST_CASE("residual function") {
    // g(pi/2) = t sinh 2t with t = 1/pi
    CHECK(residual(pi / 2, 1.0) == doctest::Approx(0.21661041172051912).epsilon(1e-14));
    CHECK(residual(pi / 2 + 0.07, 1.0) < 0);
    CHECK(code_of([] { residual(0.0, 1.0); }) == ErrorCode::Domain);
    CHECK(code_of([] { residual(1.0, -1.0); }) == ErrorCode::Domain);
}

TEST_CASE("pair cell root count") {
    CHECK(roots_in_pair_cell(0, 1.0) == 2);
    CHECK(roots_in_pair_cell(0, 4.47) == 2);
    CHECK(roots_in_pair_cell(0, 4.48) == 0);
    CHECK(roots_in_pair_cell(1, 12.80) == 2);
    CHECK(roots_in_pair_cell(1, 12.81) == 0);
}

TEST_CASE("tiny couplings resolve to the rounded cell ends") {
    const LevelSolution l0 = solve_level(0, {1e-14, 1e-14});
    const LevelSolution l1 = solve_level(1, {1e-14, 1e-14});
    CHECK(l0.s == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(l1.s == doctest::Approx(pi).epsilon(1e-15));
    CHECK(l0.s < l1.s);
    CHECK(std::abs(l1.residual) <= 1e-12);
}

TEST_CASE("decoupled and Jordan limits") {
    for (int n = 0; n < 10; ++n) {
        const LevelSolution l = solve_level(n, {0, 0});
        CHECK(l.s == box_wavenumber(n));
        CHECK(std::abs(l.E - (n + 1) * (n + 1) * pi * pi / 4) <= 1e-12);
        CHECK_FALSE(l.non_diagonalizable);
    }
    const Spectrum jordan = spectrum({0, 2}, 2);
    REQUIRE(jordan.levels.size() == 6);
    CHECK(jordan.levels[0].non_diagonalizable);
    CHECK(jordan.levels[0].E == jordan.levels[1].E);
}

TEST_CASE("negative product formula") {
    const Spectrum sp = spectrum({1, -1}, 3);
    REQUIRE(sp.levels.size() == 8);
    for (std::size_t i = 0; i < sp.levels.size(); ++i) {
        const LevelSolution& l = sp.levels[i];
        CHECK(l.t == 0.0);
        CHECK(l.s == box_wavenumber(l.n));
        CHECK(l.sublabel == (i % 2 == 0 ? Sublabel::Minus : Sublabel::Plus));
        CHECK(l.E == l.s * l.s + static_cast<int>(l.sublabel));
    }
    CHECK(solve_level(0, {4, -1}, kDefaultRootTol, Sublabel::Minus).E == box_wavenumber(0) * box_wavenumber(0) - 2);
    CHECK(solve_level(0, {4, -1}).sublabel == Sublabel::Plus);
}

TEST_CASE("root loss past the merger") {
    CHECK(code_of([] { solve_level(0, {5, 5}); }) == ErrorCode::RootLost);
    CHECK(code_of([] { solve_level(1, {5, 5}); }) == ErrorCode::RootLost);
    CHECK(solve_level(2, {5, 5}).s > 3 * pi / 2);
    const Spectrum sp = spectrum({5, 5}, 4);
    CHECK(sp.truncated);
    CHECK(sp.lost_level == 0);
    CHECK(sp.levels.empty());

    const Spectrum sp2 = spectrum({13, 13}, 6);
    CHECK(sp2.truncated);
    CHECK(sp2.lost_level == 0);
}

TEST_CASE("invalid tolerance") {
    CHECK(code_of([] { solve_level(0, {1, 1}, 0.0); }) == ErrorCode::InvalidTolerance);
    CHECK(code_of([] { solve_level(0, {1, 1}, -1e-3); }) == ErrorCode::InvalidTolerance);
    CHECK(code_of([] { critical_coupling(0, 0.0); }) == ErrorCode::InvalidTolerance);
}

TEST_CASE("perturbative series") {
    const CouplingPair c{1, 1};
    const LevelSolution l9 = solve_level(9, c);
    const double p2 = perturbative_eps(9, c, 2);
    CHECK(std::abs(l9.eps - p2) / l9.eps <= 1e-4);
    CHECK(perturbative_eps(9, c, 1) == doctest::Approx(2.0 / (1000 * pi * pi * pi)));

    // the next term of the expansion is (4/15 - 24 (-1)^n) c^4 / (pi^7 (n+1)^7)
    for (int n = 4; n <= 14; ++n) {
        const double r = std::abs(solve_level(n, c).eps - perturbative_eps(n, c, 2));
        CAPTURE(n);
        CHECK(r * std::pow(n + 1, 7) <= 2 * (4.0 / 15 + 24) / std::pow(pi, 7));
        CHECK(r * std::pow(n + 1, 7) >= 0.007);
    }
    CHECK(code_of([] { perturbative_eps(0, {1, -1}, 1); }) == ErrorCode::Domain);
    CHECK(code_of([] { perturbative_eps(0, {1, 1}, 3); }) == ErrorCode::Validation);
}

TEST_CASE("critical coupling") {
    const CriticalResult r0 = critical_coupling(0, 1e-6);
    CHECK(r0.c_crit == doctest::Approx(4.475308602).epsilon(1e-6));
    CHECK(r0.bracket_width <= 1e-6);
    CHECK(critical_coupling(1, 1e-4).c_crit == doctest::Approx(12.80154).epsilon(1e-5));
    const CriticalResult coarse = critical_coupling(0, 0.01);
    CHECK(std::abs(coarse.c_crit - 4.48) <= 0.02);
    CHECK(code_of([] { critical_coupling(-1); }) == ErrorCode::Validation);
}
