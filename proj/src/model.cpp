#include "sqwell/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqwell/error.hpp"

namespace sqwell {

std::string_view to_string(BranchClass b) noexcept {
    switch (b) {
        case BranchClass::PositiveProduct: return "POSITIVE_PRODUCT";
        case BranchClass::NegativeProduct: return "NEGATIVE_PRODUCT";
        case BranchClass::Decoupled: return "DECOUPLED";
    }
    return "UNKNOWN";
}

CouplingPair::CouplingPair(double y, double z) : y_(y), z_(z) {
    if (!std::isfinite(y) || !std::isfinite(z)) {
        throw Error(ErrorCode::Validation, "couplings Y and Z must be finite");
    }
}

double CouplingPair::strength() const noexcept {
    const double a = std::abs(y_);
    const double b = std::abs(z_);
    if (a == b) return a;
    const double p = a * b;
    // split roots only when the product leaves the normal range
    if (std::isnormal(p) || p == 0.0) return std::sqrt(p);
    return std::sqrt(a) * std::sqrt(b);
}

BranchClass classify_branch(const CouplingPair& c) noexcept {
    const double p = c.product();
    if (p > 0.0) return BranchClass::PositiveProduct;
    if (p < 0.0) return BranchClass::NegativeProduct;
    return BranchClass::Decoupled;
}

double PotentialSpec::side(double x) noexcept {
    if (x < 0.0) return 1.0;
    if (x > 0.0) return -1.0;
    return 0.0;
}

namespace {
void require_in_box(double x) {
    if (!(std::abs(x) <= 1.0)) {
        throw Error(ErrorCode::Domain, "potential sampled outside [-1, 1] at x = " + std::to_string(x));
    }
}
}  // namespace

cplx PotentialSpec::upper_coupling(double x) const {
    require_in_box(x);
    return {0.0, side(x) * c_.z()};
}

cplx PotentialSpec::lower_coupling(double x) const {
    require_in_box(x);
    return {0.0, side(x) * c_.y()};
}

Eigen::Matrix2cd PotentialSpec::at(double x) const {
    Eigen::Matrix2cd v;
    v << diagonal(x), upper_coupling(x), lower_coupling(x), diagonal(-x);
    return v;
}

SymmetryReport check_potential_symmetry(const PotentialSpec& p, std::span<const double> samples) {
    SymmetryReport report;
    for (double x : samples) {
        if (!(std::abs(x) < 1.0) || x == 0.0) {
            throw Error(ErrorCode::Domain, "symmetry samples must lie in (-1,0) or (0,1)");
        }
        const double d_upper = std::abs(std::conj(p.upper_coupling(x)) - p.upper_coupling(-x));
        const double d_lower = std::abs(std::conj(p.lower_coupling(x)) - p.lower_coupling(-x));
        const double d_diag = std::abs(p.diagonal(x) - std::conj(p.diagonal(-x)));
        report.max_defect = std::max({report.max_defect, d_upper, d_lower, d_diag});
        ++report.samples;
    }
    return report;
}

}  // namespace sqwell
