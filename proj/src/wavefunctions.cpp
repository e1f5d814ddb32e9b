#include "sqwell/wavefunctions.hpp"

#include <array>
#include <cmath>

#include "sqwell/error.hpp"

namespace sqwell {

namespace {

// sin(w)/w for complex w.
cplx sinc(cplx w) {
    if (std::abs(w) < 1e-3) {
        const cplx w2 = w * w;
        return 1.0 - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0;
    }
    return std::sin(w) / w;
}

// Integral over (0,1) of sin(a u) sin(b u).
cplx sine_product_integral(cplx a, cplx b) { return 0.5 * (sinc(a - b) - sinc(a + b)); }

void require_shared_wavenumbers(const TwoChannelFunction& f) {
    if (f.upper.left_k != f.lower.left_k || f.upper.right_k != f.lower.right_k) {
        throw Error(ErrorCode::Unsupported, "closed-form operator action needs equal channel wavenumbers");
    }
}

int sign_of(double v) { return v < 0 ? -1 : +1; }

}  // namespace

cplx SineSegments::value(double x) const {
    const cplx left = left_amp * std::sin(left_k * (x + 1));
    const cplx right = right_amp * std::sin(right_k * (1 - x));
    if (x < 0) return left;
    if (x > 0) return right;
    return 0.5 * (left + right);
}

cplx SineSegments::derivative(double x) const {
    const cplx left = left_amp * left_k * std::cos(left_k * (x + 1));
    const cplx right = -right_amp * right_k * std::cos(right_k * (1 - x));
    if (x < 0) return left;
    if (x > 0) return right;
    return 0.5 * (left + right);
}

SineSegments SineSegments::reflected() const { return {right_amp, right_k, left_amp, left_k}; }

SineSegments SineSegments::scaled(cplx factor) const {
    return {factor * left_amp, left_k, factor * right_amp, right_k};
}

cplx inner(const SineSegments& f, const SineSegments& g) {
    return std::conj(f.left_amp) * g.left_amp * sine_product_integral(std::conj(f.left_k), g.left_k) +
           std::conj(f.right_amp) * g.right_amp * sine_product_integral(std::conj(f.right_k), g.right_k);
}

cplx inner(const TwoChannelFunction& f, const TwoChannelFunction& g) {
    return inner(f.upper, g.upper) + inner(f.lower, g.lower);
}

TwoChannelFunction apply_hamiltonian(const TwoChannelFunction& f, const CouplingPair& c) {
    require_shared_wavenumbers(f);
    const cplx iy{0.0, c.y()};
    const cplx iz{0.0, c.z()};
    const cplx kl2 = f.upper.left_k * f.upper.left_k;
    const cplx kr2 = f.upper.right_k * f.upper.right_k;

    TwoChannelFunction out = f;
    out.upper.left_amp = kl2 * f.upper.left_amp + iz * f.lower.left_amp;
    out.upper.right_amp = kr2 * f.upper.right_amp - iz * f.lower.right_amp;
    out.lower.left_amp = kl2 * f.lower.left_amp + iy * f.upper.left_amp;
    out.lower.right_amp = kr2 * f.lower.right_amp - iy * f.upper.right_amp;
    return out;
}

TwoChannelFunction apply_channel_matrix(const Eigen::Matrix2cd& m, const TwoChannelFunction& f) {
    require_shared_wavenumbers(f);
    TwoChannelFunction out = f;
    out.upper.left_amp = m(0, 0) * f.upper.left_amp + m(0, 1) * f.lower.left_amp;
    out.upper.right_amp = m(0, 0) * f.upper.right_amp + m(0, 1) * f.lower.right_amp;
    out.lower.left_amp = m(1, 0) * f.upper.left_amp + m(1, 1) * f.lower.left_amp;
    out.lower.right_amp = m(1, 0) * f.upper.right_amp + m(1, 1) * f.lower.right_amp;
    return out;
}

SineSegments ChannelState::upper() const { return {A, kappa, std::conj(A), std::conj(kappa)}; }

SineSegments ChannelState::lower() const { return {B, kappa, std::conj(B), std::conj(kappa)}; }

TwoChannelFunction ChannelState::ket() const {
    const SineSegments phi = upper();
    return {phi.scaled(std::sqrt(coupling.z())), phi.scaled(sigma * std::sqrt(coupling.y()))};
}

ChannelState solve_coefficients(std::shared_ptr<const LevelSolution> level, const CouplingPair& c,
                                int sigma) {
    if (!level) throw Error(ErrorCode::Validation, "missing level");
    if (sigma != 1 && sigma != -1) throw Error(ErrorCode::Validation, "sigma must be +1 or -1");
    const bool decoupled_limit = c.y() == 0.0 && c.z() == 0.0;
    const bool positive = c.y() > 0.0 && c.z() > 0.0;
    if (!decoupled_limit && !positive) {
        throw Error(ErrorCode::Domain, "bound states are built for Y > 0, Z > 0 or the Y = Z = 0 limit");
    }
    if (level->branch != classify_branch(c)) {
        throw Error(ErrorCode::Validation, "level was solved for a different coupling branch");
    }

    ChannelState st;
    st.level = std::move(level);
    st.coupling = c;
    st.sigma = sigma;
    st.kappa = cplx(st.level->s, -sigma * st.level->t);

    // phi(0) = A sin kappa must be real; when it vanishes phi'(0) = A kappa cos kappa
    // is purely imaginary instead.
    const cplx at_zero = std::sin(st.kappa);
    const cplx slope_at_zero = st.kappa * std::cos(st.kappa);
    cplx phase;
    if (std::abs(at_zero) > 1e-12 * std::abs(slope_at_zero)) {
        phase = std::conj(at_zero) / std::abs(at_zero);
    } else if (std::abs(slope_at_zero) > 0) {
        phase = cplx(0.0, 1.0) * std::conj(slope_at_zero) / std::abs(slope_at_zero);
    } else {
        throw Error(ErrorCode::DegenerateMatch, "sin(kappa) and cos(kappa) both vanish");
    }

    st.A = phase;
    const double norm2 = inner(st.upper(), st.upper()).real();
    st.A = phase / std::sqrt(norm2);
    st.B = decoupled_limit ? static_cast<double>(sigma) * st.A : sigma * std::sqrt(c.y() / c.z()) * st.A;
    st.q = sigma * sign_of(parity_overlap(st));
    return st;
}

std::pair<cplx, cplx> evaluate(const ChannelState& state, double x) {
    if (!(std::abs(x) <= 1.0)) throw Error(ErrorCode::Domain, "evaluate requires |x| <= 1");
    return {state.upper().value(x), state.lower().value(x)};
}

double matching_residual(const ChannelState& state) {
    const double amp = std::max(std::abs(state.A), std::abs(state.B));
    if (amp == 0) return 0.0;
    double value_jump = 0.0;
    double slope_jump = 0.0;
    for (const SineSegments& f : {state.upper(), state.lower()}) {
        const cplx left = f.left_amp * std::sin(f.left_k);
        const cplx right = f.right_amp * std::sin(f.right_k);
        const cplx dleft = f.left_amp * f.left_k * std::cos(f.left_k);
        const cplx dright = -f.right_amp * f.right_k * std::cos(f.right_k);
        value_jump = std::max(value_jump, std::abs(left - right));
        slope_jump = std::max(slope_jump, std::abs(dleft - dright));
    }
    return std::max(value_jump / amp, slope_jump / (amp * std::abs(state.kappa)));
}

double parity_overlap(const ChannelState& state) {
    const SineSegments phi = state.upper();
    return inner(phi, phi.reflected()).real();
}

cplx quadrature_overlap(const SampledFunction& f, const SampledFunction& g, int panels) {
    if (panels < 2 || panels % 2 != 0) {
        throw Error(ErrorCode::Validation, "quadrature needs an even panel count >= 2");
    }
    const int per_half = panels / 2;
    const double h = 1.0 / per_half;
    const double offset = 0.5 * h / std::sqrt(3.0);
    cplx sum{0.0, 0.0};
    for (double start : {-1.0, 0.0}) {
        cplx half{0.0, 0.0};
        for (int p = 0; p < per_half; ++p) {
            const double mid = start + (p + 0.5) * h;
            for (double x : {mid - offset, mid + offset}) half += std::conj(f(x)) * g(x);
        }
        sum += 0.5 * h * half;
    }
    return sum;
}

}  // namespace sqwell
