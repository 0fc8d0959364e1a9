#pragma once

// Built-in scenarios with closed-form references: the two-qubit swap-gate
// example and the Jaynes-Cummings model.

#include "corrdyn/corr_dynamics.hpp"

namespace corrdyn {

inline Operator pauli_x() {
    Operator s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

inline Operator pauli_y() {
    Operator s(2, 2);
    s << 0, -kImag, kImag, 0;
    return s;
}

inline Operator pauli_z() {
    Operator s(2, 2);
    s << 1, 0, 0, -1;
    return s;
}

// Raising/lowering between |e> = |0> and |g> = |1>.
inline Operator sigma_plus() {
    Operator s = Operator::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

inline Operator sigma_minus() {
    Operator s = Operator::Zero(2, 2);
    s(1, 0) = 1.0;
    return s;
}

// rho = (I + v . sigma)/2.
inline Operator bloch_state(double vx, double vy, double vz) {
    Operator rho(2, 2);
    rho << 0.5 * (1.0 + vz), 0.5 * Complex(vx, -vy), 0.5 * Complex(vx, vy), 0.5 * (1.0 - vz);
    return rho;
}

// ---------------------------------------------------------------------------
// Two-qubit swap-gate example
// ---------------------------------------------------------------------------

struct SwapParams {
    double p;  // mixing weight of the reference state, in (0, 1)
};

struct BuiltModel {
    TotalModel model;
    Operator reference_state;  // reduced reference state rho_S
};

// H_swap = (I + sx(x)sx + sy(x)sy + sz(x)sz)/2 acting on two qubits, with
// reference state p |0><0| (x) rho_0 + (1-p) |1><1| (x) rho_1,
// rho_0 = (I - sx/2)/2 and rho_1 = (I + sx/2)/2.
inline BuiltModel swap_model(const SwapParams& params) {
    if (!(params.p > 0.0 && params.p < 1.0)) throw InvalidParams("swap_model: need 0 < p < 1");
    const Operator id2 = Operator::Identity(2, 2);
    const Operator rho0 = 0.5 * (id2 - 0.5 * pauli_x());
    const Operator rho1 = 0.5 * (id2 + 0.5 * pauli_x());
    Operator proj0 = Operator::Zero(2, 2), proj1 = Operator::Zero(2, 2);
    proj0(0, 0) = 1.0;
    proj1(1, 1) = 1.0;
    const Operator rho_se = params.p * tensor(proj0, rho0) + (1.0 - params.p) * tensor(proj1, rho1);
    auto [rho_s, ctx] = decompose_total(rho_se, 2, 2);

    const Operator h_swap = 0.5 * (Operator::Identity(4, 4) + tensor(pauli_x(), pauli_x()) +
                                   tensor(pauli_y(), pauli_y()) + tensor(pauli_z(), pauli_z()));
    return {TotalModel(std::move(ctx), h_swap), std::move(rho_s)};
}

// Closed-form correlated map for the swap example; rho_11 and rho_10 follow
// from unit trace and Hermiticity.
inline Operator swap_correlated_map_closed_form(double p, double t, const Operator& rho0) {
    const double s = std::sin(t), c = std::cos(t);
    const Complex r00_0 = rho0(0, 0), r01_0 = rho0(0, 1);
    const Complex r00 = 0.5 * s * s + c * c * r00_0 +
                        0.5 * s * c * (2.0 * p - 1.0) * r01_0.imag();
    const Complex r01 = 0.25 * (s * s - kImag * s * c) - 0.5 * s * s * p +
                        0.5 * kImag * s * c * (2.0 * p - 1.0) * (p - r00_0) + c * c * r01_0;
    Operator rho(2, 2);
    rho << r00, r01, std::conj(r01), 1.0 - r00;
    return rho;
}

// The p-independent zero-discord reference map; a comparison fixture only,
// not the map this framework constructs.
inline Operator swap_zero_discord_map(double t, const Operator& rho0) {
    const double s = std::sin(t), c = std::cos(t);
    const Complex r00_0 = rho0(0, 0), r01_0 = rho0(0, 1);
    const Complex r00 = 0.5 * s * s + c * c * r00_0;
    const Complex r01 = 0.25 * (s * s - kImag * s * c) - 0.5 * s * s * r00_0 +
                        0.5 * std::sqrt(3.0) * c * c * r01_0;
    Operator rho(2, 2);
    rho << r00, r01, std::conj(r01), 1.0 - r00;
    return rho;
}

// ---------------------------------------------------------------------------
// Jaynes-Cummings model
// ---------------------------------------------------------------------------

struct JCParams {
    double a = 0.6;        // correlation strength, in [0, 1]
    double p0 = 0.4;       // reference mixing weight, in (0, 1)
    double omega0 = 1.0;   // qubit transition frequency
    double delta = 0.1;    // detuning omega0 - omega
    double g = 0.1;        // coupling strength
    int fock_cutoff = 4;   // highest Fock level kept (d_E = fock_cutoff + 1)

    void validate() const {
        if (a < 0.0 || a > 1.0) throw InvalidParams("jc: need 0 <= a <= 1");
        if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidParams("jc: need 0 < p0 < 1");
        if (fock_cutoff < 2) throw InvalidParams("jc: need fock_cutoff >= 2");
    }
};

// H = omega0 s+s- (x) I + I (x) omega b'b + g (s+ (x) b + s- (x) b'),
// reference state p0 rho_0 (x) |0><0| + (1-p0) rho_1 (x) |1><1| with
// rho_0 = (I + a sz)/2 and rho_1 = (I - a sz)/2.
inline BuiltModel jc_model(const JCParams& params) {
    params.validate();
    const int de = params.fock_cutoff + 1;
    const double omega = params.omega0 - params.delta;

    Operator b = Operator::Zero(de, de);
    for (int n = 1; n < de; ++n) b(n - 1, n) = std::sqrt(double(n));
    Operator number = b.adjoint() * b;

    const Operator id2 = Operator::Identity(2, 2);
    const Operator ide = Operator::Identity(de, de);
    const Operator h = params.omega0 * tensor(sigma_plus() * sigma_minus(), ide) +
                       omega * tensor(id2, number) +
                       params.g * (tensor(sigma_plus(), b) + tensor(sigma_minus(), b.adjoint()));

    const Operator rho0 = 0.5 * (id2 + params.a * pauli_z());
    const Operator rho1 = 0.5 * (id2 - params.a * pauli_z());
    Operator fock0 = Operator::Zero(de, de), fock1 = Operator::Zero(de, de);
    fock0(0, 0) = 1.0;
    fock1(1, 1) = 1.0;
    const Operator rho_se =
        params.p0 * tensor(rho0, fock0) + (1.0 - params.p0) * tensor(rho1, fock1);

    auto [rho_s, ctx] = decompose_total(rho_se, 2, de);
    return {TotalModel(std::move(ctx), h), std::move(rho_s)};
}

// Closed-form coefficients and their analytic time derivatives. The Rabi
// frequencies are Omega_n = sqrt(delta^2 + 4 g^2 n).
struct JCCoefficients {
    Complex c1, c2;
    double d1sq, d2sq;
    double alpha, beta, f;
    Complex gamma;
    // analytic time derivatives
    double dalpha, dbeta, df;
    Complex dgamma;
};

inline JCCoefficients jc_coefficients(const JCParams& params, double t) {
    params.validate();
    const double delta = params.delta, g = params.g, p0 = params.p0, a = params.a;

    auto omega_n = [&](int n) { return std::sqrt(delta * delta + 4.0 * g * g * n); };
    auto c_n = [&](int n) {
        const double w = omega_n(n);
        return std::exp(kImag * delta * t / 2.0) *
               (std::cos(0.5 * w * t) - kImag * (delta / w) * std::sin(0.5 * w * t));
    };
    auto dc_n = [&](int n) {
        const double w = omega_n(n);
        const Complex bracket = std::cos(0.5 * w * t) - kImag * (delta / w) * std::sin(0.5 * w * t);
        const Complex dbracket =
            -0.5 * w * std::sin(0.5 * w * t) - kImag * (delta / 2.0) * std::cos(0.5 * w * t);
        return std::exp(kImag * delta * t / 2.0) * (kImag * (delta / 2.0) * bracket + dbracket);
    };
    auto dsq_n = [&](int n) {
        const double w = omega_n(n);
        const double amp = 2.0 * g / w;
        const double sn = std::sin(0.5 * w * t);
        return double(n) * amp * amp * sn * sn;
    };
    auto ddsq_n = [&](int n) {
        const double w = omega_n(n);
        const double amp = 2.0 * g / w;
        return double(n) * amp * amp * 0.5 * w * std::sin(w * t);
    };

    JCCoefficients co;
    co.c1 = c_n(1);
    co.c2 = c_n(2);
    co.d1sq = dsq_n(1);
    co.d2sq = dsq_n(2);
    co.alpha = 1.0 - (1.0 - p0) * co.d1sq;
    co.beta = 1.0 - p0 * co.d1sq - (1.0 - p0) * co.d2sq;
    co.gamma = co.c1 * (p0 + (1.0 - p0) * co.c2);
    co.f = a * p0 * (1.0 - p0) * co.d2sq;
    co.dalpha = -(1.0 - p0) * ddsq_n(1);
    co.dbeta = -p0 * ddsq_n(1) - (1.0 - p0) * ddsq_n(2);
    co.dgamma = dc_n(1) * (p0 + (1.0 - p0) * co.c2) + co.c1 * (1.0 - p0) * dc_n(2);
    co.df = a * p0 * (1.0 - p0) * ddsq_n(2);
    return co;
}

// Schroedinger-picture closed-form correlated map:
//   rho_gg(t) = rho_gg(0) [alpha + beta - 1] + 1 - beta - f,
//   rho_eg(t) = rho_eg(0) exp(-i omega0 t) gamma(t).
// Basis ordering is (|e>, |g>), so rho_gg is the (1,1) entry.
inline Operator jc_map_closed_form(const JCParams& params, double t, const Operator& rho0) {
    const JCCoefficients co = jc_coefficients(params, t);
    const Complex rgg0 = rho0(1, 1), reg0 = rho0(0, 1);
    const Complex rgg = rgg0 * (co.alpha + co.beta - 1.0) + 1.0 - co.beta - co.f;
    const Complex reg = reg0 * std::exp(-kImag * params.omega0 * t) * co.gamma;
    Operator rho(2, 2);
    rho << 1.0 - rgg, reg, std::conj(reg), rgg;
    return rho;
}

// Physical domain as the intersection of two unit spheres around
// c_0 = -2a(1-p0) e_z and c_1 = 2 a p0 e_z in the Bloch ball.
inline bool jc_domain(const JCParams& params, double vx, double vy, double vz) {
    params.validate();
    const double c0z = -2.0 * params.a * (1.0 - params.p0);
    const double c1z = 2.0 * params.a * params.p0;
    const double perp = vx * vx + vy * vy;
    return perp + (vz - c0z) * (vz - c0z) <= 1.0 && perp + (vz - c1z) * (vz - c1z) <= 1.0;
}

struct JCRates {
    Operator k_s;  // effective Hamiltonian [omega0 - Im(dgamma/gamma)] s+s-
    double lambda_plus;
    double lambda_minus;
    double lambda_z;
};

inline JCRates jc_rates_closed_form(const JCParams& params, double t,
                                    double singular_tol = 1e-10) {
    const JCCoefficients co = jc_coefficients(params, t);
    const double denom = co.alpha + co.beta - 1.0;
    if (std::abs(denom) < singular_tol || std::abs(co.gamma) < singular_tol)
        throw SingularTime(t);
    const Complex gratio = co.dgamma / co.gamma;

    JCRates rates;
    rates.k_s = (params.omega0 - gratio.imag()) * (sigma_plus() * sigma_minus());
    rates.lambda_plus = ((co.alpha - co.f - 1.0) * co.dbeta - (co.beta + co.f) * co.dalpha +
                         denom * co.df) / denom;
    rates.lambda_minus = ((co.beta + co.f - 1.0) * co.dalpha - (co.alpha - co.f) * co.dbeta -
                          denom * co.df) / denom;
    rates.lambda_z = 0.25 * ((co.dalpha + co.dbeta) / denom - 2.0 * gratio.real());
    return rates;
}

}  // namespace corrdyn
