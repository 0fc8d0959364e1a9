#pragma once

// Time-local generators and canonical Lindblad forms: L_t, J_t^chi, L_t^chi,
// the decomposition into effective Hamiltonian plus dissipators, and an RK4
// master-equation integrator.

#include <algorithm>
#include <limits>

#include "corrdyn/corr_dynamics.hpp"

namespace corrdyn {

struct MapDerivative {
    SuperOp d_phi;      // d/dt Phi_t
    Operator d_i_chi;   // d/dt I_t^chi
    SuperOp d_psi;      // d/dt Psi_t^chi
};

// Analytic derivatives via the commutator with H; no finite differences:
// d/dt Phi_t[X] = Tr_E{ -i [H, U_t (X (x) rho_E) U_t^dagger] }.
inline MapDerivative map_derivative(const TotalModel& model, double t) {
    const Operator u = model.propagator_at(t);
    const Operator& h = model.hamiltonian();
    const int ds = model.dim_s();
    const int de = model.dim_e();
    const auto& rho_e = model.ctx().rho_e;

    auto commutator_traced = [&](const Operator& total) {
        const Operator evolved = u * total * u.adjoint();
        return partial_trace_env(-kImag * (h * evolved - evolved * h), ds, de);
    };

    MapDerivative out;
    out.d_phi = superop_from_action(
        [&](const Operator& x) { return commutator_traced(tensor(x, rho_e)); }, ds);
    out.d_i_chi = commutator_traced(model.ctx().chi);
    out.d_psi = {ds, out.d_phi.m + superop_trace_times(out.d_i_chi).m};
    return out;
}

struct GeneratorSnapshot {
    double t;
    SuperOp l;                    // uncorrelated generator L_t
    Operator j_chi;               // J_t^chi = dI_t^chi - L_t[I_t^chi]
    SuperOp l_chi;                // L_t^chi = L_t + J_t^chi Tr{.}
    double consistency_residual;  // max|L_t^chi - dPsi Psi^{-1}|
};

// L_t = dPhi_t Phi_t^{-1}, assembled together with the correlation terms.
// The direct construction dPsi_t Psi_t^{-1} is evaluated as a cross-check.
inline GeneratorSnapshot generator(const TotalModel& model, double t,
                                   double cond_threshold = 1e8) {
    const MapSnapshot snap = linear_map(model, t);
    const MapDerivative deriv = map_derivative(model, t);

    const double cond = condition_number(snap.phi.m);
    if (!(cond < cond_threshold)) throw SingularMap(t, cond);

    Eigen::PartialPivLU<Operator> lu(snap.phi.m.transpose());
    // M_L M_phi = dM_phi  <=>  M_phi^T M_L^T = dM_phi^T
    const Operator l_mat = lu.solve(deriv.d_phi.m.transpose()).transpose();

    GeneratorSnapshot out;
    out.t = t;
    out.l = {snap.phi.dim, l_mat};
    out.j_chi = deriv.d_i_chi - out.l.apply(snap.i_chi);
    out.l_chi = {snap.phi.dim, l_mat + superop_trace_times(out.j_chi).m};

    const SuperOp psi_inv = inverse_map(snap, cond_threshold);
    const Operator direct = deriv.d_psi.m * psi_inv.m;
    out.consistency_residual = (out.l_chi.m - direct).cwiseAbs().maxCoeff();
    if (out.consistency_residual > 1e-6 * std::max(1.0, l_mat.norm()))
        throw ReconstructionFailure("generator constructions disagree beyond tolerance");
    return out;
}

struct Channel {
    double rate;        // inverse time; may be negative
    Operator lindblad;  // traceless, unit Hilbert-Schmidt norm
};

struct CanonicalForm {
    Operator hamiltonian;  // effective Hamiltonian K_S
    std::vector<Channel> channels;

    Operator apply(const Operator& x) const {
        Operator out = -kImag * (hamiltonian * x - x * hamiltonian);
        for (const auto& ch : channels) {
            const Operator ldl = ch.lindblad.adjoint() * ch.lindblad;
            out += ch.rate * (ch.lindblad * x * ch.lindblad.adjoint() -
                              0.5 * (ldl * x + x * ldl));
        }
        return out;
    }

    SuperOp to_superop() const {
        const int d = int(hamiltonian.rows());
        return superop_from_action([this](const Operator& x) { return apply(x); }, d);
    }
};

namespace detail {
inline bool lexicographic_less(const Operator& a, const Operator& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (a(i, j).real() != b(i, j).real()) return a(i, j).real() < b(i, j).real();
            if (a(i, j).imag() != b(i, j).imag()) return a(i, j).imag() < b(i, j).imag();
        }
    return false;
}
}  // namespace detail

// Canonical split of a Hermiticity-preserving, trace-destroying superoperator
// into -i[K_S, .] plus a dissipator with traceless unit-norm Lindblad
// operators. In the Hermitian operator basis {F_0 = I/sqrt(d), F_1, ...} the
// generator matrix A (the Choi matrix rotated into that basis) gives
//   L[x] = sum_kl A_kl F_k x F_l,
// so the first column yields B = (1/sqrt(d)) sum_{k>=1} A_k0 F_k and the
// effective Hamiltonian K_S = (i/2)(B - B^dagger), while the traceless block
// A_{k,l>=1} is the Kossakowski matrix whose eigendecomposition delivers the
// canonical rates and Lindblad operators.
inline CanonicalForm canonical_decompose(const SuperOp& m, double trace_tol = 1e-9) {
    const int d = m.dim;
    const Eigen::Index dd = Eigen::Index(d) * d;
    if (!trace_destroying(m, trace_tol))
        throw InvalidParams("canonical_decompose: superoperator is not trace destroying");
    Operator choi = choi_from_superop(m);
    if ((choi - choi.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, choi.norm()))
        throw NotHermitian("canonical_decompose: map is not Hermiticity preserving");
    choi = 0.5 * (choi + choi.adjoint());

    const auto basis = hermitian_basis(d);
    Operator w(dd, dd);
    for (Eigen::Index k = 0; k < dd; ++k) {
        const Operator& g = basis[size_t(k)];
        for (int i = 0; i < d; ++i)
            for (int a = 0; a < d; ++a) w(i * d + a, k) = g(a, i);
    }
    const Operator a = w.adjoint() * choi * w;

    Operator b = Operator::Zero(d, d);
    for (Eigen::Index k = 1; k < dd; ++k) b += a(k, 0) * basis[size_t(k)];
    b /= std::sqrt(double(d));

    CanonicalForm form;
    form.hamiltonian = 0.5 * kImag * (b - b.adjoint());

    const Operator kossakowski = 0.5 * (a.block(1, 1, dd - 1, dd - 1) +
                                        a.block(1, 1, dd - 1, dd - 1).adjoint());
    const auto eig = eig_hermitian(kossakowski);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double rate = eig.values(i);
        if (std::abs(rate) < 1e-12) continue;
        Operator lindblad = Operator::Zero(d, d);
        for (Eigen::Index k = 1; k < dd; ++k)
            lindblad += eig.vectors(k - 1, i) * basis[size_t(k)];
        form.channels.push_back({rate, std::move(lindblad)});
    }
    std::sort(form.channels.begin(), form.channels.end(), [](const Channel& a, const Channel& b) {
        if (std::abs(a.rate) != std::abs(b.rate)) return std::abs(a.rate) > std::abs(b.rate);
        return detail::lexicographic_less(a.lindblad, b.lindblad);
    });

    const double residual = (form.to_superop().m - m.m).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * std::max(1.0, m.m.norm()))
        throw ReconstructionFailure("canonical form does not reproduce its source generator");
    return form;
}

struct CorrelatedCanonical {
    CanonicalForm uncorrelated;  // from L_t
    CanonicalForm correlation;   // from J_t^chi Tr{.}; its K_S vanishes
    CanonicalForm merged;        // from L_t^chi
};

inline CorrelatedCanonical correlated_canonical(const TotalModel& model, double t,
                                                double cond_threshold = 1e8) {
    const GeneratorSnapshot gen = generator(model, t, cond_threshold);
    return {canonical_decompose(gen.l), canonical_decompose(superop_trace_times(gen.j_chi)),
            canonical_decompose(gen.l_chi)};
}

struct Trajectory {
    std::vector<double> times;
    std::vector<Operator> states;
};

// Classical fixed-step RK4 on rho_dot = L_t^chi[rho], regenerating the
// generator at each stage time. Generators at shared stage times are cached
// between consecutive steps.
inline Trajectory integrate_master_equation(const TotalModel& model, const Operator& rho_s0,
                                            double t_max, int steps,
                                            double cond_threshold = 1e8) {
    if (steps < 1) throw InvalidParams("integrate_master_equation: need steps >= 1");
    const double h = t_max / steps;

    Trajectory traj;
    traj.times.reserve(size_t(steps) + 1);
    traj.states.reserve(size_t(steps) + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(rho_s0);

    CVector v = vectorize(rho_s0);
    Operator l_begin = generator(model, 0.0, cond_threshold).l_chi.m;
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const Operator l_mid = generator(model, t + 0.5 * h, cond_threshold).l_chi.m;
        const Operator l_end = generator(model, t + h, cond_threshold).l_chi.m;

        const CVector k1 = l_begin * v;
        const CVector k2 = l_mid * (v + 0.5 * h * k1);
        const CVector k3 = l_mid * (v + 0.5 * h * k2);
        const CVector k4 = l_end * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        traj.times.push_back(t + h);
        traj.states.push_back(devectorize(v));
        l_begin = l_end;
    }
    return traj;
}

}  // namespace corrdyn
