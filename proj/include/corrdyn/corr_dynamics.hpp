#pragma once

// Correlated-initial-state machinery: total-state decomposition, assignment
// map, physical domain, the uncorrelated map Phi_t, the inhomogeneity I_t^chi,
// the linear extension Psi_t^chi and its inverse, and CP diagnostics.

#include <optional>
#include <utility>

#include "corrdyn/superoperator.hpp"

namespace corrdyn {

// The fixed scenario triple (rho_E, chi, dimensions).
struct AssignmentContext {
    int dim_s = 0;
    int dim_e = 0;
    Operator rho_e;
    Operator chi;

    void validate(const Tolerances& tol = {}) const {
        require_state(rho_e, tol);
        if (rho_e.rows() != dim_e) throw DimensionMismatch("rho_e dimension mismatch");
        if (chi.rows() != Eigen::Index(dim_s) * dim_e || chi.rows() != chi.cols())
            throw DimensionMismatch("chi dimension mismatch");
        require_hermitian(chi, tol.herm);
        if (partial_trace_env(chi, dim_s, dim_e).cwiseAbs().maxCoeff() > 1e-10)
            throw InvalidParams("chi must be traceless over the environment");
        if (partial_trace_sys(chi, dim_s, dim_e).cwiseAbs().maxCoeff() > 1e-10)
            throw InvalidParams("chi must be traceless over the system");
    }
};

// Total-system Hamiltonian plus the assignment context; the Hamiltonian
// eigendecomposition is cached so propagators at many times are cheap.
class TotalModel {
public:
    TotalModel(AssignmentContext ctx, Operator h_total, Tolerances tol = {})
        : ctx_(std::move(ctx)), h_(std::move(h_total)), tol_(tol) {
        if (h_.rows() != Eigen::Index(ctx_.dim_s) * ctx_.dim_e)
            throw DimensionMismatch("H_total dimension mismatch");
        require_hermitian(h_, tol_.herm);
        eig_ = eig_hermitian(h_, tol_.herm);
    }

    const AssignmentContext& ctx() const { return ctx_; }
    const Operator& hamiltonian() const { return h_; }
    const Tolerances& tolerances() const { return tol_; }
    int dim_s() const { return ctx_.dim_s; }
    int dim_e() const { return ctx_.dim_e; }

    Operator propagator_at(double t) const {
        CVector phases(eig_.values.size());
        for (Eigen::Index k = 0; k < eig_.values.size(); ++k)
            phases(k) = std::exp(-kImag * eig_.values(k) * t);
        return eig_.vectors * phases.asDiagonal() * eig_.vectors.adjoint();
    }

private:
    AssignmentContext ctx_;
    Operator h_;
    Tolerances tol_;
    HermitianEigen eig_;
};

// rho_SE = rho_S (x) rho_E + chi with both marginals recovered exactly.
inline std::pair<Operator, AssignmentContext> decompose_total(const Operator& rho_se, int dim_s,
                                                              int dim_e,
                                                              const Tolerances& tol = {}) {
    require_state(rho_se, tol);
    if (rho_se.rows() != Eigen::Index(dim_s) * dim_e)
        throw DimensionMismatch("decompose_total: dimension mismatch");
    Operator rho_s = partial_trace_env(rho_se, dim_s, dim_e);
    Operator rho_e = partial_trace_sys(rho_se, dim_s, dim_e);
    Operator chi = rho_se - tensor(rho_s, rho_e);
    AssignmentContext ctx{dim_s, dim_e, std::move(rho_e), std::move(chi)};
    return {std::move(rho_s), std::move(ctx)};
}

// Linear assignment map X -> X (x) rho_E + chi Tr{X}; agrees with the affine
// assignment on trace-one operators.
inline Operator assign(const AssignmentContext& ctx, const Operator& x) {
    if (x.rows() != ctx.dim_s || x.cols() != ctx.dim_s)
        throw DimensionMismatch("assign: operand dimension mismatch");
    return tensor(x, ctx.rho_e) + ctx.chi * x.trace();
}

struct DomainResult {
    bool accepted;
    double min_eigenvalue;
};

// A reduced state is in the physical domain iff its assigned total operator
// is positive semidefinite.
inline DomainResult in_physical_domain(const AssignmentContext& ctx, const Operator& rho_s,
                                       double tol = 1e-9, const Tolerances& op_tol = {}) {
    require_state(rho_s, op_tol);
    const double lambda_min = min_eigenvalue(assign(ctx, rho_s), op_tol.herm);
    return {lambda_min >= -tol, lambda_min};
}

// Exact reduced evolution Tr_E{ U_t (rho_S (x) rho_E + chi) U_t^dagger };
// the ground-truth oracle for everything downstream.
inline Operator reduced_exact(const TotalModel& model, const Operator& rho_s0, double t) {
    const Operator u = model.propagator_at(t);
    const Operator total = u * assign(model.ctx(), rho_s0) * u.adjoint();
    return partial_trace_env(total, model.dim_s(), model.dim_e());
}

// The CPT map Phi_t of the uncorrelated problem with the same rho_E.
inline SuperOp uncorrelated_map(const TotalModel& model, double t) {
    const Operator u = model.propagator_at(t);
    const Operator& rho_e = model.ctx().rho_e;
    const int ds = model.dim_s();
    const int de = model.dim_e();
    return superop_from_action(
        [&](const Operator& x) {
            return partial_trace_env(u * tensor(x, rho_e) * u.adjoint(), ds, de);
        },
        ds);
}

// I_t^chi = Tr_E{ U_t chi U_t^dagger }; Hermitian and traceless.
inline Operator inhomogeneity(const TotalModel& model, double t) {
    const Operator u = model.propagator_at(t);
    return partial_trace_env(u * model.ctx().chi * u.adjoint(), model.dim_s(), model.dim_e());
}

struct MapSnapshot {
    double t;
    SuperOp phi;      // uncorrelated CPT part
    Operator i_chi;   // inhomogeneity
    SuperOp psi;      // linear extension: phi + vec(I_chi) vec(I)^dagger
};

inline MapSnapshot linear_map(const TotalModel& model, double t) {
    MapSnapshot snap{t, uncorrelated_map(model, t), inhomogeneity(model, t), {}};
    snap.psi = {snap.phi.dim, snap.phi.m + superop_trace_times(snap.i_chi).m};
    return snap;
}

inline double condition_number(const Operator& m) {
    Eigen::JacobiSVD<Operator> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

// Inverse of the linear extension, built from the inverse of Phi_t:
// Psi^{-1}[X] = Phi^{-1}[X] - Phi^{-1}[I_chi] Tr{X}.
inline SuperOp inverse_map(const MapSnapshot& snap, double cond_threshold = 1e8) {
    const double cond = condition_number(snap.phi.m);
    if (!(cond < cond_threshold)) throw SingularMap(snap.t, cond);
    Eigen::PartialPivLU<Operator> lu(snap.phi.m);
    const Operator phi_inv = lu.solve(Operator::Identity(snap.phi.m.rows(), snap.phi.m.cols()));
    const Operator offset = devectorize(lu.solve(vectorize(snap.i_chi)));
    return {snap.phi.dim, phi_inv - superop_trace_times(offset).m};
}

// Pseudo-Kraus form of X -> I_chi Tr{X} from the spectral decomposition of
// I_chi: terms (a_j, |phi_j><phi_j'|) over all eigenvector pairs. The
// weights sum to zero because I_chi is traceless.
inline PseudoKraus pseudo_kraus_inhomogeneity(const Operator& i_chi, double herm_tol = 1e-10) {
    require_hermitian(i_chi, herm_tol);
    if (std::abs(i_chi.trace()) > 1e-9) throw NotTraceless("inhomogeneity must be traceless");
    const auto eig = eig_hermitian(i_chi, herm_tol);
    const int d = int(i_chi.rows());
    PseudoKraus out;
    out.terms.reserve(static_cast<size_t>(d) * d);
    for (int j = 0; j < d; ++j)
        for (int jp = 0; jp < d; ++jp)
            out.terms.push_back(
                {eig.values(j), eig.vectors.col(j) * eig.vectors.col(jp).adjoint()});
    return out;
}

inline PseudoKraus kraus_uncorrelated(const SuperOp& phi, double psd_tol = 1e-9) {
    return kraus_decomposition(phi, psd_tol);
}

struct CpDiagnostics {
    double min_choi_eigenvalue;
    double min_epsilon_eigenvalue;
};

// Complete positivity test: minimum eigenvalue of the Choi matrix and of the
// epsilon matrix W^dagger Choi W in the Hermitian operator basis. The two
// spectra coincide (unitary change of basis); both are reported as a
// consistency check.
inline CpDiagnostics cp_check(const SuperOp& psi) {
    const Operator choi = choi_from_superop(psi);
    const int d = psi.dim;
    const Eigen::Index dd = Eigen::Index(d) * d;
    const auto basis = hermitian_basis(d);
    Operator w(dd, dd);
    for (Eigen::Index k = 0; k < dd; ++k) {
        // Choi vectors pair with operators via the Kraus reshape convention.
        Operator g = basis[size_t(k)];
        CVector col(dd);
        for (int i = 0; i < d; ++i)
            for (int a = 0; a < d; ++a) col(i * d + a) = g(a, i);
        w.col(k) = col;
    }
    const Operator epsilon = w.adjoint() * choi * w;
    return {min_eigenvalue(choi), min_eigenvalue(epsilon)};
}

}  // namespace corrdyn
