#pragma once

// Dense complex operator algebra: tensor products, partial traces, Hermitian
// eigendecompositions, operator bases, vectorization and unitary propagators.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "corrdyn/errors.hpp"

namespace corrdyn {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

struct Tolerances {
    double herm = 1e-10;
    double psd = 1e-9;
    double trace = 1e-10;
};

inline bool is_hermitian(const Operator& a, double tol = 1e-10) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline void require_hermitian(const Operator& a, double tol = 1e-10) {
    if (a.rows() != a.cols()) throw DimensionMismatch("operator not square");
    if (!is_hermitian(a, tol)) throw NotHermitian("operator not Hermitian within tolerance");
}

// Eigenvalues ascending, orthonormal eigenvectors as columns.
struct HermitianEigen {
    Eigen::VectorXd values;
    Operator vectors;
};

inline HermitianEigen eig_hermitian(const Operator& a, double herm_tol = 1e-10) {
    require_hermitian(a, herm_tol);
    Eigen::SelfAdjointEigenSolver<Operator> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Hermitian eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const Operator& a, double herm_tol = 1e-10) {
    return eig_hermitian(a, herm_tol).values.minCoeff();
}

inline void require_state(const Operator& rho, const Tolerances& tol = {}) {
    if (rho.rows() != rho.cols()) throw NotAState("density matrix not square");
    if (!is_hermitian(rho, tol.herm)) throw NotAState("density matrix not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > tol.trace)
        throw NotAState("density matrix trace differs from 1");
    if (min_eigenvalue(rho, tol.herm) < -tol.psd)
        throw NotAState("density matrix has negative eigenvalue");
}

inline Operator tensor(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Operator partial_trace_env(const Operator& m, int dim_s, int dim_e) {
    if (m.rows() != Eigen::Index(dim_s) * dim_e || m.rows() != m.cols())
        throw DimensionMismatch("partial_trace_env: dimension mismatch");
    Operator out = Operator::Zero(dim_s, dim_s);
    for (int i = 0; i < dim_s; ++i)
        for (int j = 0; j < dim_s; ++j)
            for (int k = 0; k < dim_e; ++k)
                out(i, j) += m(i * dim_e + k, j * dim_e + k);
    return out;
}

inline Operator partial_trace_sys(const Operator& m, int dim_s, int dim_e) {
    if (m.rows() != Eigen::Index(dim_s) * dim_e || m.rows() != m.cols())
        throw DimensionMismatch("partial_trace_sys: dimension mismatch");
    Operator out = Operator::Zero(dim_e, dim_e);
    for (int k = 0; k < dim_e; ++k)
        for (int l = 0; l < dim_e; ++l)
            for (int i = 0; i < dim_s; ++i)
                out(k, l) += m(i * dim_e + k, i * dim_e + l);
    return out;
}

// Row-major stacking: component i*d+j holds X(i,j), so Tr{X} = <vec(I), vec(X)>.
inline CVector vectorize(const Operator& x) {
    if (x.rows() != x.cols()) throw DimensionMismatch("vectorize: operator not square");
    const Eigen::Index d = x.rows();
    CVector v(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = x(i, j);
    return v;
}

inline Operator devectorize(const CVector& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    if (d * d != v.size()) throw DimensionMismatch("devectorize: length not a perfect square");
    Operator x(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = v(i * d + j);
    return x;
}

// Generalized Gell-Mann basis: G_0 = I/sqrt(d), then the symmetric and
// antisymmetric off-diagonal pairs, then the diagonal traceless combinations.
// Hilbert-Schmidt orthonormal.
inline std::vector<Operator> hermitian_basis(int d) {
    if (d < 2) throw InvalidParams("hermitian_basis: need d >= 2");
    std::vector<Operator> basis;
    basis.reserve(static_cast<size_t>(d) * d);
    basis.push_back(Operator::Identity(d, d) / std::sqrt(double(d)));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            Operator sym = Operator::Zero(d, d);
            sym(i, j) = inv_sqrt2;
            sym(j, i) = inv_sqrt2;
            basis.push_back(sym);
            Operator anti = Operator::Zero(d, d);
            anti(i, j) = -kImag * inv_sqrt2;
            anti(j, i) = kImag * inv_sqrt2;
            basis.push_back(anti);
        }
    }
    for (int l = 1; l < d; ++l) {
        Operator diag = Operator::Zero(d, d);
        const double norm = std::sqrt(1.0 / (double(l) * (l + 1)));
        for (int j = 0; j < l; ++j) diag(j, j) = norm;
        diag(l, l) = -double(l) * norm;
        basis.push_back(diag);
    }
    return basis;
}

// U_t = V exp(-i Lambda t) V^dagger from the spectral decomposition of H.
inline Operator propagator(const Operator& h, double t, double herm_tol = 1e-10) {
    const auto eig = eig_hermitian(h, herm_tol);
    CVector phases(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        phases(k) = std::exp(-kImag * eig.values(k) * t);
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

inline double fnorm(const Operator& a) { return a.norm(); }

}  // namespace corrdyn
