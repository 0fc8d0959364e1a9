#pragma once

// Superoperators as D x D matrices (D = d^2) in the row-major vectorization
// convention of linalg.hpp, plus Choi rearrangements and (pseudo-)Kraus
// decompositions.

#include <functional>
#include <utility>
#include <vector>

#include "corrdyn/linalg.hpp"

namespace corrdyn {

struct SuperOp {
    int dim = 0;  // Hilbert space dimension d; matrix is d^2 x d^2
    Operator m;

    Operator apply(const Operator& x) const {
        if (x.rows() != dim || x.cols() != dim)
            throw DimensionMismatch("SuperOp::apply: operand dimension mismatch");
        return devectorize(m * vectorize(x));
    }
};

inline SuperOp superop_identity(int d) {
    return {d, Operator::Identity(Eigen::Index(d) * d, Eigen::Index(d) * d)};
}

// Matrix form of a linear map from its action on the matrix units E_ij.
inline SuperOp superop_from_action(const std::function<Operator(const Operator&)>& f, int d) {
    const Eigen::Index dd = Eigen::Index(d) * d;
    Operator m(dd, dd);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Operator unit = Operator::Zero(d, d);
            unit(i, j) = 1.0;
            m.col(i * d + j) = vectorize(f(unit));
        }
    }
    return {d, m};
}

// Superoperator for X -> A X B.
inline SuperOp superop_sandwich(const Operator& a, const Operator& b) {
    const int d = int(a.rows());
    return {d, tensor(a, b.transpose())};
}

// Superoperator for X -> C Tr{X}.
inline SuperOp superop_trace_times(const Operator& c) {
    const int d = int(c.rows());
    const CVector vec_id = vectorize(Operator::Identity(d, d));
    return {d, vectorize(c) * vec_id.adjoint()};
}

// C = sum_ij E_ij (x) M[E_ij]; a pure index permutation of the superoperator
// matrix: C[(i,a),(j,b)] = M[(a,b),(i,j)].
inline Operator choi_from_superop(const SuperOp& s) {
    const int d = s.dim;
    Operator c(Eigen::Index(d) * d, Eigen::Index(d) * d);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a)
            for (int j = 0; j < d; ++j)
                for (int b = 0; b < d; ++b)
                    c(i * d + a, j * d + b) = s.m(a * d + b, i * d + j);
    return c;
}

inline SuperOp superop_from_choi(const Operator& c) {
    const auto d = static_cast<int>(std::llround(std::sqrt(double(c.rows()))));
    if (Eigen::Index(d) * d != c.rows() || c.rows() != c.cols())
        throw DimensionMismatch("superop_from_choi: bad Choi dimension");
    Operator m(c.rows(), c.cols());
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a)
            for (int j = 0; j < d; ++j)
                for (int b = 0; b < d; ++b)
                    m(a * d + b, i * d + j) = c(i * d + a, j * d + b);
    return {d, m};
}

inline bool hermiticity_preserving(const SuperOp& s, double tol = 1e-12) {
    const Operator c = choi_from_superop(s);
    return (c - c.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool trace_preserving(const SuperOp& s, double tol = 1e-10) {
    const CVector vec_id = vectorize(Operator::Identity(s.dim, s.dim));
    return (s.m.adjoint() * vec_id - vec_id).cwiseAbs().maxCoeff() <= tol;
}

inline bool trace_destroying(const SuperOp& s, double tol = 1e-9) {
    const CVector vec_id = vectorize(Operator::Identity(s.dim, s.dim));
    return (s.m.adjoint() * vec_id).cwiseAbs().maxCoeff() <= tol;
}

// Operator-sum terms with real weights. For a CPT map the weights are the
// Choi eigenvalues (all nonnegative folded into the operators by convention
// elsewhere); for an inhomogeneity they may be negative and sum-to-zero.
struct PseudoKraus {
    struct Term {
        double weight;
        Operator op;
    };
    std::vector<Term> terms;

    Operator apply(const Operator& x) const {
        Operator out = Operator::Zero(x.rows(), x.cols());
        for (const auto& t : terms) out += t.weight * t.op * x * t.op.adjoint();
        return out;
    }

    // sum_i f_i F_i^dagger F_i; zero for an inhomogeneity, identity for CPT Kraus.
    Operator weight_sum() const {
        if (terms.empty()) return Operator();
        Operator out = Operator::Zero(terms.front().op.rows(), terms.front().op.cols());
        for (const auto& t : terms) out += t.weight * t.op.adjoint() * t.op;
        return out;
    }
};

// Choi eigenvector -> operator in the convention where C = vec_k(V) vec_k(V)^dagger
// represents X -> V X V^dagger. With the row-major superoperator convention this
// reshape is V(a,i) = w(i*d + a).
inline Operator kraus_from_choi_vector(const CVector& w) {
    const auto d = static_cast<int>(std::llround(std::sqrt(double(w.size()))));
    Operator v(d, d);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) v(a, i) = w(i * d + a);
    return v;
}

// Pseudo-Kraus set (weight = Choi eigenvalue, operator = reshaped eigenvector)
// of any Hermiticity-preserving map. Operators are HS-orthonormal.
inline PseudoKraus pseudo_kraus_from_choi(const Operator& choi, double herm_tol = 1e-10) {
    const auto eig = eig_hermitian(choi, herm_tol);
    PseudoKraus out;
    out.terms.reserve(static_cast<size_t>(eig.values.size()));
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        out.terms.push_back({eig.values(k), kraus_from_choi_vector(eig.vectors.col(k))});
    return out;
}

// Kraus decomposition of a completely positive map; completeness
// sum Omega_i^dagger Omega_i = I holds when the map is also trace preserving.
inline PseudoKraus kraus_decomposition(const SuperOp& s, double psd_tol = 1e-9) {
    const Operator choi = choi_from_superop(s);
    const auto eig = eig_hermitian(choi);
    if (eig.values.minCoeff() < -psd_tol)
        throw NotCP("Choi matrix has negative eigenvalue; map is not completely positive");
    PseudoKraus out;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double c = eig.values(k);
        if (c <= 0.0) continue;
        out.terms.push_back({1.0, std::sqrt(c) * kraus_from_choi_vector(eig.vectors.col(k))});
    }
    return out;
}

}  // namespace corrdyn
