#pragma once

// Random state and operator generation for property tests and domain
// rejection sampling. All draws go through a caller-provided engine so runs
// are reproducible.

#include <random>

#include "corrdyn/corr_dynamics.hpp"

namespace corrdyn {

using Rng = std::mt19937_64;

inline Operator random_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Operator m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline Operator random_hermitian(int d, Rng& rng) {
    const Operator g = random_matrix(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

// Wishart-type construction G G^dagger / Tr; full rank with probability one.
inline Operator random_state(int d, Rng& rng) {
    const Operator g = random_matrix(d, d, rng);
    Operator w = g * g.adjoint();
    return w / w.trace().real();
}

// Uniform draw from the Bloch ball.
inline Operator random_bloch_state(Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    const double norm = std::sqrt(x * x + y * y + z * z);
    const double r = std::cbrt(unif(rng));
    x *= r / norm;
    y *= r / norm;
    z *= r / norm;
    Operator rho(2, 2);
    rho << 0.5 * (1.0 + z), 0.5 * Complex(x, -y), 0.5 * Complex(x, y), 0.5 * (1.0 - z);
    return rho;
}

// Rejection sampling of states accepted by in_physical_domain.
inline Operator sample_physical_domain(const AssignmentContext& ctx, Rng& rng,
                                       double tol = 1e-9, int max_tries = 100000) {
    for (int k = 0; k < max_tries; ++k) {
        Operator rho = ctx.dim_s == 2 ? random_bloch_state(rng) : random_state(ctx.dim_s, rng);
        if (in_physical_domain(ctx, rho, tol).accepted) return rho;
    }
    throw std::runtime_error("sample_physical_domain: rejection sampling exhausted; "
                             "the physical domain may be (nearly) a single point");
}

}  // namespace corrdyn
