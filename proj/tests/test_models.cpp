#include <catch2/catch_amalgamated.hpp>

#include "corrdyn/corrdyn.hpp"

using namespace corrdyn;

namespace {

Rng make_rng(unsigned seed = 42) { return Rng(seed); }

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

// rate of the merged dissipator along a given channel direction
double gks_rate(const CanonicalForm& form, const Operator& direction) {
    const Operator unit = direction / direction.norm();
    double rate = 0.0;
    for (const auto& ch : form.channels)
        rate += ch.rate * std::norm((unit.adjoint() * ch.lindblad).trace());
    return rate;
}

}  // namespace

TEST_CASE("swap_model: marginals and correlation structure") {
    const BuiltModel half = swap_model({0.5});
    CHECK(max_abs(half.reference_state - 0.5 * Operator::Identity(2, 2)) < 1e-14);

    const BuiltModel m = swap_model({0.3});
    Operator diag = Operator::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    CHECK(max_abs(m.reference_state - diag) < 1e-14);
    CHECK(max_abs(partial_trace_env(m.model.ctx().chi, 2, 2)) < 1e-13);
    CHECK(max_abs(partial_trace_sys(m.model.ctx().chi, 2, 2)) < 1e-13);
}

TEST_CASE("swap closed form: identity at t = 0 and half-period mixing") {
    auto rng = make_rng(3);
    const Operator rho0 = random_bloch_state(rng);
    CHECK(max_abs(swap_correlated_map_closed_form(0.875, 0.0, rho0) - rho0) < 1e-14);
    // t = pi/2: rho_00 = 1/2 regardless of input
    const Operator at_half = swap_correlated_map_closed_form(0.3, M_PI / 2.0, rho0);
    CHECK(std::abs(at_half(0, 0) - 0.5) < 1e-12);
}

TEST_CASE("swap closed form matches the generic pipeline") {
    auto rng = make_rng(7);
    for (double p : {0.3, 0.5, 0.875}) {
        const BuiltModel built = swap_model({p});
        for (int k = 0; k <= 8; ++k) {
            const double t = k * M_PI / 8.0;
            const MapSnapshot snap = linear_map(built.model, t);
            for (int trial = 0; trial < 20; ++trial) {
                const Operator rho0 = random_bloch_state(rng);
                const Operator closed = swap_correlated_map_closed_form(p, t, rho0);
                CHECK(max_abs(snap.psi.apply(rho0) - closed) < 1e-10);
            }
        }
    }
}

TEST_CASE("swap zero-discord map: coincidence only at the reference family") {
    auto rng = make_rng(11);
    const double p = 0.7;
    // rho_00 = p, rho_01 = 0: the two maps coincide
    Operator ref = Operator::Zero(2, 2);
    ref(0, 0) = p;
    ref(1, 1) = 1.0 - p;
    for (double t : {0.4, 1.0, 2.3}) {
        CHECK(max_abs(swap_zero_discord_map(t, ref) -
                      swap_correlated_map_closed_form(p, t, ref)) < 1e-12);
    }
    // at t = 0 the zero-discord map is not the identity
    const Operator probe = bloch_state(0.5, 0.0, 0.2);
    CHECK(max_abs(swap_zero_discord_map(0.0, probe) - probe) > 1e-3);
    // rho_00(pi/2) = 1/2 independent of input
    CHECK(std::abs(swap_zero_discord_map(M_PI / 2.0, probe)(0, 0) - 0.5) < 1e-12);
    // generic domain states see different maps
    const Operator other = bloch_state(0.3, 0.1, 0.2);
    CHECK(max_abs(swap_zero_discord_map(0.9, other) -
                  swap_correlated_map_closed_form(p, 0.9, other)) > 1e-3);
    (void)rng;
}

TEST_CASE("jc_model: correlation operator, excitation conservation, a = 0") {
    JCParams params;
    params.a = 0.6;
    params.p0 = 0.4;
    const BuiltModel jc = jc_model(params);
    const int de = params.fock_cutoff + 1;
    Operator fock_diff = Operator::Zero(de, de);
    fock_diff(0, 0) = 1.0;
    fock_diff(1, 1) = -1.0;
    CHECK(max_abs(jc.model.ctx().chi - params.p0 * (1.0 - params.p0) * params.a *
                                           tensor(pauli_z(), fock_diff)) < 1e-13);
    CHECK(max_abs(jc.reference_state -
                  0.5 * (Operator::Identity(2, 2) +
                         params.a * (2.0 * params.p0 - 1.0) * pauli_z())) < 1e-14);

    // N = s+s- (x) I + I (x) b'b commutes with H
    Operator b = Operator::Zero(de, de);
    for (int n = 1; n < de; ++n) b(n - 1, n) = std::sqrt(double(n));
    const Operator number = tensor(sigma_plus() * sigma_minus(), Operator::Identity(de, de)) +
                            tensor(Operator::Identity(2, 2), b.adjoint() * b);
    const Operator& h = jc.model.hamiltonian();
    CHECK(max_abs(number * h - h * number) < 1e-12);

    JCParams free_params = params;
    free_params.a = 0.0;
    const BuiltModel free_jc = jc_model(free_params);
    CHECK(max_abs(free_jc.model.ctx().chi) < 1e-14);
    auto rng = make_rng(15);
    for (int k = 0; k < 20; ++k)
        CHECK(in_physical_domain(free_jc.model.ctx(), random_bloch_state(rng)).accepted);

    JCParams bad = params;
    bad.fock_cutoff = 1;
    CHECK_THROWS_AS(jc_model(bad), InvalidParams);
}

TEST_CASE("jc_coefficients: initial values, resonance peak, bounds") {
    JCParams params;
    params.a = 0.6;
    params.p0 = 0.4;
    const JCCoefficients at0 = jc_coefficients(params, 0.0);
    CHECK(at0.alpha == Catch::Approx(1.0));
    CHECK(at0.beta == Catch::Approx(1.0));
    CHECK(std::abs(at0.gamma - 1.0) < 1e-14);
    CHECK(at0.f == 0.0);

    // resonance: |d_2|^2 = sin^2(sqrt(2) g t), peak f = a p0 (1-p0)
    JCParams res = params;
    res.delta = 0.0;
    const double t_peak = M_PI / (2.0 * std::sqrt(2.0) * res.g);
    const JCCoefficients peak = jc_coefficients(res, t_peak);
    CHECK(peak.f == Catch::Approx(0.144).margin(1e-12));
    for (double t : {0.3, 4.0, 11.0}) {
        const JCCoefficients co = jc_coefficients(res, t);
        CHECK(co.d2sq == Catch::Approx(std::pow(std::sin(std::sqrt(2.0) * res.g * t), 2)));
    }

    // |d_n|^2 <= n (2g/Omega_n)^2 <= 1
    for (double t = 0.0; t < 100.0; t += 0.7) {
        const JCCoefficients co = jc_coefficients(params, t);
        CHECK(co.d1sq <= 1.0 + 1e-12);
        CHECK(co.d2sq <= 1.0 + 1e-12);
        CHECK(co.f >= 0.0);
    }

    // analytic derivatives vs central differences
    const double fd_h = 1e-6;
    for (double t : {0.9, 7.3, 25.0}) {
        const JCCoefficients lo = jc_coefficients(params, t - fd_h);
        const JCCoefficients hi = jc_coefficients(params, t + fd_h);
        const JCCoefficients co = jc_coefficients(params, t);
        CHECK(co.dalpha == Catch::Approx((hi.alpha - lo.alpha) / (2 * fd_h)).margin(1e-7));
        CHECK(co.dbeta == Catch::Approx((hi.beta - lo.beta) / (2 * fd_h)).margin(1e-7));
        CHECK(co.df == Catch::Approx((hi.f - lo.f) / (2 * fd_h)).margin(1e-7));
        CHECK(std::abs(co.dgamma - (hi.gamma - lo.gamma) / (2 * fd_h)) < 1e-7);
    }
}

TEST_CASE("jc_map_closed_form matches the generic pipeline (Fig. 3 parameters)") {
    JCParams params;  // a = 0.6, p0 = 0.4, delta = 0.1, g = 0.1
    const BuiltModel jc = jc_model(params);
    auto rng = make_rng(19);
    for (int k = 0; k <= 20; ++k) {
        const double t = k * 10.0;  // covers [0, 200]
        const MapSnapshot snap = linear_map(jc.model, t);
        const Operator rho0 = sample_physical_domain(jc.model.ctx(), rng);
        CHECK(max_abs(snap.psi.apply(rho0) - jc_map_closed_form(params, t, rho0)) < 1e-9);
    }

    // correlated rho_gg = uncorrelated rho_gg - f(t); coherences untouched
    JCParams unc_params = params;
    unc_params.a = 0.0;
    const Operator rho0 = jc.reference_state;
    for (double t : {3.0, 18.0, 77.0}) {
        const Operator corr = jc_map_closed_form(params, t, rho0);
        const Operator unc = jc_map_closed_form(unc_params, t, rho0);
        const double f = jc_coefficients(params, t).f;
        CHECK(std::abs(corr(1, 1).real() - (unc(1, 1).real() - f)) < 1e-12);
        CHECK(std::abs(corr(0, 1) - unc(0, 1)) < 1e-14);
        CHECK(f >= 0.0);
    }
}

TEST_CASE("jc pipeline: coherence immunity to this chi") {
    JCParams params;
    const BuiltModel jc = jc_model(params);
    JCParams unc_params = params;
    unc_params.a = 0.0;
    const BuiltModel unc = jc_model(unc_params);
    auto rng = make_rng(23);
    for (double t : {5.0, 31.0, 120.0}) {
        const SuperOp corr = linear_map(jc.model, t).psi;
        const SuperOp free = linear_map(unc.model, t).psi;
        const Operator rho0 = sample_physical_domain(jc.model.ctx(), rng);
        const Operator va = corr.apply(rho0);
        const Operator vb = free.apply(rho0);
        CHECK(std::abs(va(0, 1) - vb(0, 1)) < 1e-10);
    }
}

TEST_CASE("jc_domain: sphere criterion against the eigenvalue test") {
    JCParams params;
    params.a = 0.7;
    params.p0 = 0.5;
    const BuiltModel jc = jc_model(params);
    // the domain center is the reference Bloch vector
    const double center = params.a * (2.0 * params.p0 - 1.0);
    CHECK(jc_domain(params, 0.0, 0.0, center));

    // distance-to-boundary margin of the sphere criterion; the eigenvalue
    // margin is identically zero inside the domain because rho_E is rank
    // deficient in the truncated Fock space
    auto sphere_margin = [&](double x, double y, double z) {
        const double perp = x * x + y * y;
        const double c0 = -2.0 * params.a * (1.0 - params.p0);
        const double c1 = 2.0 * params.a * params.p0;
        return std::min(1.0 - (perp + (z - c0) * (z - c0)),
                        1.0 - (perp + (z - c1) * (z - c1)));
    };

    auto rng = make_rng(27);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int disagreements = 0, inside = 0;
    for (int k = 0; k < 1000; ++k) {
        double x, y, z;
        do {
            x = unif(rng);
            y = unif(rng);
            z = unif(rng);
        } while (x * x + y * y + z * z > 1.0);
        if (std::abs(sphere_margin(x, y, z)) < 1e-6) continue;  // boundary
        const bool spheres = jc_domain(params, x, y, z);
        const auto eig = in_physical_domain(jc.model.ctx(), bloch_state(x, y, z), 1e-9);
        if (spheres != eig.accepted) ++disagreements;
        if (spheres) ++inside;
    }
    CHECK(disagreements == 0);
    CHECK(inside > 50);  // both branches exercised

    JCParams pinned = params;
    pinned.a = 1.0;
    CHECK(jc_domain(pinned, 0.0, 0.0, pinned.a * (2.0 * pinned.p0 - 1.0)));
    CHECK_FALSE(jc_domain(pinned, 0.05, 0.0, 0.0));
    CHECK_FALSE(jc_domain(pinned, 0.0, 0.0, 0.1));
}

TEST_CASE("jc_rates_closed_form: correlation independence and pipeline match") {
    JCParams params;  // a = 0.6
    JCParams free_params = params;
    free_params.a = 0.0;
    for (double t : {1.3, 6.1, 19.0}) {
        const JCRates corr = jc_rates_closed_form(params, t);
        const JCRates free = jc_rates_closed_form(free_params, t);
        CHECK(max_abs(corr.k_s - free.k_s) < 1e-12);  // K_S independent of chi
        CHECK(corr.lambda_z == Catch::Approx(free.lambda_z).margin(1e-12));
    }

    const BuiltModel jc = jc_model(params);
    Rng rng = make_rng(31);
    std::uniform_real_distribution<double> unif(0.5, 40.0);
    int checked = 0;
    for (int k = 0; k < 400 && checked < 50; ++k) {
        const double t = unif(rng);
        const JCCoefficients co = jc_coefficients(params, t);
        // keep clear of the zeros of the rate denominators
        if (std::abs(co.alpha + co.beta - 1.0) < 0.05 || std::abs(co.gamma) < 0.05) continue;
        JCRates rates;
        CorrelatedCanonical can;
        try {
            rates = jc_rates_closed_form(params, t);
            can = correlated_canonical(jc.model, t, 1e7);
        } catch (const SingularMap&) {
            continue;
        }
        ++checked;
        // the trace part of K_S is gauge; compare traceless parts
        auto traceless = [](const Operator& k) {
            return Operator(k - (k.trace() / 2.0) * Operator::Identity(2, 2));
        };
        CHECK(max_abs(traceless(can.merged.hamiltonian) - traceless(rates.k_s)) < 1e-7);
        CHECK(gks_rate(can.merged, sigma_plus()) == Catch::Approx(rates.lambda_plus).margin(1e-7));
        CHECK(gks_rate(can.merged, sigma_minus()) ==
              Catch::Approx(rates.lambda_minus).margin(1e-7));
        // the sigma_z channel carries rate 2 lambda_z once normalized
        CHECK(gks_rate(can.merged, pauli_z()) == Catch::Approx(2.0 * rates.lambda_z).margin(1e-7));
    }
    CHECK(checked == 50);
}

TEST_CASE("jc cutoff insensitivity") {
    JCParams params;
    auto rng = make_rng(35);
    const Operator rho0 = [&] {
        params.fock_cutoff = 2;
        return sample_physical_domain(jc_model(params).model.ctx(), rng);
    }();
    std::vector<Operator> results;
    for (int cutoff : {2, 3, 4}) {
        JCParams p = params;
        p.fock_cutoff = cutoff;
        const BuiltModel built = jc_model(p);
        results.push_back(reduced_exact(built.model, rho0, 37.0));
    }
    CHECK(max_abs(results[0] - results[1]) < 1e-12);
    CHECK(max_abs(results[1] - results[2]) < 1e-12);
}

TEST_CASE("swap domain: axially symmetric in the phase of rho_01") {
    const BuiltModel built = swap_model({0.875});
    auto rng = make_rng(39);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    int tested = 0;
    for (int k = 0; k < 500; ++k) {
        const Operator rho = random_bloch_state(rng);
        const double r01 = std::abs(rho(0, 1));
        const double z = rho(0, 0).real() - rho(1, 1).real();
        const auto base = in_physical_domain(built.model.ctx(), rho, 1e-9);
        const double phi = angle(rng);
        const Operator rotated = bloch_state(2.0 * r01 * std::cos(phi),
                                             2.0 * r01 * std::sin(phi), z);
        const auto rot = in_physical_domain(built.model.ctx(), rotated, 1e-9);
        if (std::abs(base.min_eigenvalue) < 1e-9) continue;
        CHECK(base.accepted == rot.accepted);
        CHECK(base.min_eigenvalue == Catch::Approx(rot.min_eigenvalue).margin(1e-9));
        ++tested;
    }
    CHECK(tested > 400);
}

TEST_CASE("closed-form vs pipeline parameter sweeps") {
    auto rng = make_rng(43);
    for (double p : {0.1, 0.5, 0.9}) {
        const BuiltModel built = swap_model({p});
        for (double t : {0.5, 2.0}) {
            const MapSnapshot snap = linear_map(built.model, t);
            const Operator rho0 = random_bloch_state(rng);
            CHECK(max_abs(snap.psi.apply(rho0) -
                          swap_correlated_map_closed_form(p, t, rho0)) < 1e-10);
        }
    }
    for (double a : {0.0, 0.3, 0.9, 1.0}) {
        for (double dratio : {0.0, 0.1, 0.5}) {
            JCParams params;
            params.a = a;
            params.p0 = 0.6;
            params.delta = dratio;
            const BuiltModel built = jc_model(params);
            for (double t : {2.0, 13.0}) {
                const MapSnapshot snap = linear_map(built.model, t);
                const Operator rho0 = built.reference_state;
                CHECK(max_abs(snap.psi.apply(rho0) -
                              jc_map_closed_form(params, t, rho0)) < 1e-9);
            }
        }
    }
}
