// Command-line front end: scenario files in, trajectory/rate/domain/CP tables
// out as CSV. Exit codes: 0 success, 2 input or schema error, 3 numerical
// failure (singularity), 4 invariant violation.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "corrdyn/corrdyn.hpp"
#include "corrdyn/csv.hpp"
#include "corrdyn/scenario.hpp"

namespace fs = std::filesystem;
using namespace corrdyn;

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitSingular = 3;
constexpr int kExitInvariant = 4;

struct CommonOptions {
    std::string scenario_path;
    std::string out_dir = ".";
    double t_max = -1.0;  // negative: take from scenario
    int steps = -1;
    double tol_psd = -1.0;
    double cond_threshold = -1.0;
    bool skip_singular = false;
    bool allow_unphysical = false;
    std::uint64_t seed = 0;

    Scenario load() const {
        Scenario s = Scenario::load(scenario_path);
        if (t_max > 0) s.grid.t_max = t_max;
        if (steps > 0) s.grid.steps = steps;
        if (tol_psd > 0) s.tol.psd = tol_psd;
        if (cond_threshold > 0) s.cond_threshold = cond_threshold;
        if (seed) s.seed = seed;
        return s;
    }
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_scenario = true) {
    auto* sc = cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file");
    if (needs_scenario) sc->required();
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--t-max", opt.t_max, "override time-grid length");
    cmd->add_option("--steps", opt.steps, "override time-grid step count");
    cmd->add_option("--tol-psd", opt.tol_psd, "override positivity tolerance");
    cmd->add_option("--cond-threshold", opt.cond_threshold, "map inversion condition limit");
    cmd->add_flag("--skip-singular", opt.skip_singular, "skip singular grid times");
    cmd->add_flag("--allow-unphysical", opt.allow_unphysical,
                  "evaluate initial states outside the physical domain");
    cmd->add_option("--seed", opt.seed, "random seed override");
}

void write_metadata(CsvWriter& csv, const Scenario& scenario, const std::string& command) {
    csv.metadata("command", command);
    csv.metadata("scenario_hash", scenario.hash());
    csv.metadata("model", scenario.model_tag);
    csv.metadata("tol_herm", scenario.tol.herm);
    csv.metadata("tol_psd", scenario.tol.psd);
    csv.metadata("tol_trace", scenario.tol.trace);
    csv.metadata("cond_threshold", scenario.cond_threshold);
    csv.metadata("seed", double(scenario.seed));
}

std::vector<std::string> state_columns(int d) {
    std::vector<std::string> cols;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cols.push_back("rho_" + std::to_string(i) + std::to_string(j) + "_re");
            cols.push_back("rho_" + std::to_string(i) + std::to_string(j) + "_im");
        }
    return cols;
}

void append_state(std::vector<double>& row, const Operator& rho) {
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            row.push_back(rho(i, j).real());
            row.push_back(rho(i, j).imag());
        }
}

double max_state_deviation(const std::vector<Operator>& a, const std::vector<Operator>& b) {
    double dev = 0.0;
    const size_t n = std::min(a.size(), b.size());
    for (size_t k = 0; k < n; ++k) dev = std::max(dev, (a[k] - b[k]).norm());
    return dev;
}

// ---------------------------------------------------------------------------

int cmd_evolve(const CommonOptions& opt) {
    const Scenario scenario = opt.load();
    const BuiltModel built = scenario.build();
    const Operator rho0 = scenario.initial_or_reference(built);

    const auto domain = in_physical_domain(built.model.ctx(), rho0, scenario.tol.psd,
                                           scenario.tol);
    if (!domain.accepted) {
        if (!opt.allow_unphysical) {
            std::cerr << "evolve: initial state outside the physical domain (min eigenvalue "
                      << domain.min_eigenvalue << "); pass --allow-unphysical to proceed\n";
            return kExitSchema;
        }
        std::cerr << "evolve: warning: initial state outside the physical domain "
                     "(min eigenvalue " << domain.min_eigenvalue << ")\n";
    }

    fs::create_directories(opt.out_dir);
    const int steps = scenario.grid.steps;
    const double t_max = scenario.grid.t_max;
    const int d = built.model.dim_s();

    std::vector<double> times(size_t(steps) + 1);
    for (int k = 0; k <= steps; ++k) times[size_t(k)] = t_max * k / steps;

    std::vector<Operator> exact, linear;
    std::vector<double> min_choi(times.size()), cond(times.size());
    exact.reserve(times.size());
    linear.reserve(times.size());
    for (double t : times) {
        exact.push_back(reduced_exact(built.model, rho0, t));
        const MapSnapshot snap = linear_map(built.model, t);
        linear.push_back(snap.psi.apply(rho0));
        min_choi[linear.size() - 1] = cp_check(snap.psi).min_choi_eigenvalue;
        cond[linear.size() - 1] = condition_number(snap.phi.m);
    }

    std::vector<double> singular_times;
    Trajectory master;
    bool master_truncated = false;
    try {
        master = integrate_master_equation(built.model, rho0, t_max, steps,
                                           scenario.cond_threshold);
    } catch (const SingularMap& e) {
        if (!opt.skip_singular) {
            std::cerr << "evolve: " << e.what() << " (pass --skip-singular to truncate)\n";
            return kExitSingular;
        }
        singular_times.push_back(e.time);
        master_truncated = true;
        // keep whatever prefix integrates cleanly
        const int safe_steps = std::max(1, int(std::floor(e.time / (t_max / steps))) - 1);
        const double safe_t = t_max * safe_steps / steps;
        master = integrate_master_equation(built.model, rho0, safe_t, safe_steps,
                                           scenario.cond_threshold);
    }

    auto emit = [&](const std::string& name, const std::vector<double>& ts,
                    const std::vector<Operator>& states, bool with_diags) {
        CsvWriter csv((fs::path(opt.out_dir) / name).string());
        write_metadata(csv, scenario, "evolve");
        if (!singular_times.empty()) {
            std::string list;
            for (double t : singular_times) list += (list.empty() ? "" : ";") + format_double(t);
            csv.metadata("skipped_singular_times", list);
        }
        std::vector<std::string> cols{"t"};
        for (const auto& c : state_columns(d)) cols.push_back(c);
        cols.push_back("trace_re");
        if (with_diags) {
            cols.push_back("min_choi_eigenvalue");
            cols.push_back("condition_number");
        }
        if (scenario.jc) cols.push_back("f");
        csv.header(cols);
        for (size_t k = 0; k < states.size(); ++k) {
            std::vector<double> row{ts[k]};
            append_state(row, states[k]);
            row.push_back(states[k].trace().real());
            if (with_diags) {
                row.push_back(min_choi[k]);
                row.push_back(cond[k]);
            }
            if (scenario.jc) row.push_back(jc_coefficients(*scenario.jc, ts[k]).f);
            csv.row(row);
        }
    };

    emit("exact.csv", times, exact, false);
    emit("linear_map.csv", times, linear, true);
    emit("master_equation.csv", master.times, master.states, false);

    {
        std::ofstream summary(fs::path(opt.out_dir) / "summary.txt");
        summary << "max|exact-linear| = " << format_double(max_state_deviation(exact, linear))
                << "\n";
        summary << "max|exact-master| = "
                << format_double(max_state_deviation(exact, master.states)) << "\n";
        summary << "max|linear-master| = "
                << format_double(max_state_deviation(linear, master.states)) << "\n";
        if (master_truncated)
            summary << "master_equation truncated before singular time "
                    << format_double(singular_times.front()) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

void domain_cross_section(CsvWriter& csv, const AssignmentContext& ctx, int grid) {
    // axial symmetry: scan the (z, |rho_01|) cross-section of the Bloch ball
    csv.header({"z", "abs_rho01", "is_state", "accepted", "min_eigenvalue"});
    for (int iz = 0; iz < grid; ++iz) {
        const double z = -1.0 + 2.0 * iz / (grid - 1);
        for (int ir = 0; ir < (grid + 1) / 2; ++ir) {
            const double r01 = 0.5 * ir / ((grid + 1) / 2 - 1);
            const double x = 2.0 * r01;
            const bool is_state = x * x + z * z <= 1.0 + 1e-12;
            const Operator rho = bloch_state(x, 0.0, z);
            const double margin = min_eigenvalue(assign(ctx, rho));
            const bool accepted = is_state && margin >= -1e-9;
            csv.row({z, r01, double(is_state), double(accepted), margin});
        }
    }
}

int cmd_domain(const CommonOptions& opt, int grid, const std::string& states_path) {
    const Scenario scenario = opt.load();
    const BuiltModel built = scenario.build();
    fs::create_directories(opt.out_dir);
    CsvWriter csv((fs::path(opt.out_dir) / "domain.csv").string());
    write_metadata(csv, scenario, "domain");
    csv.metadata("grid", double(grid));

    if (!states_path.empty()) {
        std::ifstream in(states_path);
        if (!in) throw InvalidParams("cannot open states file: " + states_path);
        json j;
        in >> j;
        csv.header({"index", "accepted", "min_eigenvalue"});
        int index = 0;
        for (const auto& entry : j) {
            const Operator rho = matrix_from_json(entry);
            const auto res = in_physical_domain(built.model.ctx(), rho, scenario.tol.psd,
                                                scenario.tol);
            csv.row({double(index++), double(res.accepted), res.min_eigenvalue});
        }
        return 0;
    }
    if (built.model.dim_s() != 2)
        throw InvalidParams("domain grid mode needs d_S = 2; supply --states for other sizes");
    domain_cross_section(csv, built.model.ctx(), grid);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_generator(const CommonOptions& opt) {
    const Scenario scenario = opt.load();
    const BuiltModel built = scenario.build();
    fs::create_directories(opt.out_dir);

    const int d = built.model.dim_s();
    const int max_channels = d * d - 1;
    std::vector<double> singular_times;

    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= scenario.grid.steps; ++k) {
        const double t = scenario.grid.t_max * k / scenario.grid.steps;
        CorrelatedCanonical can;
        try {
            can = correlated_canonical(built.model, t, scenario.cond_threshold);
        } catch (const SingularMap&) {
            singular_times.push_back(t);
            continue;
        }
        std::vector<double> row{t};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                row.push_back(can.merged.hamiltonian(i, j).real());
                row.push_back(can.merged.hamiltonian(i, j).imag());
            }
        for (int c = 0; c < max_channels; ++c) {
            if (c < int(can.merged.channels.size())) {
                const auto& ch = can.merged.channels[size_t(c)];
                row.push_back(ch.rate);
                const CVector v = vectorize(ch.lindblad);
                for (Eigen::Index e = 0; e < v.size(); ++e) {
                    row.push_back(v(e).real());
                    row.push_back(v(e).imag());
                }
            } else {
                row.push_back(0.0);
                for (int e = 0; e < 2 * d * d; ++e) row.push_back(0.0);
            }
        }
        row.push_back(can.correlation.hamiltonian.norm());
        const GeneratorSnapshot gen = generator(built.model, t, scenario.cond_threshold);
        row.push_back((can.merged.to_superop().m - gen.l_chi.m).cwiseAbs().maxCoeff());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        std::cerr << "generator: all requested times singular\n";
        return kExitSingular;
    }

    CsvWriter csv((fs::path(opt.out_dir) / "generator.csv").string());
    write_metadata(csv, scenario, "generator");
    if (!singular_times.empty()) {
        std::string list;
        for (double t : singular_times) list += (list.empty() ? "" : ";") + format_double(t);
        csv.metadata("skipped_singular_times", list);
    }
    std::vector<std::string> cols{"t"};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cols.push_back("K_S_" + std::to_string(i) + std::to_string(j) + "_re");
            cols.push_back("K_S_" + std::to_string(i) + std::to_string(j) + "_im");
        }
    for (int c = 0; c < max_channels; ++c) {
        cols.push_back("rate_" + std::to_string(c));
        for (int e = 0; e < d * d; ++e) {
            cols.push_back("L_" + std::to_string(c) + "_" + std::to_string(e) + "_re");
            cols.push_back("L_" + std::to_string(c) + "_" + std::to_string(e) + "_im");
        }
    }
    cols.push_back("k_S_chi_norm");
    cols.push_back("reconstruction_residual");
    csv.header(cols);
    for (const auto& row : rows) csv.row(row);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_cpcheck(const CommonOptions& opt) {
    const Scenario scenario = opt.load();
    const BuiltModel built = scenario.build();
    fs::create_directories(opt.out_dir);

    CsvWriter csv((fs::path(opt.out_dir) / "cpcheck.csv").string());
    write_metadata(csv, scenario, "cpcheck");
    double first_violation = -1.0;
    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= scenario.grid.steps; ++k) {
        const double t = scenario.grid.t_max * k / scenario.grid.steps;
        const auto diag = cp_check(linear_map(built.model, t).psi);
        if (first_violation < 0 && diag.min_choi_eigenvalue < -scenario.tol.psd)
            first_violation = t;
        rows.push_back({t, diag.min_choi_eigenvalue, diag.min_epsilon_eigenvalue});
    }
    if (first_violation >= 0) csv.metadata("first_cp_violation", first_violation);
    else csv.metadata("first_cp_violation", "none");
    csv.header({"t", "min_choi_eigenvalue", "min_epsilon_eigenvalue"});
    for (const auto& row : rows) csv.row(row);
    std::cout << "cpcheck: first CP violation "
              << (first_violation >= 0 ? format_double(first_violation) : std::string("none"))
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

std::string short_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

void figure_domain(const std::string& path, const AssignmentContext& ctx, const json& meta) {
    CsvWriter csv(path);
    for (auto it = meta.begin(); it != meta.end(); ++it)
        csv.metadata(it.key(), it.value().dump());
    domain_cross_section(csv, ctx, 101);
}

int cmd_figures(const std::string& out_dir, const std::vector<std::string>& sets) {
    fs::create_directories(out_dir);
    auto wants = [&](const std::string& tag) {
        return sets.empty() ||
               std::find(sets.begin(), sets.end(), tag) != sets.end() ||
               std::find(sets.begin(), sets.end(), "all") != sets.end();
    };
    for (const auto& tag : sets)
        if (tag != "all" && tag != "fig1" && tag != "fig2" && tag != "fig3") {
            std::cerr << "figures: unknown tag " << tag << "\n";
            return kExitSchema;
        }

    if (wants("fig1")) {
        const fs::path dir = fs::path(out_dir) / "fig1";
        fs::create_directories(dir);
        for (double p : {0.5, 0.875}) {
            const BuiltModel built = swap_model({p});
            figure_domain((dir / ("swap_domain_p_" + short_double(p) + ".csv")).string(),
                          built.model.ctx(), json{{"model", "swap"}, {"p", p}});
        }
    }
    if (wants("fig2")) {
        const fs::path dir = fs::path(out_dir) / "fig2";
        fs::create_directories(dir);
        {
            JCParams params;
            params.a = 0.7;
            params.p0 = 0.5;
            const BuiltModel built = jc_model(params);
            figure_domain((dir / "jc_domain_a_0.7_p0_0.5.csv").string(), built.model.ctx(),
                          json{{"model", "jaynes_cummings"}, {"a", 0.7}, {"p0", 0.5}});
        }
        for (double p0 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            JCParams params;
            params.a = 0.9;
            params.p0 = p0;
            const BuiltModel built = jc_model(params);
            figure_domain(
                (dir / ("jc_domain_a_0.9_p0_" + short_double(p0) + ".csv")).string(),
                built.model.ctx(),
                json{{"model", "jaynes_cummings"}, {"a", 0.9}, {"p0", p0}});
        }
    }
    if (wants("fig3")) {
        const fs::path dir = fs::path(out_dir) / "fig3";
        fs::create_directories(dir);
        JCParams params;  // a = 0.6, p0 = 0.4, delta = 0.1, g = 0.1
        params.fock_cutoff = 2;
        const BuiltModel corr = jc_model(params);
        JCParams unc_params = params;
        unc_params.a = 0.0;
        const BuiltModel unc = jc_model(unc_params);
        const Operator rho0 = corr.reference_state;

        CsvWriter csv((dir / "ground_state_population.csv").string());
        csv.metadata("model", "jaynes_cummings");
        csv.metadata("a", params.a);
        csv.metadata("p0", params.p0);
        csv.metadata("delta", params.delta);
        csv.metadata("g", params.g);
        csv.header({"t", "rho_gg_unc", "rho_gg_corr", "f"});
        const int steps = 800;
        for (int k = 0; k <= steps; ++k) {
            const double t = 200.0 * k / steps;
            const double gg_corr =
                linear_map(corr.model, t).psi.apply(rho0)(1, 1).real();
            const double gg_unc = linear_map(unc.model, t).psi.apply(rho0)(1, 1).real();
            csv.row({t, gg_unc, gg_corr, jc_coefficients(params, t).f});
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reduced dynamics of open quantum systems with fixed initial correlations"};
    app.require_subcommand(1);

    CommonOptions opt;
    int grid = 61;
    std::string states_path;
    std::vector<std::string> figure_sets;
    std::string figures_out = "figures";

    auto* evolve = app.add_subcommand("evolve", "exact, linear-map and master-equation trajectories");
    add_common(evolve, opt);
    auto* domain = app.add_subcommand("domain", "physical-domain acceptance map");
    add_common(domain, opt);
    domain->add_option("--grid", grid, "cross-section grid resolution");
    domain->add_option("--states", states_path, "JSON list of states (list mode)");
    auto* generator_cmd = app.add_subcommand("generator", "canonical rates and effective Hamiltonian");
    add_common(generator_cmd, opt);
    auto* cpcheck = app.add_subcommand("cpcheck", "complete-positivity sweep");
    add_common(cpcheck, opt);
    auto* figures = app.add_subcommand("figures", "built-in reproduction data bundles");
    figures->add_option("--out", figures_out, "output directory");
    figures->add_option("--set", figure_sets, "fig1 | fig2 | fig3 | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitSchema;
    }

    try {
        if (evolve->parsed()) return cmd_evolve(opt);
        if (domain->parsed()) return cmd_domain(opt, grid, states_path);
        if (generator_cmd->parsed()) return cmd_generator(opt);
        if (cpcheck->parsed()) return cmd_cpcheck(opt);
        if (figures->parsed()) return cmd_figures(figures_out, figure_sets);
    } catch (const SingularMap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const SingularTime& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const ReconstructionFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return 0;
}
