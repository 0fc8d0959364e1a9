#pragma once

// Scenario JSON loading and the model construction behind the CLI. Complex
// scalars are two-element arrays [re, im] (plain numbers are accepted as
// reals); matrices are nested row-major arrays.

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "corrdyn/models.hpp"

namespace corrdyn {

using nlohmann::json;

inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
    throw InvalidParams("expected a number or [re, im] pair");
}

inline Operator matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidParams("expected a matrix as nested arrays");
    const auto rows = Eigen::Index(j.size());
    const auto cols = Eigen::Index(j[0].size());
    Operator m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (Eigen::Index(j[size_t(i)].size()) != cols)
            throw InvalidParams("ragged matrix rows in scenario");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(j[size_t(i)][size_t(k)]);
    }
    return m;
}

inline json matrix_to_json(const Operator& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(row);
    }
    return rows;
}

struct TimeGrid {
    double t_max = 10.0;
    int steps = 200;
};

struct Scenario {
    std::string model_tag;  // "swap" | "jaynes_cummings" | "custom"
    std::optional<SwapParams> swap;
    std::optional<JCParams> jc;

    // custom model pieces
    int d_s = 0, d_e = 0;
    std::optional<Operator> h_total;
    std::optional<Operator> rho_e;
    std::optional<Operator> chi;
    std::optional<Operator> rho_se;

    std::optional<Operator> initial_state;
    TimeGrid grid;
    Tolerances tol;
    double cond_threshold = 1e8;
    std::uint64_t seed = 1;
    std::string raw;  // original JSON text, hashed into output metadata

    static Scenario from_json(const json& j) {
        Scenario s;
        s.raw = j.dump();
        s.model_tag = j.at("model").get<std::string>();
        if (s.model_tag == "swap") {
            s.swap = SwapParams{j.at("swap").at("p").get<double>()};
        } else if (s.model_tag == "jaynes_cummings") {
            const json& p = j.at("jaynes_cummings");
            JCParams jc;
            jc.a = p.value("a", jc.a);
            jc.p0 = p.value("p0", jc.p0);
            jc.omega0 = p.value("omega0", jc.omega0);
            jc.delta = p.value("delta", jc.delta);
            jc.g = p.value("g", jc.g);
            jc.fock_cutoff = p.value("fock_cutoff", jc.fock_cutoff);
            jc.validate();
            s.jc = jc;
        } else if (s.model_tag == "custom") {
            const json& c = j.at("custom");
            s.d_s = c.at("d_s").get<int>();
            s.d_e = c.at("d_e").get<int>();
            if (c.contains("h_total")) {
                s.h_total = matrix_from_json(c.at("h_total"));
            } else {
                const Operator hs = matrix_from_json(c.at("h_s"));
                const Operator he = matrix_from_json(c.at("h_e"));
                Operator h = tensor(hs, Operator::Identity(s.d_e, s.d_e)) +
                             tensor(Operator::Identity(s.d_s, s.d_s), he);
                if (c.contains("h_i")) h += matrix_from_json(c.at("h_i"));
                s.h_total = h;
            }
            const bool has_chi = c.contains("chi");
            const bool has_rho_se = c.contains("rho_se");
            if (has_chi == has_rho_se)
                throw InvalidParams("custom scenario: give exactly one of chi or rho_se");
            if (has_chi) {
                s.rho_e = matrix_from_json(c.at("rho_e"));
                s.chi = matrix_from_json(c.at("chi"));
            } else {
                s.rho_se = matrix_from_json(c.at("rho_se"));
            }
        } else {
            throw InvalidParams("unknown model tag: " + s.model_tag);
        }
        if (j.contains("initial_state")) s.initial_state = matrix_from_json(j.at("initial_state"));
        if (j.contains("time_grid")) {
            s.grid.t_max = j.at("time_grid").value("t_max", s.grid.t_max);
            s.grid.steps = j.at("time_grid").value("steps", s.grid.steps);
        }
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            s.tol.herm = t.value("herm", s.tol.herm);
            s.tol.psd = t.value("psd", s.tol.psd);
            s.tol.trace = t.value("trace", s.tol.trace);
        }
        s.cond_threshold = j.value("cond_threshold", s.cond_threshold);
        s.seed = j.value("seed", s.seed);
        return s;
    }

    static Scenario load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidParams("cannot open scenario file: " + path);
        json j;
        in >> j;
        return from_json(j);
    }

    BuiltModel build() const {
        if (model_tag == "swap") return swap_model(*swap);
        if (model_tag == "jaynes_cummings") return jc_model(*jc);
        if (rho_se) {
            auto [rho_s, ctx] = decompose_total(*rho_se, d_s, d_e, tol);
            return {TotalModel(std::move(ctx), *h_total, tol), std::move(rho_s)};
        }
        AssignmentContext ctx{d_s, d_e, *rho_e, *chi};
        ctx.validate(tol);
        // Reference state: maximally mixed; custom scenarios normally supply
        // an explicit initial_state.
        Operator ref = Operator::Identity(d_s, d_s) / double(d_s);
        return {TotalModel(std::move(ctx), *h_total, tol), std::move(ref)};
    }

    Operator initial_or_reference(const BuiltModel& built) const {
        return initial_state ? *initial_state : built.reference_state;
    }

    std::string hash() const {
        std::ostringstream out;
        out << std::hex << std::hash<std::string>{}(raw);
        return out.str();
    }
};

}  // namespace corrdyn
