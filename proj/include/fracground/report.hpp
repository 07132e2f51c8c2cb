// JSON form of verification reports:
//   { "checks": [ { "name", "inputs_digest", "quantities": {...}, "residual", "tolerance", "pass" } ],
//     "model": {...}, "versions": {...} }
#pragma once

#include <fftw3.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "model.hpp"
#include "solver.hpp"
#include "verify.hpp"

#ifndef FRACGROUND_VERSION
#define FRACGROUND_VERSION "0.1.0"
#endif

namespace fracground {

using json = nlohmann::json;

inline void to_json(json& j, const CheckRecord& c) {
    j = json{{"name", c.name},
             {"inputs_digest", c.inputs_digest},
             {"quantities", c.quantities},
             {"residual", c.residual},
             {"tolerance", c.tolerance},
             {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
}

inline void from_json(const json& j, CheckRecord& c) {
    j.at("name").get_to(c.name);
    j.at("inputs_digest").get_to(c.inputs_digest);
    j.at("quantities").get_to(c.quantities);
    j.at("residual").get_to(c.residual);
    j.at("tolerance").get_to(c.tolerance);
    j.at("pass").get_to(c.pass);
    c.note = j.value("note", std::string{});
}

struct VerificationReport {
    std::vector<CheckRecord> checks;
    json model = json::object();
    json versions = json::object();
    json results = json::object();  ///< command-specific payload (levels, sweeps, ...)

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(CheckRecord c) { checks.push_back(std::move(c)); }
};

inline void to_json(json& j, const VerificationReport& r) {
    j = json{{"checks", r.checks}, {"model", r.model}, {"versions", r.versions}};
    if (!r.results.empty()) j["results"] = r.results;
}

inline void from_json(const json& j, VerificationReport& r) {
    j.at("checks").get_to(r.checks);
    r.model = j.value("model", json::object());
    r.versions = j.value("versions", json::object());
    r.results = j.value("results", json::object());
}

inline json default_versions() { return json{{"fracground", FRACGROUND_VERSION}, {"fftw", std::string(fftw_version)}}; }

inline json potential_to_json(const Potential& V) {
    json j{{"kind", to_string(V.kind())}, {"params", V.params()}, {"offset", V.offset()}};
    if (V.kind() == PotentialKind::rescaled) {
        j["epsilon"] = V.epsilon();
        j["inner"] = potential_to_json(*V.inner());
    }
    return j;
}

inline json model_to_json(const ModelProblem& m) {
    const Grid& g = m.grid();
    return json{{"dim", g.dim()},
                {"L", g.extent()},
                {"M", g.points()},
                {"s", m.s().value()},
                {"potential", potential_to_json(m.potential())},
                {"p", m.nonlinearity().p},
                {"weight", potential_to_json(m.nonlinearity().weight)},
                {"positive_mode", m.positive_mode()},
                {"dealias", m.dealias()}};
}

inline json ground_state_summary(const GroundState& gs) {
    json j{{"level", gs.level},
           {"kinetic", gs.energy.kinetic},
           {"potential", gs.energy.potential},
           {"nonlinear", gs.energy.nonlinear},
           {"grad_norm", gs.grad_norm},
           {"nehari_residual", gs.nehari_res},
           {"e_norm_sq", gs.e_norm_sq},
           {"iterations", gs.iters},
           {"converged", gs.converged},
           {"monotonicity_violations", gs.monotonicity_violations},
           {"min", gs.min_value},
           {"max", gs.max_value},
           {"message", gs.message}};
    if (gs.positivity_checked) j["positivity_ok"] = gs.positivity_ok;
    return j;
}

}  // namespace fracground
