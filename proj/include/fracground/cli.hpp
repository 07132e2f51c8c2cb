// Command orchestration for the fracground tool. Each command runs a module pipeline, collects
// check records into a report, and writes report.json, resolved.config, fields/*.csv, diag/*.csv.
// Exit codes: 0 all checks pass, 2 some check failed, 1 configuration or runtime error.
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "energy.hpp"
#include "evolve.hpp"
#include "level.hpp"
#include "model.hpp"
#include "nehari.hpp"
#include "report.hpp"
#include "solver.hpp"
#include "verify.hpp"

namespace fracground::cli {

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"solve", "solve-positive", "sweep-potential", "sweep-eps", "verify", "evolve", "benchmark"};
    return c;
}

struct Options {
    std::string out_dir;
    unsigned jobs = 1;
    std::ostream* out = &std::cout;
    std::ostream* err = &std::cerr;
};

/// Files produced by a command; written by one collector after the numerical work is done.
struct Outputs {
    VerificationReport report;
    std::vector<std::pair<std::string, std::string>> files;  ///< relative path, contents

    void add_field(const std::string& name, const Field& u) {
        std::ostringstream os;
        write_field_csv(os, u);
        files.emplace_back("fields/" + name + ".csv", os.str());
    }
    void add_diag(const std::string& name, std::string csv) { files.emplace_back("diag/" + name + ".csv", std::move(csv)); }
};

namespace detail {

inline double benchmark_profile(double x) { return 2.0 / (1.0 + x * x); }

inline std::string convergence_csv(const GroundState& gs) {
    std::ostringstream os;
    os << std::setprecision(17) << "iteration,J\n";
    for (std::size_t i = 0; i < gs.history.size(); ++i) os << i + 1 << ',' << gs.history[i] << '\n';
    return os.str();
}

// Composite checks: every sub-residual divided by its own tolerance, pass iff the max is <= 1.
inline CheckRecord normalized_check(const std::string& name, const std::string& dig, std::map<std::string, double> q,
                                    const std::vector<std::pair<double, double>>& residual_tol) {
    double worst = 0.0;
    for (const auto& [r, t] : residual_tol) worst = std::max(worst, std::isfinite(r) ? std::abs(r) / t : HUGE_VAL);
    return make_check(name, dig, std::move(q), worst, 1.0, "residual is the worst sub-residual over its tolerance");
}

inline void add_ground_state_checks(Outputs& o, const ModelProblem& m, const GroundState& gs, const SolverConfig& cfg,
                                    const std::string& prefix) {
    const std::string dig = digest(gs.u);
    o.report.add(make_check(prefix + "converged", dig, {{"grad_norm", gs.grad_norm}, {"iterations", gs.iters}}, gs.grad_norm,
                            cfg.tol_grad, gs.message));
    o.report.add(make_check(prefix + "nehari", dig, {{"G", gs.nehari_res}, {"e_norm_sq", gs.e_norm_sq}},
                            std::abs(gs.nehari_res) / gs.e_norm_sq, cfg.tol_nehari));
    o.report.add(make_check(prefix + "level_positive", dig, {{"level", gs.level}}, gs.level > 0.0 ? 0.0 : 1.0, 0.0));
    o.report.add(make_check(prefix + "descent_monotone", dig,
                            {{"violations", gs.monotonicity_violations}, {"roundoff_steps", gs.roundoff_steps}},
                            gs.monotonicity_violations, 0.0));
    (void)m;
}

inline CheckRecord level_consistency_check(const ModelProblem& m, const GroundState& gs, std::uint64_t seed) {
    const auto lc = level_consistency(m, gs, seed);
    const double tol = 1e-8 * std::max(1.0, std::abs(lc.level));
    return normalized_check("level_consistency", digest(gs.u),
                            {{"t_star", lc.t_star},
                             {"fiber_max", lc.fiber_max},
                             {"level", lc.level},
                             {"scan_max", lc.scan_max},
                             {"perturbed_fiber_max", lc.perturbed_fiber_max}},
                            {{lc.t_star - 1.0, 1e-6},
                             {lc.fiber_max - lc.level, tol},
                             {std::max(0.0, lc.scan_max - lc.level), tol},
                             {std::max(0.0, lc.level - lc.perturbed_fiber_max), tol}});
}

inline CheckRecord pohozaev_check(const ModelProblem& m, const Field& u, double tol) {
    const auto r = pohozaev_residual(m, u);
    return make_check("pohozaev", digest(u),
                      {{"K", r.K},
                       {"P", r.P},
                       {"int_F", r.intF},
                       {"kinetic_part", r.kinetic_part},
                       {"potential_part", r.potential_part},
                       {"nonlinear_part", r.nonlinear_part},
                       {"R", r.residual}},
                      std::abs(r.residual) / std::abs(r.nonlinear_part), tol,
                      "split form ((N-2s)/2) K + (N/2) P = N int F");
}

inline CheckRecord decay_check(const ModelProblem& m, const Field& u, const RunConfig& rc, double tol) {
    std::optional<DecayWindow> w;
    if (rc.verify_decay_window.size() == 2) w = DecayWindow{rc.verify_decay_window[0], rc.verify_decay_window[1]};
    const auto fit = decay_slope(u, w, rc.decay_model());
    const double expected = -(m.grid().dim() + 2.0 * m.s().value());
    return make_check("decay", digest(u),
                      {{"slope", fit.slope}, {"expected", expected}, {"window_lo", fit.window.lo}, {"window_hi", fit.window.hi}},
                      std::abs(fit.slope - expected), tol);
}

inline GroundState solve_with_starts(const ModelProblem& m, const RunConfig& rc, const Options& opt, Outputs& o) {
    const SolverConfig cfg = rc.solver_config();
    if (rc.level_starts <= 1) return solve_ground_state(m, cfg);
    const auto est = level_estimate(m, rc.level_starts, rc.seed, cfg, opt.jobs);
    o.report.results["level_estimate"] = json{{"level", est.level},
                                              {"best_start", est.best_start},
                                              {"nonconverged", est.nonconverged},
                                              {"levels", est.levels}};
    const int best = std::max(0, est.best_start);
    return solve_ground_state(m, cfg, seeded_bump(m.grid(), rc.seed, static_cast<std::uint64_t>(best)));
}

// ---------------------------------------------------------------------------

inline void cmd_solve(const ModelProblem& m, const RunConfig& rc, const Options& opt, Outputs& o) {
    const SolverConfig cfg = rc.solver_config();
    const GroundState gs = solve_with_starts(m, rc, opt, o);
    o.report.results["ground_state"] = ground_state_summary(gs);
    add_ground_state_checks(o, m, gs, cfg, "");
    if (gs.converged) o.report.add(level_consistency_check(m, gs, rc.seed));
    o.add_field("ground_state", gs.u);
    o.add_diag("convergence", convergence_csv(gs));
}

inline void cmd_solve_positive(const ModelProblem& model, const RunConfig& rc, const Options&, Outputs& o) {
    const ModelProblem m = model.with_positive_mode(true);
    const SolverConfig cfg = rc.solver_config();
    const GroundState gs = solve_positive(m, cfg);
    o.report.results["ground_state"] = ground_state_summary(gs);
    add_ground_state_checks(o, m, gs, cfg, "");
    o.report.add(make_check("positivity", digest(gs.u), {{"min", gs.min_value}, {"max", gs.max_value}},
                            std::max(0.0, -gs.min_value / gs.max_value), 1e-8));
    o.add_field("ground_state", gs.u);
    o.add_diag("convergence", convergence_csv(gs));
}

inline json sweep_to_json(const SweepResult& r) {
    json pts = json::array();
    for (const auto& p : r.points) {
        json j{{"parameter", p.parameter}};
        if (p.error.empty()) j["ground_state"] = ground_state_summary(p.state);
        else j["error"] = p.error;
        pts.push_back(j);
    }
    return json{{"parameters", r.parameters()}, {"levels", r.levels()}, {"points", pts}};
}

inline int count_unconverged(const SweepResult& r) {
    return static_cast<int>(std::count_if(r.points.begin(), r.points.end(), [](const auto& p) { return !p.error.empty() || !p.state.converged; }));
}

inline void cmd_sweep_potential(const ModelProblem& m, const RunConfig& rc, const Options& opt, Outputs& o) {
    const SolverConfig cfg = rc.solver_config();
    const SweepResult r = sweep_potential(m, rc.sweep_shifts, cfg, opt.jobs);
    o.report.results["sweep_potential"] = sweep_to_json(r);
    o.report.add(make_check("sweep.converged", "", {{"points", r.points.size()}}, count_unconverged(r), 0.0));

    std::vector<std::pair<double, double>> sorted;
    for (const auto& p : r.points)
        if (p.error.empty()) sorted.emplace_back(p.parameter, p.state.level);
    std::sort(sorted.begin(), sorted.end());
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < sorted.size(); ++i) worst_drop = std::max(worst_drop, sorted[i - 1].second - sorted[i].second);
    o.report.add(make_check("sweep.monotone", "", {{"worst_drop", worst_drop}}, worst_drop, 1e-6,
                            "c(V + delta) nondecreasing in delta"));

    // Continuity: |c(V + delta) - c(V)| shrinks as delta -> 0 (needs delta = 0 and two positive shifts).
    const auto base = std::find_if(sorted.begin(), sorted.end(), [](const auto& p) { return p.first == 0.0; });
    std::vector<std::pair<double, double>> positive;
    for (const auto& p : sorted)
        if (p.first > 0.0) positive.push_back(p);
    if (base != sorted.end() && positive.size() >= 2) {
        int violations = 0;
        for (std::size_t i = 1; i < positive.size(); ++i)
            if (std::abs(positive[i].second - base->second) <= std::abs(positive[i - 1].second - base->second)) ++violations;
        o.report.add(make_check("sweep.continuity", "", {{"positive_shifts", positive.size()}}, violations, 0.0,
                                "|c(V+delta) - c(V)| strictly increasing in delta"));
    }
    for (std::size_t i = 0; i < r.points.size(); ++i)
        if (r.points[i].error.empty()) o.add_field("sweep_" + std::to_string(i), r.points[i].state.u);
}

inline void cmd_sweep_eps(const ModelProblem& model, const RunConfig& rc, const Options& opt, Outputs& o) {
    // The sweep rescales the configured base potential itself.
    const Potential& configured = model.potential();
    const ModelProblem m = configured.kind() == PotentialKind::rescaled ? model.with_potential(*configured.inner()) : model;
    const SolverConfig cfg = rc.solver_config();
    const EpsilonSweep r = sweep_epsilon(m, rc.sweep_epsilons, cfg, opt.jobs);
    json j = sweep_to_json(r.sweep);
    j["c_inf"] = r.c_inf;
    j["margin"] = r.margin;
    j["at_infinity"] = ground_state_summary(r.at_infinity);
    o.report.results["sweep_eps"] = j;
    o.report.add(make_check("sweep_eps.converged", "", {{"points", r.sweep.points.size()}},
                            count_unconverged(r.sweep) + (r.at_infinity.converged ? 0 : 1), 0.0));
    o.report.add(make_check("sweep_eps.below_infinity", "", {{"c_inf", r.c_inf}, {"margin", r.margin}},
                            r.margin > 0.0 ? 0.0 : 1.0 + std::abs(r.margin), 0.0,
                            "level at the smallest epsilon lies strictly below c_inf"));
    double worst = 0.0;
    for (const auto& p : r.sweep.points) {
        if (!p.error.empty()) continue;
        worst = std::max(worst, singular_perturbation_residual(m.with_potential(Potential::rescaled(m.potential(), p.parameter)), p.state.u));
    }
    o.report.add(make_check("sweep_eps.rescaling", "", {{"max_residual", worst}}, worst, 1e-6,
                            "eps^{2s}(-Delta)^s v + V v = f(v) for v(x) = u(x/eps)"));
    for (std::size_t i = 0; i < r.sweep.points.size(); ++i)
        if (r.sweep.points[i].error.empty()) o.add_field("sweep_eps_" + std::to_string(i), r.sweep.points[i].state.u);
}

inline bool wants(const RunConfig& rc, const std::string& name) {
    return std::find(rc.verify_checks.begin(), rc.verify_checks.end(), name) != rc.verify_checks.end();
}

inline void cmd_verify(const ModelProblem& model, const RunConfig& rc, const Options& opt, Outputs& o) {
    static const std::vector<std::string> known{"pohozaev", "decay", "level", "gn", "commutator", "cutoff"};
    for (const auto& c : rc.verify_checks)
        if (std::find(known.begin(), known.end(), c) == known.end()) throw ConfigError("verify.checks: unknown check '" + c + "'");

    Field u;
    std::optional<GroundState> gs;
    ModelProblem m = model;
    if (!rc.verify_field.empty()) {
        u = read_field_csv(rc.verify_field);
        m = ModelProblem(u.grid, model.s(), model.potential(), model.nonlinearity(), model.positive_mode(), model.dealias());
        o.report.results["field"] = rc.verify_field;
    } else {
        gs = solve_with_starts(m, rc, opt, o);
        o.report.results["ground_state"] = ground_state_summary(*gs);
        add_ground_state_checks(o, m, *gs, rc.solver_config(), "");
        u = gs->u;
        o.add_field("ground_state", u);
    }
    const FracOrder s = m.s();

    if (wants(rc, "pohozaev")) {
        if (m.potential().is_constant()) o.report.add(pohozaev_check(m, u, 1e-3));
        else o.report.results["skipped"].push_back("pohozaev: potential is not constant");
    }
    if (wants(rc, "decay")) o.report.add(decay_check(m, u, rc, 0.1));
    if (wants(rc, "level")) {
        if (gs) {
            o.report.add(level_consistency_check(m, *gs, rc.seed));
        } else {
            GroundState supplied;
            supplied.u = u;
            supplied.level = energy(m, u).total;
            o.report.add(level_consistency_check(m, supplied, rc.seed));
        }
    }
    const auto count = static_cast<std::size_t>(rc.verify_samples);
    std::vector<Field> samples;
    if (wants(rc, "gn") || wants(rc, "commutator")) samples = random_field_set(m.grid(), 2 * count, rc.seed);
    if (wants(rc, "gn")) {
        const auto gn = gn_check(samples, s, rc.verify_q);
        const auto st = stability(gn.ratios, count);
        o.report.add(make_check("gn", "", {{"max_n", st.max_n}, {"max_2n", st.max_2n}, {"q", rc.verify_q}, {"samples", count}},
                                st.finite ? st.change : HUGE_VAL, 0.1, "relative change of the empirical constant on sample doubling"));
    }
    if (wants(rc, "commutator")) {
        const Field phi = cutoff_field(m.grid(), rc.verify_commutator_radius);
        const auto cc = commutator_check(phi, samples, s);
        const auto st = stability(cc.ratios, count);
        o.report.add(make_check("commutator", digest(phi), {{"max_n", st.max_n}, {"max_2n", st.max_2n}, {"samples", count}},
                                st.finite ? st.change : HUGE_VAL, 0.1, "relative change of the empirical constant on sample doubling"));
    }
    if (wants(rc, "cutoff")) {
        std::vector<double> radii = rc.verify_radii;
        std::sort(radii.begin(), radii.end());
        double rmax = 0.0;
        for (std::size_t i = 0; i < m.grid().size(); ++i) rmax = std::max(rmax, m.grid().radius(i));
        if (radii.empty() || radii.back() < rmax) radii.push_back(rmax);  // chi_R == 1 on the whole box
        const auto d = cutoff_convergence(u, s, radii);
        // Strictly decreasing while chi_R is not identically 1, then exactly zero.
        double bad = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (radii[i] >= rmax) bad += std::abs(d[i]);
            else if (i > 0 && !(d[i] < d[i - 1])) bad += 1.0;
        }
        std::map<std::string, double> q;
        for (std::size_t i = 0; i < d.size(); ++i) q["d(" + fracground::detail::fmt_double(radii[i]) + ")"] = d[i];
        o.report.add(make_check("cutoff", digest(u), q, bad, 0.0,
                                "d(R) strictly decreasing and exactly zero once chi_R == 1 on the box"));
    }
}

inline void cmd_evolve(const ModelProblem& m, const RunConfig& rc, const Options& opt, Outputs& o) {
    Outputs scratch;
    const GroundState gs = solve_with_starts(m, rc, opt, scratch);
    o.report.results["ground_state"] = ground_state_summary(gs);
    const WaveState psi0 = WaveState::from_field(scaled(gs.u, rc.evolve_amplitude));
    const double peak0 = max_abs(gs.u) * std::abs(rc.evolve_amplitude);

    EvolveOptions eo;
    eo.diag_every = rc.evolve_diag_every;
    const int every = rc.evolve_diag_every > 0 ? rc.evolve_diag_every : std::max(1, rc.evolve_steps);
    eo.snapshot_every = every;
    double modulus_drift = 0.0;
    int step = 0;
    eo.on_snapshot = [&](const WaveState& w) {
        step += every;
        double dev = 0.0;
        for (std::size_t i = 0; i < w.psi.size(); ++i) dev = std::max(dev, std::abs(std::abs(w.psi[i]) - std::abs(psi0.psi[i])));
        modulus_drift = std::max(modulus_drift, dev / peak0);
        if (rc.evolve_snapshot_every > 0 && step % rc.evolve_snapshot_every == 0) {
            std::ostringstream os;
            os << std::setprecision(17) << "x,re(psi),im(psi)\n";
            for (std::size_t i = 0; i < w.psi.size(); ++i) {
                os << w.grid.coordinate(i, 0);
                if (w.grid.dim() == 2) os << ',' << w.grid.coordinate(i, 1);
                os << ',' << w.psi[i].real() << ',' << w.psi[i].imag() << '\n';
            }
            o.files.emplace_back("fields/snapshot_" + std::to_string(step) + ".csv", os.str());
        }
    };
    const auto res = split_step(m, psi0, rc.evolve_dt, rc.evolve_steps, eo);
    const auto& d = res.diagnostics;

    std::ostringstream csv;
    csv << std::setprecision(17) << "t,mass,energy\n";
    double energy_drift = 0.0;
    for (std::size_t i = 0; i < d.times.size(); ++i) {
        csv << d.times[i] << ',' << d.masses[i] << ',' << d.energies[i] << '\n';
        energy_drift = std::max(energy_drift, std::abs(d.energies[i] - d.energies.front()) / std::abs(d.energies.front()));
    }
    o.add_diag("evolve", csv.str());
    o.report.results["evolve"] = json{{"final_time", res.state.time},
                                      {"aborted", d.aborted},
                                      {"message", d.message},
                                      {"max_step_mass_drift", d.max_step_mass_drift},
                                      {"energy_drift", energy_drift},
                                      {"modulus_drift", modulus_drift}};
    const std::string dig = digest(gs.u);
    o.report.add(make_check("evolve.completed", dig, {{"steps", rc.evolve_steps}}, d.aborted ? 1.0 : 0.0, 0.0, d.message));
    o.report.add(make_check("evolve.mass_drift", dig, {{"max_step_mass_drift", d.max_step_mass_drift}}, d.max_step_mass_drift, 1e-12));
    if (rc.evolve_amplitude == 1.0) {
        o.report.add(make_check("evolve.standing_wave", dig, {{"modulus_drift", modulus_drift}}, modulus_drift, 1e-5,
                                "max_t || |psi(t)| - u ||_inf / ||u||_inf"));
        o.report.add(make_check("evolve.energy_drift", dig, {{"energy_drift", energy_drift}}, energy_drift, 1e-6));
    }
}

inline void cmd_benchmark(const ModelProblem& m, const RunConfig& rc, const Options& opt, Outputs& o) {
    const SolverConfig cfg = rc.solver_config();
    const GroundState gs = solve_ground_state(m, cfg);
    o.report.results["ground_state"] = ground_state_summary(gs);
    add_ground_state_checks(o, m, gs, cfg, "");

    const Field centered = centered_on_peak(gs.u);
    double err = 0.0;
    for (std::size_t i = 0; i < centered.size(); ++i)
        err = std::max(err, std::abs(centered[i] - benchmark_profile(m.grid().coordinate(i, 0))));
    const std::string dig = digest(gs.u);
    o.report.add(make_check("benchmark.profile", dig, {{"sup_error", err}}, err / 2.0, 1e-3, "u*(x) = 2/(1+x^2), after centering"));
    o.report.add(make_check("benchmark.level", dig, {{"level", gs.level}, {"expected", std::numbers::pi / 2}},
                            std::abs(gs.level - std::numbers::pi / 2), 1e-3));

    auto poh = pohozaev_check(m, gs.u, 1e-3);
    o.report.add(poh);
    const auto pr = pohozaev_residual(m, gs.u);
    const double pi = std::numbers::pi;
    o.report.add(normalized_check("benchmark.pohozaev_parts", dig, {{"K", pr.K}, {"P", pr.P}, {"int_F", pr.intF}},
                                  {{(pr.K - pi) / pi, 1e-3}, {(pr.P - 2 * pi) / (2 * pi), 1e-3}, {(pr.intF - pi) / pi, 1e-3}}));
    o.report.add(decay_check(m, gs.u, rc, 0.1));
    o.report.add(level_consistency_check(m, gs, rc.seed));

    // Positivity from a predominantly negative start.
    const Field flipped = axpy(0.5, gaussian_bump(m.grid(), -10.0, 0.0, 2.0), scaled(gaussian_bump(m.grid(), 10.0, 0.0, 2.0), -1.0));
    const GroundState pos = solve_positive(m, cfg, flipped);
    o.report.results["positive"] = ground_state_summary(pos);
    o.report.add(make_check("benchmark.positivity", digest(pos.u), {{"min", pos.min_value}, {"max", pos.max_value}},
                            pos.converged ? std::max(0.0, -pos.min_value / pos.max_value) : HUGE_VAL, 1e-8));
    (void)opt;
    o.add_field("ground_state", gs.u);
    o.add_diag("convergence", convergence_csv(gs));
}

inline RunConfig benchmark_config(RunConfig rc) {
    rc.dim = 1;
    rc.s = 0.5;
    rc.potential_kind = "constant";
    rc.potential_params = {1.0};
    rc.p = 2.0;
    rc.weight = 1.0;
    rc.positive_mode = false;
    rc.epsilon = 1.0;
    return rc;
}

}  // namespace detail

/// Writes report.json, resolved.config and the collected files below `dir`.
inline void write_outputs(const std::filesystem::path& dir, const Outputs& o, const RunConfig& rc, const std::string& command) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "fields");
    fs::create_directories(dir / "diag");
    json j = o.report;
    j["command"] = command;
    std::ofstream(dir / "report.json") << j.dump(2) << '\n';
    std::ofstream(dir / "resolved.config") << write_resolved(rc);
    for (const auto& [rel, content] : o.files) std::ofstream(dir / rel) << content;
}

/// Runs `command` with a parsed configuration. Never throws.
inline int run(const std::string& command, RunConfig rc, const Options& opt) {
    std::ostream& err = *opt.err;
    std::ostream& out = *opt.out;
    try {
        if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
            err << "error: unknown command '" << command << "'\n";
            return 1;
        }
        if (command == "benchmark") rc = detail::benchmark_config(rc);
        std::string out_dir = opt.out_dir.empty() ? rc.output : opt.out_dir;
        if (out_dir.empty()) out_dir = "fracground_out";
        rc.output = out_dir;
        const SolverConfig checked = rc.solver_config();
        checked.check();

        const ModelProblem model = rc.make_model();
        const auto checks = validate(model);
        if (const auto bad = blocking_failure(checks)) {
            err << "error: model violates (" << bad->name << "): " << bad->detail << "; witness "
                << (bad->name == "V1" ? "V0 = " : "") << bad->witness << '\n';
            return 1;
        }

        Outputs o;
        o.report.model = model_to_json(model);
        o.report.versions = default_versions();
        json assumptions = json::array();
        for (const auto& c : checks) assumptions.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}, {"detail", c.detail}});
        o.report.results["assumptions"] = assumptions;

        if (command == "solve") detail::cmd_solve(model, rc, opt, o);
        else if (command == "solve-positive") detail::cmd_solve_positive(model, rc, opt, o);
        else if (command == "sweep-potential") detail::cmd_sweep_potential(model, rc, opt, o);
        else if (command == "sweep-eps") detail::cmd_sweep_eps(model, rc, opt, o);
        else if (command == "verify") detail::cmd_verify(model, rc, opt, o);
        else if (command == "evolve") detail::cmd_evolve(model, rc, opt, o);
        else if (command == "benchmark") detail::cmd_benchmark(model, rc, opt, o);

        write_outputs(out_dir, o, rc, command);
        for (const auto& c : o.report.checks)
            out << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual=" << c.residual << "  tolerance=" << c.tolerance << '\n';
        out << "report: " << (std::filesystem::path(out_dir) / "report.json").string() << '\n';
        return o.report.all_pass() ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace fracground::cli
