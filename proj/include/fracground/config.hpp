// Run configuration: flat text with dotted keys, one `key = value` per line.
//
//   # benchmark model
//   dim = 1
//   L = 160
//   potential.kind = "constant"
//   potential.params = [1.0]
//   sweep.shifts = [0, 0.5, 1]
//
// Values are numbers, quoted strings, true/false, or bracketed lists of numbers or strings.
// Unknown keys are rejected. write_resolved emits every key, so a resolved file re-parses to
// the same RunConfig.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "model.hpp"
#include "solver.hpp"
#include "verify.hpp"

namespace fracground {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>>;

struct ConfigEntry {
    ConfigValue value;
    int line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

inline bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    is >> out;
    return !is.fail() && is.eof();
}

inline std::string parse_string(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') throw ConfigError("line " + std::to_string(line) + ": malformed string " + s);
    return s.substr(1, s.size() - 2);
}

inline ConfigValue parse_value(const std::string& raw, int line) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '"') return parse_string(s, line);
    if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated list");
        const std::string body = trim(s.substr(1, s.size() - 2));
        std::vector<std::string> items;
        if (!body.empty()) {
            std::string cur;
            bool quoted = false;
            for (char c : body) {
                if (c == '"') quoted = !quoted;
                if (c == ',' && !quoted) {
                    items.push_back(trim(cur));
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            items.push_back(trim(cur));
        }
        if (!items.empty() && !items.front().empty() && items.front().front() == '"') {
            std::vector<std::string> out;
            for (const auto& it : items) out.push_back(parse_string(it, line));
            return out;
        }
        std::vector<double> out;
        for (const auto& it : items) {
            double v = 0.0;
            if (!parse_number(it, v)) throw ConfigError("line " + std::to_string(line) + ": not a number: " + it);
            out.push_back(v);
        }
        return out;
    }
    double v = 0.0;
    if (!parse_number(s, v)) throw ConfigError("line " + std::to_string(line) + ": cannot parse value " + s);
    return v;
}

}  // namespace detail

/// Parses `key = value` lines; duplicate keys and malformed lines raise ConfigError with the line number.
inline std::map<std::string, ConfigEntry> parse_config_text(const std::string& text) {
    std::map<std::string, ConfigEntry> out;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::string s = detail::trim(detail::strip_comment(raw));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = detail::trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
        if (out.count(key)) throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
        out[key] = {detail::parse_value(s.substr(eq + 1), line), line};
    }
    return out;
}

struct RunConfig {
    // model
    int dim = 1;
    double L = 160.0;
    int M = 8192;
    double s = 0.5;
    std::string potential_kind = "constant";
    std::vector<double> potential_params{1.0};
    double p = 2.0;
    double weight = 1.0;
    bool positive_mode = false;
    double epsilon = 1.0;
    bool dealias = false;

    // solver
    SolverConfig solver;
    std::string preconditioner = "sobolev";
    std::string initial = "centered";
    int level_starts = 1;

    // sweeps
    std::vector<double> sweep_shifts{0.0, 1.0};
    std::vector<double> sweep_epsilons{1.0, 0.5, 0.25, 0.1};

    // evolve
    double evolve_dt = 1e-3;
    int evolve_steps = 10000;
    int evolve_diag_every = 100;
    int evolve_snapshot_every = 0;
    double evolve_amplitude = 1.0;

    // verify
    std::vector<std::string> verify_checks{"pohozaev", "decay", "level", "gn", "commutator", "cutoff"};
    int verify_samples = 1000;
    double verify_q = 2.0;
    std::vector<double> verify_radii{5.0, 10.0, 20.0, 40.0};
    std::string verify_field;
    std::vector<double> verify_decay_window;  ///< empty: default window
    std::string verify_decay_model = "periodic_images";
    double verify_commutator_radius = 10.0;

    std::uint64_t seed = 0;
    std::string output;

    Grid make_grid() const { return fracground::make_grid(dim, L, M); }

    Potential make_potential() const {
        Potential V = Potential::from_spec(potential_kind_from_string(potential_kind), potential_params);
        if (epsilon != 1.0) V = Potential::rescaled(V, epsilon);
        return V;
    }

    ModelProblem make_model() const {
        Nonlinearity f;
        f.p = p;
        f.weight = Potential::constant(weight);
        return ModelProblem(make_grid(), FracOrder(s), make_potential(), f, positive_mode, dealias);
    }

    SolverConfig solver_config() const {
        SolverConfig c = solver;
        c.seed = seed;
        if (preconditioner == "none") c.preconditioner = Preconditioner::none;
        else if (preconditioner == "spectral") c.preconditioner = Preconditioner::spectral;
        else if (preconditioner == "sobolev") c.preconditioner = Preconditioner::sobolev;
        else throw ConfigError("solver.preconditioner must be none, spectral or sobolev");
        if (initial == "centered") c.initial = InitialGuess::centered;
        else if (initial == "seeded") c.initial = InitialGuess::seeded;
        else throw ConfigError("solver.initial must be centered or seeded");
        return c;
    }

    DecayModel decay_model() const {
        if (verify_decay_model == "periodic_images") return DecayModel::periodic_images;
        if (verify_decay_model == "power_law") return DecayModel::power_law;
        throw ConfigError("verify.decay_model must be periodic_images or power_law");
    }
};

namespace detail {

template <typename T>
const T& expect(const ConfigEntry& e, const std::string& key, const char* what) {
    if (const auto* v = std::get_if<T>(&e.value)) return *v;
    throw ConfigError("line " + std::to_string(e.line) + ": key '" + key + "' expects " + what);
}

inline int expect_int(const ConfigEntry& e, const std::string& key) {
    const double v = expect<double>(e, key, "an integer");
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError("line " + std::to_string(e.line) + ": key '" + key + "' expects an integer");
    return static_cast<int>(v);
}

// Empty lists parse as numeric; accept them where strings are expected.
inline std::vector<std::string> expect_strings(const ConfigEntry& e, const std::string& key) {
    if (const auto* v = std::get_if<std::vector<std::string>>(&e.value)) return *v;
    if (const auto* v = std::get_if<std::vector<double>>(&e.value); v && v->empty()) return {};
    throw ConfigError("line " + std::to_string(e.line) + ": key '" + key + "' expects a list of strings");
}

}  // namespace detail

/// Builds a RunConfig from parsed entries, starting from defaults. Unknown keys are errors.
inline RunConfig run_config_from_entries(const std::map<std::string, ConfigEntry>& entries) {
    using detail::expect;
    using detail::expect_int;
    RunConfig c;
    for (const auto& [key, e] : entries) {
        const char* num = "a number";
        const char* str = "a string";
        const char* list = "a list of numbers";
        if (key == "dim") c.dim = expect_int(e, key);
        else if (key == "L") c.L = expect<double>(e, key, num);
        else if (key == "M") c.M = expect_int(e, key);
        else if (key == "s") c.s = expect<double>(e, key, num);
        else if (key == "potential.kind") c.potential_kind = expect<std::string>(e, key, str);
        else if (key == "potential.params") c.potential_params = expect<std::vector<double>>(e, key, list);
        else if (key == "p") c.p = expect<double>(e, key, num);
        else if (key == "weight") c.weight = expect<double>(e, key, num);
        else if (key == "positive_mode") c.positive_mode = expect<bool>(e, key, "true or false");
        else if (key == "epsilon") c.epsilon = expect<double>(e, key, num);
        else if (key == "dealias") c.dealias = expect<bool>(e, key, "true or false");
        else if (key == "solver.tol_grad") c.solver.tol_grad = expect<double>(e, key, num);
        else if (key == "solver.tol_nehari") c.solver.tol_nehari = expect<double>(e, key, num);
        else if (key == "solver.max_iters") c.solver.max_iters = expect_int(e, key);
        else if (key == "solver.step0") c.solver.step0 = expect<double>(e, key, num);
        else if (key == "solver.backtrack") c.solver.backtrack = expect<double>(e, key, num);
        else if (key == "solver.armijo") c.solver.armijo = expect<double>(e, key, num);
        else if (key == "solver.preconditioner") c.preconditioner = expect<std::string>(e, key, str);
        else if (key == "solver.initial") c.initial = expect<std::string>(e, key, str);
        else if (key == "solver.cg_tol") c.solver.cg_tol = expect<double>(e, key, num);
        else if (key == "solver.cg_max_iters") c.solver.cg_max_iters = expect_int(e, key);
        else if (key == "level.starts") c.level_starts = expect_int(e, key);
        else if (key == "sweep.shifts") c.sweep_shifts = expect<std::vector<double>>(e, key, list);
        else if (key == "sweep.epsilons") c.sweep_epsilons = expect<std::vector<double>>(e, key, list);
        else if (key == "evolve.dt") c.evolve_dt = expect<double>(e, key, num);
        else if (key == "evolve.steps") c.evolve_steps = expect_int(e, key);
        else if (key == "evolve.diag_every") c.evolve_diag_every = expect_int(e, key);
        else if (key == "evolve.snapshot_every") c.evolve_snapshot_every = expect_int(e, key);
        else if (key == "evolve.amplitude") c.evolve_amplitude = expect<double>(e, key, num);
        else if (key == "verify.checks") c.verify_checks = detail::expect_strings(e, key);
        else if (key == "verify.samples") c.verify_samples = expect_int(e, key);
        else if (key == "verify.q") c.verify_q = expect<double>(e, key, num);
        else if (key == "verify.radii") c.verify_radii = expect<std::vector<double>>(e, key, list);
        else if (key == "verify.field") c.verify_field = expect<std::string>(e, key, str);
        else if (key == "verify.decay_window") c.verify_decay_window = expect<std::vector<double>>(e, key, list);
        else if (key == "verify.decay_model") c.verify_decay_model = expect<std::string>(e, key, str);
        else if (key == "verify.commutator_radius") c.verify_commutator_radius = expect<double>(e, key, num);
        else if (key == "seed") {
            const double v = expect<double>(e, key, "a non-negative integer");
            if (v < 0 || v != std::floor(v) || v > 9.007199254740992e15)
                throw ConfigError("line " + std::to_string(e.line) + ": key 'seed' expects a non-negative integer");
            c.seed = static_cast<std::uint64_t>(v);
        } else if (key == "output") c.output = expect<std::string>(e, key, str);
        else throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + key + "'");
    }
    if (!c.verify_decay_window.empty() && c.verify_decay_window.size() != 2)
        throw ConfigError("verify.decay_window must hold two radii");
    return c;
}

inline RunConfig parse_run_config(const std::string& text) { return run_config_from_entries(parse_config_text(text)); }

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_run_config(ss.str());
}

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string fmt_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt_double(v[i]);
    return out + "]";
}

inline std::string fmt_list(const std::vector<std::string>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", \"" : "\"") + v[i] + "\"";
    return out + "]";
}

}  // namespace detail

/// Every key with its resolved value.
inline std::string write_resolved(const RunConfig& c) {
    using detail::fmt_double;
    using detail::fmt_list;
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    auto q = [](const std::string& v) { return "\"" + v + "\""; };
    std::ostringstream os;
    os << "# resolved configuration\n";
    os << "dim = " << c.dim << '\n';
    os << "L = " << fmt_double(c.L) << '\n';
    os << "M = " << c.M << '\n';
    os << "s = " << fmt_double(c.s) << '\n';
    os << "potential.kind = " << q(c.potential_kind) << '\n';
    os << "potential.params = " << fmt_list(c.potential_params) << '\n';
    os << "p = " << fmt_double(c.p) << '\n';
    os << "weight = " << fmt_double(c.weight) << '\n';
    os << "positive_mode = " << b(c.positive_mode) << '\n';
    os << "epsilon = " << fmt_double(c.epsilon) << '\n';
    os << "dealias = " << b(c.dealias) << '\n';
    os << "solver.tol_grad = " << fmt_double(c.solver.tol_grad) << '\n';
    os << "solver.tol_nehari = " << fmt_double(c.solver.tol_nehari) << '\n';
    os << "solver.max_iters = " << c.solver.max_iters << '\n';
    os << "solver.step0 = " << fmt_double(c.solver.step0) << '\n';
    os << "solver.backtrack = " << fmt_double(c.solver.backtrack) << '\n';
    os << "solver.armijo = " << fmt_double(c.solver.armijo) << '\n';
    os << "solver.preconditioner = " << q(c.preconditioner) << '\n';
    os << "solver.initial = " << q(c.initial) << '\n';
    os << "solver.cg_tol = " << fmt_double(c.solver.cg_tol) << '\n';
    os << "solver.cg_max_iters = " << c.solver.cg_max_iters << '\n';
    os << "level.starts = " << c.level_starts << '\n';
    os << "sweep.shifts = " << fmt_list(c.sweep_shifts) << '\n';
    os << "sweep.epsilons = " << fmt_list(c.sweep_epsilons) << '\n';
    os << "evolve.dt = " << fmt_double(c.evolve_dt) << '\n';
    os << "evolve.steps = " << c.evolve_steps << '\n';
    os << "evolve.diag_every = " << c.evolve_diag_every << '\n';
    os << "evolve.snapshot_every = " << c.evolve_snapshot_every << '\n';
    os << "evolve.amplitude = " << fmt_double(c.evolve_amplitude) << '\n';
    os << "verify.checks = " << fmt_list(c.verify_checks) << '\n';
    os << "verify.samples = " << c.verify_samples << '\n';
    os << "verify.q = " << fmt_double(c.verify_q) << '\n';
    os << "verify.radii = " << fmt_list(c.verify_radii) << '\n';
    os << "verify.field = " << q(c.verify_field) << '\n';
    os << "verify.decay_window = " << fmt_list(c.verify_decay_window) << '\n';
    os << "verify.decay_model = " << q(c.verify_decay_model) << '\n';
    os << "verify.commutator_radius = " << fmt_double(c.verify_commutator_radius) << '\n';
    os << "seed = " << c.seed << '\n';
    os << "output = " << q(c.output) << '\n';
    return os.str();
}

}  // namespace fracground
