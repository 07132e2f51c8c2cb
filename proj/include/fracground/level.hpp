// Multi-start estimate of the ground-state level c = inf over the Nehari manifold of J.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "parallel.hpp"
#include "solver.hpp"

namespace fracground {

struct LevelEstimate {
    double level = std::numeric_limits<double>::infinity();
    int best_start = -1;
    int nonconverged = 0;
    std::vector<double> levels;  ///< per start, in start order
};

/// Runs `starts` solves from seeded_bump(grid, seed, i) and returns the minimum converged level
/// (lowest start index wins ties). Non-converged starts are counted and excluded.
inline LevelEstimate level_estimate(const ModelProblem& m, int starts, std::uint64_t seed, const SolverConfig& cfg = {},
                                    unsigned jobs = 1) {
    if (starts < 1) throw std::invalid_argument("level_estimate needs at least one start");
    const auto states = parallel_map<GroundState>(static_cast<std::size_t>(starts), jobs, [&](std::size_t i) {
        return solve_ground_state(m, cfg, seeded_bump(m.grid(), seed, i));
    });
    LevelEstimate est;
    for (int i = 0; i < starts; ++i) {
        const auto& gs = states[static_cast<std::size_t>(i)];
        est.levels.push_back(gs.level);
        if (!gs.converged) {
            ++est.nonconverged;
            continue;
        }
        if (gs.level < est.level) {
            est.level = gs.level;
            est.best_start = i;
        }
    }
    return est;
}

}  // namespace fracground
