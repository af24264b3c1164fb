#ifndef TRAJMINE_SYNTHGEN_HPP
#define TRAJMINE_SYNTHGEN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trajmine/types.hpp"

namespace trajmine {

enum class ScenarioKind {
    straight_lane,
    arc,
    s_curve,
    merge,
    diverge,
    opposite_overlap,
    parallel_lanes,
    dense_sparse,
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::straight_lane;
    int trajectories_per_branch = 25;
    double step_length = 25.0;   // spacing between consecutive points
    double noise_sigma = 0.5;    // isotropic Gaussian point jitter
    std::uint64_t seed = 1;
};

/// Per-point expected-pattern tags, aligned with Dataset::trajectories
/// (tags[t][i] labels point i of trajectory t). Coverage is total.
struct GroundTruth {
    std::vector<std::vector<std::string>> tags;
};

/// Builds the scenario dataset in [0, 1000]^2 plus its ground truth.
/// Deterministic for a fixed spec. Throws ConfigError on invalid parameters.
std::pair<Dataset, GroundTruth> generate(const ScenarioSpec& spec);

const char* scenario_name(ScenarioKind kind);
ScenarioKind scenario_from_name(const std::string& name);  // throws ConfigError
std::vector<std::string> scenario_names();

/// Dump: "trajectory_id,point_index,tag".
void save_ground_truth_csv(const Dataset& dataset, const GroundTruth& truth,
                           const std::string& path);

}  // namespace trajmine

#endif
