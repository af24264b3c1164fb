#ifndef TRAJMINE_PATTERNS_HPP
#define TRAJMINE_PATTERNS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trajmine/components.hpp"
#include "trajmine/reachability.hpp"

namespace trajmine {

/// Path-reachability signature of a component: every component it can reach
/// plus every component that can reach it, plus itself.
struct Signature {
    int owner = 0;
    std::vector<int> members;  // sorted ascending, always contains owner
};

struct WeightParams {
    double w0 = 1.0;     // additive base keeping weights finite
    double sigma = 1.0;  // kernel bandwidth, normalized spatial units
};

struct MotionPattern {
    int id = 0;
    std::vector<int> component_ids;  // sorted ascending, non-empty
    double mean_heading_deg = 0.0;   // member-count-weighted circular mean
    long long flow_count = 0;        // total member flow vectors
    bool is_noise = false;           // singleton pattern below the support threshold
};

struct PatternSet {
    std::vector<MotionPattern> patterns;
    std::vector<int> flow_labels;        // flow-vector index -> pattern id
    std::vector<int> component_pattern;  // component id -> pattern id
};

/// descendants(i) = nodes reachable from i along directed edges;
/// ancestors(i) = nodes from which i is reachable (traversal of the reverse
/// graph). Neither includes i itself unless i lies on a cycle through i.
struct ReachSets {
    std::vector<std::vector<int>> descendants;
    std::vector<std::vector<int>> ancestors;
};
ReachSets path_reachable_sets(const ReachabilityGraph& graph, int workers = 1);

/// Throws std::out_of_range for an invalid node id.
Signature signature(const ReachabilityGraph& graph, int node);
std::vector<Signature> all_signatures(const ReachabilityGraph& graph, int workers = 1);

/// weight_i = (w0 + sum_j exp(-|rho_ij|^2 / (2 sigma^2)))^-1, the sum running
/// over all K components including i itself (self term = 1). Low weight in
/// dense regions. Throws ConfigError when w0 or sigma is non-positive.
std::vector<double> component_weights(const ComponentModel& model, const WeightParams& params);

/// Weighted Jaccard distance between two signatures:
/// 1 - (sum of weights over the member intersection) / (sum over the union).
/// Symmetric, 0 for identical members, 1 for disjoint members.
double wjd(const Signature& a, const Signature& b, const std::vector<double>& weights);

/// Connected components of the undirected graph on k nodes with an edge
/// wherever dist[i*k+j] < cutoff. Returns one label per node; labels are
/// consecutive from 0 in order of each component's lowest node id. Equivalent
/// to single-linkage agglomeration stopped at the cutoff.
std::vector<int> threshold_components(const std::vector<double>& dist, int k, double cutoff);

/// Forms motion patterns: signatures -> pairwise WJD -> connected components
/// under the cutoff. Singleton patterns with flow support below
/// min_support_flows are tagged noise. Throws ConfigError for cutoff outside
/// [0, 1].
PatternSet cluster(const ReachabilityGraph& graph, const ComponentModel& model,
                   const WeightParams& params, double cutoff, double min_support_flows = 0.0,
                   int workers = 1);

/// Per-flow-vector dump: "trajectory_id,point_index,component_id,pattern_id,is_noise".
void save_patterns_csv(const PatternSet& set, const ComponentModel& model, const FlowField& field,
                       const std::string& path);

/// Per-pattern dump: "pattern_id,component_count,flow_count,mean_heading_deg".
void save_pattern_summary_csv(const PatternSet& set, const std::string& path);

}  // namespace trajmine

#endif
