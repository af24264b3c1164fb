#ifndef TRAJMINE_PIPELINE_HPP
#define TRAJMINE_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "trajmine/change_detect.hpp"
#include "trajmine/components.hpp"
#include "trajmine/config.hpp"
#include "trajmine/flowfield.hpp"
#include "trajmine/patterns.hpp"
#include "trajmine/reachability.hpp"
#include "trajmine/render.hpp"
#include "trajmine/types.hpp"

namespace trajmine {

struct PipelineResult {
    Dataset dataset;  // normalized and pruned
    FlowField field;
    ComponentModel model;
    ReachabilityGraph graph;
    PatternSet patterns;
};

/// Runs normalize -> prune -> flow vectors -> components -> reachability ->
/// patterns on an in-memory dataset. Deterministic for a fixed config.
PipelineResult run_pipeline_data(const Dataset& dataset, const RunConfig& config);

/// Same, loading the canonical CSV named by config.input.
PipelineResult run_pipeline_file(const RunConfig& config);

/// Writes flows.csv, components.csv, edges.csv, patterns.csv and
/// pattern_summary.csv into out_dir.
void write_csv_artifacts(const PipelineResult& result, const std::string& out_dir);

/// Writes the pattern SVGs; returns the written paths.
std::vector<std::string> write_pattern_svgs(const PipelineResult& result,
                                            const RenderSpec& spec, const std::string& out_dir,
                                            std::uint64_t seed);

/// Per-pattern Gaussian-mixture densities over the epoch's flow vectors.
/// Noise patterns are skipped. mixture_g is the requested component count
/// per density (reduced automatically on small patterns).
std::vector<PatternDensity> fit_epoch_densities(const PipelineResult& result, int mixture_g,
                                                std::uint64_t seed);

struct EpochDiff {
    PipelineResult epoch1;
    PipelineResult epoch2;
    ChangeReport report;
};

/// Mines both inputs with the same config, fits densities, and compares them.
EpochDiff diff_epochs(const RunConfig& config, const std::string& input1,
                      const std::string& input2, int mixture_g, double kl_threshold,
                      int n_samples);

/// Mines a HURDAT2 archive month by month: one global normalization, then a
/// per-month pipeline (months with fewer flow vectors than K are skipped).
/// Returns results keyed by calendar month.
std::map<int, PipelineResult> run_hurdat2_monthly(const RunConfig& config,
                                                  const std::string& hurdat2_path,
                                                  int only_month = 0);

}  // namespace trajmine

#endif
