#include "trajmine/pipeline.hpp"

#include <utility>

#include "trajmine/errors.hpp"
#include "trajmine/ingest.hpp"
#include "trajmine/rng.hpp"

namespace trajmine {

namespace {

PipelineResult run_on_prepared(Dataset prepared, const RunConfig& config) {
    PipelineResult result;
    result.dataset = std::move(prepared);
    result.field = compute_flow_vectors(result.dataset);
    if (result.field.flows.empty()) {
        throw DataError("no flow vectors: every trajectory is degenerate");
    }

    KmeansParams kmeans;
    kmeans.k = config.k;
    kmeans.beta = config.beta;
    kmeans.max_iters = config.max_iters;
    kmeans.tol = config.tol;
    kmeans.seed = config.seed;
    result.model = fit_components(result.field, kmeans, config.eps_speed, config.workers);

    const EllipseParams ellipse{config.a1, config.b1, config.a2, config.b2};
    const AngleParams angle{config.alpha, config.th_theta_psi, config.th_theta};
    const WedgeParams wedge{config.th_w_psi, config.th_w_rho, config.th_w_theta};
    const UnblockParams unblock{config.search_distance};
    result.graph =
        build_reachability(result.model, ellipse, angle, wedge, unblock, config.workers);

    const WeightParams weights{config.w0, config.sigma};
    const double min_support =
        config.min_pattern_support * static_cast<double>(result.field.flows.size());
    result.patterns = cluster(result.graph, result.model, weights, config.cutoff, min_support,
                              config.workers);
    return result;
}

}  // namespace

PipelineResult run_pipeline_data(const Dataset& dataset, const RunConfig& config) {
    validate_config(config);
    return run_on_prepared(prune_degenerate(normalize(dataset)), config);
}

PipelineResult run_pipeline_file(const RunConfig& config) {
    if (config.input.empty()) throw ConfigError("no input file given");
    return run_pipeline_data(load_csv(config.input), config);
}

void write_csv_artifacts(const PipelineResult& result, const std::string& out_dir) {
    save_flow_csv(result.field, out_dir + "/flows.csv");
    save_components_csv(result.model, out_dir + "/components.csv");
    save_edges_csv(result.graph, out_dir + "/edges.csv");
    save_patterns_csv(result.patterns, result.model, result.field, out_dir + "/patterns.csv");
    save_pattern_summary_csv(result.patterns, out_dir + "/pattern_summary.csv");
}

std::vector<std::string> write_pattern_svgs(const PipelineResult& result, const RenderSpec& spec,
                                            const std::string& out_dir, std::uint64_t seed) {
    return render_patterns(result.patterns, result.field, result.dataset, spec, out_dir, seed);
}

std::vector<PatternDensity> fit_epoch_densities(const PipelineResult& result, int mixture_g,
                                                std::uint64_t seed) {
    std::vector<PatternDensity> densities;
    for (const MotionPattern& pattern : result.patterns.patterns) {
        if (pattern.is_noise) continue;
        std::vector<std::array<double, 4>> samples;
        for (std::size_t f = 0; f < result.field.flows.size(); ++f) {
            if (result.patterns.flow_labels[f] != pattern.id) continue;
            const FlowVector& fv = result.field.flows[f];
            samples.push_back({fv.x, fv.y, fv.u, fv.v});
        }
        if (samples.empty()) continue;
        densities.push_back(fit_density(samples, mixture_g,
                                        derive_seed(seed, 0xd15f, pattern.id), pattern.id));
    }
    return densities;
}

EpochDiff diff_epochs(const RunConfig& config, const std::string& input1,
                      const std::string& input2, int mixture_g, double kl_threshold,
                      int n_samples) {
    validate_config(config);
    if (mixture_g < 1) throw ConfigError("mixture G must be at least 1");
    if (n_samples < 1) throw ConfigError("n_samples must be at least 1");

    RunConfig c1 = config;
    c1.input = input1;
    RunConfig c2 = config;
    c2.input = input2;

    EpochDiff diff_result;
    diff_result.epoch1 = run_pipeline_file(c1);
    diff_result.epoch2 = run_pipeline_file(c2);
    const std::vector<PatternDensity> d1 =
        fit_epoch_densities(diff_result.epoch1, mixture_g, derive_seed(config.seed, 1));
    const std::vector<PatternDensity> d2 =
        fit_epoch_densities(diff_result.epoch2, mixture_g, derive_seed(config.seed, 2));
    diff_result.report =
        diff(d1, d2, kl_threshold, n_samples, derive_seed(config.seed, 3), config.workers);
    return diff_result;
}

std::map<int, PipelineResult> run_hurdat2_monthly(const RunConfig& config,
                                                  const std::string& hurdat2_path,
                                                  int only_month) {
    validate_config(config);
    const Dataset raw = load_hurdat2(hurdat2_path);
    const Dataset normalized = normalize(raw);
    std::map<int, PipelineResult> results;
    for (auto& [month, month_dataset] : split_by_month(normalized)) {
        if (only_month != 0 && month != only_month) continue;
        const Dataset pruned = prune_degenerate(month_dataset);
        std::size_t flow_count = 0;
        for (const Trajectory& t : pruned.trajectories) flow_count += t.points.size() - 1;
        if (flow_count < static_cast<std::size_t>(config.k)) continue;
        results.emplace(month, run_on_prepared(pruned, config));
    }
    return results;
}

}  // namespace trajmine
