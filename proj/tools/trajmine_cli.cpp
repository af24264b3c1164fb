#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trajmine/change_detect.hpp"
#include "trajmine/components.hpp"
#include "trajmine/config.hpp"
#include "trajmine/csv.hpp"
#include "trajmine/errors.hpp"
#include "trajmine/flowfield.hpp"
#include "trajmine/ingest.hpp"
#include "trajmine/pipeline.hpp"
#include "trajmine/render.hpp"
#include "trajmine/synthgen.hpp"

namespace {

using namespace trajmine;

struct CommonOpts {
    std::string config_path;
    bool use_defaults = false;
    std::string input;
    std::string out_dir;
    std::int64_t seed = -1;   // -1: keep config value
    int workers = 0;          // 0: keep config value
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_input) {
    cmd->add_option("--config", opts.config_path, "parameter file (key = value lines)");
    cmd->add_flag("--defaults", opts.use_defaults, "use the built-in default profile");
    auto* in = cmd->add_option("--input", opts.input, "input trajectory CSV");
    cmd->add_option("--out", opts.out_dir, "output directory")->required();
    cmd->add_option("--seed", opts.seed, "override the RNG seed");
    cmd->add_option("--workers", opts.workers, "override the worker count");
    if (needs_input) in->required();
}

RunConfig resolve_config(const CommonOpts& opts) {
    RunConfig config;
    if (!opts.config_path.empty() && opts.use_defaults) {
        throw ConfigError("--config and --defaults are mutually exclusive");
    }
    if (!opts.config_path.empty()) {
        config = load_config(opts.config_path);
    } else if (opts.use_defaults) {
        config = default_config();
    } else {
        throw ConfigError("pass --config FILE or --defaults");
    }
    if (!opts.input.empty()) config.input = opts.input;
    if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
    if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
    if (opts.workers > 0) config.workers = opts.workers;
    validate_config(config);
    return config;
}

void report_patterns(const PipelineResult& result) {
    int noise = 0;
    for (const MotionPattern& p : result.patterns.patterns) noise += p.is_noise ? 1 : 0;
    std::printf("flows: %zu  components: %zu  patterns: %zu (noise %d)\n",
                result.field.flows.size(), result.model.components.size(),
                result.patterns.patterns.size(), noise);
}

std::string month_dir(const std::string& base, int month) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "month_%02d", month);
    return base + "/" + buf;
}

int run(int argc, char** argv) {
    CLI::App app{"Trajectory behavior mining: flow vectors, motion components, "
                 "reachability, motion patterns, epoch diffing"};
    app.require_subcommand(1);

    CommonOpts mine_opts;
    std::string mine_hurdat2;
    int mine_month = 0;
    auto* mine_cmd = app.add_subcommand("mine", "run the full pipeline and write artifacts");
    add_common(mine_cmd, mine_opts, false);
    mine_cmd->add_option("--hurdat2", mine_hurdat2,
                         "mine a HURDAT2 archive month by month instead of a CSV");
    mine_cmd->add_option("--month", mine_month, "restrict HURDAT2 mining to one month (1-12)");

    CommonOpts comp_opts;
    auto* comp_cmd =
        app.add_subcommand("components", "stop after component fitting (tuning aid)");
    add_common(comp_cmd, comp_opts, true);

    CommonOpts sig_opts;
    int sig_component = -1;
    auto* sig_cmd = app.add_subcommand("signature", "render one component's signature");
    add_common(sig_cmd, sig_opts, true);
    sig_cmd->add_option("--component-id", sig_component, "component to highlight")->required();

    CommonOpts render_opts;
    RenderSpec render_spec;
    bool no_per_pattern = false;
    bool no_legend = false;
    auto* render_cmd = app.add_subcommand("render", "mine and write SVGs only");
    add_common(render_cmd, render_opts, true);
    render_cmd->add_option("--canvas-px", render_spec.canvas_px, "canvas size in pixels");
    render_cmd->add_option("--sample-fraction", render_spec.sample_fraction,
                           "fraction of background trajectories drawn");
    render_cmd->add_flag("--no-per-pattern", no_per_pattern, "skip per-pattern SVGs");
    render_cmd->add_flag("--no-legend", no_legend, "skip the direction wheel");

    CommonOpts diff_opts;
    std::string diff_input2;
    double kl_threshold = 1.0;
    int kl_samples = 10000;
    int mixture_g = 5;
    auto* diff_cmd = app.add_subcommand("diff", "compare two epochs' motion patterns");
    add_common(diff_cmd, diff_opts, true);
    diff_cmd->add_option("--input2", diff_input2, "second epoch trajectory CSV")->required();
    diff_cmd->add_option("--kl-threshold", kl_threshold, "match threshold on sampled KL");
    diff_cmd->add_option("--kl-samples", kl_samples, "Monte-Carlo samples per KL estimate");
    diff_cmd->add_option("--mixture-g", mixture_g, "Gaussians per pattern density");

    std::string synth_scenario;
    std::string synth_out;
    ScenarioSpec synth_spec;
    std::int64_t synth_seed = 1;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scenario dataset");
    synth_cmd->add_option("--scenario", synth_scenario, "one of: " + [] {
                              std::string names;
                              for (const std::string& n : scenario_names()) {
                                  if (!names.empty()) names += ", ";
                                  names += n;
                              }
                              return names;
                          }())
        ->required();
    synth_cmd->add_option("--out", synth_out, "output directory")->required();
    synth_cmd->add_option("--seed", synth_seed, "RNG seed");
    synth_cmd->add_option("--count", synth_spec.trajectories_per_branch,
                          "trajectories per branch");
    synth_cmd->add_option("--step", synth_spec.step_length, "point spacing");
    synth_cmd->add_option("--noise", synth_spec.noise_sigma, "point jitter sigma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (mine_cmd->parsed()) {
        const RunConfig config = resolve_config(mine_opts);
        if (!mine_hurdat2.empty()) {
            const auto monthly = run_hurdat2_monthly(config, mine_hurdat2, mine_month);
            if (monthly.empty()) throw DataError("no month had enough flow vectors to mine");
            for (const auto& [month, result] : monthly) {
                const std::string dir = month_dir(config.out_dir, month);
                write_csv_artifacts(result, dir);
                write_pattern_svgs(result, RenderSpec{}, dir, config.seed);
                std::printf("month %02d: ", month);
                report_patterns(result);
            }
        } else {
            if (config.input.empty()) throw ConfigError("mine needs --input or --hurdat2");
            const PipelineResult result = run_pipeline_file(config);
            write_csv_artifacts(result, config.out_dir);
            write_pattern_svgs(result, RenderSpec{}, config.out_dir, config.seed);
            report_patterns(result);
        }
        return 0;
    }

    if (comp_cmd->parsed()) {
        const RunConfig config = resolve_config(comp_opts);
        const Dataset prepared = prune_degenerate(normalize(load_csv(config.input)));
        const FlowField field = compute_flow_vectors(prepared);
        if (field.flows.empty()) throw DataError("no flow vectors in input");
        KmeansParams kmeans;
        kmeans.k = config.k;
        kmeans.beta = config.beta;
        kmeans.max_iters = config.max_iters;
        kmeans.tol = config.tol;
        kmeans.seed = config.seed;
        const ComponentModel model =
            fit_components(field, kmeans, config.eps_speed, config.workers);
        save_components_csv(model, config.out_dir + "/components.csv");
        render_components_svg(model, RenderSpec{}, config.out_dir + "/components.svg");
        std::printf("flows: %zu  components: %zu\n", field.flows.size(),
                    model.components.size());
        return 0;
    }

    if (sig_cmd->parsed()) {
        const RunConfig config = resolve_config(sig_opts);
        const PipelineResult result = run_pipeline_file(config);
        if (sig_component < 0 || sig_component >= result.graph.node_count) {
            throw ConfigError("component id out of range: " + std::to_string(sig_component));
        }
        const std::string path =
            config.out_dir + "/signature_" + std::to_string(sig_component) + ".svg";
        render_signature_svg(result.model, result.graph, sig_component, RenderSpec{}, path);
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (render_cmd->parsed()) {
        const RunConfig config = resolve_config(render_opts);
        render_spec.per_pattern = !no_per_pattern;
        render_spec.legend = !no_legend;
        const PipelineResult result = run_pipeline_file(config);
        const auto files = write_pattern_svgs(result, render_spec, config.out_dir, config.seed);
        std::printf("wrote %zu SVG file(s)\n", files.size());
        return 0;
    }

    if (diff_cmd->parsed()) {
        const RunConfig config = resolve_config(diff_opts);
        const EpochDiff result =
            diff_epochs(config, config.input, diff_input2, mixture_g, kl_threshold, kl_samples);
        save_change_report_csv(result.report, config.out_dir + "/change_report.csv");
        std::printf("epoch1 patterns: %zu  epoch2 patterns: %zu  matched: %zu  emerged: %zu  "
                    "disappeared: %zu\n",
                    result.report.rows, result.report.cols, result.report.matches.size(),
                    result.report.emerged.size(), result.report.disappeared.size());
        return 0;
    }

    // synth
    synth_spec.kind = scenario_from_name(synth_scenario);
    synth_spec.seed = static_cast<std::uint64_t>(synth_seed);
    const auto [dataset, truth] = generate(synth_spec);
    save_csv(dataset, synth_out + "/data.csv");
    save_ground_truth_csv(dataset, truth, synth_out + "/ground_truth.csv");
    std::printf("wrote %zu trajectories to %s\n", dataset.trajectories.size(),
                synth_out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
