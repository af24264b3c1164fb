#include "trajmine/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trajmine/csv.hpp"
#include "trajmine/errors.hpp"
#include "trajmine/geometry.hpp"
#include "trajmine/rng.hpp"
#include "trajmine/svg.hpp"

namespace trajmine {

namespace {

constexpr double kMarginFrac = 0.04;

/// Affine data-to-pixel transform preserving aspect ratio, y flipped.
class Mapper {
  public:
    Mapper(double min_x, double max_x, double min_y, double max_y, int canvas_px) {
        canvas_ = static_cast<double>(canvas_px);
        const double margin = canvas_ * kMarginFrac;
        const double span_x = max_x - min_x;
        const double span_y = max_y - min_y;
        const double span = std::max({span_x, span_y, 1e-12});
        scale_ = (canvas_ - 2.0 * margin) / span;
        // Center the drawing on both axes.
        off_x_ = margin + 0.5 * (canvas_ - 2.0 * margin - span_x * scale_) - min_x * scale_;
        off_y_ = margin + 0.5 * (canvas_ - 2.0 * margin - span_y * scale_) + max_y * scale_;
    }

    Vec2 operator()(double x, double y) const {
        return {x * scale_ + off_x_, off_y_ - y * scale_};
    }
    double scale() const { return scale_; }

  private:
    double canvas_ = 0.0;
    double scale_ = 1.0;
    double off_x_ = 0.0;
    double off_y_ = 0.0;
};

struct Bounds {
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    bool empty() const { return !(min_x <= max_x); }
    void ensure_nonempty() {
        if (empty()) {
            min_x = min_y = 0.0;
            max_x = max_y = 1.0;
        }
    }
};

void validate_spec(const RenderSpec& spec) {
    if (spec.canvas_px < 64) throw ConfigError("canvas_px must be at least 64");
    if (!(spec.sample_fraction > 0.0 && spec.sample_fraction <= 1.0)) {
        throw ConfigError("sample_fraction must lie in (0, 1]");
    }
}

void draw_legend(SvgWriter& svg, int canvas_px) {
    const double cx = canvas_px - 64.0;
    const double cy = 64.0;
    const double inner = 22.0;
    const double outer = 40.0;
    svg.open_group("id=\"legend\"");
    for (int i = 0; i < 72; ++i) {
        const double deg = i * 5.0;
        const double rad = to_radians(deg);
        // Pixel y grows downward, so a positive heading rotates counter-
        // clockwise on screen by negating the y component.
        const double dx = std::cos(rad);
        const double dy = -std::sin(rad);
        svg.line(cx + inner * dx, cy + inner * dy, cx + outer * dx, cy + outer * dy,
                 heading_color(deg), 3.0);
    }
    svg.text(cx - 8.0, cy + 4.0, "dir", 11.0, "#555555");
    svg.close_group();
}

void draw_background(SvgWriter& svg, const Dataset& dataset, const Mapper& map,
                     double sample_fraction, std::uint64_t seed) {
    Rng rng(seed);
    svg.open_group("id=\"background\"");
    for (const Trajectory& traj : dataset.trajectories) {
        const bool keep = sample_fraction >= 1.0 || rng.uniform() < sample_fraction;
        if (!keep || traj.points.size() < 2) continue;
        std::vector<Vec2> pts;
        pts.reserve(traj.points.size());
        for (const TrajectoryPoint& p : traj.points) pts.push_back(map(p.x, p.y));
        svg.polyline(pts, "#bbbbbb", 0.6, 0.6);
    }
    svg.close_group();
}

void draw_pattern_flows(SvgWriter& svg, const PatternSet& set, const FlowField& field,
                        const Mapper& map, int pattern_id) {
    for (std::size_t f = 0; f < field.flows.size(); ++f) {
        if (set.flow_labels[f] != pattern_id) continue;
        const FlowVector& fv = field.flows[f];
        const Vec2 a = map(fv.x, fv.y);
        const Vec2 b = map(fv.x + fv.u, fv.y + fv.v);
        const double heading = heading_of(fv.u, fv.v);
        svg.line(a.x, a.y, b.x, b.y, heading_color(heading), 1.2, 0.85);
    }
}

Bounds dataset_bounds(const Dataset& dataset, const FlowField& field) {
    Bounds bounds;
    for (const Trajectory& traj : dataset.trajectories) {
        for (const TrajectoryPoint& p : traj.points) bounds.add(p.x, p.y);
    }
    for (const FlowVector& f : field.flows) {
        bounds.add(f.x, f.y);
        bounds.add(f.x + f.u, f.y + f.v);
    }
    bounds.ensure_nonempty();
    return bounds;
}

void draw_component_arrow(SvgWriter& svg, const MotionComponent& c, const Mapper& map,
                          double len_px, const std::string& color, double width) {
    const Vec2 base = map(c.mu_x, c.mu_y);
    const double rad = to_radians(c.heading_deg());
    const Vec2 dir{std::cos(rad), -std::sin(rad)};  // pixel y grows downward
    const Vec2 tip{base.x + dir.x * len_px, base.y + dir.y * len_px};
    svg.line(base.x, base.y, tip.x, tip.y, color, width);
    // Arrowhead: two barbs at +/-150 degrees from the shaft direction.
    for (double barb : {150.0, -150.0}) {
        const double br = to_radians(c.heading_deg() + barb);
        const Vec2 bd{std::cos(br), -std::sin(br)};
        svg.line(tip.x, tip.y, tip.x + bd.x * len_px * 0.35, tip.y + bd.y * len_px * 0.35, color,
                 width);
    }
}

Bounds component_bounds(const ComponentModel& model) {
    Bounds bounds;
    for (const MotionComponent& c : model.components) bounds.add(c.mu_x, c.mu_y);
    bounds.ensure_nonempty();
    return bounds;
}

}  // namespace

std::vector<std::string> render_patterns(const PatternSet& set, const FlowField& field,
                                         const Dataset& dataset, const RenderSpec& spec,
                                         const std::string& out_dir, std::uint64_t seed) {
    validate_spec(spec);
    const Bounds bounds = dataset_bounds(dataset, field);
    const Mapper map(bounds.min_x, bounds.max_x, bounds.min_y, bounds.max_y, spec.canvas_px);
    std::vector<std::string> files;

    {
        SvgWriter svg(spec.canvas_px, spec.canvas_px);
        draw_background(svg, dataset, map, spec.sample_fraction, seed);
        for (const MotionPattern& pattern : set.patterns) {
            if (pattern.is_noise) continue;
            svg.open_group("id=\"pattern-" + std::to_string(pattern.id) +
                           "\" class=\"pattern\"");
            draw_pattern_flows(svg, set, field, map, pattern.id);
            svg.close_group();
        }
        if (spec.legend) draw_legend(svg, spec.canvas_px);
        const std::string path = out_dir + "/patterns.svg";
        write_text_file(path, svg.finish());
        files.push_back(path);
    }

    if (spec.per_pattern) {
        for (const MotionPattern& pattern : set.patterns) {
            if (pattern.is_noise) continue;
            SvgWriter svg(spec.canvas_px, spec.canvas_px);
            draw_background(svg, dataset, map, spec.sample_fraction, seed);
            svg.open_group("id=\"pattern-" + std::to_string(pattern.id) +
                           "\" class=\"pattern\"");
            draw_pattern_flows(svg, set, field, map, pattern.id);
            svg.close_group();
            if (spec.legend) draw_legend(svg, spec.canvas_px);
            const std::string path = out_dir + "/pattern_" + std::to_string(pattern.id) + ".svg";
            write_text_file(path, svg.finish());
            files.push_back(path);
        }
    }
    return files;
}

void render_components_svg(const ComponentModel& model, const RenderSpec& spec,
                           const std::string& path) {
    validate_spec(spec);
    const Bounds bounds = component_bounds(model);
    const Mapper map(bounds.min_x, bounds.max_x, bounds.min_y, bounds.max_y, spec.canvas_px);
    const double len_px = spec.canvas_px * 0.016;

    SvgWriter svg(spec.canvas_px, spec.canvas_px);
    svg.open_group("id=\"components\"");
    for (const MotionComponent& c : model.components) {
        if (!c.has_heading(model.eps_speed)) continue;
        draw_component_arrow(svg, c, map, len_px, heading_color(c.heading_deg()), 1.4);
    }
    svg.close_group();
    if (spec.legend) draw_legend(svg, spec.canvas_px);
    write_text_file(path, svg.finish());
}

void render_signature_svg(const ComponentModel& model, const ReachabilityGraph& graph,
                          int component_id, const RenderSpec& spec, const std::string& path) {
    validate_spec(spec);
    if (component_id < 0 || component_id >= static_cast<int>(model.components.size())) {
        throw std::out_of_range("render_signature_svg: invalid component id " +
                                std::to_string(component_id));
    }
    const Signature sig = signature(graph, component_id);
    std::vector<char> member(model.components.size(), 0);
    for (int id : sig.members) member[id] = 1;

    const Bounds bounds = component_bounds(model);
    const Mapper map(bounds.min_x, bounds.max_x, bounds.min_y, bounds.max_y, spec.canvas_px);
    const double len_px = spec.canvas_px * 0.016;

    SvgWriter svg(spec.canvas_px, spec.canvas_px);
    svg.open_group("id=\"others\"");
    for (const MotionComponent& c : model.components) {
        if (member[c.id] || !c.has_heading(model.eps_speed)) continue;
        draw_component_arrow(svg, c, map, len_px, "#cccccc", 1.0);
    }
    svg.close_group();
    svg.open_group("id=\"signature\"");
    for (const MotionComponent& c : model.components) {
        if (!member[c.id] || !c.has_heading(model.eps_speed)) continue;
        draw_component_arrow(svg, c, map, len_px, heading_color(c.heading_deg()), 1.8);
    }
    svg.close_group();
    {
        const MotionComponent& owner = model.components[component_id];
        const Vec2 at = map(owner.mu_x, owner.mu_y);
        svg.circle(at.x, at.y, len_px * 0.8, "none", "#000000", 1.2);
    }
    if (spec.legend) draw_legend(svg, spec.canvas_px);
    write_text_file(path, svg.finish());
}

}  // namespace trajmine
