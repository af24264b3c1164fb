#ifndef TRAJMINE_RENDER_HPP
#define TRAJMINE_RENDER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "trajmine/components.hpp"
#include "trajmine/patterns.hpp"
#include "trajmine/reachability.hpp"
#include "trajmine/types.hpp"

namespace trajmine {

struct RenderSpec {
    int canvas_px = 900;
    double sample_fraction = 1.0;  // fraction of background trajectories drawn, (0, 1]
    bool per_pattern = true;       // also emit one SVG per non-noise pattern
    bool legend = true;            // include the direction color wheel
};

/// Writes the pattern overview SVG ("patterns.svg") and, when enabled, one
/// SVG per non-noise pattern ("pattern_<id>.svg") into out_dir. Trajectories
/// appear as thin gray polylines (a seeded random subset when
/// sample_fraction < 1); each pattern's flow vectors are short segments
/// colored by heading on the direction wheel, grouped per pattern. Returns
/// the written file paths. Throws ConfigError on an invalid spec.
std::vector<std::string> render_patterns(const PatternSet& set, const FlowField& field,
                                         const Dataset& dataset, const RenderSpec& spec,
                                         const std::string& out_dir, std::uint64_t seed);

/// One arrow glyph per component with a defined heading, at its spatial mean
/// pointing along its heading, colored by heading.
void render_components_svg(const ComponentModel& model, const RenderSpec& spec,
                           const std::string& path);

/// Signature view for one component: members keep their heading colors, all
/// other components are grayed out, the owner is outlined. Throws
/// std::out_of_range for an invalid component id.
void render_signature_svg(const ComponentModel& model, const ReachabilityGraph& graph,
                          int component_id, const RenderSpec& spec, const std::string& path);

}  // namespace trajmine

#endif
