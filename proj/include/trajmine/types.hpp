#ifndef TRAJMINE_TYPES_HPP
#define TRAJMINE_TYPES_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace trajmine {

struct TrajectoryPoint {
    int seq_index = 0;
    double x = 0.0;
    double y = 0.0;
};

struct Trajectory {
    std::string id;
    std::vector<TrajectoryPoint> points;
    /// Month tag per point (1..12); populated only by the HURDAT2 loader.
    std::vector<int> months;

    std::size_t size() const { return points.size(); }
};

/// Per-axis affine map applied by normalize(): x' = (x - offset) * scale.
/// A scale of 0 is the degenerate-axis sentinel (all values mapped to 500).
struct NormalizationRecord {
    double x_offset = 0.0;
    double x_scale = 1.0;
    double y_offset = 0.0;
    double y_scale = 1.0;

    TrajectoryPoint apply(const TrajectoryPoint& p) const {
        return {p.seq_index,
                x_scale == 0.0 ? 500.0 : (p.x - x_offset) * x_scale,
                y_scale == 0.0 ? 500.0 : (p.y - y_offset) * y_scale};
    }
    TrajectoryPoint invert(const TrajectoryPoint& p) const {
        return {p.seq_index,
                x_scale == 0.0 ? x_offset : p.x / x_scale + x_offset,
                y_scale == 0.0 ? y_offset : p.y / y_scale + y_offset};
    }
};

struct Dataset {
    std::vector<Trajectory> trajectories;
    std::optional<NormalizationRecord> normalization;

    std::size_t total_points() const {
        std::size_t n = 0;
        for (const auto& t : trajectories) n += t.points.size();
        return n;
    }
};

}  // namespace trajmine

#endif
