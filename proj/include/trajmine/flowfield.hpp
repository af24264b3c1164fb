#ifndef TRAJMINE_FLOWFIELD_HPP
#define TRAJMINE_FLOWFIELD_HPP

#include <cmath>
#include <string>
#include <vector>

#include "trajmine/types.hpp"

namespace trajmine {

/// One instantaneous movement sample: position plus the displacement to the
/// next point of its source trajectory.
struct FlowVector {
    double x = 0.0;
    double y = 0.0;
    double u = 0.0;
    double v = 0.0;
    int trajectory = 0;   // index into FlowField::trajectory_ids
    int point_index = 0;  // index of the step's start point

    double magnitude() const { return std::hypot(u, v); }
};

struct FlowField {
    std::vector<FlowVector> flows;
    std::vector<std::string> trajectory_ids;

    const std::string& trajectory_id(const FlowVector& f) const {
        return trajectory_ids[static_cast<std::size_t>(f.trajectory)];
    }
};

/// Emits one flow vector per consecutive point pair of every trajectory, in
/// trajectory order then point order. Requires a pruned dataset; a trajectory
/// with fewer than 2 points is a contract violation.
FlowField compute_flow_vectors(const Dataset& dataset);

/// Debug dump: "trajectory_id,point_index,x,y,u,v".
void save_flow_csv(const FlowField& field, const std::string& path);

}  // namespace trajmine

#endif
