#include "trajmine/flowfield.hpp"

#include <sstream>
#include <stdexcept>

#include "trajmine/csv.hpp"

namespace trajmine {

FlowField compute_flow_vectors(const Dataset& dataset) {
    FlowField field;
    field.trajectory_ids.reserve(dataset.trajectories.size());
    for (int ti = 0; ti < static_cast<int>(dataset.trajectories.size()); ++ti) {
        const Trajectory& t = dataset.trajectories[static_cast<std::size_t>(ti)];
        if (t.points.size() < 2) {
            throw std::invalid_argument("compute_flow_vectors: trajectory '" + t.id +
                                        "' has fewer than 2 points; prune first");
        }
        field.trajectory_ids.push_back(t.id);
        for (std::size_t i = 0; i + 1 < t.points.size(); ++i) {
            const auto& a = t.points[i];
            const auto& b = t.points[i + 1];
            field.flows.push_back({a.x, a.y, b.x - a.x, b.y - a.y, ti, static_cast<int>(i)});
        }
    }
    return field;
}

void save_flow_csv(const FlowField& field, const std::string& path) {
    std::ostringstream out;
    out << "trajectory_id,point_index,x,y,u,v\n";
    for (const auto& f : field.flows) {
        out << field.trajectory_id(f) << ',' << f.point_index << ',' << format_double(f.x) << ','
            << format_double(f.y) << ',' << format_double(f.u) << ',' << format_double(f.v)
            << '\n';
    }
    write_text_file(path, out.str());
}

}  // namespace trajmine
