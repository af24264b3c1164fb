#ifndef TRAJMINE_COMPONENTS_HPP
#define TRAJMINE_COMPONENTS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "trajmine/flowfield.hpp"
#include "trajmine/geometry.hpp"

namespace trajmine {

struct KmeansParams {
    int k = 0;
    double beta = 0.0;  // weight of velocity similarity versus spatial proximity
    int max_iters = 100;
    double tol = 1e-9;  // max center shift (squared-space) below which iteration stops
    std::uint64_t seed = 0;
};

/// A cluster of flow vectors summarized by its 4-D mean.
struct MotionComponent {
    int id = 0;
    double mu_x = 0.0;
    double mu_y = 0.0;
    double mu_u = 0.0;
    double mu_v = 0.0;
    int member_count = 0;

    double speed() const { return std::hypot(mu_u, mu_v); }
    bool has_heading(double eps_speed) const { return speed() > eps_speed; }
    /// Mean flow direction in degrees, (-180, 180]. Only meaningful when
    /// has_heading() holds.
    double heading_deg() const { return heading_of(mu_u, mu_v); }
};

struct ComponentModel {
    std::vector<MotionComponent> components;
    std::vector<int> assignment;  // flow index -> component id
    KmeansParams params;
    double eps_speed = 1e-6;
    /// Clustering objective (sum of squared distances under the weighted
    /// metric) recorded after every assignment pass.
    std::vector<double> objective_history;
    int iterations = 0;
    bool converged = false;
};

/// Distance between two 4-D flow samples with velocity differences weighted
/// by beta:
///   sqrt(dx^2 + dy^2 + beta*du^2 + beta*dv^2)
double eq1_distance(const std::array<double, 4>& p, const std::array<double, 4>& q, double beta);
double eq1_distance(const FlowVector& p, const FlowVector& q, double beta);

/// Spatial displacement from component m's mean to component n's mean.
Vec2 displacement(const MotionComponent& m, const MotionComponent& n);

/// Lloyd iteration over the flow set under the weighted metric, run as
/// standard Kmeans in the space where u and v are scaled by sqrt(beta).
/// Kmeans++ seeding; empty clusters are reseeded to the flow vector farthest
/// from its center; assignment ties break toward the lowest component id.
/// Deterministic for a fixed seed and any worker count.
ComponentModel fit_components(const FlowField& field, const KmeansParams& params,
                              double eps_speed = 1e-6, int workers = 1);

/// Dump: "id,mu_x,mu_y,mu_u,mu_v,member_count".
void save_components_csv(const ComponentModel& model, const std::string& path);

}  // namespace trajmine

#endif
