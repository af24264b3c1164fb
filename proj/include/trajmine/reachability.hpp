#ifndef TRAJMINE_REACHABILITY_HPP
#define TRAJMINE_REACHABILITY_HPP

#include <string>
#include <utility>
#include <vector>

#include "trajmine/components.hpp"

namespace trajmine {

/// Two half-ellipses sharing their center at a component's mean, major axis
/// along its heading: (a1, b1) forward of the center, (a2, b2) behind it.
struct EllipseParams {
    double a1 = 0.0;
    double b1 = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;
};

struct AngleParams {
    double alpha = 1.0;         // curve-expectation multiplier
    double th_theta_psi = 0.0;  // bound on |theta - alpha*psi|, degrees
    double th_theta = 0.0;      // bound on |theta|, degrees
};

/// Low-radius, wide-angle circular sector used to connect side-by-side flow.
/// th_w_rho = 0 disables it.
struct WedgeParams {
    double th_w_psi = 0.0;    // sector half-angle, degrees
    double th_w_rho = 0.0;    // sector radius
    double th_w_theta = 0.0;  // flow-direction similarity bound, degrees
};

struct UnblockParams {
    double search_distance = 1.0;  // scale bound; values < 1 make unblocking a no-op
};

enum class EdgeKind { ellipse = 0, wedge = 1, unblock_out = 2, unblock_in = 3 };

const char* edge_kind_name(EdgeKind kind);

struct ReachEdge {
    int src = 0;
    int dst = 0;
    EdgeKind kind = EdgeKind::ellipse;
    double scale = 0.0;  // ellipse scale S of the pair
};

struct ReachabilityGraph {
    int node_count = 0;
    std::vector<ReachEdge> edges;             // sorted by (src, dst, kind)
    std::vector<std::vector<int>> out_adj;    // deduplicated successor ids, ascending
    std::vector<std::vector<int>> in_adj;     // deduplicated predecessor ids, ascending
};

/// Signed angles (theta, psi) of the pair, degrees in (-180, 180]:
///   theta = heading(flow m) - heading(rho_mn)
///   psi   = heading(rho_mn) - heading(flow n)
/// Components tangent to a common circular arc satisfy theta = psi.
/// Throws std::invalid_argument when either heading is undefined or the means
/// coincide.
std::pair<double, double> angles(const MotionComponent& m, const MotionComponent& n,
                                 double eps_speed);

/// Scale S of the double-ellipse of m through n's mean: decompose rho_mn in
/// m's flow frame as (p forward, q lateral); S = sqrt((p/a1)^2 + (q/b1)^2)
/// when p >= 0, else with (a2, b2). S < 1 iff n lies strictly inside.
/// Throws std::invalid_argument when heading(m) is undefined.
double ellipse_scale(const MotionComponent& m, const MotionComponent& n,
                     const EllipseParams& ellipse, double eps_speed);

/// Pr(m, n): S_mn when |theta - alpha*psi| < th_theta_psi and
/// |theta| < th_theta, +infinity otherwise (including undefined headings and
/// coincident means). Asymmetric in general.
double proximity(const MotionComponent& m, const MotionComponent& n,
                 const EllipseParams& ellipse, const AngleParams& angle, double eps_speed);

/// True iff |angle(flow m -> rho_mn)| < th_w_psi, |rho_mn| < th_w_rho and
/// |angle(flow m -> flow n)| < th_w_theta, with both headings defined.
bool wedge_reachable(const MotionComponent& m, const MotionComponent& n,
                     const WedgeParams& wedge, double eps_speed);

/// Assembles the directed reachability graph in three phases:
///   1. ellipse edges m->n wherever Pr(m, n) < 1;
///   2. wedge edges wherever wedge_reachable(m, n);
///   3. unblocking - every node with out-degree 0 after (1)+(2) gains an edge
///      to its minimum-Pr candidate if that minimum is below search_distance,
///      and symmetrically for in-degree 0. Ties break toward the lowest id.
ReachabilityGraph build_reachability(const ComponentModel& model, const EllipseParams& ellipse,
                                     const AngleParams& angle, const WedgeParams& wedge,
                                     const UnblockParams& unblock, int workers = 1);

/// Dump: "src,dst,kind,S".
void save_edges_csv(const ReachabilityGraph& graph, const std::string& path);

}  // namespace trajmine

#endif
