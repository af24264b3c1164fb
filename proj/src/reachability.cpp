#include "trajmine/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "trajmine/csv.hpp"
#include "trajmine/geometry.hpp"
#include "trajmine/parallel.hpp"

namespace trajmine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* edge_kind_name(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::ellipse: return "ellipse";
        case EdgeKind::wedge: return "wedge";
        case EdgeKind::unblock_out: return "unblock_out";
        case EdgeKind::unblock_in: return "unblock_in";
    }
    return "unknown";
}

std::pair<double, double> angles(const MotionComponent& m, const MotionComponent& n,
                                 double eps_speed) {
    if (!m.has_heading(eps_speed) || !n.has_heading(eps_speed)) {
        throw std::invalid_argument("angles undefined: component heading undefined");
    }
    const Vec2 rho = displacement(m, n);
    if (rho.x == 0.0 && rho.y == 0.0) {
        throw std::invalid_argument("angles undefined: coincident component means");
    }
    const double rho_heading = heading_of(rho.x, rho.y);
    const double theta = signed_angle_deg(rho_heading, m.heading_deg());
    const double psi = signed_angle_deg(n.heading_deg(), rho_heading);
    return {theta, psi};
}

double ellipse_scale(const MotionComponent& m, const MotionComponent& n,
                     const EllipseParams& ellipse, double eps_speed) {
    if (!m.has_heading(eps_speed)) {
        throw std::invalid_argument("ellipse scale undefined: component heading undefined");
    }
    const Vec2 rho = displacement(m, n);
    const double speed = m.speed();
    const Vec2 dir{m.mu_u / speed, m.mu_v / speed};
    const double p = rho.dot(dir);        // along the flow
    const double q = rho.dot(dir.perp()); // lateral
    const double a = p >= 0.0 ? ellipse.a1 : ellipse.a2;
    const double b = p >= 0.0 ? ellipse.b1 : ellipse.b2;
    return std::hypot(p / a, q / b);
}

double proximity(const MotionComponent& m, const MotionComponent& n,
                 const EllipseParams& ellipse, const AngleParams& angle, double eps_speed) {
    if (!m.has_heading(eps_speed) || !n.has_heading(eps_speed)) return kInf;
    const Vec2 rho = displacement(m, n);
    if (rho.x == 0.0 && rho.y == 0.0) return kInf;
    const auto [theta, psi] = angles(m, n, eps_speed);
    if (!(std::abs(theta - angle.alpha * psi) < angle.th_theta_psi)) return kInf;
    if (!(std::abs(theta) < angle.th_theta)) return kInf;
    return ellipse_scale(m, n, ellipse, eps_speed);
}

bool wedge_reachable(const MotionComponent& m, const MotionComponent& n,
                     const WedgeParams& wedge, double eps_speed) {
    if (!m.has_heading(eps_speed) || !n.has_heading(eps_speed)) return false;
    const Vec2 rho = displacement(m, n);
    if (rho.x == 0.0 && rho.y == 0.0) return false;
    if (!(rho.norm() < wedge.th_w_rho)) return false;
    const double sector = signed_angle_deg(m.heading_deg(), heading_of(rho.x, rho.y));
    if (!(std::abs(sector) < wedge.th_w_psi)) return false;
    const double direction = signed_angle_deg(m.heading_deg(), n.heading_deg());
    return std::abs(direction) < wedge.th_w_theta;
}

ReachabilityGraph build_reachability(const ComponentModel& model, const EllipseParams& ellipse,
                                     const AngleParams& angle, const WedgeParams& wedge,
                                     const UnblockParams& unblock, int workers) {
    const std::vector<MotionComponent>& comps = model.components;
    const int k = static_cast<int>(comps.size());
    const double eps_speed = model.eps_speed;

    ReachabilityGraph graph;
    graph.node_count = k;
    if (k == 0) return graph;

    // Pairwise proximity matrix plus first-two-phase edges, rows in parallel.
    std::vector<double> pr(static_cast<std::size_t>(k) * k, kInf);
    std::vector<std::vector<ReachEdge>> row_edges(k);
    parallel_ranges(static_cast<std::size_t>(k), workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            for (int n = 0; n < k; ++n) {
                if (static_cast<int>(m) == n) continue;
                const double p = proximity(comps[m], comps[n], ellipse, angle, eps_speed);
                pr[m * k + n] = p;
                if (p < 1.0) {
                    row_edges[m].push_back({static_cast<int>(m), n, EdgeKind::ellipse, p});
                }
                if (wedge_reachable(comps[m], comps[n], wedge, eps_speed)) {
                    const double s = ellipse_scale(comps[m], comps[n], ellipse, eps_speed);
                    row_edges[m].push_back({static_cast<int>(m), n, EdgeKind::wedge, s});
                }
            }
        }
    });

    std::vector<int> out_degree(k, 0);
    std::vector<int> in_degree(k, 0);
    for (const auto& row : row_edges) {
        for (const ReachEdge& e : row) {
            ++out_degree[e.src];
            ++in_degree[e.dst];
            graph.edges.push_back(e);
        }
    }

    // Unblocking against the degree snapshot after the first two phases. When
    // the out- and in-rules pick the same (src, dst) pair, only one edge is
    // recorded.
    std::set<std::pair<int, int>> unblocked;
    for (int i = 0; i < k; ++i) {
        if (out_degree[i] > 0 || !comps[i].has_heading(eps_speed)) continue;
        int arg = -1;
        double best = kInf;
        for (int j = 0; j < k; ++j) {
            const double p = pr[static_cast<std::size_t>(i) * k + j];
            if (p < best) {
                best = p;
                arg = j;
            }
        }
        if (arg >= 0 && best < unblock.search_distance) {
            graph.edges.push_back({i, arg, EdgeKind::unblock_out, best});
            unblocked.emplace(i, arg);
        }
    }
    for (int i = 0; i < k; ++i) {
        if (in_degree[i] > 0 || !comps[i].has_heading(eps_speed)) continue;
        int arg = -1;
        double best = kInf;
        for (int z = 0; z < k; ++z) {
            const double p = pr[static_cast<std::size_t>(z) * k + i];
            if (p < best) {
                best = p;
                arg = z;
            }
        }
        if (arg >= 0 && best < unblock.search_distance &&
            unblocked.find({arg, i}) == unblocked.end()) {
            graph.edges.push_back({arg, i, EdgeKind::unblock_in, best});
        }
    }

    std::sort(graph.edges.begin(), graph.edges.end(), [](const ReachEdge& a, const ReachEdge& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.dst != b.dst) return a.dst < b.dst;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });

    graph.out_adj.assign(k, {});
    graph.in_adj.assign(k, {});
    for (const ReachEdge& e : graph.edges) {
        auto& out = graph.out_adj[e.src];
        if (out.empty() || out.back() != e.dst) out.push_back(e.dst);
        graph.in_adj[e.dst].push_back(e.src);
    }
    for (auto& preds : graph.in_adj) {
        std::sort(preds.begin(), preds.end());
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    }
    return graph;
}

void save_edges_csv(const ReachabilityGraph& graph, const std::string& path) {
    std::string out = "src,dst,kind,S\n";
    for (const ReachEdge& e : graph.edges) {
        out += std::to_string(e.src);
        out += ',';
        out += std::to_string(e.dst);
        out += ',';
        out += edge_kind_name(e.kind);
        out += ',';
        out += format_double(e.scale);
        out += '\n';
    }
    write_text_file(path, out);
}

}  // namespace trajmine
