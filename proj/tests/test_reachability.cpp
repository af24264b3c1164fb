#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "trajmine/geometry.hpp"
#include "trajmine/reachability.hpp"

using namespace trajmine;
using testutil::make_component;
using testutil::make_model;

namespace {

const EllipseParams kEllipse{30.0, 12.0, 15.0, 12.0};
const AngleParams kAngles{1.0, 12.0, 30.0};
const WedgeParams kWedgeOn{120.0, 25.0, 15.0};
const WedgeParams kWedgeOff{120.0, 0.0, 15.0};
const UnblockParams kNoUnblock{0.5};  // below 1, never fires

MotionComponent at(int id, double x, double y, double heading_deg, double speed = 10.0,
                   int members = 5) {
    const double h = to_radians(heading_deg);
    return make_component(id, x, y, speed * std::cos(h), speed * std::sin(h), members);
}

}  // namespace

TEST_CASE("angles computes signed theta and psi") {
    // Flow m east, flow n north, displacement along the 45-degree diagonal.
    const auto m = at(0, 0.0, 0.0, 0.0);
    const auto n = at(1, 10.0, 10.0, 90.0);
    const auto [theta, psi] = angles(m, n, 1e-6);
    CHECK(theta == doctest::Approx(-45.0));
    CHECK(psi == doctest::Approx(-45.0));
}

TEST_CASE("angles wraps the head-on case to +180") {
    const auto m = at(0, 0.0, 0.0, 0.0);
    const auto n = at(1, 10.0, 0.0, 180.0);
    const auto [theta, psi] = angles(m, n, 1e-6);
    CHECK(theta == doctest::Approx(0.0));
    CHECK(psi == doctest::Approx(180.0));
}

TEST_CASE("angles on a shared circular arc satisfy theta equals psi") {
    // Components tangent to a common circle: each heading is perpendicular
    // to its radius. The chord halves the turn on both sides.
    const double R = 100.0;
    for (double step : {0.2, 0.5, 1.0}) {
        const double phi0 = 0.3, phi1 = phi0 + step;
        const auto m = at(0, R * std::cos(phi0), R * std::sin(phi0), 90.0 + to_degrees(phi0));
        const auto n = at(1, R * std::cos(phi1), R * std::sin(phi1), 90.0 + to_degrees(phi1));
        const auto [theta, psi] = angles(m, n, 1e-6);
        CHECK(theta == doctest::Approx(psi).epsilon(1e-9));
        CHECK(theta == doctest::Approx(-to_degrees(step) / 2.0));
    }
}

TEST_CASE("angles rejects undefined configurations") {
    const auto m = at(0, 0.0, 0.0, 0.0);
    const auto still = make_component(1, 10.0, 0.0, 0.0, 0.0);
    const auto coincident = at(2, 0.0, 0.0, 45.0);
    CHECK_THROWS_AS(angles(m, still, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(angles(still, m, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(angles(m, coincident, 1e-6), std::invalid_argument);
}

TEST_CASE("ellipse_scale hits 1 exactly on the boundary semi-axes") {
    const auto m = at(0, 0.0, 0.0, 0.0);
    CHECK(ellipse_scale(m, at(1, 30.0, 0.0, 0.0), kEllipse, 1e-6) == doctest::Approx(1.0));
    CHECK(ellipse_scale(m, at(1, 0.0, 12.0, 0.0), kEllipse, 1e-6) == doctest::Approx(1.0));
    CHECK(ellipse_scale(m, at(1, -15.0, 0.0, 0.0), kEllipse, 1e-6) == doctest::Approx(1.0));
    CHECK(ellipse_scale(m, at(1, 0.0, -12.0, 0.0), kEllipse, 1e-6) == doctest::Approx(1.0));
    CHECK(ellipse_scale(m, at(1, 15.0, 0.0, 0.0), kEllipse, 1e-6) == doctest::Approx(0.5));
    // The frame rotates with m's heading.
    const auto mq = at(0, 0.0, 0.0, 90.0);
    CHECK(ellipse_scale(mq, at(1, 0.0, 30.0, 0.0), kEllipse, 1e-6) == doctest::Approx(1.0));
    CHECK(ellipse_scale(mq, at(1, 12.0, 0.0, 0.0), kEllipse, 1e-6) == doctest::Approx(1.0));
}

TEST_CASE("ellipse_scale is homogeneous in the displacement") {
    const auto m = at(0, 0.0, 0.0, 33.0);
    const auto base = at(1, 8.0, 3.0, 0.0);
    const double s1 = ellipse_scale(m, base, kEllipse, 1e-6);
    for (double lam : {0.5, 2.0, 3.7}) {
        const auto scaled = at(1, 8.0 * lam, 3.0 * lam, 0.0);
        CHECK(ellipse_scale(m, scaled, kEllipse, 1e-6) == doctest::Approx(lam * s1).epsilon(1e-12));
    }
}

TEST_CASE("proximity applies both angular gates") {
    const auto m = at(0, 0.0, 0.0, 0.0);
    const double inf = std::numeric_limits<double>::infinity();

    // Straight ahead, aligned flow: passes, Pr = S.
    const auto ahead = at(1, 15.0, 0.0, 0.0);
    CHECK(proximity(m, ahead, kEllipse, kAngles, 1e-6) == doctest::Approx(0.5));

    // Lateral sidestep with parallel flow: theta = -psi, gate |theta-psi| fails.
    const auto side = at(1, 8.0, 8.0, 0.0);
    CHECK(proximity(m, side, kEllipse, kAngles, 1e-6) == inf);

    // Sharp turn beyond th_theta even though theta == psi.
    const auto sharp = at(1, 10.0, -9.0, -2.0 * 41.99);
    const auto [theta, psi] = angles(m, sharp, 1e-6);
    CHECK(theta == doctest::Approx(psi).epsilon(1e-3));
    CHECK(std::fabs(theta) > 30.0);
    CHECK(proximity(m, sharp, kEllipse, kAngles, 1e-6) == inf);

    // Gentle arc-like turn passes both gates.
    const auto gentle = at(1, 14.0, -2.5, -2.0 * 10.12);
    CHECK(proximity(m, gentle, kEllipse, kAngles, 1e-6) < 1.0);

    // Undefined heading or coincident means encode as +infinity.
    const auto still = make_component(1, 5.0, 0.0, 0.0, 0.0);
    CHECK(proximity(m, still, kEllipse, kAngles, 1e-6) == inf);
    CHECK(proximity(m, at(1, 0.0, 0.0, 0.0), kEllipse, kAngles, 1e-6) == inf);
}

TEST_CASE("proximity is asymmetric in general") {
    // n sits forward of m: the forward semi-axis a1 applies and both gates pass.
    const auto m = at(0, 0.0, 0.0, 0.0);
    const auto n = at(1, 20.0, 0.0, 0.0);
    CHECK(proximity(m, n, kEllipse, kAngles, 1e-6) == doctest::Approx(20.0 / 30.0));
    // Looking back from n the displacement opposes n's flow (theta = 180), so
    // the theta gate rejects the reverse pair outright.
    CHECK(proximity(n, m, kEllipse, kAngles, 1e-6) ==
          std::numeric_limits<double>::infinity());
    // The raw ellipse scale carries the asymmetry: the backward half uses the
    // shorter semi-axis a2 = 15.
    CHECK(ellipse_scale(m, n, kEllipse, 1e-6) == doctest::Approx(20.0 / 30.0));
    CHECK(ellipse_scale(n, m, kEllipse, 1e-6) == doctest::Approx(20.0 / 15.0));
}

TEST_CASE("wedge_reachable admits lateral neighbors of similar flow") {
    // Side-by-side lanes: n displaced purely laterally, same flow direction.
    const auto m = at(0, 0.0, 0.0, 0.0);
    const auto lateral = at(1, 0.0, 10.0, 0.0);
    CHECK(wedge_reachable(m, lateral, kWedgeOn, 1e-6));

    // Too far.
    CHECK_FALSE(wedge_reachable(m, at(1, 0.0, 30.0, 0.0), kWedgeOn, 1e-6));
    // Dissimilar flow direction.
    CHECK_FALSE(wedge_reachable(m, at(1, 0.0, 10.0, 20.0), kWedgeOn, 1e-6));
    // Behind the sector half-angle (psi gate": 180 > 120).
    CHECK_FALSE(wedge_reachable(m, at(1, -10.0, 0.0, 0.0), kWedgeOn, 1e-6));
    // Radius zero disables the wedge entirely.
    CHECK_FALSE(wedge_reachable(m, lateral, kWedgeOff, 1e-6));
    // Undefined headings never wedge.
    const auto still = make_component(2, 0.0, 5.0, 0.0, 0.0);
    CHECK_FALSE(wedge_reachable(m, still, kWedgeOn, 1e-6));
}

TEST_CASE("build_reachability chains a straight lane with ellipse edges") {
    std::vector<MotionComponent> comps;
    for (int i = 0; i < 5; ++i) comps.push_back(at(i, 20.0 * i, 0.0, 0.0));
    const auto model = make_model(comps);
    const ReachabilityGraph g =
        build_reachability(model, kEllipse, kAngles, kWedgeOff, kNoUnblock);

    CHECK(g.node_count == 5);
    REQUIRE(g.edges.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(g.edges[i].src == i);
        CHECK(g.edges[i].dst == i + 1);
        CHECK(g.edges[i].kind == EdgeKind::ellipse);
        CHECK(g.edges[i].scale == doctest::Approx(20.0 / 30.0));
    }
    // Adjacency mirrors the edge list.
    CHECK(g.out_adj[0] == std::vector<int>{1});
    CHECK(g.in_adj[0].empty());
    CHECK(g.in_adj[4] == std::vector<int>{3});
    CHECK(g.out_adj[4].empty());
}

TEST_CASE("edges are canonically sorted by (src, dst, kind)") {
    // Two parallel close lanes with the wedge on produce a mixed edge set.
    std::vector<MotionComponent> comps;
    for (int i = 0; i < 3; ++i) comps.push_back(at(i, 20.0 * i, 0.0, 0.0));
    for (int i = 0; i < 3; ++i) comps.push_back(at(3 + i, 20.0 * i, 10.0, 0.0));
    const auto model = make_model(comps);
    const ReachabilityGraph g = build_reachability(model, kEllipse, kAngles, kWedgeOn, kNoUnblock);
    for (std::size_t e = 1; e < g.edges.size(); ++e) {
        const auto& a = g.edges[e - 1];
        const auto& b = g.edges[e];
        const bool ordered =
            a.src < b.src || (a.src == b.src && a.dst < b.dst) ||
            (a.src == b.src && a.dst == b.dst && static_cast<int>(a.kind) < static_cast<int>(b.kind));
        CHECK(ordered);
    }
    // Wedge edges appear in both directions between lateral neighbors.
    const auto has_edge = [&](int s, int d, EdgeKind k) {
        for (const auto& e : g.edges) {
            if (e.src == s && e.dst == d && e.kind == k) return true;
        }
        return false;
    };
    CHECK(has_edge(0, 3, EdgeKind::wedge));
    CHECK(has_edge(3, 0, EdgeKind::wedge));
}

TEST_CASE("unblocking bridges a gap only within the search distance") {
    // Two collinear chains separated by 36 = 1.2 * a1.
    std::vector<MotionComponent> comps;
    for (int i = 0; i < 3; ++i) comps.push_back(at(i, 10.0 * i, 0.0, 0.0));
    for (int i = 0; i < 3; ++i) comps.push_back(at(3 + i, 56.0 + 10.0 * i, 0.0, 0.0));
    const auto model = make_model(comps);

    const ReachabilityGraph blocked =
        build_reachability(model, kEllipse, kAngles, kWedgeOff, UnblockParams{1.0});
    const auto cross_blocked = [&] {
        for (const auto& e : blocked.edges) {
            if (e.src <= 2 && e.dst >= 3) return true;
        }
        return false;
    }();
    CHECK_FALSE(cross_blocked);

    const ReachabilityGraph bridged =
        build_reachability(model, kEllipse, kAngles, kWedgeOff, UnblockParams{2.0});
    int cross = 0;
    for (const auto& e : bridged.edges) {
        if (e.src <= 2 && e.dst >= 3) {
            ++cross;
            CHECK(e.src == 2);  // the chain tail is the out-degree-0 node
            CHECK(e.dst == 3);  // its nearest candidate by Pr
            CHECK(e.scale == doctest::Approx(36.0 / 30.0));
            const bool unblock_kind =
                e.kind == EdgeKind::unblock_out || e.kind == EdgeKind::unblock_in;
            CHECK(unblock_kind);
        }
    }
    // The out-rule (for node 2) and the in-rule (for node 3) pick the same
    // pair; exactly one bridging edge must survive deduplication.
    CHECK(cross == 1);
}

TEST_CASE("unblocking leaves satisfied nodes alone") {
    // A complete chain: only the global tail and head have degree 0, and no
    // candidate lies within reach, so no unblock edges appear.
    std::vector<MotionComponent> comps;
    for (int i = 0; i < 4; ++i) comps.push_back(at(i, 25.0 * i, 0.0, 0.0));
    const auto model = make_model(comps);
    const ReachabilityGraph g =
        build_reachability(model, kEllipse, kAngles, kWedgeOff, UnblockParams{2.0});
    for (const auto& e : g.edges) CHECK(e.kind == EdgeKind::ellipse);
}

TEST_CASE("build_reachability is worker-invariant") {
    std::vector<MotionComponent> comps;
    for (int i = 0; i < 40; ++i) {
        comps.push_back(at(i, 23.0 * (i % 10), 14.0 * (i / 10), (i % 7) * 11.0));
    }
    const auto model = make_model(comps);
    const ReachabilityGraph a = build_reachability(model, kEllipse, kAngles, kWedgeOn,
                                                   UnblockParams{2.0}, 1);
    const ReachabilityGraph b = build_reachability(model, kEllipse, kAngles, kWedgeOn,
                                                   UnblockParams{2.0}, 7);
    REQUIRE(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        CHECK(a.edges[i].src == b.edges[i].src);
        CHECK(a.edges[i].dst == b.edges[i].dst);
        CHECK(a.edges[i].kind == b.edges[i].kind);
        CHECK(a.edges[i].scale == b.edges[i].scale);
    }
}

TEST_CASE("edge_kind_name covers all kinds") {
    CHECK(std::string(edge_kind_name(EdgeKind::ellipse)) == "ellipse");
    CHECK(std::string(edge_kind_name(EdgeKind::wedge)) == "wedge");
    CHECK(std::string(edge_kind_name(EdgeKind::unblock_out)) == "unblock_out");
    CHECK(std::string(edge_kind_name(EdgeKind::unblock_in)) == "unblock_in");
}

TEST_CASE("save_edges_csv writes the documented schema") {
    testutil::TempDir dir("edges");
    std::vector<MotionComponent> comps{at(0, 0.0, 0.0, 0.0), at(1, 15.0, 0.0, 0.0)};
    const auto model = make_model(comps);
    const ReachabilityGraph g = build_reachability(model, kEllipse, kAngles, kWedgeOff, kNoUnblock);
    const std::string path = dir.file("edges.csv");
    save_edges_csv(g, path);
    const auto lines = testutil::split_lines(testutil::slurp(path));
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "src,dst,kind,S");
    CHECK(lines[1] == "0,1,ellipse,0.5");
}
