#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "trajmine/errors.hpp"
#include "trajmine/patterns.hpp"
#include "trajmine/rng.hpp"

using namespace trajmine;
using testutil::make_component;
using testutil::make_model;

namespace {

/// Graph assembled directly from an edge list, bypassing geometry.
ReachabilityGraph make_graph(int n, const std::vector<std::pair<int, int>>& edge_pairs) {
    ReachabilityGraph g;
    g.node_count = n;
    g.out_adj.resize(n);
    g.in_adj.resize(n);
    for (const auto& [s, d] : edge_pairs) {
        g.edges.push_back({s, d, EdgeKind::ellipse, 0.5});
        g.out_adj[s].push_back(d);
        g.in_adj[d].push_back(s);
    }
    for (auto& v : g.out_adj) std::sort(v.begin(), v.end());
    for (auto& v : g.in_adj) std::sort(v.begin(), v.end());
    return g;
}

}  // namespace

TEST_CASE("path_reachable_sets on a chain with a branch") {
    //      0 -> 1 -> 2 -> 3
    //                ^
    //           4 ---+
    const auto g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {4, 2}});
    const ReachSets sets = path_reachable_sets(g);
    CHECK(sets.descendants[0] == std::vector<int>{1, 2, 3});
    CHECK(sets.descendants[2] == std::vector<int>{3});
    CHECK(sets.descendants[3].empty());
    CHECK(sets.descendants[4] == std::vector<int>{2, 3});
    CHECK(sets.ancestors[0].empty());
    CHECK(sets.ancestors[2] == std::vector<int>{0, 1, 4});
    CHECK(sets.ancestors[3] == std::vector<int>{0, 1, 2, 4});
}

TEST_CASE("a cycle makes a node its own descendant") {
    const auto g = make_graph(3, {{0, 1}, {1, 0}, {1, 2}});
    const ReachSets sets = path_reachable_sets(g);
    CHECK(sets.descendants[0] == std::vector<int>{0, 1, 2});
    CHECK(sets.ancestors[0] == std::vector<int>{0, 1});
}

TEST_CASE("signatures match the transitive-closure oracle on random digraphs") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        Rng rng(derive_seed(31, seed));
        const int n = 4 + rng.uniform_int(12);
        std::vector<std::pair<int, int>> edges;
        for (int s = 0; s < n; ++s) {
            for (int d = 0; d < n; ++d) {
                if (s != d && rng.uniform() < 2.5 / n) edges.emplace_back(s, d);
            }
        }
        const auto g = make_graph(n, edges);
        const auto closure = oracle::transitive_closure(n, edges);

        const std::vector<Signature> sigs = all_signatures(g);
        REQUIRE(static_cast<int>(sigs.size()) == n);
        for (int i = 0; i < n; ++i) {
            // Oracle members: forward closure, plus nodes whose closure
            // holds i (ancestors), plus i itself.
            std::set<int> want(closure[i].begin(), closure[i].end());
            for (int j = 0; j < n; ++j) {
                if (closure[j].count(i)) want.insert(j);
            }
            want.insert(i);
            const std::vector<int> expect(want.begin(), want.end());
            CHECK(sigs[i].owner == i);
            CHECK(sigs[i].members == expect);
        }
    }
}

TEST_CASE("signature rejects invalid node ids") {
    const auto g = make_graph(3, {{0, 1}});
    CHECK_THROWS_AS(signature(g, -1), std::out_of_range);
    CHECK_THROWS_AS(signature(g, 3), std::out_of_range);
    CHECK(signature(g, 2).members == std::vector<int>{2});
}

TEST_CASE("component_weights penalize dense neighborhoods") {
    // Two far groups: a tight pair and a singleton. sigma = 20, w0 = 1.
    auto model = make_model({make_component(0, 0.0, 0.0, 1.0, 0.0),
                             make_component(1, 10.0, 0.0, 1.0, 0.0),
                             make_component(2, 500.0, 0.0, 1.0, 0.0)});
    const WeightParams wp{1.0, 20.0};
    const std::vector<double> w = component_weights(model, wp);
    REQUIRE(w.size() == 3);

    const double near = std::exp(-100.0 / 800.0);  // |rho| = 10
    CHECK(w[0] == doctest::Approx(1.0 / (1.0 + 1.0 + near)));
    CHECK(w[1] == doctest::Approx(w[0]));
    // The singleton sees only its self term.
    CHECK(w[2] == doctest::Approx(0.5).epsilon(1e-9));
    // Denser neighborhoods weigh less.
    CHECK(w[0] < w[2]);
}

TEST_CASE("component_weights validates parameters") {
    auto model = make_model({make_component(0, 0.0, 0.0, 1.0, 0.0)});
    CHECK_THROWS_AS(component_weights(model, WeightParams{0.0, 20.0}), ConfigError);
    CHECK_THROWS_AS(component_weights(model, WeightParams{1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(component_weights(model, WeightParams{1.0, -3.0}), ConfigError);
}

TEST_CASE("weight ordering inverts kernel-density ordering on random layouts") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(derive_seed(37, seed));
        const int k = 5 + rng.uniform_int(26);
        std::vector<MotionComponent> comps;
        for (int i = 0; i < k; ++i) {
            comps.push_back(make_component(i, rng.uniform(0.0, 200.0), rng.uniform(0.0, 200.0),
                                           rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)));
        }
        const WeightParams wp{0.5 + rng.uniform(0.0, 2.0), 5.0 + rng.uniform(0.0, 40.0)};
        const auto model = make_model(std::move(comps));
        const std::vector<double> w = component_weights(model, wp);
        REQUIRE(static_cast<int>(w.size()) == k);

        // Oracle: raw kernel-density sum per component, including the self term.
        std::vector<double> density(k, 0.0);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                const double dx = model.components[j].mu_x - model.components[i].mu_x;
                const double dy = model.components[j].mu_y - model.components[i].mu_y;
                density[i] += std::exp(-(dx * dx + dy * dy) / (2.0 * wp.sigma * wp.sigma));
            }
        }

        // Denser neighborhood <=> strictly smaller weight, for every pair.
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                if (density[i] > density[j] + 1e-12) {
                    CHECK(w[i] < w[j]);
                } else if (density[j] > density[i] + 1e-12) {
                    CHECK(w[j] < w[i]);
                } else {
                    CHECK(w[i] == doctest::Approx(w[j]).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("wjd fundamental values") {
    const std::vector<double> w{0.5, 0.25, 0.125, 0.0625};
    const Signature a{0, {0, 1, 2}};
    const Signature b{3, {1, 2, 3}};
    const Signature c{3, {3}};

    CHECK(wjd(a, a, w) == 0.0);
    CHECK(wjd(a, c, w) == 1.0);  // disjoint members
    // Intersection {1, 2} = 0.375, union {0..3} = 0.9375.
    CHECK(wjd(a, b, w) == doctest::Approx(1.0 - 0.375 / 0.9375));
    CHECK(wjd(a, b, w) == wjd(b, a, w));
}

TEST_CASE("wjd with uniform weights reduces to the unweighted Jaccard") {
    Rng rng(101);
    const std::vector<double> uniform(30, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<int> sa, sb;
        for (int i = 0; i < 30; ++i) {
            if (rng.uniform() < 0.3) sa.insert(i);
            if (rng.uniform() < 0.3) sb.insert(i);
        }
        if (sa.empty() || sb.empty()) continue;
        Signature a{*sa.begin(), {sa.begin(), sa.end()}};
        Signature b{*sb.begin(), {sb.begin(), sb.end()}};
        std::set<int> inter, uni(sa.begin(), sa.end());
        for (int i : sb) {
            if (sa.count(i)) inter.insert(i);
            uni.insert(i);
        }
        const double expect = 1.0 - static_cast<double>(inter.size()) / uni.size();
        CHECK(wjd(a, b, uniform) == doctest::Approx(expect).epsilon(1e-15));
        CHECK(wjd(a, b, uniform) >= 0.0);
        CHECK(wjd(a, b, uniform) <= 1.0);
    }
}

TEST_CASE("wjd rejects an empty union") {
    const std::vector<double> w{1.0};
    CHECK_THROWS_AS(wjd(Signature{0, {}}, Signature{0, {}}, w), std::invalid_argument);
}

TEST_CASE("threshold_components matches the single-linkage oracle") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Rng rng(derive_seed(57, seed));
        const int k = 2 + rng.uniform_int(11);
        std::vector<double> dist(static_cast<std::size_t>(k) * k, 0.0);
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const double d = rng.uniform();
                dist[static_cast<std::size_t>(i) * k + j] = d;
                dist[static_cast<std::size_t>(j) * k + i] = d;
            }
        }
        const double cutoff = rng.uniform(0.15, 0.85);
        CHECK(threshold_components(dist, k, cutoff) ==
              oracle::single_linkage_cutoff(dist, k, cutoff));
    }
}

TEST_CASE("threshold_components labels run from 0 by lowest member") {
    // 0 and 2 join; 1 stays alone.
    const double inf = 9.0;
    const std::vector<double> dist{0.0, inf, 0.1,  //
                                   inf, 0.0, inf,  //
                                   0.1, inf, 0.0};
    CHECK(threshold_components(dist, 3, 0.5) == std::vector<int>{0, 1, 0});
}

TEST_CASE("cluster groups chained components and labels flows") {
    // Two disconnected chains of 2 components each; 3 flows per component.
    auto model = make_model({make_component(0, 0.0, 0.0, 10.0, 0.0, 3),
                             make_component(1, 20.0, 0.0, 10.0, 0.0, 3),
                             make_component(2, 500.0, 500.0, 0.0, 10.0, 3),
                             make_component(3, 500.0, 520.0, 0.0, 10.0, 3)});
    const auto g = make_graph(4, {{0, 1}, {2, 3}});
    const PatternSet set = cluster(g, model, WeightParams{1.0, 20.0}, 0.3);

    REQUIRE(set.patterns.size() == 2);
    CHECK(set.patterns[0].component_ids == std::vector<int>{0, 1});
    CHECK(set.patterns[1].component_ids == std::vector<int>{2, 3});
    CHECK(set.patterns[0].flow_count == 6);
    CHECK(set.patterns[1].flow_count == 6);
    CHECK(set.patterns[0].mean_heading_deg == doctest::Approx(0.0));
    CHECK(set.patterns[1].mean_heading_deg == doctest::Approx(90.0));
    CHECK_FALSE(set.patterns[0].is_noise);

    CHECK(set.component_pattern == std::vector<int>{0, 0, 1, 1});
    REQUIRE(set.flow_labels.size() == 12);
    for (int f = 0; f < 6; ++f) CHECK(set.flow_labels[f] == 0);
    for (int f = 6; f < 12; ++f) CHECK(set.flow_labels[f] == 1);
}

TEST_CASE("mean heading averages on the circle") {
    // Headings 179 and -179 average to 180, not 0.
    auto model = make_model({make_component(0, 0.0, 0.0, -10.0, 0.17455, 1),
                             make_component(1, 20.0, 0.0, -10.0, -0.17455, 1)});
    const auto g = make_graph(2, {{0, 1}, {1, 0}});
    const PatternSet set = cluster(g, model, WeightParams{1.0, 20.0}, 0.9);
    REQUIRE(set.patterns.size() == 1);
    CHECK(testutil::circular_gap_deg(set.patterns[0].mean_heading_deg, 180.0) < 0.1);
    // Still inside the canonical wrap range.
    CHECK(set.patterns[0].mean_heading_deg > -180.0);
    CHECK(set.patterns[0].mean_heading_deg <= 180.0);
}

TEST_CASE("singleton patterns below the support threshold are tagged noise") {
    auto model = make_model({make_component(0, 0.0, 0.0, 10.0, 0.0, 8),
                             make_component(1, 20.0, 0.0, 10.0, 0.0, 8),
                             make_component(2, 700.0, 700.0, 10.0, 0.0, 1)});
    const auto g = make_graph(3, {{0, 1}});
    const PatternSet set = cluster(g, model, WeightParams{1.0, 20.0}, 0.3, 3.0);

    REQUIRE(set.patterns.size() == 2);
    CHECK_FALSE(set.patterns[0].is_noise);
    CHECK(set.patterns[1].component_ids == std::vector<int>{2});
    CHECK(set.patterns[1].is_noise);  // 1 flow < 3 required
    // Noise patterns are tagged, not deleted: their flows stay labeled.
    CHECK(set.flow_labels[16] == 1);

    // A multi-component pattern is never tagged noise, whatever its support.
    const PatternSet lax = cluster(g, model, WeightParams{1.0, 20.0}, 0.3, 100.0);
    CHECK_FALSE(lax.patterns[0].is_noise);
    CHECK(lax.patterns[1].is_noise);
}

TEST_CASE("cluster validates the cutoff") {
    auto model = make_model({make_component(0, 0.0, 0.0, 1.0, 0.0, 1)});
    const auto g = make_graph(1, {});
    CHECK_THROWS_AS(cluster(g, model, WeightParams{1.0, 20.0}, -0.1), ConfigError);
    CHECK_THROWS_AS(cluster(g, model, WeightParams{1.0, 20.0}, 1.5), ConfigError);
    CHECK(cluster(g, model, WeightParams{1.0, 20.0}, 0.0).patterns.size() == 1);
    CHECK(cluster(g, model, WeightParams{1.0, 20.0}, 1.0).patterns.size() == 1);
}

TEST_CASE("cluster is worker-invariant") {
    Rng rng(5);
    std::vector<MotionComponent> comps;
    for (int i = 0; i < 30; ++i) {
        comps.push_back(make_component(i, rng.uniform(0.0, 300.0), rng.uniform(0.0, 300.0),
                                       rng.normal(5.0, 1.0), rng.normal(0.0, 1.0), 2));
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 30; ++j) {
            if (i != j && rng.uniform() < 0.08) edges.emplace_back(i, j);
        }
    }
    auto model = make_model(comps);
    const auto g = make_graph(30, edges);
    const PatternSet a = cluster(g, model, WeightParams{1.0, 20.0}, 0.4, 0.0, 1);
    const PatternSet b = cluster(g, model, WeightParams{1.0, 20.0}, 0.4, 0.0, 6);
    CHECK(a.flow_labels == b.flow_labels);
    CHECK(a.component_pattern == b.component_pattern);
    REQUIRE(a.patterns.size() == b.patterns.size());
    for (std::size_t i = 0; i < a.patterns.size(); ++i) {
        CHECK(a.patterns[i].component_ids == b.patterns[i].component_ids);
        CHECK(a.patterns[i].mean_heading_deg == b.patterns[i].mean_heading_deg);
    }
}

TEST_CASE("pattern CSV dumps have the documented schemas") {
    testutil::TempDir dir("pat");
    auto model = make_model({make_component(0, 0.0, 0.0, 10.0, 0.0, 2),
                             make_component(1, 20.0, 0.0, 10.0, 0.0, 2)});
    const auto g = make_graph(2, {{0, 1}});
    const PatternSet set = cluster(g, model, WeightParams{1.0, 20.0}, 0.3);

    FlowField field;
    field.trajectory_ids = {"t0", "t1"};
    for (int i = 0; i < 4; ++i) {
        FlowVector f;
        f.trajectory = i / 2;
        f.point_index = i % 2;
        field.flows.push_back(f);
    }

    const std::string ppath = dir.file("patterns.csv");
    save_patterns_csv(set, model, field, ppath);
    const auto plines = testutil::split_lines(testutil::slurp(ppath));
    REQUIRE(plines.size() == 5);
    CHECK(plines[0] == "trajectory_id,point_index,component_id,pattern_id,is_noise");
    CHECK(plines[1] == "t0,0,0,0,0");
    CHECK(plines[4] == "t1,1,1,0,0");

    const std::string spath = dir.file("summary.csv");
    save_pattern_summary_csv(set, spath);
    const auto slines = testutil::split_lines(testutil::slurp(spath));
    REQUIRE(slines.size() == 2);
    CHECK(slines[0] == "pattern_id,component_count,flow_count,mean_heading_deg");
    CHECK(slines[1] == "0,2,4,0");
}
