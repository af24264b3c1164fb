#include "trajmine/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "trajmine/csv.hpp"
#include "trajmine/errors.hpp"
#include "trajmine/geometry.hpp"
#include "trajmine/parallel.hpp"

namespace trajmine {

namespace {

// Iterative DFS from start over adj; returns visited nodes (excluding start
// unless revisited through a cycle), sorted ascending.
std::vector<int> reach_from(int start, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> stack;
    std::vector<int> out;
    for (int next : adj[start]) {
        if (!seen[next]) {
            seen[next] = 1;
            stack.push_back(next);
        }
    }
    while (!stack.empty()) {
        const int node = stack.back();
        stack.pop_back();
        out.push_back(node);
        for (int next : adj[node]) {
            if (!seen[next]) {
                seen[next] = 1;
                stack.push_back(next);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // keep the lowest id as root
        parent[b] = a;
    }
};

}  // namespace

ReachSets path_reachable_sets(const ReachabilityGraph& graph, int workers) {
    const std::size_t k = static_cast<std::size_t>(graph.node_count);
    ReachSets sets;
    sets.descendants.resize(k);
    sets.ancestors.resize(k);
    parallel_ranges(k, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            sets.descendants[i] = reach_from(static_cast<int>(i), graph.out_adj);
            sets.ancestors[i] = reach_from(static_cast<int>(i), graph.in_adj);
        }
    });
    return sets;
}

namespace {

Signature make_signature(int node, const std::vector<int>& descendants,
                         const std::vector<int>& ancestors) {
    Signature sig;
    sig.owner = node;
    sig.members.reserve(descendants.size() + ancestors.size() + 1);
    std::set_union(descendants.begin(), descendants.end(), ancestors.begin(), ancestors.end(),
                   std::back_inserter(sig.members));
    const auto pos = std::lower_bound(sig.members.begin(), sig.members.end(), node);
    if (pos == sig.members.end() || *pos != node) sig.members.insert(pos, node);
    return sig;
}

}  // namespace

Signature signature(const ReachabilityGraph& graph, int node) {
    if (node < 0 || node >= graph.node_count) {
        throw std::out_of_range("signature: invalid node id " + std::to_string(node));
    }
    return make_signature(node, reach_from(node, graph.out_adj), reach_from(node, graph.in_adj));
}

std::vector<Signature> all_signatures(const ReachabilityGraph& graph, int workers) {
    const std::size_t k = static_cast<std::size_t>(graph.node_count);
    std::vector<Signature> sigs(k);
    parallel_ranges(k, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const int node = static_cast<int>(i);
            sigs[i] = make_signature(node, reach_from(node, graph.out_adj),
                                     reach_from(node, graph.in_adj));
        }
    });
    return sigs;
}

std::vector<double> component_weights(const ComponentModel& model, const WeightParams& params) {
    if (!(params.w0 > 0.0)) throw ConfigError("w0 must be positive");
    if (!(params.sigma > 0.0)) throw ConfigError("sigma must be positive");
    const std::size_t k = model.components.size();
    const double inv_two_sigma_sq = 1.0 / (2.0 * params.sigma * params.sigma);
    std::vector<double> weights(k);
    for (std::size_t i = 0; i < k; ++i) {
        const MotionComponent& a = model.components[i];
        double density = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const MotionComponent& b = model.components[j];
            const double dx = b.mu_x - a.mu_x;
            const double dy = b.mu_y - a.mu_y;
            density += std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq);
        }
        weights[i] = 1.0 / (params.w0 + density);
    }
    return weights;
}

double wjd(const Signature& a, const Signature& b, const std::vector<double>& weights) {
    double inter = 0.0;
    double uni = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.members.size() && j < b.members.size()) {
        const int ma = a.members[i];
        const int mb = b.members[j];
        if (ma == mb) {
            inter += weights[ma];
            uni += weights[ma];
            ++i;
            ++j;
        } else if (ma < mb) {
            uni += weights[ma];
            ++i;
        } else {
            uni += weights[mb];
            ++j;
        }
    }
    for (; i < a.members.size(); ++i) uni += weights[a.members[i]];
    for (; j < b.members.size(); ++j) uni += weights[b.members[j]];
    if (uni == 0.0) throw std::invalid_argument("wjd: empty signature union");
    return 1.0 - inter / uni;
}

std::vector<int> threshold_components(const std::vector<double>& dist, int k, double cutoff) {
    UnionFind uf(k);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (dist[static_cast<std::size_t>(i) * k + j] < cutoff) uf.unite(i, j);
        }
    }
    std::vector<int> labels(k, -1);
    int next = 0;
    for (int i = 0; i < k; ++i) {
        const int root = uf.find(i);
        if (labels[root] < 0) labels[root] = next++;
        labels[i] = labels[root];
    }
    return labels;
}

PatternSet cluster(const ReachabilityGraph& graph, const ComponentModel& model,
                   const WeightParams& params, double cutoff, double min_support_flows,
                   int workers) {
    if (!(cutoff >= 0.0 && cutoff <= 1.0)) {
        throw ConfigError("cutoff must lie in [0, 1]");
    }
    const int k = graph.node_count;
    const std::vector<Signature> sigs = all_signatures(graph, workers);
    const std::vector<double> weights = component_weights(model, params);

    // Edge lists per row (j > i with wjd < cutoff), evaluated in parallel.
    std::vector<std::vector<int>> links(k);
    parallel_ranges(static_cast<std::size_t>(k), workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (int j = static_cast<int>(i) + 1; j < k; ++j) {
                if (wjd(sigs[i], sigs[j], weights) < cutoff) links[i].push_back(j);
            }
        }
    });

    UnionFind uf(k);
    for (int i = 0; i < k; ++i) {
        for (int j : links[i]) uf.unite(i, j);
    }

    PatternSet set;
    set.component_pattern.assign(k, -1);
    std::vector<int> root_pattern(k, -1);
    for (int i = 0; i < k; ++i) {
        const int root = uf.find(i);
        if (root_pattern[root] < 0) {
            root_pattern[root] = static_cast<int>(set.patterns.size());
            MotionPattern pattern;
            pattern.id = root_pattern[root];
            set.patterns.push_back(pattern);
        }
        const int pid = root_pattern[root];
        set.component_pattern[i] = pid;
        set.patterns[pid].component_ids.push_back(i);
        set.patterns[pid].flow_count += model.components[i].member_count;
    }

    for (MotionPattern& pattern : set.patterns) {
        double cx = 0.0;
        double cy = 0.0;
        for (int cid : pattern.component_ids) {
            const MotionComponent& c = model.components[cid];
            if (!c.has_heading(model.eps_speed)) continue;
            const double h = to_radians(c.heading_deg());
            cx += c.member_count * std::cos(h);
            cy += c.member_count * std::sin(h);
        }
        pattern.mean_heading_deg =
            (cx == 0.0 && cy == 0.0) ? 0.0 : wrap_deg(to_degrees(std::atan2(cy, cx)));
        pattern.is_noise =
            pattern.component_ids.size() == 1 && pattern.flow_count < min_support_flows;
    }

    set.flow_labels.resize(model.assignment.size());
    for (std::size_t f = 0; f < model.assignment.size(); ++f) {
        set.flow_labels[f] = set.component_pattern[model.assignment[f]];
    }
    return set;
}

void save_patterns_csv(const PatternSet& set, const ComponentModel& model, const FlowField& field,
                       const std::string& path) {
    std::string out = "trajectory_id,point_index,component_id,pattern_id,is_noise\n";
    for (std::size_t f = 0; f < field.flows.size(); ++f) {
        const FlowVector& fv = field.flows[f];
        const int pid = set.flow_labels[f];
        out += field.trajectory_id(fv);
        out += ',';
        out += std::to_string(fv.point_index);
        out += ',';
        out += std::to_string(model.assignment[f]);
        out += ',';
        out += std::to_string(pid);
        out += ',';
        out += set.patterns[pid].is_noise ? '1' : '0';
        out += '\n';
    }
    write_text_file(path, out);
}

void save_pattern_summary_csv(const PatternSet& set, const std::string& path) {
    std::string out = "pattern_id,component_count,flow_count,mean_heading_deg\n";
    for (const MotionPattern& p : set.patterns) {
        out += std::to_string(p.id);
        out += ',';
        out += std::to_string(p.component_ids.size());
        out += ',';
        out += std::to_string(p.flow_count);
        out += ',';
        out += format_double(p.mean_heading_deg);
        out += '\n';
    }
    write_text_file(path, out);
}

}  // namespace trajmine
