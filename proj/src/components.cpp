#include "trajmine/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "trajmine/csv.hpp"
#include "trajmine/errors.hpp"
#include "trajmine/parallel.hpp"
#include "trajmine/rng.hpp"

namespace trajmine {

double eq1_distance(const std::array<double, 4>& p, const std::array<double, 4>& q, double beta) {
    const double dx = p[0] - q[0];
    const double dy = p[1] - q[1];
    const double du = p[2] - q[2];
    const double dv = p[3] - q[3];
    return std::sqrt(dx * dx + dy * dy + beta * (du * du + dv * dv));
}

double eq1_distance(const FlowVector& p, const FlowVector& q, double beta) {
    return eq1_distance(std::array<double, 4>{p.x, p.y, p.u, p.v},
                        std::array<double, 4>{q.x, q.y, q.u, q.v}, beta);
}

Vec2 displacement(const MotionComponent& m, const MotionComponent& n) {
    return {n.mu_x - m.mu_x, n.mu_y - m.mu_y};
}

namespace {

inline double dist_sq4(const double* p, const double* c) {
    double s = 0.0;
    for (int d = 0; d < 4; ++d) {
        const double t = p[d] - c[d];
        s += t * t;
    }
    return s;
}

// Kmeans++ seeding over the scaled samples.
std::vector<double> seed_centers(const std::vector<double>& pts, std::size_t n, int k, Rng& rng) {
    std::vector<double> centers(static_cast<std::size_t>(k) * 4);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());

    std::size_t first = rng.uniform_int(n);
    std::copy_n(&pts[first * 4], 4, &centers[0]);

    for (int c = 1; c < k; ++c) {
        const double* prev = &centers[static_cast<std::size_t>(c - 1) * 4];
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            best[i] = std::min(best[i], dist_sq4(&pts[i * 4], prev));
            total += best[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += best[i];
                if (acc > r && best[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (best[pick] == 0.0) {
                // Walked past the mass (rounding); take the last positive-weight point.
                for (std::size_t i = n; i-- > 0;) {
                    if (best[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every sample coincides with a chosen center; duplicates are
            // resolved later by empty-cluster repair.
            pick = rng.uniform_int(n);
        }
        std::copy_n(&pts[pick * 4], 4, &centers[static_cast<std::size_t>(c) * 4]);
    }
    return centers;
}

}  // namespace

ComponentModel fit_components(const FlowField& field, const KmeansParams& params,
                              double eps_speed, int workers) {
    const std::size_t n = field.flows.size();
    if (params.k <= 0) throw ConfigError("K must be positive, got " + std::to_string(params.k));
    if (static_cast<std::size_t>(params.k) > n) {
        throw ConfigError("K (" + std::to_string(params.k) + ") exceeds number of flow vectors (" +
                          std::to_string(n) + ")");
    }
    if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) {
        throw ConfigError("beta must be finite and non-negative");
    }
    if (params.max_iters <= 0) throw ConfigError("max_iters must be positive");
    if (!(params.tol >= 0.0)) throw ConfigError("tol must be non-negative");

    const int k = params.k;
    const double vel_scale = std::sqrt(params.beta);

    // Scaled 4-D samples: Euclidean distance here equals the weighted metric.
    std::vector<double> pts(n * 4);
    for (std::size_t i = 0; i < n; ++i) {
        const FlowVector& f = field.flows[i];
        pts[i * 4 + 0] = f.x;
        pts[i * 4 + 1] = f.y;
        pts[i * 4 + 2] = f.u * vel_scale;
        pts[i * 4 + 3] = f.v * vel_scale;
    }

    Rng rng(params.seed);
    std::vector<double> centers = seed_centers(pts, n, k, rng);

    ComponentModel model;
    model.params = params;
    model.eps_speed = eps_speed;

    std::vector<int> assignment(n, -1);
    std::vector<int> next(n, -1);
    std::vector<double> best(n, 0.0);
    std::vector<int> counts(k, 0);
    bool have_prev = false;

    for (int iter = 0; iter < params.max_iters; ++iter) {
        parallel_ranges(n, workers, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double* p = &pts[i * 4];
                int arg = 0;
                double bd = dist_sq4(p, &centers[0]);
                for (int c = 1; c < k; ++c) {
                    const double d = dist_sq4(p, &centers[static_cast<std::size_t>(c) * 4]);
                    if (d < bd) {  // strict: ties stay with the lowest id
                        bd = d;
                        arg = c;
                    }
                }
                next[i] = arg;
                best[i] = bd;
            }
        });

        double objective = 0.0;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            objective += best[i];
            ++counts[next[i]];
        }
        model.objective_history.push_back(objective);

        // Reseed each empty cluster to the point currently farthest from its
        // center (donor cluster must keep at least one member).
        bool repaired = false;
        for (int e = 0; e < k; ++e) {
            if (counts[e] > 0) continue;
            std::size_t donor = n;
            double far = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[next[i]] < 2) continue;
                if (best[i] > far) {
                    far = best[i];
                    donor = i;
                }
            }
            if (donor == n) break;  // unreachable while K <= n
            --counts[next[donor]];
            next[donor] = e;
            counts[e] = 1;
            std::copy_n(&pts[donor * 4], 4, &centers[static_cast<std::size_t>(e) * 4]);
            best[donor] = 0.0;
            repaired = true;
        }

        const bool exact_fixed_point = have_prev && !repaired && next == assignment;
        assignment.swap(next);
        have_prev = true;
        model.iterations = iter + 1;
        if (exact_fixed_point) {
            model.converged = true;
            break;
        }

        // Update step: fixed-order accumulation, independent of worker count.
        std::vector<double> sums(static_cast<std::size_t>(k) * 4, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double* s = &sums[static_cast<std::size_t>(assignment[i]) * 4];
            const double* p = &pts[i * 4];
            for (int d = 0; d < 4; ++d) s[d] += p[d];
        }
        double max_shift_sq = 0.0;
        for (int c = 0; c < k; ++c) {
            double* ctr = &centers[static_cast<std::size_t>(c) * 4];
            const double* s = &sums[static_cast<std::size_t>(c) * 4];
            const double inv = 1.0 / counts[c];
            double shift_sq = 0.0;
            for (int d = 0; d < 4; ++d) {
                const double nc = s[d] * inv;
                const double delta = nc - ctr[d];
                shift_sq += delta * delta;
                ctr[d] = nc;
            }
            max_shift_sq = std::max(max_shift_sq, shift_sq);
        }
        if (std::sqrt(max_shift_sq) < params.tol) {
            model.converged = true;
            break;
        }
    }

    // Report component means as exact arithmetic means of members in the
    // original (unscaled) space.
    std::vector<double> sums(static_cast<std::size_t>(k) * 4, 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const FlowVector& f = field.flows[i];
        double* s = &sums[static_cast<std::size_t>(assignment[i]) * 4];
        s[0] += f.x;
        s[1] += f.y;
        s[2] += f.u;
        s[3] += f.v;
        ++counts[assignment[i]];
    }
    model.components.resize(k);
    for (int c = 0; c < k; ++c) {
        MotionComponent& mc = model.components[c];
        mc.id = c;
        mc.member_count = counts[c];
        const double inv = counts[c] > 0 ? 1.0 / counts[c] : 0.0;
        const double* s = &sums[static_cast<std::size_t>(c) * 4];
        mc.mu_x = s[0] * inv;
        mc.mu_y = s[1] * inv;
        mc.mu_u = s[2] * inv;
        mc.mu_v = s[3] * inv;
    }
    model.assignment = std::move(assignment);
    return model;
}

void save_components_csv(const ComponentModel& model, const std::string& path) {
    std::string out = "id,mu_x,mu_y,mu_u,mu_v,member_count\n";
    for (const MotionComponent& c : model.components) {
        out += std::to_string(c.id);
        out += ',';
        out += format_double(c.mu_x);
        out += ',';
        out += format_double(c.mu_y);
        out += ',';
        out += format_double(c.mu_u);
        out += ',';
        out += format_double(c.mu_v);
        out += ',';
        out += std::to_string(c.member_count);
        out += '\n';
    }
    write_text_file(path, out);
}

}  // namespace trajmine
