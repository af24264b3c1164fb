#include "trajmine/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "trajmine/csv.hpp"
#include "trajmine/errors.hpp"
#include "trajmine/geometry.hpp"
#include "trajmine/rng.hpp"

namespace trajmine {

namespace {

constexpr double kSpan = 1000.0;  // scenarios live in [0, kSpan]^2
constexpr int kDenseSamples = 4096;

/// A parametric curve resampled to a dense polyline with cumulative arc
/// length, so points can be emitted at equal spacing along the path.
class SampledPath {
  public:
    explicit SampledPath(const std::function<Vec2(double)>& curve) {
        pts_.reserve(kDenseSamples + 1);
        cum_.reserve(kDenseSamples + 1);
        double total = 0.0;
        for (int i = 0; i <= kDenseSamples; ++i) {
            const Vec2 p = curve(static_cast<double>(i) / kDenseSamples);
            if (i > 0) total += (p - pts_.back()).norm();
            pts_.push_back(p);
            cum_.push_back(total);
        }
    }

    double length() const { return cum_.back(); }

    Vec2 at(double s, double* t_out) const {
        s = std::clamp(s, 0.0, length());
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        const std::size_t hi = std::min<std::size_t>(
            static_cast<std::size_t>(it - cum_.begin()), cum_.size() - 1);
        const std::size_t lo = hi > 0 ? hi - 1 : 0;
        const double seg = cum_[hi] - cum_[lo];
        const double frac = seg > 0.0 ? (s - cum_[lo]) / seg : 0.0;
        if (t_out != nullptr) {
            *t_out = (static_cast<double>(lo) + frac) / kDenseSamples;
        }
        return {pts_[lo].x + frac * (pts_[hi].x - pts_[lo].x),
                pts_[lo].y + frac * (pts_[hi].y - pts_[lo].y)};
    }

  private:
    std::vector<Vec2> pts_;
    std::vector<double> cum_;
};

struct Branch {
    std::string id_prefix;
    int count = 0;
    std::function<Vec2(double)> curve;                         // t in [0, 1]
    std::function<std::string(double, const Vec2&)> tag;  // (t, ideal point)
};

std::function<std::string(double, const Vec2&)> constant_tag(std::string tag) {
    return [tag = std::move(tag)](double, const Vec2&) { return tag; };
}

const double kDiag = kSpan * 1.4142135623730951;  // length of the main diagonal

Vec2 diagonal_lane(double t, double offset) {
    // Point at arc position s along direction (1,1)/sqrt(2), shifted by
    // offset along the left normal (-1,1)/sqrt(2); s runs over the part of
    // the lane inside the canvas.
    const double inv_sqrt2 = 0.7071067811865476;
    const double s = std::abs(offset) + t * (kDiag - 2.0 * std::abs(offset));
    return {(s - offset) * inv_sqrt2, (s + offset) * inv_sqrt2};
}

double merge_branch_y(double x, double sign) {
    // Cosine-eased approach from y = 500 +/- 500 down to the junction height.
    return 500.0 + sign * 250.0 * (1.0 + std::cos(kPi * x / 650.0));
}

std::vector<Branch> scenario_branches(const ScenarioSpec& spec) {
    const int per = spec.trajectories_per_branch;
    switch (spec.kind) {
        case ScenarioKind::straight_lane:
            return {{"lane", per, [](double t) { return diagonal_lane(t, 0.0); },
                     constant_tag("lane")}};
        case ScenarioKind::arc:
            // Quarter circle from (0, 0) to (1000, 1000) around (1000, 0).
            return {{"arc", per,
                     [](double t) {
                         const double phi = kPi - 0.5 * kPi * t;
                         return Vec2{kSpan + kSpan * std::cos(phi), kSpan * std::sin(phi)};
                     },
                     constant_tag("arc")}};
        case ScenarioKind::s_curve:
            return {{"s", per,
                     [](double t) {
                         return Vec2{kSpan * t, 500.0 + 500.0 * std::sin(2.0 * kPi * t)};
                     },
                     constant_tag("s_curve")}};
        case ScenarioKind::merge: {
            const auto tag_a = [](double, const Vec2& p) {
                return p.x < 650.0 ? std::string("branch_a") : std::string("shared");
            };
            const auto tag_b = [](double, const Vec2& p) {
                return p.x < 650.0 ? std::string("branch_b") : std::string("shared");
            };
            return {{"a", per,
                     [](double t) {
                         const double x = kSpan * t;
                         return Vec2{x, x < 650.0 ? merge_branch_y(x, 1.0) : 500.0};
                     },
                     tag_a},
                    {"b", per,
                     [](double t) {
                         const double x = kSpan * t;
                         return Vec2{x, x < 650.0 ? merge_branch_y(x, -1.0) : 500.0};
                     },
                     tag_b}};
        }
        case ScenarioKind::diverge: {
            // Shared stem to x = 350, then eased split to the corners.
            const auto fork_y = [](double x, double sign) {
                return 500.0 + sign * 250.0 * (1.0 - std::cos(kPi * (x - 350.0) / 650.0));
            };
            const auto tag_for = [](const char* branch) {
                return [branch](double, const Vec2& p) {
                    return p.x < 350.0 ? std::string("shared") : std::string(branch);
                };
            };
            return {{"a", per,
                     [fork_y](double t) {
                         const double x = kSpan * t;
                         return Vec2{x, x < 350.0 ? 500.0 : fork_y(x, 1.0)};
                     },
                     tag_for("branch_a")},
                    {"b", per,
                     [fork_y](double t) {
                         const double x = kSpan * t;
                         return Vec2{x, x < 350.0 ? 500.0 : fork_y(x, -1.0)};
                     },
                     tag_for("branch_b")}};
        }
        case ScenarioKind::opposite_overlap:
            return {{"fwd", per, [](double t) { return diagonal_lane(t, 0.0); },
                     constant_tag("forward")},
                    {"bwd", per, [](double t) { return diagonal_lane(1.0 - t, 0.0); },
                     constant_tag("backward")}};
        case ScenarioKind::parallel_lanes: {
            std::vector<Branch> branches;
            const double offsets[3] = {-20.0, 0.0, 20.0};
            for (int lane = 0; lane < 3; ++lane) {
                const double off = offsets[lane];
                branches.push_back({"lane" + std::to_string(lane), per,
                                    [off](double t) { return diagonal_lane(t, off); },
                                    constant_tag("lane_" + std::to_string(lane))});
            }
            return branches;
        }
        case ScenarioKind::dense_sparse:
            return {{"dense", per * 10,
                     [](double t) {
                         return Vec2{kSpan * t, 150.0};
                     },
                     constant_tag("dense")},
                    {"sparse", per,
                     [](double t) {
                         return Vec2{kSpan * t, 850.0};
                     },
                     constant_tag("sparse")}};
    }
    throw ConfigError("unknown scenario kind");
}

}  // namespace

std::pair<Dataset, GroundTruth> generate(const ScenarioSpec& spec) {
    if (spec.trajectories_per_branch <= 0) {
        throw ConfigError("trajectories_per_branch must be positive");
    }
    if (!(spec.step_length > 0.0)) throw ConfigError("step_length must be positive");
    if (!(spec.noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be non-negative");

    Dataset dataset;
    GroundTruth truth;
    Rng rng(spec.seed);

    for (const Branch& branch : scenario_branches(spec)) {
        const SampledPath path(branch.curve);
        for (int k = 0; k < branch.count; ++k) {
            Trajectory traj;
            traj.id = branch.id_prefix + "_" + std::to_string(k);
            std::vector<std::string> tags;
            const double phase = rng.uniform() * spec.step_length;
            int index = 0;
            for (double s = phase; s <= path.length(); s += spec.step_length) {
                double t = 0.0;
                const Vec2 ideal = path.at(s, &t);
                tags.push_back(branch.tag(t, ideal));
                TrajectoryPoint point;
                point.seq_index = index++;
                point.x = ideal.x + rng.normal() * spec.noise_sigma;
                point.y = ideal.y + rng.normal() * spec.noise_sigma;
                traj.points.push_back(point);
            }
            dataset.trajectories.push_back(std::move(traj));
            truth.tags.push_back(std::move(tags));
        }
    }
    return {std::move(dataset), std::move(truth)};
}

const char* scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::straight_lane: return "straight_lane";
        case ScenarioKind::arc: return "arc";
        case ScenarioKind::s_curve: return "s_curve";
        case ScenarioKind::merge: return "merge";
        case ScenarioKind::diverge: return "diverge";
        case ScenarioKind::opposite_overlap: return "opposite_overlap";
        case ScenarioKind::parallel_lanes: return "parallel_lanes";
        case ScenarioKind::dense_sparse: return "dense_sparse";
    }
    return "unknown";
}

ScenarioKind scenario_from_name(const std::string& name) {
    static const std::pair<const char*, ScenarioKind> table[] = {
        {"straight_lane", ScenarioKind::straight_lane},
        {"arc", ScenarioKind::arc},
        {"s_curve", ScenarioKind::s_curve},
        {"merge", ScenarioKind::merge},
        {"diverge", ScenarioKind::diverge},
        {"opposite_overlap", ScenarioKind::opposite_overlap},
        {"parallel_lanes", ScenarioKind::parallel_lanes},
        {"dense_sparse", ScenarioKind::dense_sparse},
    };
    for (const auto& [key, kind] : table) {
        if (name == key) return kind;
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

std::vector<std::string> scenario_names() {
    return {"straight_lane", "arc",              "s_curve",        "merge",
            "diverge",       "opposite_overlap", "parallel_lanes", "dense_sparse"};
}

void save_ground_truth_csv(const Dataset& dataset, const GroundTruth& truth,
                           const std::string& path) {
    std::string out = "trajectory_id,point_index,tag\n";
    for (std::size_t t = 0; t < dataset.trajectories.size(); ++t) {
        const Trajectory& traj = dataset.trajectories[t];
        for (std::size_t i = 0; i < traj.points.size(); ++i) {
            out += traj.id;
            out += ',';
            out += std::to_string(traj.points[i].seq_index);
            out += ',';
            out += truth.tags[t][i];
            out += '\n';
        }
    }
    write_text_file(path, out);
}

}  // namespace trajmine
