#include "trajmine/change_detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "trajmine/components.hpp"
#include "trajmine/csv.hpp"
#include "trajmine/parallel.hpp"

namespace trajmine {

namespace {

constexpr double kLogFloor = -700.0;
constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)
constexpr int kDim = 4;

// Cholesky factorization of a 4x4 symmetric positive-definite matrix
// (row-major). Returns false if a pivot is non-positive.
bool cholesky4(const std::array<double, 16>& a, std::array<double, 16>& l) {
    l.fill(0.0);
    for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a[i * kDim + j];
            for (int t = 0; t < j; ++t) sum -= l[i * kDim + t] * l[j * kDim + t];
            if (i == j) {
                if (sum <= 0.0) return false;
                l[i * kDim + i] = std::sqrt(sum);
            } else {
                l[i * kDim + j] = sum / l[j * kDim + j];
            }
        }
    }
    return true;
}

// Squared Mahalanobis norm |L^-1 d|^2 via forward substitution.
double mahalanobis_sq(const std::array<double, 16>& l, const std::array<double, 4>& d) {
    std::array<double, 4> y{};
    for (int i = 0; i < kDim; ++i) {
        double sum = d[i];
        for (int t = 0; t < i; ++t) sum -= l[i * kDim + t] * y[t];
        y[i] = sum / l[i * kDim + i];
    }
    return y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
}

double log_det_from_chol(const std::array<double, 16>& l) {
    double s = 0.0;
    for (int i = 0; i < kDim; ++i) s += std::log(l[i * kDim + i]);
    return 2.0 * s;
}

// Adds the ridge and refreshes the Cholesky factor and normalization.
void finalize_component(GaussianComponent& c) {
    const double trace = c.cov[0] + c.cov[5] + c.cov[10] + c.cov[15];
    const double ridge = std::max(1e-6 * trace / kDim, 1e-12);
    for (int i = 0; i < kDim; ++i) c.cov[i * kDim + i] += ridge;
    if (!cholesky4(c.cov, c.chol)) {
        // Extremely degenerate scatter; escalate the ridge until it factors.
        double extra = std::max(ridge, 1e-9);
        while (true) {
            for (int i = 0; i < kDim; ++i) c.cov[i * kDim + i] += extra;
            if (cholesky4(c.cov, c.chol)) break;
            extra *= 10.0;
        }
    }
    c.log_norm = -0.5 * (kDim * kLogTwoPi + log_det_from_chol(c.chol));
}

double log_gaussian(const GaussianComponent& c, const std::array<double, 4>& x) {
    std::array<double, 4> d;
    for (int i = 0; i < kDim; ++i) d[i] = x[i] - c.mean[i];
    return c.log_norm - 0.5 * mahalanobis_sq(c.chol, d);
}

}  // namespace

double PatternDensity::log_pdf(const std::array<double, 4>& x) const {
    double best = -std::numeric_limits<double>::infinity();
    std::array<double, 16> terms{};  // enough for typical G; grown below if needed
    std::vector<double> heap_terms;
    double* buf = terms.data();
    if (comps.size() > terms.size()) {
        heap_terms.resize(comps.size());
        buf = heap_terms.data();
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const double t = comps[c].weight > 0.0
                             ? std::log(comps[c].weight) + log_gaussian(comps[c], x)
                             : -std::numeric_limits<double>::infinity();
        buf[c] = t;
        best = std::max(best, t);
    }
    if (!std::isfinite(best)) return -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c) sum += std::exp(buf[c] - best);
    return best + std::log(sum);
}

std::array<double, 4> PatternDensity::sample(Rng& rng) const {
    const double u = rng.uniform();
    std::size_t pick = comps.size() - 1;
    double acc = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        acc += comps[c].weight;
        if (u < acc) {
            pick = c;
            break;
        }
    }
    const GaussianComponent& g = comps[pick];
    std::array<double, 4> z;
    for (int i = 0; i < kDim; ++i) z[i] = rng.normal();
    std::array<double, 4> x = g.mean;
    for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j <= i; ++j) x[i] += g.chol[i * kDim + j] * z[j];
    }
    return x;
}

PatternDensity fit_density(const std::vector<std::array<double, 4>>& samples, int g,
                           std::uint64_t seed, int pattern_id) {
    const std::size_t n = samples.size();
    if (n == 0) throw std::invalid_argument("fit_density: empty pattern");
    if (g < 1) throw std::invalid_argument("fit_density: G must be positive");
    const int g_eff = std::min(g, std::max(1, static_cast<int>(n / 5)));

    PatternDensity density;
    density.pattern_id = pattern_id;

    // Kmeans initialization on the raw 4-D samples (beta = 1 makes the
    // clustering metric plain Euclidean over all four coordinates).
    FlowField init_field;
    init_field.flows.reserve(n);
    for (const auto& s : samples) {
        FlowVector f;
        f.x = s[0];
        f.y = s[1];
        f.u = s[2];
        f.v = s[3];
        init_field.flows.push_back(f);
    }
    KmeansParams kp;
    kp.k = g_eff;
    kp.beta = 1.0;
    kp.max_iters = 50;
    kp.tol = 1e-9;
    kp.seed = derive_seed(seed, 0x6d69, 1);
    const ComponentModel init = fit_components(init_field, kp);

    density.comps.resize(g_eff);
    {
        std::vector<double> resp_hard(n);
        for (int c = 0; c < g_eff; ++c) {
            GaussianComponent& gc = density.comps[c];
            gc.weight = static_cast<double>(init.components[c].member_count) / n;
            gc.mean = {init.components[c].mu_x, init.components[c].mu_y,
                       init.components[c].mu_u, init.components[c].mu_v};
            gc.cov.fill(0.0);
            for (std::size_t s = 0; s < n; ++s) {
                if (init.assignment[s] != c) continue;
                std::array<double, 4> d;
                for (int i = 0; i < kDim; ++i) d[i] = samples[s][i] - gc.mean[i];
                for (int i = 0; i < kDim; ++i) {
                    for (int j = 0; j <= i; ++j) {
                        gc.cov[i * kDim + j] += d[i] * d[j];
                    }
                }
            }
            const double inv = 1.0 / std::max(1, init.components[c].member_count);
            for (int i = 0; i < kDim; ++i) {
                for (int j = 0; j <= i; ++j) {
                    gc.cov[i * kDim + j] *= inv;
                    gc.cov[j * kDim + i] = gc.cov[i * kDim + j];
                }
            }
            finalize_component(gc);
        }
    }

    constexpr int kMaxEmIters = 100;
    constexpr double kTol = 1e-7;
    std::vector<double> resp(n * static_cast<std::size_t>(g_eff));
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < kMaxEmIters; ++iter) {
        // E step: responsibilities and mean log-likelihood.
        double ll = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < g_eff; ++c) {
                const GaussianComponent& gc = density.comps[c];
                const double t = gc.weight > 0.0
                                     ? std::log(gc.weight) + log_gaussian(gc, samples[s])
                                     : -std::numeric_limits<double>::infinity();
                resp[s * g_eff + c] = t;
                best = std::max(best, t);
            }
            double norm = 0.0;
            for (int c = 0; c < g_eff; ++c) {
                const double e = std::exp(resp[s * g_eff + c] - best);
                resp[s * g_eff + c] = e;
                norm += e;
            }
            for (int c = 0; c < g_eff; ++c) resp[s * g_eff + c] /= norm;
            ll += best + std::log(norm);
        }
        ll /= static_cast<double>(n);
        density.loglik_history.push_back(ll);
        density.iterations = iter + 1;
        if (iter > 0 && ll - prev_ll < kTol * (1.0 + std::abs(ll))) {
            density.converged = true;
            break;
        }
        prev_ll = ll;

        // M step.
        for (int c = 0; c < g_eff; ++c) {
            GaussianComponent& gc = density.comps[c];
            double mass = 0.0;
            std::array<double, 4> mean{};
            for (std::size_t s = 0; s < n; ++s) {
                const double r = resp[s * g_eff + c];
                mass += r;
                for (int i = 0; i < kDim; ++i) mean[i] += r * samples[s][i];
            }
            if (mass <= 0.0) {
                gc.weight = 0.0;
                continue;
            }
            for (int i = 0; i < kDim; ++i) mean[i] /= mass;
            std::array<double, 16> cov{};
            for (std::size_t s = 0; s < n; ++s) {
                const double r = resp[s * g_eff + c];
                std::array<double, 4> d;
                for (int i = 0; i < kDim; ++i) d[i] = samples[s][i] - mean[i];
                for (int i = 0; i < kDim; ++i) {
                    for (int j = 0; j <= i; ++j) cov[i * kDim + j] += r * d[i] * d[j];
                }
            }
            for (int i = 0; i < kDim; ++i) {
                for (int j = 0; j <= i; ++j) {
                    cov[i * kDim + j] /= mass;
                    cov[j * kDim + i] = cov[i * kDim + j];
                }
            }
            gc.weight = mass / static_cast<double>(n);
            gc.mean = mean;
            gc.cov = cov;
            finalize_component(gc);
        }
    }
    return density;
}

PatternDensity fit_density(const std::vector<FlowVector>& flows, int g, std::uint64_t seed,
                           int pattern_id) {
    std::vector<std::array<double, 4>> samples;
    samples.reserve(flows.size());
    for (const FlowVector& f : flows) samples.push_back({f.x, f.y, f.u, f.v});
    return fit_density(samples, g, seed, pattern_id);
}

double estimate_kl(const PatternDensity& p, const PatternDensity& q, int n_samples,
                   std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("estimate_kl: n_samples must be >= 1");
    Rng rng(seed);
    double sum = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        const std::array<double, 4> x = p.sample(rng);
        const double lp = std::max(p.log_pdf(x), kLogFloor);
        const double lq = std::max(q.log_pdf(x), kLogFloor);
        sum += lp - lq;
    }
    return sum / static_cast<double>(n_samples);
}

ChangeReport diff(const std::vector<PatternDensity>& epoch1,
                  const std::vector<PatternDensity>& epoch2, double kl_threshold, int n_samples,
                  std::uint64_t seed, int workers) {
    ChangeReport report;
    report.rows = epoch1.size();
    report.cols = epoch2.size();
    report.kl_matrix.assign(report.rows * report.cols, 0.0);

    parallel_ranges(report.rows, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = 0; j < report.cols; ++j) {
                const std::uint64_t pair_seed =
                    derive_seed(seed, static_cast<std::uint64_t>(i) + 1,
                                static_cast<std::uint64_t>(j) + 1);
                report.kl_matrix[i * report.cols + j] =
                    estimate_kl(epoch1[i], epoch2[j], n_samples, pair_seed);
            }
        }
    });

    report.epoch1.resize(report.rows);
    for (std::size_t i = 0; i < report.rows; ++i) {
        PatternMatch& m = report.epoch1[i];
        m.pattern = epoch1[i].pattern_id;
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < report.cols; ++j) {
            const double v = report.kl_matrix[i * report.cols + j];
            if (v < best) {
                best = v;
                arg = j;
            }
        }
        if (report.cols > 0 && best < kl_threshold) {
            m.matched_to = epoch2[arg].pattern_id;
            m.kl = best;
        } else {
            report.disappeared.push_back(m.pattern);
        }
    }

    report.epoch2.resize(report.cols);
    for (std::size_t j = 0; j < report.cols; ++j) {
        PatternMatch& m = report.epoch2[j];
        m.pattern = epoch2[j].pattern_id;
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t i = 0; i < report.rows; ++i) {
            const double v = report.kl_matrix[i * report.cols + j];
            if (v < best) {
                best = v;
                arg = i;
            }
        }
        if (report.rows > 0 && best < kl_threshold) {
            m.matched_to = epoch1[arg].pattern_id;
            m.kl = best;
            report.matches.push_back({epoch1[arg].pattern_id, m.pattern, best});
        } else {
            report.emerged.push_back(m.pattern);
        }
    }
    return report;
}

void save_change_report_csv(const ChangeReport& report, const std::string& path) {
    std::string out = "pattern_id,epoch,status,matched_to,kl\n";
    const auto write_side = [&out](const std::vector<PatternMatch>& side, int epoch,
                                   const char* unmatched_status) {
        for (const PatternMatch& m : side) {
            out += std::to_string(m.pattern);
            out += ',';
            out += std::to_string(epoch);
            out += ',';
            if (m.matched_to >= 0) {
                out += "matched,";
                out += std::to_string(m.matched_to);
                out += ',';
                out += format_double(m.kl);
            } else {
                out += unmatched_status;
                out += ",,";
            }
            out += '\n';
        }
    };
    write_side(report.epoch1, 1, "disappeared");
    write_side(report.epoch2, 2, "emerged");
    write_text_file(path, out);
}

}  // namespace trajmine
