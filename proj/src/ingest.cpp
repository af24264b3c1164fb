#include "trajmine/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "trajmine/csv.hpp"
#include "trajmine/errors.hpp"

namespace trajmine {

namespace {

std::string at_line(std::size_t line_no, const std::string& msg) {
    return "line " + std::to_string(line_no) + ": " + msg;
}

}  // namespace

Dataset load_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw DataError(path + ": empty file, expected header trajectory_id,seq,x,y");

    auto header = split_csv(lines[0]);
    if (header.size() != 4 || header[0] != "trajectory_id" || header[1] != "seq" ||
        header[2] != "x" || header[3] != "y") {
        throw DataError(path + ": " + at_line(1, "expected header trajectory_id,seq,x,y"));
    }

    struct RawPoint {
        long seq;
        double x, y;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<RawPoint>> by_id;
    std::unordered_map<std::string, std::set<long>> seen_seq;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = split_csv(lines[i]);
        if (fields.size() != 4) throw DataError(path + ": " + at_line(i + 1, "expected 4 fields"));
        const std::string& id = fields[0];
        if (id.empty()) throw DataError(path + ": " + at_line(i + 1, "empty trajectory_id"));
        auto seq = parse_non_negative(fields[1]);
        if (!seq) throw DataError(path + ": " + at_line(i + 1, "bad seq value '" + fields[1] + "'"));
        auto x = parse_finite(fields[2]);
        auto y = parse_finite(fields[3]);
        if (!x || !y) throw DataError(path + ": " + at_line(i + 1, "non-numeric coordinate"));
        if (!seen_seq[id].insert(*seq).second) {
            throw DataError(path + ": " + at_line(i + 1, "duplicate (id, seq) = (" + id + ", " +
                                                             std::to_string(*seq) + ")"));
        }
        if (by_id.find(id) == by_id.end()) order.push_back(id);
        by_id[id].push_back({*seq, *x, *y});
    }

    Dataset ds;
    for (const auto& id : order) {
        auto& raw = by_id[id];
        std::sort(raw.begin(), raw.end(),
                  [](const RawPoint& a, const RawPoint& b) { return a.seq < b.seq; });
        Trajectory t;
        t.id = id;
        t.points.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            t.points.push_back({static_cast<int>(i), raw[i].x, raw[i].y});
        }
        ds.trajectories.push_back(std::move(t));
    }
    return ds;
}

void save_csv(const Dataset& dataset, const std::string& path) {
    std::ostringstream out;
    out << "trajectory_id,seq,x,y\n";
    for (const auto& t : dataset.trajectories) {
        for (const auto& p : t.points) {
            out << t.id << ',' << p.seq_index << ',' << format_double(p.x) << ','
                << format_double(p.y) << '\n';
        }
    }
    write_text_file(path, out.str());
}

namespace {

// "28.0N" -> +28.0, "94.8W" -> -94.8
std::optional<double> parse_hemisphere(const std::string& token, char pos, char neg) {
    if (token.size() < 2) return std::nullopt;
    char h = token.back();
    if (h != pos && h != neg) return std::nullopt;
    auto v = parse_finite(token.substr(0, token.size() - 1));
    if (!v) return std::nullopt;
    return h == neg ? -*v : *v;
}

}  // namespace

Dataset load_hurdat2(const std::string& path) {
    auto lines = read_lines(path);
    Dataset ds;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (lines[i].empty()) {
            ++i;
            continue;
        }
        auto fields = split_csv(lines[i]);
        if (fields.size() < 3) throw DataError(path + ": " + at_line(i + 1, "expected storm header"));
        auto count = parse_non_negative(fields[2]);
        if (!count) {
            throw DataError(path + ": " + at_line(i + 1, "bad record count '" + fields[2] + "'"));
        }
        Trajectory t;
        t.id = fields[0];
        std::size_t header_line = i;
        ++i;
        for (long r = 0; r < *count; ++r, ++i) {
            if (i >= lines.size()) {
                throw DataError(path + ": " + at_line(header_line + 1, "header declares " +
                                                                           std::to_string(*count) +
                                                                           " records but file ends early"));
            }
            auto rec = split_csv(lines[i]);
            if (rec.size() < 6) throw DataError(path + ": " + at_line(i + 1, "short data record"));
            const std::string& date = rec[0];
            if (date.size() != 8 || !parse_non_negative(date)) {
                throw DataError(path + ": " + at_line(i + 1, "bad date '" + date + "'"));
            }
            int month = std::stoi(date.substr(4, 2));
            if (month < 1 || month > 12) {
                throw DataError(path + ": " + at_line(i + 1, "bad month in date '" + date + "'"));
            }
            auto lat = parse_hemisphere(rec[4], 'N', 'S');
            auto lon = parse_hemisphere(rec[5], 'E', 'W');
            if (!lat || !lon) {
                throw DataError(path + ": " + at_line(i + 1, "unparsable coordinate token"));
            }
            t.points.push_back({static_cast<int>(r), *lon, *lat});
            t.months.push_back(month);
        }
        ds.trajectories.push_back(std::move(t));
    }
    return ds;
}

std::map<int, Dataset> split_by_month(const Dataset& dataset) {
    for (const auto& t : dataset.trajectories) {
        if (t.months.size() != t.points.size()) {
            throw DataError("trajectory '" + t.id + "' lacks month tags");
        }
    }
    std::map<int, Dataset> out;
    for (const auto& t : dataset.trajectories) {
        // Maximal runs of equal month become separate trajectories.
        std::size_t run_start = 0;
        int run_index = 0;
        std::size_t n = t.points.size();
        for (std::size_t i = 1; i <= n; ++i) {
            if (i == n || t.months[i] != t.months[run_start]) {
                Trajectory piece;
                piece.id = (run_start == 0 && i == n) ? t.id
                                                      : t.id + "#" + std::to_string(run_index);
                for (std::size_t j = run_start; j < i; ++j) {
                    piece.points.push_back({static_cast<int>(j - run_start), t.points[j].x,
                                            t.points[j].y});
                    piece.months.push_back(t.months[j]);
                }
                out[t.months[run_start]].trajectories.push_back(std::move(piece));
                run_start = i;
                ++run_index;
            }
        }
    }
    for (auto& [month, ds] : out) ds.normalization = dataset.normalization;
    return out;
}

Dataset normalize(const Dataset& dataset) {
    if (dataset.total_points() == 0) throw DataError("normalize: empty dataset");

    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = max_x;
    for (const auto& t : dataset.trajectories) {
        for (const auto& p : t.points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    NormalizationRecord rec;
    rec.x_offset = min_x;
    rec.x_scale = max_x > min_x ? 1000.0 / (max_x - min_x) : 0.0;
    rec.y_offset = min_y;
    rec.y_scale = max_y > min_y ? 1000.0 / (max_y - min_y) : 0.0;

    Dataset out;
    out.normalization = rec;
    out.trajectories.reserve(dataset.trajectories.size());
    for (const auto& t : dataset.trajectories) {
        Trajectory nt;
        nt.id = t.id;
        nt.months = t.months;
        nt.points.reserve(t.points.size());
        for (const auto& p : t.points) nt.points.push_back(rec.apply(p));
        out.trajectories.push_back(std::move(nt));
    }
    return out;
}

Dataset prune_degenerate(const Dataset& dataset) {
    Dataset out;
    out.normalization = dataset.normalization;
    for (const auto& t : dataset.trajectories) {
        if (t.points.size() < 2) continue;
        bool all_same = std::all_of(t.points.begin(), t.points.end(), [&](const TrajectoryPoint& p) {
            return p.x == t.points[0].x && p.y == t.points[0].y;
        });
        if (all_same) continue;
        out.trajectories.push_back(t);
    }
    return out;
}

}  // namespace trajmine
