#pragma once

// Finite-depth attractor point clouds for a sequence of schemes, a
// box-counting slope estimate (a sanity bound: the box dimension never lies
// below the Hausdorff dimension here), and raster/CSV output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "lgdim/coupling.hpp"
#include "lgdim/errors.hpp"
#include "lgdim/rng.hpp"
#include "lgdim/scheme.hpp"
#include "lgdim/sequences.hpp"

namespace lgdim {

struct PointCloud {
    enum class Mode { exhaustive, sampled };
    std::vector<std::array<double, 2>> points;
    std::uint64_t depth = 0;
    Mode mode = Mode::exhaustive;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
};

inline constexpr double kExhaustiveCap = 1e6;

namespace detail {

// cell picked by flat index within the scheme active at one level
inline CellAddress unflatten_cell(const LGScheme& s, std::size_t flat) {
    std::size_t row = 0;
    while (flat >= s.rows()[row].cells.size()) {
        flat -= s.rows()[row].cells.size();
        ++row;
    }
    return {static_cast<int>(row), static_cast<int>(flat)};
}

}  // namespace detail

// Depth-n images of the base point (0,0): the running affine composition
// accumulated left to right, so a word's point is (c_total, d_total).
// Sampled mode draws the cell at every level independently, uniformly or
// with the supplied per-scheme weight vectors over that scheme's cells.
inline PointCloud generate_points(const SchemeFamily& family, const SymbolSequence& seq,
                                  std::uint64_t depth, PointCloud::Mode mode,
                                  std::uint64_t samples = 0, std::uint64_t seed = 0,
                                  const std::vector<std::vector<double>>& scheme_weights = {}) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (!scheme_weights.empty()) {
        if (scheme_weights.size() != family.size())
            throw std::invalid_argument("need one weight vector per scheme");
        for (std::size_t k = 0; k < family.size(); ++k) {
            const auto& w = scheme_weights[k];
            if (w.size() != family.schemes[k].alphabet_size())
                throw std::invalid_argument("weight vector length must match scheme alphabet");
            double sum = 0.0;
            for (double x : w) {
                if (x < 0.0) throw std::invalid_argument("weights must be nonnegative");
                sum += x;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");
        }
    }

    PointCloud cloud;
    cloud.depth = depth;
    cloud.mode = mode;

    if (mode == PointCloud::Mode::exhaustive) {
        double projected = 1.0;
        for (std::uint64_t l = 1; l <= depth; ++l)
            projected *= static_cast<double>(scheme_at(family, seq, l).alphabet_size());
        if (projected > kExhaustiveCap)
            throw CapExceededError("exhaustive enumeration beyond the 1e6 word cap", projected);
        cloud.points.reserve(static_cast<std::size_t>(projected));

        std::function<void(std::uint64_t, double, double, double, double)> rec =
            [&](std::uint64_t level, double ax, double cx, double by, double dy) {
                if (level == depth) {
                    cloud.points.push_back({cx, dy});
                    return;
                }
                const LGScheme& s = scheme_at(family, seq, level + 1);
                for (const auto& r : s.rows())
                    for (const auto& c : r.cells)
                        rec(level + 1, ax * c.a, cx + ax * c.c, by * r.b, dy + by * r.d);
            };
        rec(0, 1.0, 0.0, 1.0, 0.0);
    } else {
        if (samples < 1) throw std::invalid_argument("sampled mode needs a positive sample count");
        cloud.sample_count = samples;
        cloud.seed = seed;
        cloud.points.reserve(static_cast<std::size_t>(samples));
        for (std::uint64_t sidx = 0; sidx < samples; ++sidx) {
            double ax = 1.0, cx = 0.0, by = 1.0, dy = 0.0;
            for (std::uint64_t l = 1; l <= depth; ++l) {
                const LGScheme& s = scheme_at(family, seq, l);
                const double u = rng::unit_at(seed, sidx * depth + l);
                std::size_t flat;
                if (scheme_weights.empty()) {
                    flat = std::min(
                        static_cast<std::size_t>(u * static_cast<double>(s.alphabet_size())),
                        s.alphabet_size() - 1);
                } else {
                    const auto& w = scheme_weights[static_cast<std::size_t>(seq.at(l) - 1)];
                    double acc = 0.0;
                    flat = w.size() - 1;
                    for (std::size_t i = 0; i < w.size(); ++i) {
                        acc += w[i];
                        if (u < acc) {
                            flat = i;
                            break;
                        }
                    }
                }
                const auto [row, col] = detail::unflatten_cell(s, flat);
                const SchemeRow& r = s.rows()[static_cast<std::size_t>(row)];
                const AffineCell& c = r.cells[static_cast<std::size_t>(col)];
                cx += ax * c.c;
                ax *= c.a;
                dy += by * r.d;
                by *= r.b;
            }
            cloud.points.push_back({cx, dy});
        }
    }
    return cloud;
}

struct BoxCountScale {
    int k = 0;                // boxes of side 2^-k
    std::uint64_t count = 0;  // occupied boxes
    double residual = 0.0;    // fit residual of log count
};

struct BoxCountResult {
    double estimate = 0.0;
    int k_min = 0;
    int k_max_used = 0;
    std::vector<BoxCountScale> scales;
};

// Least-squares slope of log N(2^-k) against k log 2. The top scale is
// shrunk until at least 10 points per occupied box remain, so the cloud can
// resolve the boxes it is asked to count.
inline BoxCountResult box_count_estimate(const PointCloud& cloud, int k_min, int k_max) {
    if (cloud.points.empty()) throw std::invalid_argument("point cloud is empty");
    if (k_min < 0 || k_min >= k_max || k_max > 30)
        throw std::invalid_argument("need 0 <= k_min < k_max <= 30");

    auto occupied = [&](int k) {
        const double scale = std::pow(2.0, k);
        std::unordered_set<std::uint64_t> boxes;
        for (const auto& pt : cloud.points) {
            const auto bx = static_cast<std::uint64_t>(
                std::min(scale - 1.0, std::max(0.0, std::floor(pt[0] * scale))));
            const auto by = static_cast<std::uint64_t>(
                std::min(scale - 1.0, std::max(0.0, std::floor(pt[1] * scale))));
            boxes.insert((bx << 32) | by);
        }
        return static_cast<std::uint64_t>(boxes.size());
    };

    int k_top = k_max;
    while (k_top > k_min && cloud.points.size() < 10 * occupied(k_top)) --k_top;
    if (k_top - k_min + 1 < 3)
        throw std::invalid_argument("fewer than 3 usable scales after shrinking k_max");

    BoxCountResult res;
    res.k_min = k_min;
    res.k_max_used = k_top;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = k_top - k_min + 1;
    for (int k = k_min; k <= k_top; ++k) {
        const std::uint64_t cnt = occupied(k);
        res.scales.push_back({k, cnt, 0.0});
        const double x = k * std::log(2.0);
        const double y = std::log(static_cast<double>(cnt));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    for (auto& sc : res.scales) {
        const double fit = intercept + slope * sc.k * std::log(2.0);
        sc.residual = std::log(static_cast<double>(sc.count)) - fit;
    }
    res.estimate = slope;
    return res;
}

// Binary PGM (P5, maxval 255), hit counts log-scaled to gray, origin at the
// bottom-left (rows are emitted top-down, so y is flipped).
inline void render_pgm(const PointCloud& cloud, int resolution, const std::string& path) {
    if (resolution < 64 || resolution > 8192)
        throw std::invalid_argument("resolution must lie in [64, 8192]");
    const auto res = static_cast<std::size_t>(resolution);
    std::vector<std::uint32_t> hits(res * res, 0);
    for (const auto& pt : cloud.points) {
        const auto px = static_cast<std::size_t>(std::min(
            static_cast<double>(resolution - 1), std::max(0.0, std::floor(pt[0] * resolution))));
        const auto py = static_cast<std::size_t>(std::min(
            static_cast<double>(resolution - 1), std::max(0.0, std::floor(pt[1] * resolution))));
        hits[(res - 1 - py) * res + px]++;
    }
    std::uint32_t max_hits = 0;
    for (auto h : hits) max_hits = std::max(max_hits, h);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("render: cannot open " + path);
    out << "P5\n" << resolution << " " << resolution << "\n255\n";
    const double denom = max_hits > 0 ? std::log1p(static_cast<double>(max_hits)) : 1.0;
    std::vector<unsigned char> row(res);
    for (std::size_t y = 0; y < res; ++y) {
        for (std::size_t x = 0; x < res; ++x) {
            const std::uint32_t h = hits[y * res + x];
            row[x] = h == 0 ? 0
                            : static_cast<unsigned char>(std::lround(
                                  255.0 * std::log1p(static_cast<double>(h)) / denom));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(res));
    }
    if (!out) throw std::runtime_error("render: write failed for " + path);
}

inline void write_csv(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    out.precision(17);
    for (const auto& pt : cloud.points) out << pt[0] << "," << pt[1] << "\n";
    if (!out) throw std::runtime_error("csv: write failed for " + path);
}

inline PointCloud read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    PointCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("csv: missing comma at " + path + ":" + std::to_string(lineno));
        cloud.points.push_back(
            {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    return cloud;
}

}  // namespace lgdim
