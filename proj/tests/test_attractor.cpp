#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "lgdim/attractor.hpp"
#include "support.hpp"

using namespace lgdim;
using namespace testsupport;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("lgdim_test_") + name;
}

}  // namespace

TEST_CASE("a single map contracts onto its fixed point") {
    SchemeFamily fam{{single_map()}};
    auto seq = SymbolSequence::periodic({1});
    // fixed point of x -> 0.25x + 0.1, y -> 0.5y + 0.2
    const double fx = 0.1 / (1.0 - 0.25), fy = 0.2 / (1.0 - 0.5);
    for (std::uint64_t depth : {1ull, 4ull, 12ull}) {
        auto cloud = generate_points(fam, seq, depth, PointCloud::Mode::exhaustive);
        REQUIRE(cloud.points.size() == 1);
        const double dist = std::hypot(cloud.points[0][0] - fx, cloud.points[0][1] - fy);
        CHECK(dist <= std::pow(0.25, depth) + std::pow(0.5, depth));
    }
}

TEST_CASE("full square at depth 3 enumerates the dyadic grid corners") {
    SchemeFamily fam{{full_square()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 3,
                                 PointCloud::Mode::exhaustive);
    REQUIRE(cloud.points.size() == 64);
    std::set<std::pair<double, double>> uniq;
    for (const auto& pt : cloud.points) uniq.insert({pt[0], pt[1]});
    CHECK(uniq.size() == 64);
    for (const auto& [x, y] : uniq) {
        CHECK(x * 8.0 == std::floor(x * 8.0));  // exactly k/8
        CHECK(y * 8.0 == std::floor(y * 8.0));
    }
}

TEST_CASE("points stay inside the depth-1 images of the unit square") {
    SchemeFamily fam{{bm32()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 8,
                                 PointCloud::Mode::exhaustive);
    REQUIRE(cloud.points.size() == 6561);
    const LGScheme& s = fam.schemes[0];
    for (const auto& pt : cloud.points) {
        CHECK(pt[0] >= -1e-12);
        CHECK(pt[0] <= 1.0 + 1e-12);
        bool inside = false;
        for (const auto& row : s.rows()) {
            if (pt[1] < row.d - 1e-12 || pt[1] > row.d + row.b + 1e-12) continue;
            for (const auto& cell : row.cells)
                if (pt[0] >= cell.c - 1e-12 && pt[0] <= cell.c + cell.a + 1e-12) inside = true;
        }
        CHECK(inside);
    }
}

TEST_CASE("exhaustive enumeration refuses to blow past the cap") {
    SchemeFamily fam{{full_square()}};
    CHECK_THROWS_AS(
        generate_points(fam, SymbolSequence::periodic({1}), 11, PointCloud::Mode::exhaustive),
        CapExceededError);  // 4^11 > 1e6
}

TEST_CASE("sampled clouds are deterministic in the seed") {
    SchemeFamily fam{{bm32(), full_square()}};
    auto seq = SymbolSequence::periodic({1, 2});
    auto c1 = generate_points(fam, seq, 20, PointCloud::Mode::sampled, 500, 99);
    auto c2 = generate_points(fam, seq, 20, PointCloud::Mode::sampled, 500, 99);
    REQUIRE(c1.points.size() == c2.points.size());
    for (std::size_t i = 0; i < c1.points.size(); ++i) {
        CHECK(c1.points[i][0] == c2.points[i][0]);
        CHECK(c1.points[i][1] == c2.points[i][1]);
    }
    auto c3 = generate_points(fam, seq, 20, PointCloud::Mode::sampled, 500, 100);
    bool differs = false;
    for (std::size_t i = 0; i < c1.points.size() && !differs; ++i)
        differs = c1.points[i] != c3.points[i];
    CHECK(differs);
}

TEST_CASE("per-scheme sampling weights steer the cloud") {
    SchemeFamily fam{{bm32()}};
    auto seq = SymbolSequence::periodic({1});
    // all mass on cell (0,0): the sample collapses to the fixed point of that map
    auto cloud = generate_points(fam, seq, 30, PointCloud::Mode::sampled, 50, 7,
                                 {{1.0, 0.0, 0.0}});
    for (const auto& pt : cloud.points) {
        CHECK(pt[0] == Catch::Approx(0.0).margin(1e-9));
        CHECK(pt[1] == Catch::Approx(0.0).margin(1e-9));
    }
    CHECK_THROWS_AS(
        generate_points(fam, seq, 5, PointCloud::Mode::sampled, 10, 7, {{0.5, 0.4, 0.0}}),
        std::invalid_argument);  // does not sum to 1
}

TEST_CASE("box counts are monotone in the scale exponent") {
    SchemeFamily fam{{bm32()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 8,
                                 PointCloud::Mode::exhaustive);
    auto res = box_count_estimate(cloud, 1, 6);
    for (std::size_t i = 1; i < res.scales.size(); ++i)
        CHECK(res.scales[i].count >= res.scales[i - 1].count);
}

TEST_CASE("diagonal carpet box dimension is 1") {
    SchemeFamily fam{{bedford_mcmullen(2, 2, {{0, 0}, {1, 1}})}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 12,
                                 PointCloud::Mode::exhaustive);
    auto res = box_count_estimate(cloud, 2, 8);
    CHECK(res.estimate == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("full square box dimension is 2") {
    SchemeFamily fam{{full_square()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 9,
                                 PointCloud::Mode::exhaustive);
    auto res = box_count_estimate(cloud, 1, 8);
    CHECK(res.estimate == Catch::Approx(2.0).margin(0.05));
}

TEST_CASE("k_max shrinks when the cloud cannot resolve the boxes") {
    SchemeFamily fam{{full_square()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 5,
                                 PointCloud::Mode::exhaustive);  // 1024 points
    auto res = box_count_estimate(cloud, 1, 12);
    CHECK(res.k_max_used < 12);
    // 10 points per box at the top scale
    CHECK(cloud.points.size() >= 10 * res.scales.back().count);
    CHECK_THROWS_AS(box_count_estimate(cloud, 3, 4), std::invalid_argument);
}

TEST_CASE("pgm header and payload") {
    SchemeFamily fam{{full_square()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 8,
                                 PointCloud::Mode::exhaustive);
    const std::string path = temp_path("fullsquare.pgm");
    render_pgm(cloud, 256, path);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(w == 256);
    CHECK(h == 256);
    CHECK(maxval == 255);
    in.get();  // single whitespace after header
    std::vector<unsigned char> pixels(256 * 256);
    in.read(reinterpret_cast<char*>(pixels.data()), 256 * 256);
    REQUIRE(in.gcount() == 256 * 256);
    // 4^8 points tile every pixel of the 256-grid
    for (unsigned char p : pixels) CHECK(p > 0);
    std::remove(path.c_str());
}

TEST_CASE("a single-map cloud lights exactly one pixel") {
    SchemeFamily fam{{single_map()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 20,
                                 PointCloud::Mode::exhaustive);
    const std::string path = temp_path("single.pgm");
    render_pgm(cloud, 64, path);
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int w, h, maxval;
    in >> magic >> w >> h >> maxval;
    in.get();
    std::vector<unsigned char> pixels(64 * 64);
    in.read(reinterpret_cast<char*>(pixels.data()), 64 * 64);
    int lit = 0;
    for (unsigned char p : pixels) lit += p > 0;
    CHECK(lit == 1);
    std::remove(path.c_str());
}

TEST_CASE("render validates the resolution range") {
    SchemeFamily fam{{single_map()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 2,
                                 PointCloud::Mode::exhaustive);
    CHECK_THROWS_AS(render_pgm(cloud, 32, "x.pgm"), std::invalid_argument);
    CHECK_THROWS_AS(render_pgm(cloud, 10000, "x.pgm"), std::invalid_argument);
}

TEST_CASE("csv round trip preserves coordinates") {
    SchemeFamily fam{{bm32()}};
    auto cloud = generate_points(fam, SymbolSequence::periodic({1}), 4,
                                 PointCloud::Mode::exhaustive);
    const std::string path = temp_path("cloud.csv");
    write_csv(cloud, path);
    auto back = read_csv(path);
    REQUIRE(back.points.size() == cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        CHECK(back.points[i][0] == cloud.points[i][0]);
        CHECK(back.points[i][1] == cloud.points[i][1]);
    }
    std::remove(path.c_str());
}
