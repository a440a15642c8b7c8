#pragma once

// Shared test fixtures: a seeded random-scheme generator, an independent
// straight-from-the-formula objective evaluation used as the
// finite-difference oracle, and expected values frozen from high-precision
// evaluation of the closed forms.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lgdim/rng.hpp"
#include "lgdim/scheme.hpp"
#include "lgdim/variational.hpp"

namespace testsupport {

// log_2(2^(log_3 2) + 1), to 16 digits
inline constexpr double kBm32Dim = 1.3496838201955776;
// objective of BM(3,2,{(0,0),(0,2),(1,1)}) at uniform weights
inline constexpr double kBm32UniformObjective = 1.3389156697687945;
// optimal row marginals of the same fixture
inline constexpr double kBm32Q0 = 0.6076219672421458;
inline constexpr double kLog2_3 = 1.5849625007211562;

inline lgdim::LGScheme full_square() {
    return lgdim::bedford_mcmullen(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}

inline lgdim::LGScheme bm32() {
    return lgdim::bedford_mcmullen(3, 2, {{0, 0}, {0, 2}, {1, 1}});
}

inline lgdim::LGScheme single_map() {
    lgdim::SchemeDescription d;
    d.rows.push_back({0.5, 0.2, {{0.25, 0.1}}});
    return lgdim::validate_scheme(d);
}

// Split [0,1] vertically into rows with random gaps, each row horizontally
// into cells with a <= b; retries until validation passes.
inline lgdim::LGScheme random_scheme(std::uint64_t seed, int max_rows = 3, int max_cells = 3) {
    lgdim::rng::Stream st(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        lgdim::SchemeDescription desc;
        const int rows = 1 + static_cast<int>(st.next_index(static_cast<std::size_t>(max_rows)));
        double dpos = 0.0;
        bool ok = true;
        for (int i = 0; i < rows && ok; ++i) {
            const double slot = (1.0 - dpos) / (rows - i);
            const double b = std::max(0.02, slot * st.next_in(0.35, 0.9));
            const double gap = (slot - b) * st.next_unit();
            lgdim::SchemeRow row;
            row.b = b;
            row.d = dpos + gap;
            const int cells = 1 + static_cast<int>(st.next_index(static_cast<std::size_t>(max_cells)));
            double cpos = 0.0;
            for (int j = 0; j < cells; ++j) {
                const double cslot = (1.0 - cpos) / (cells - j);
                double a = std::max(0.02, cslot * st.next_in(0.3, 0.85));
                a = std::min(a, b);
                if (cpos + a > 1.0) {
                    ok = false;
                    break;
                }
                const double cgap = (cslot - a) * st.next_unit();
                row.cells.push_back({a, cpos + cgap});
                cpos = row.cells.back().c + a;
            }
            if (!ok) break;
            desc.rows.push_back(row);
            dpos = row.d + b;
        }
        if (!ok) continue;
        try {
            return lgdim::validate_scheme(desc);
        } catch (const lgdim::ValidationError&) {
            continue;
        }
    }
    throw std::runtime_error("random scheme generation failed");
}

// Independent objective evaluation: straight nested-loop transcription of the
// dimension formula, used as the oracle for gradient finite differences.
// Accepts any positive vector (finite differences step off the simplex).
inline double objective_oracle(const lgdim::LGScheme& scheme,
                               const std::vector<std::vector<double>>& p) {
    double num1 = 0.0, den1 = 0.0, num2 = 0.0, den2 = 0.0;
    for (std::size_t i = 0; i < scheme.row_count(); ++i) {
        double q = 0.0;
        for (std::size_t j = 0; j < scheme.rows()[i].cells.size(); ++j) {
            const double pij = p[i][j];
            if (pij > 0.0) num1 += pij * std::log(pij);
            den1 += pij * std::log(scheme.rows()[i].cells[j].a);
            q += pij;
        }
        if (q > 0.0) num2 += q * std::log(q);
        den2 += q * std::log(scheme.rows()[i].b);
    }
    return num1 / den1 + num2 * (1.0 / den2 - 1.0 / den1);
}

// central finite differences of the oracle, step 1e-6
inline std::vector<std::vector<double>> fd_gradient(const lgdim::LGScheme& scheme,
                                                    std::vector<std::vector<double>> p,
                                                    double h = 1e-6) {
    std::vector<std::vector<double>> g = p;
    for (auto& row : g)
        for (auto& x : row) x = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < p[i].size(); ++j) {
            const double orig = p[i][j];
            p[i][j] = orig + h;
            const double up = objective_oracle(scheme, p);
            p[i][j] = orig - h;
            const double dn = objective_oracle(scheme, p);
            p[i][j] = orig;
            g[i][j] = (up - dn) / (2.0 * h);
        }
    }
    return g;
}

// random interior simplex point, mixed toward uniform to stay away from the
// boundary (finite differences need room)
inline lgdim::CellWeights random_interior(const lgdim::LGScheme& scheme, std::uint64_t seed) {
    lgdim::rng::Stream st(seed);
    auto flat = lgdim::rng::dirichlet_uniform(st, scheme.alphabet_size());
    const double u = 1.0 / static_cast<double>(flat.size());
    for (auto& x : flat) x = 0.9 * x + 0.1 * u;
    return lgdim::CellWeights::from_flat(scheme, flat);
}

}  // namespace testsupport
