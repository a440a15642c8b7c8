#pragma once

// Bernoulli-type measures on the symbolic space of a periodic driving
// sequence, block-structured over the period: each length-L address block is
// one cell of the period's composed scheme, carrying that cell's weight. The
// local-dimension and sandwich checks mirror the measure-theoretic part of
// the dimension argument at finite horizon.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lgdim/coupling.hpp"
#include "lgdim/scheme.hpp"
#include "lgdim/sequences.hpp"
#include "lgdim/variational.hpp"

namespace lgdim {

class PeriodMeasure {
public:
    // weights indexed like the composed scheme of the period word
    static PeriodMeasure build(const SchemeFamily& family, std::vector<int> period_word,
                               CellWeights weights, std::size_t alphabet_cap = 20000) {
        ComposedWord cw = compose_word_traced(family, period_word, alphabet_cap);
        weights.check_shape(cw.scheme);
        return PeriodMeasure(family, std::move(cw), std::move(weights), {});
    }

    // weights = argmax of the composed scheme's maximized formula
    static PeriodMeasure optimal(const SchemeFamily& family, std::vector<int> period_word,
                                 const OptimizerOptions& opts = {}) {
        ComposedWord cw = compose_word_traced(family, period_word, opts.alphabet_cap);
        DimensionReport report = maximize_dimension(cw.scheme, opts);
        CellWeights w = report.argmax;
        return PeriodMeasure(family, std::move(cw), std::move(w), std::move(report));
    }

    const SchemeFamily& family() const noexcept { return family_; }
    const LGScheme& composed() const noexcept { return composed_.scheme; }
    const std::vector<int>& period_word() const noexcept { return composed_.word; }
    std::size_t period() const noexcept { return composed_.word.size(); }
    const CellWeights& weights() const noexcept { return weights_; }
    const DimensionReport& report() const {
        if (!has_report_) throw std::logic_error("measure was not built from an optimizer run");
        return report_;
    }
    SymbolSequence sequence() const { return SymbolSequence::periodic(composed_.word); }

    double log_cell_weight(std::size_t row, std::size_t cell) const {
        return log_p_.at(row).at(cell);
    }
    double log_row_marginal(std::size_t row) const { return log_q_.at(row); }

    // composed (row, cell) of one length-L block of full addresses
    std::pair<std::size_t, std::size_t> cell_of_block(const CellAddress* block) const {
        const auto it = cell_index_.find(encode_cells(block, period()));
        if (it == cell_index_.end())
            throw std::invalid_argument("address block does not name a composed cell");
        return it->second;
    }

    // composed row of one length-L block of row addresses
    std::size_t row_of_block(const CellAddress* block) const {
        const auto it = row_index_.find(encode_rows(block, period()));
        if (it == row_index_.end())
            throw std::invalid_argument("row block does not name a composed row");
        return it->second;
    }

    const AddressWord& path_of_cell(std::size_t row, std::size_t cell) const {
        return composed_.cell_path.at(row).at(cell);
    }

private:
    PeriodMeasure(const SchemeFamily& family, ComposedWord cw, CellWeights weights,
                  DimensionReport report)
        : family_(family), composed_(std::move(cw)), weights_(std::move(weights)) {
        if (report.restarts_used > 0) {
            report_ = std::move(report);
            has_report_ = true;
        }
        for (const auto& row : weights_.p) {
            std::vector<double> lp;
            double q = 0.0;
            for (double x : row) {
                lp.push_back(x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity());
                q += x;
            }
            log_p_.push_back(std::move(lp));
            log_q_.push_back(q > 0.0 ? std::log(q) : -std::numeric_limits<double>::infinity());
        }
        for (std::size_t r = 0; r < composed_.cell_path.size(); ++r) {
            row_index_[encode_rows(composed_.cell_path[r][0].data(), period())] = r;
            for (std::size_t j = 0; j < composed_.cell_path[r].size(); ++j)
                cell_index_[encode_cells(composed_.cell_path[r][j].data(), period())] = {r, j};
        }
    }

    static std::string encode_cells(const CellAddress* block, std::size_t n) {
        std::string key;
        key.reserve(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            key.push_back(static_cast<char>(block[i].row));
            key.push_back(static_cast<char>(block[i].col));
        }
        return key;
    }

    static std::string encode_rows(const CellAddress* block, std::size_t n) {
        std::string key;
        key.reserve(n);
        for (std::size_t i = 0; i < n; ++i) key.push_back(static_cast<char>(block[i].row));
        return key;
    }

    SchemeFamily family_;
    ComposedWord composed_;
    CellWeights weights_;
    DimensionReport report_;
    bool has_report_ = false;
    std::vector<std::vector<double>> log_p_;
    std::vector<double> log_q_;
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> cell_index_;
    std::unordered_map<std::string, std::size_t> row_index_;
};

// log mu(R) for a rectangle whose depths are multiples of the period: full
// blocks up to n1 contribute their cell weight, row blocks up to n2 their
// row marginal.
inline double rectangle_log_measure(const PeriodMeasure& mu, const Rectangle& rect) {
    rect.check();
    const std::size_t L = mu.period();
    if (rect.n1 % L != 0 || rect.n2 % L != 0)
        throw std::invalid_argument("rectangle depths must be multiples of the period " +
                                    std::to_string(L));
    const std::uint64_t t1 = rect.n1 / L, t2 = rect.n2 / L;
    double log_mu = 0.0;
    for (std::uint64_t t = 0; t < t2; ++t) {
        const CellAddress* block = rect.base.data() + t * L;
        if (t < t1) {
            const auto [r, j] = mu.cell_of_block(block);
            log_mu += mu.log_cell_weight(r, j);
        } else {
            log_mu += mu.log_row_marginal(mu.row_of_block(block));
        }
    }
    return log_mu;
}

// Blockwise i.i.d. sample from mu: block t is the provenance path of a
// composed cell drawn with the measure's weights. Counter-based, so extending
// the word re-derives earlier blocks identically.
inline AddressWord sample_measure_word(const PeriodMeasure& mu, std::uint64_t seed,
                                       std::uint64_t blocks) {
    const auto& w = mu.weights().p;
    AddressWord word;
    word.reserve(static_cast<std::size_t>(blocks) * mu.period());
    for (std::uint64_t t = 1; t <= blocks; ++t) {
        const double u = rng::unit_at(seed, t);
        double acc = 0.0;
        std::size_t row = w.size() - 1, cell = w.back().size() - 1;
        bool found = false;
        for (std::size_t r = 0; r < w.size() && !found; ++r) {
            for (std::size_t j = 0; j < w[r].size() && !found; ++j) {
                acc += w[r][j];
                if (u < acc) {
                    row = r;
                    cell = j;
                    found = true;
                }
            }
        }
        const AddressWord& path = mu.path_of_cell(row, cell);
        word.insert(word.end(), path.begin(), path.end());
    }
    return word;
}

struct LocalDimPoint {
    std::uint64_t n1 = 0, n2 = 0;
    double log_mu = 0.0;
    double log_d1 = 0.0;
    double ratio = 0.0;
};

struct LocalDimTrace {
    std::vector<LocalDimPoint> points;
    double final_ratio = 0.0;
};

// Samples a mu-word and follows log mu(R_k)/log d1(R_k) along approximate
// squares at the given depths (rounded to block multiples).
inline LocalDimTrace local_dimension_trace(const PeriodMeasure& mu, std::uint64_t seed,
                                           const std::vector<std::uint64_t>& depths) {
    if (depths.empty()) throw std::invalid_argument("depth ladder must be nonempty");
    const std::size_t L = mu.period();
    const SymbolSequence seq = mu.sequence();
    const std::uint64_t max_depth = *std::max_element(depths.begin(), depths.end());

    // heights shrink at least as fast as b_max per level, so this over-covers n2
    double b_max = 0.0;
    for (const auto& s : mu.family().schemes)
        for (const auto& r : s.rows()) b_max = std::max(b_max, r.b);
    double a_min = 1.0;
    for (const auto& s : mu.family().schemes)
        for (const auto& r : s.rows())
            for (const auto& c : r.cells) a_min = std::min(a_min, c.a);
    const double stretch = std::log(a_min) / std::log(b_max);
    auto blocks = static_cast<std::uint64_t>(std::ceil(
                      static_cast<double>(max_depth) * std::max(1.0, stretch) / static_cast<double>(L))) +
                  4;

    AddressWord word = sample_measure_word(mu, seed, blocks);
    LocalDimTrace trace;
    for (std::uint64_t depth : depths) {
        const std::uint64_t n1 = L * std::max<std::uint64_t>(1, depth / L);
        Rectangle sq = [&] {
            while (true) {
                try {
                    return approximate_square(mu.family(), seq, word, n1);
                } catch (const std::invalid_argument&) {
                    blocks *= 2;
                    word = sample_measure_word(mu, seed, blocks);
                }
            }
        }();
        const std::uint64_t n2 = std::max(n1, L * (sq.n2 / L));
        const Rectangle rect{word, n1, n2};
        LocalDimPoint pt;
        pt.n1 = n1;
        pt.n2 = n2;
        pt.log_mu = rectangle_log_measure(mu, rect);
        pt.log_d1 = rectangle_extents(mu.family(), seq, rect).log_d1;
        pt.ratio = pt.log_mu == 0.0 ? 0.0 : pt.log_mu / pt.log_d1;
        trace.points.push_back(pt);
    }
    trace.final_ratio = trace.points.back().ratio;
    return trace;
}

struct SandwichSeed {
    std::uint64_t seed = 0;
    std::uint64_t n1 = 0, n2 = 0;
    std::uint64_t r1 = 0, r2 = 0, s1 = 0, s2 = 0;
    double ratio_outer = 0.0;  // log mu(R) / log d1 of the outer bracketing rectangle
    double ratio_inner = 0.0;  // same against the inner bracketing rectangle
};

struct SandwichReport {
    double dimension = 0.0;  // the rational-frequency dimension of Q
    double delta = 0.0;
    double lo = 0.0, hi = 0.0;  // checked bracket
    double min_ratio = 0.0, max_ratio = 0.0, median_ratio = 0.0;
    bool within_bracket = false;
    std::vector<SandwichSeed> seeds;
};

// Transports mu_Q-sampled rectangles through tau and evaluates the local
// ratios against the widths of the bracketing rectangles on the omega side;
// nu_Q(tau R) = mu_Q(R) by transport. The bracket is
// [dim*(1 - khat*delta) - slack, dim*(1 + khat*delta) + slack], with khat and
// slack supplied by the caller (fitted elsewhere; they are diagnostics).
inline SandwichReport sandwich_check(const SchemeFamily& family, const SymbolSequence& omega,
                                     const FrequencyVector& Q, std::uint64_t depth, int seeds,
                                     double khat, double slack,
                                     const OptimizerOptions& opts = {}) {
    if (seeds < 1) throw std::invalid_argument("need at least one seed");
    const FrequencyVector P = omega.frequencies();
    const double delta = P.delta(Q);
    if (delta > 0.2)
        throw std::invalid_argument("frequency mismatch delta=" + std::to_string(delta) +
                                    " too large for the coupling regime (max 0.2)");

    const std::vector<int> qword = canonical_period_word(Q);
    PeriodMeasure mu = PeriodMeasure::optimal(family, qword, opts);
    const SymbolSequence omega_q = mu.sequence();
    const std::size_t L = mu.period();

    SandwichReport report;
    report.dimension = mu.report().value;
    report.delta = delta;
    report.lo = report.dimension * (1.0 - khat * delta) - slack;
    report.hi = report.dimension * (1.0 + khat * delta) + slack;

    std::vector<double> ratios;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = rng::substream(opts.seed, static_cast<std::uint64_t>(s) + 1);
        const std::uint64_t n1 = L * std::max<std::uint64_t>(1, depth / L);

        std::uint64_t blocks = 4 * std::max<std::uint64_t>(1, depth / L) + 4;
        AddressWord word = sample_measure_word(mu, seed, blocks);
        Rectangle sq;
        while (true) {
            try {
                sq = approximate_square(family, omega_q, word, n1);
                break;
            } catch (const std::invalid_argument&) {
                blocks *= 2;
                word = sample_measure_word(mu, seed, blocks);
            }
        }
        const std::uint64_t n2 = std::max(n1, L * (sq.n2 / L));
        const Rectangle rect{word, n1, n2};
        const double log_mu = rectangle_log_measure(mu, rect);

        const Permutation chi = chi_covering(omega, omega_q, n2);
        const ImageBounds bounds = image_bounds(chi, n1, n2);
        std::uint64_t needed = 0;
        for (std::uint64_t l = 1; l <= bounds.s2; ++l) needed = std::max(needed, chi.forward(l));
        while (word.size() < needed) {
            blocks *= 2;
            word = sample_measure_word(mu, seed, blocks);
        }
        const AddressWord image = tau_apply(chi, word, bounds.s2);

        SandwichSeed entry;
        entry.seed = seed;
        entry.n1 = n1;
        entry.n2 = n2;
        entry.r1 = bounds.r1;
        entry.r2 = bounds.r2;
        entry.s1 = bounds.s1;
        entry.s2 = bounds.s2;
        const double log_outer =
            rectangle_extents(family, omega, Rectangle{image, bounds.r1, bounds.r2}).log_d1;
        const double log_inner =
            rectangle_extents(family, omega, Rectangle{image, bounds.s1, bounds.s2}).log_d1;
        entry.ratio_outer = log_outer < 0.0 ? log_mu / log_outer : 0.0;
        entry.ratio_inner = log_inner < 0.0 ? log_mu / log_inner : 0.0;
        report.seeds.push_back(entry);
        ratios.push_back(entry.ratio_outer);
        ratios.push_back(entry.ratio_inner);
    }

    std::sort(ratios.begin(), ratios.end());
    report.min_ratio = ratios.front();
    report.max_ratio = ratios.back();
    report.median_ratio = ratios[ratios.size() / 2];
    report.within_bracket = report.min_ratio >= report.lo && report.max_ratio <= report.hi;
    return report;
}

}  // namespace lgdim
