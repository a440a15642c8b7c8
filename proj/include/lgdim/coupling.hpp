#pragma once

// Symbolic machinery coupling two driving sequences: rectangles and their
// extents, approximate squares, the appearance-matching permutation chi, the
// induced word bijection tau, image index bounds, the rectangle metric, and
// the finite-horizon exponent report that quantifies how tau distorts widths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgdim/scheme.hpp"
#include "lgdim/sequences.hpp"

namespace lgdim {

inline const LGScheme& scheme_at(const SchemeFamily& family, const SymbolSequence& seq,
                                 std::uint64_t l) {
    return family.by_symbol(seq.at(l));
}

inline void validate_address_word(const SchemeFamily& family, const SymbolSequence& seq,
                                  const AddressWord& word) {
    for (std::size_t l = 0; l < word.size(); ++l) {
        const LGScheme& s = scheme_at(family, seq, l + 1);
        const auto [row, col] = word[l];
        if (row < 0 || static_cast<std::size_t>(row) >= s.row_count())
            throw std::invalid_argument("address row out of range at position " + std::to_string(l + 1));
        if (col < 0 || static_cast<std::size_t>(col) >= s.rows()[static_cast<std::size_t>(row)].cells.size())
            throw std::invalid_argument("address cell out of range at position " + std::to_string(l + 1));
    }
}

// Uniformly random valid address word for the given sequence (seeded).
inline AddressWord sample_address_word(const SchemeFamily& family, const SymbolSequence& seq,
                                       std::size_t length, std::uint64_t seed) {
    AddressWord word;
    word.reserve(length);
    for (std::size_t l = 1; l <= length; ++l) {
        const LGScheme& s = scheme_at(family, seq, l);
        const std::size_t flat =
            static_cast<std::size_t>(rng::unit_at(seed, l) * static_cast<double>(s.alphabet_size()));
        std::size_t idx = std::min(flat, s.alphabet_size() - 1);
        int row = 0;
        while (idx >= s.rows()[static_cast<std::size_t>(row)].cells.size()) {
            idx -= s.rows()[static_cast<std::size_t>(row)].cells.size();
            ++row;
        }
        word.push_back({row, static_cast<int>(idx)});
    }
    return word;
}

// Symbolic cylinder fixing full (row, col) addresses to depth n1 and row
// addresses to depth n2.
struct Rectangle {
    AddressWord base;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;

    void check() const {
        if (n1 > n2 || n2 > base.size())
            throw std::invalid_argument("rectangle depths must satisfy n1 <= n2 <= base length");
    }
};

struct RectangleExtents {
    double d1 = 1.0;      // width  = prod_{k<=n1} a
    double d2 = 1.0;      // height = prod_{k<=n2} b
    double log_d1 = 0.0;
    double log_d2 = 0.0;
};

// Width and height accumulated in log space so deep rectangles stay finite.
inline RectangleExtents rectangle_extents(const SchemeFamily& family, const SymbolSequence& seq,
                                          const Rectangle& rect) {
    rect.check();
    RectangleExtents e;
    for (std::uint64_t k = 1; k <= rect.n2; ++k) {
        const LGScheme& s = scheme_at(family, seq, k);
        const auto [row, col] = rect.base[static_cast<std::size_t>(k - 1)];
        const SchemeRow& r = s.rows().at(static_cast<std::size_t>(row));
        if (k <= rect.n1) e.log_d1 += std::log(r.cells.at(static_cast<std::size_t>(col)).a);
        e.log_d2 += std::log(r.b);
    }
    e.d1 = std::exp(e.log_d1);
    e.d2 = std::exp(e.log_d2);
    return e;
}

// Deepest n2 >= n1 at which the height still dominates the depth-n1 width:
// n2 = max{ n : prod_{k<=n} b >= prod_{k<=n1} a }. The resulting
// height/width ratio lies in [1, 1/b_min).
inline Rectangle approximate_square(const SchemeFamily& family, const SymbolSequence& seq,
                                    const AddressWord& base, std::uint64_t n1) {
    if (n1 > base.size()) throw std::invalid_argument("base shorter than requested depth n1");
    if (n1 == 0) return Rectangle{base, 0, 0};

    double width_log = 0.0;
    for (std::uint64_t k = 1; k <= n1; ++k) {
        const LGScheme& s = scheme_at(family, seq, k);
        const auto [row, col] = base[static_cast<std::size_t>(k - 1)];
        width_log += std::log(s.rows().at(static_cast<std::size_t>(row))
                                  .cells.at(static_cast<std::size_t>(col))
                                  .a);
    }
    double height_log = 0.0;
    std::uint64_t n = 0;
    while (true) {
        if (n + 1 > base.size())
            throw std::invalid_argument(
                "base too short to locate the approximate-square depth; extend the word");
        const LGScheme& s = scheme_at(family, seq, n + 1);
        const auto row = base[static_cast<std::size_t>(n)].row;
        const double next = height_log + std::log(s.rows().at(static_cast<std::size_t>(row)).b);
        if (n + 1 > n1 && next < width_log) break;
        height_log = next;
        ++n;
    }
    return Rectangle{base, n1, n};
}

// Appearance-matching permutation between two sequences over the same symbol
// set: position l (1-based) of the n-th occurrence of symbol k in omega maps
// to the position of the n-th occurrence of k in omega_q.
class Permutation {
public:
    Permutation(std::vector<std::uint64_t> forward, std::vector<std::uint64_t> inverse)
        : forward_(std::move(forward)), inverse_(std::move(inverse)) {}

    std::uint64_t horizon() const noexcept { return forward_.size(); }
    std::uint64_t image_horizon() const noexcept { return inverse_.size(); }

    std::uint64_t forward(std::uint64_t l) const {
        if (l < 1 || l > forward_.size()) throw std::out_of_range("position beyond permutation horizon");
        return forward_[static_cast<std::size_t>(l - 1)];
    }

    // 0 when the image position is not covered by the realized horizon
    std::uint64_t inverse_or_zero(std::uint64_t p) const {
        if (p < 1 || p > inverse_.size()) return 0;
        return inverse_[static_cast<std::size_t>(p - 1)];
    }

    bool covers_inverse(std::uint64_t depth) const {
        if (depth > inverse_.size()) return false;
        for (std::uint64_t p = 1; p <= depth; ++p)
            if (inverse_[static_cast<std::size_t>(p - 1)] == 0) return false;
        return true;
    }

    // Swap direction; requires the realized table to be a bijection of
    // {1..horizon} onto {1..horizon} (true at matched block horizons).
    Permutation inverted() const {
        if (inverse_.size() != forward_.size() || !covers_inverse(forward_.size()))
            throw std::invalid_argument("permutation is not closed on its horizon; cannot invert");
        return Permutation(inverse_, forward_);
    }

private:
    std::vector<std::uint64_t> forward_;
    std::vector<std::uint64_t> inverse_;
};

inline Permutation chi_permutation(const SymbolSequence& omega, const SymbolSequence& omega_q,
                                   std::uint64_t horizon) {
    if (omega.symbol_count() != omega_q.symbol_count())
        throw std::invalid_argument("sequences must share one symbol set");
    const int m = omega.symbol_count();

    // reject symbols omega can use that omega_q never produces
    if (omega_q.kind() != SymbolSequence::Kind::bernoulli) {
        std::vector<bool> present(static_cast<std::size_t>(m) + 1, false);
        for (int s : omega_q.word()) present[static_cast<std::size_t>(s)] = true;
        for (std::uint64_t l = 1; l <= horizon; ++l) {
            const int k = omega.at(l);
            if (!present[static_cast<std::size_t>(k)])
                throw std::invalid_argument("symbol " + std::to_string(k) +
                                            " has zero frequency in omega_q");
        }
    }

    std::vector<std::vector<std::uint64_t>> occ(static_cast<std::size_t>(m) + 1);
    std::uint64_t scanned = 0;
    auto occurrence = [&](int k, std::uint64_t n) {
        auto& list = occ[static_cast<std::size_t>(k)];
        while (list.size() < n) {
            ++scanned;
            occ[static_cast<std::size_t>(omega_q.at(scanned))].push_back(scanned);
        }
        return list[static_cast<std::size_t>(n - 1)];
    };

    std::vector<std::uint64_t> forward(static_cast<std::size_t>(horizon));
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(m) + 1, 0);
    std::uint64_t max_image = 0;
    for (std::uint64_t l = 1; l <= horizon; ++l) {
        const int k = omega.at(l);
        const std::uint64_t n = ++counts[static_cast<std::size_t>(k)];
        const std::uint64_t l2 = occurrence(k, n);
        forward[static_cast<std::size_t>(l - 1)] = l2;
        max_image = std::max(max_image, l2);
    }
    std::vector<std::uint64_t> inverse(static_cast<std::size_t>(max_image), 0);
    for (std::uint64_t l = 1; l <= horizon; ++l)
        inverse[static_cast<std::size_t>(forward[static_cast<std::size_t>(l - 1)] - 1)] = l;
    return Permutation(std::move(forward), std::move(inverse));
}

// chi with a horizon large enough that every omega_q position 1..depth is
// matched by some omega position within the horizon.
inline Permutation chi_covering(const SymbolSequence& omega, const SymbolSequence& omega_q,
                                std::uint64_t depth) {
    std::uint64_t horizon = depth + 16;
    for (int attempt = 0; attempt < 48; ++attempt) {
        Permutation chi = chi_permutation(omega, omega_q, horizon);
        if (chi.covers_inverse(depth)) return chi;
        horizon *= 2;
    }
    throw std::runtime_error("chi horizon search did not stabilize; are frequencies positive?");
}

// The induced bijection on words: the entry at output position l (an omega
// position) is the input entry at position chi(l) (an omega_q position), so
// symbols travel from omega_q positions to the omega positions matched by chi.
// out_length limits how much of the image is materialized (default: the full
// chi horizon).
inline AddressWord tau_apply(const Permutation& chi, const AddressWord& word,
                             std::uint64_t out_length = 0) {
    if (out_length == 0) out_length = chi.horizon();
    if (out_length > chi.horizon())
        throw std::invalid_argument("requested image length exceeds chi horizon");
    AddressWord out;
    out.reserve(static_cast<std::size_t>(out_length));
    for (std::uint64_t l = 1; l <= out_length; ++l) {
        const std::uint64_t src = chi.forward(l);
        if (src > word.size())
            throw std::invalid_argument("chi image " + std::to_string(src) +
                                        " exceeds word length " + std::to_string(word.size()));
        out.push_back(word[static_cast<std::size_t>(src - 1)]);
    }
    return out;
}

struct ImageBounds {
    std::uint64_t r1 = 0, r2 = 0, s1 = 0, s2 = 0;
};

// Index bounds of the tau image of the rectangle with depths n1 <= n2:
// D1 = {l : chi(l) <= n1} is the set of output positions whose full address
// is pinned, D2 = {l : n1 < chi(l) <= n2} the set with the row pinned.
// r = length of the initial gap-free run minus the gap, s = sup; these give
// R_{s1,s2}(tau x) inside tau(R) inside R_{r1,r2}(tau x).
inline ImageBounds image_bounds(const Permutation& chi, std::uint64_t n1, std::uint64_t n2) {
    if (n1 > n2) throw std::invalid_argument("need n1 <= n2");
    std::vector<std::uint64_t> d1, d12;
    for (std::uint64_t l = 1; l <= chi.horizon(); ++l) {
        const std::uint64_t f = chi.forward(l);
        if (f <= n1) d1.push_back(l);
        if (f <= n2) d12.push_back(l);
    }
    if (d1.size() != n1 || d12.size() != n2)
        throw std::invalid_argument("chi horizon does not cover depth n2; extend the permutation");

    auto initial_run = [](const std::vector<std::uint64_t>& v) {
        std::uint64_t r = 0;
        for (std::uint64_t x : v) {
            if (x != r + 1) break;
            r = x;
        }
        return r;
    };
    ImageBounds b;
    b.r1 = initial_run(d1);
    b.r2 = initial_run(d12);
    b.s1 = d1.empty() ? 0 : d1.back();
    b.s2 = d12.empty() ? 0 : d12.back();
    return b;
}

// Distance of the smallest rectangle containing both words: width + height at
// the deepest common row prefix (n2) and common full-address prefix (n1 <= n2).
inline double symbolic_distance(const SchemeFamily& family, const SymbolSequence& seq,
                                const AddressWord& w1, const AddressWord& w2) {
    const std::size_t len = std::min(w1.size(), w2.size());
    std::uint64_t n2 = 0;
    while (n2 < len && w1[static_cast<std::size_t>(n2)].row == w2[static_cast<std::size_t>(n2)].row)
        ++n2;
    std::uint64_t n1 = 0;
    while (n1 < n2 && w1[static_cast<std::size_t>(n1)] == w2[static_cast<std::size_t>(n1)]) ++n1;
    const RectangleExtents e = rectangle_extents(family, seq, Rectangle{w1, n1, n2});
    return e.d1 + e.d2;
}

struct ExponentPoint {
    std::uint64_t n1 = 0, n2 = 0;
    std::uint64_t r1 = 0, r2 = 0, s1 = 0, s2 = 0;
    double e_outer_width = 1.0, e_inner_width = 1.0;
    double e_outer_height = 1.0, e_inner_height = 1.0;
    double epsilon = 0.0;  // appearance discrepancy of omega at this depth
    // worst width-exponent deviation at this depth
    double deviation() const {
        return std::max(std::abs(e_outer_width - 1.0), std::abs(e_inner_width - 1.0));
    }
};

struct InclusionReport {
    ExponentPoint top;                  // at the requested depth
    std::vector<ExponentPoint> ladder;  // ascending depths, top included
    double delta = 0.0;                 // max_k |P_k - Q_k|
    double khat = 0.0;                  // least-squares slope of deviation vs (epsilon + delta)
    double khat_r2 = 0.0;               // uncentered R^2 of the through-origin fit
    std::vector<double> residuals;      // per ladder point
};

// Lemma-style appearance discrepancy of omega at a given depth: the envelope
// of |position(k, n) P_k / n - 1| evaluated at the ordinal each symbol is
// expected to reach by that depth, maximized over symbols.
inline double epsilon_at_depth(const SymbolSequence& omega, const FrequencyVector& P,
                               std::uint64_t depth) {
    double worst = 0.0;
    for (int k = 1; k <= omega.symbol_count(); ++k) {
        const double pk = P.entries[static_cast<std::size_t>(k - 1)];
        if (!(pk > 0.0)) throw std::invalid_argument("P entries must be positive");
        const auto ordinal = static_cast<std::size_t>(
            std::max<std::int64_t>(1, std::llround(static_cast<double>(depth) * pk)));
        const std::size_t n_max = ordinal + ordinal / 2 + 8;  // tail margin for the envelope
        const EpsilonProfile prof = epsilon_profile(omega, P, k, n_max);
        worst = std::max(worst, prof.envelope[ordinal - 1]);
    }
    return worst;
}

namespace detail {

inline ExponentPoint exponent_point(const SchemeFamily& family, const SymbolSequence& omega,
                                    const SymbolSequence& omega_q, const AddressWord& base,
                                    std::uint64_t n1, const FrequencyVector& p_omega) {
    const Rectangle rect = approximate_square(family, omega_q, base, n1);
    const Permutation chi = chi_covering(omega, omega_q, rect.n2);
    const ImageBounds bounds = image_bounds(chi, rect.n1, rect.n2);
    const AddressWord image = tau_apply(chi, base, bounds.s2);

    const RectangleExtents ref = rectangle_extents(family, omega_q, rect);
    const RectangleExtents outer =
        rectangle_extents(family, omega, Rectangle{image, bounds.r1, bounds.r2});
    const RectangleExtents inner =
        rectangle_extents(family, omega, Rectangle{image, bounds.s1, bounds.s2});

    ExponentPoint pt;
    pt.n1 = rect.n1;
    pt.n2 = rect.n2;
    pt.r1 = bounds.r1;
    pt.r2 = bounds.r2;
    pt.s1 = bounds.s1;
    pt.s2 = bounds.s2;
    pt.e_outer_width = outer.log_d1 / ref.log_d1;
    pt.e_inner_width = inner.log_d1 / ref.log_d1;
    pt.e_outer_height = outer.log_d2 / ref.log_d2;
    pt.e_inner_height = inner.log_d2 / ref.log_d2;
    pt.epsilon = epsilon_at_depth(omega, p_omega, rect.n1);
    return pt;
}

}  // namespace detail

// Builds the approximate square at depth n1 on the omega_q side, transports
// it through tau, and reports how far the bracketing rectangles' width/height
// exponents sit from 1, across a geometric ladder of depths up to n1. The
// proportionality constant of deviation vs (epsilon + delta) is fitted by
// least squares through the origin and reported with residuals; it is a
// diagnostic, never an input.
inline InclusionReport inclusion_exponent_report(const SchemeFamily& family,
                                                 const SymbolSequence& omega,
                                                 const SymbolSequence& omega_q,
                                                 const AddressWord& base, std::uint64_t n1) {
    if (n1 < 1) throw std::invalid_argument("depth n1 must be >= 1");
    validate_address_word(family, omega_q, base);
    const FrequencyVector p_omega = omega.frequencies();
    const FrequencyVector q_freq = omega_q.frequencies();
    const double delta = p_omega.delta(q_freq);

    // six geometric depths from n1/32 to n1 (deduplicated, floored at 4)
    std::vector<std::uint64_t> depths;
    for (int i = 5; i >= 0; --i) {
        const auto d = static_cast<std::uint64_t>(
            std::max(4.0, std::floor(static_cast<double>(n1) / std::pow(2.0, i))));
        if (depths.empty() || d > depths.back()) depths.push_back(d);
    }

    InclusionReport report;
    report.delta = delta;
    for (std::uint64_t d : depths)
        report.ladder.push_back(detail::exponent_point(family, omega, omega_q, base, d, p_omega));
    report.top = report.ladder.back();

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& pt : report.ladder) {
        const double x = pt.epsilon + delta;
        const double y = pt.deviation();
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    report.khat = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss_res = 0.0;
    for (const auto& pt : report.ladder) {
        const double r = pt.deviation() - report.khat * (pt.epsilon + delta);
        report.residuals.push_back(r);
        ss_res += r * r;
    }
    report.khat_r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return report;
}

}  // namespace lgdim
