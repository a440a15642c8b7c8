#pragma once

// Driving sequences omega over the symbols 1..m of a scheme family, with
// random access, frequency counts, and appearance-position statistics.
// Indexing is 1-based on the whole public surface.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgdim/frequency.hpp"
#include "lgdim/rng.hpp"

namespace lgdim {

class SymbolSequence {
public:
    enum class Kind { periodic, explicit_prefix, bernoulli };

    // symbol_count = 0 infers m as the largest symbol present
    static SymbolSequence periodic(std::vector<int> word, int symbol_count = 0) {
        return SymbolSequence(Kind::periodic, std::move(word), symbol_count, {}, 0);
    }

    static SymbolSequence explicit_prefix(std::vector<int> word, int symbol_count = 0) {
        return SymbolSequence(Kind::explicit_prefix, std::move(word), symbol_count, {}, 0);
    }

    static SymbolSequence bernoulli(FrequencyVector p, std::uint64_t seed) {
        if (!p.positive()) throw std::invalid_argument("bernoulli p must be strictly positive");
        const int m = static_cast<int>(p.size());
        return SymbolSequence(Kind::bernoulli, {}, m, std::move(p), seed);
    }

    Kind kind() const noexcept { return kind_; }
    int symbol_count() const noexcept { return m_; }
    const std::vector<int>& word() const noexcept { return word_; }
    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t prefix_length() const noexcept {
        return kind_ == Kind::explicit_prefix ? word_.size()
                                              : std::numeric_limits<std::uint64_t>::max();
    }

    // omega_l, l >= 1. Bernoulli access hashes (seed, l), so it is O(1) and
    // independent of any previously queried index.
    int at(std::uint64_t l) const {
        if (l < 1) throw std::out_of_range("sequence index is 1-based");
        switch (kind_) {
            case Kind::periodic:
                return word_[static_cast<std::size_t>((l - 1) % word_.size())];
            case Kind::explicit_prefix:
                if (l > word_.size())
                    throw std::out_of_range("index " + std::to_string(l) +
                                            " beyond explicit prefix of length " +
                                            std::to_string(word_.size()));
                return word_[static_cast<std::size_t>(l - 1)];
            case Kind::bernoulli: {
                const double u = rng::unit_at(seed_, l);
                double acc = 0.0;
                for (std::size_t k = 0; k + 1 < p_.entries.size(); ++k) {
                    acc += p_.entries[k];
                    if (u < acc) return static_cast<int>(k) + 1;
                }
                return static_cast<int>(p_.entries.size());
            }
        }
        throw std::logic_error("unreachable");
    }

    // Exact frequencies where they are exact: composition of the period word,
    // or the Bernoulli parameter. Explicit prefixes fall back to their
    // empirical composition.
    FrequencyVector frequencies() const {
        if (kind_ == Kind::bernoulli) return p_;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(m_), 0);
        for (int s : word_) counts[static_cast<std::size_t>(s - 1)]++;
        return FrequencyVector::from_rational(counts, static_cast<std::int64_t>(word_.size()));
    }

private:
    SymbolSequence(Kind kind, std::vector<int> word, int m, FrequencyVector p, std::uint64_t seed)
        : kind_(kind), word_(std::move(word)), p_(std::move(p)), seed_(seed) {
        if (kind_ != Kind::bernoulli) {
            if (word_.empty()) throw std::invalid_argument("sequence word must be nonempty");
            int max_sym = 0;
            for (int s : word_) {
                if (s < 1) throw std::invalid_argument("symbols are 1-based");
                max_sym = std::max(max_sym, s);
            }
            m_ = m > 0 ? m : max_sym;
            if (max_sym > m_)
                throw std::invalid_argument("symbol " + std::to_string(max_sym) +
                                            " outside 1.." + std::to_string(m_));
        } else {
            m_ = m;
        }
    }

    Kind kind_;
    std::vector<int> word_;
    int m_ = 0;
    FrequencyVector p_;
    std::uint64_t seed_ = 0;
};

// (1/n) * #{1 <= l <= n : omega_l = k}
inline FrequencyVector empirical_frequencies(const SymbolSequence& seq, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    std::vector<double> counts(static_cast<std::size_t>(seq.symbol_count()), 0.0);
    for (std::uint64_t l = 1; l <= n; ++l) counts[static_cast<std::size_t>(seq.at(l) - 1)] += 1.0;
    for (auto& x : counts) x /= static_cast<double>(n);
    FrequencyVector out;
    out.entries = std::move(counts);
    return out;
}

// Position of the n-th occurrence of symbol k in omega.
inline std::uint64_t appearance_position(const SymbolSequence& seq, int k, std::uint64_t n) {
    if (k < 1 || k > seq.symbol_count()) throw std::invalid_argument("symbol out of range");
    if (n < 1) throw std::invalid_argument("occurrence ordinal must be >= 1");

    if (seq.kind() == SymbolSequence::Kind::periodic) {
        const auto& w = seq.word();
        std::vector<std::uint64_t> positions;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] == k) positions.push_back(i + 1);
        if (positions.empty())
            throw std::invalid_argument("symbol " + std::to_string(k) +
                                        " never occurs in the period word");
        const std::uint64_t per = positions.size();
        const std::uint64_t full = (n - 1) / per;
        return full * w.size() + positions[static_cast<std::size_t>((n - 1) % per)];
    }

    std::uint64_t seen = 0;
    const std::uint64_t limit = std::min<std::uint64_t>(seq.prefix_length(), 1ull << 40);
    for (std::uint64_t l = 1; l <= limit; ++l) {
        if (seq.at(l) == k && ++seen == n) return l;
    }
    if (seq.kind() == SymbolSequence::Kind::explicit_prefix)
        throw std::out_of_range("explicit prefix exhausted before occurrence " + std::to_string(n) +
                                " of symbol " + std::to_string(k));
    throw std::runtime_error("appearance scan limit exceeded");
}

// epsilon_n = |position(k, n) * P_k / n - 1| for n = 1..n_max, together with
// the monotone envelope sup_{n' >= n} epsilon_{n'} over the computed range.
struct EpsilonProfile {
    std::vector<double> eps;       // eps[n-1]
    std::vector<double> envelope;  // envelope[n-1] = max over eps[n-1..]
};

inline EpsilonProfile epsilon_profile(const SymbolSequence& seq, const FrequencyVector& P, int k,
                                      std::size_t n_max) {
    if (k < 1 || static_cast<std::size_t>(k) > P.size())
        throw std::invalid_argument("symbol out of range");
    const double pk = P.entries[static_cast<std::size_t>(k - 1)];
    if (!(pk > 0.0)) throw std::invalid_argument("P_k must be positive");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");

    EpsilonProfile out;
    out.eps.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double pos = static_cast<double>(appearance_position(seq, k, n));
        out.eps.push_back(std::abs(pos * pk / static_cast<double>(n) - 1.0));
    }
    out.envelope.assign(out.eps.size(), 0.0);
    double tail = 0.0;
    for (std::size_t i = out.eps.size(); i-- > 0;) {
        tail = std::max(tail, out.eps[i]);
        out.envelope[i] = tail;
    }
    return out;
}

// Canonical periodic word realizing a rational frequency vector: numerator
// counts of every symbol spread by largest-deficit interleaving, so each
// prefix tracks the target proportions as closely as an integer word can.
inline std::vector<int> canonical_period_word(const FrequencyVector& Q) {
    if (!Q.rational) throw std::invalid_argument("Q must carry a rational form");
    const auto& [nums, den] = *Q.rational;
    if (!Q.positive()) throw std::invalid_argument("Q entries must be positive");
    std::vector<int> word;
    word.reserve(static_cast<std::size_t>(den));
    std::vector<std::int64_t> emitted(nums.size(), 0);
    for (std::int64_t t = 1; t <= den; ++t) {
        std::size_t best = 0;
        double best_deficit = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < nums.size(); ++k) {
            const double deficit = static_cast<double>(nums[k]) * static_cast<double>(t) /
                                       static_cast<double>(den) -
                                   static_cast<double>(emitted[k]);
            if (deficit > best_deficit + 1e-15) {
                best_deficit = deficit;
                best = k;
            }
        }
        emitted[best]++;
        word.push_back(static_cast<int>(best) + 1);
    }
    return word;
}

}  // namespace lgdim
