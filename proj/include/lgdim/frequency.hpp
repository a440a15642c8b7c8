#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgdim {

// A probability vector over the m schemes of a family. When the vector is
// exactly rational, the reduced numerators and common denominator are kept
// alongside the floating entries.
struct FrequencyVector {
    std::vector<double> entries;
    std::optional<std::pair<std::vector<std::int64_t>, std::int64_t>> rational;

    static FrequencyVector from_entries(std::vector<double> e, double tol = 1e-12) {
        if (e.empty()) throw std::invalid_argument("frequency vector must be nonempty");
        double sum = 0.0;
        for (double x : e) {
            if (x < 0.0) throw std::invalid_argument("frequency entries must be nonnegative");
            sum += x;
        }
        if (std::abs(sum - 1.0) > tol)
            throw std::invalid_argument("frequency entries must sum to 1, got " + std::to_string(sum));
        return FrequencyVector{std::move(e), std::nullopt};
    }

    static FrequencyVector from_rational(std::vector<std::int64_t> numerators, std::int64_t denominator) {
        if (numerators.empty()) throw std::invalid_argument("frequency vector must be nonempty");
        if (denominator <= 0) throw std::invalid_argument("denominator must be positive");
        std::int64_t sum = 0;
        for (auto n : numerators) {
            if (n < 0) throw std::invalid_argument("numerators must be nonnegative");
            sum += n;
        }
        if (sum != denominator)
            throw std::invalid_argument("numerators must sum to the denominator (" +
                                        std::to_string(sum) + " != " + std::to_string(denominator) + ")");
        std::int64_t g = denominator;
        for (auto n : numerators) g = std::gcd(g, n);
        if (g > 1) {
            for (auto& n : numerators) n /= g;
            denominator /= g;
        }
        FrequencyVector out;
        out.entries.reserve(numerators.size());
        for (auto n : numerators)
            out.entries.push_back(static_cast<double>(n) / static_cast<double>(denominator));
        out.rational = {std::move(numerators), denominator};
        return out;
    }

    std::size_t size() const noexcept { return entries.size(); }

    bool positive() const noexcept {
        for (double x : entries)
            if (!(x > 0.0)) return false;
        return true;
    }

    // the paper's delta = max_k |P_k - Q_k|
    double delta(const FrequencyVector& other) const {
        if (other.size() != size())
            throw std::invalid_argument("frequency vectors have different lengths");
        double d = 0.0;
        for (std::size_t k = 0; k < size(); ++k)
            d = std::max(d, std::abs(entries[k] - other.entries[k]));
        return d;
    }
};

}  // namespace lgdim
