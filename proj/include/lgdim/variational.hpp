#pragma once

// The dimension formula for a validated scheme and its maximization over
// cell-weight vectors, plus the independent oracles used to verify the
// maximizer, and the frequency-driven dimension functions for scheme
// families (rational frequencies and their continuity limit).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lgdim/frequency.hpp"
#include "lgdim/rng.hpp"
#include "lgdim/scheme.hpp"
#include "lgdim/sequences.hpp"

namespace lgdim {

// Probability weights p_ij indexed exactly like the scheme's cells.
struct CellWeights {
    std::vector<std::vector<double>> p;

    static CellWeights uniform(const LGScheme& scheme) {
        CellWeights w;
        const double u = 1.0 / static_cast<double>(scheme.alphabet_size());
        for (const auto& row : scheme.rows()) w.p.emplace_back(row.cells.size(), u);
        return w;
    }

    static CellWeights from_flat(const LGScheme& scheme, const std::vector<double>& flat) {
        CellWeights w;
        std::size_t idx = 0;
        for (const auto& row : scheme.rows()) {
            if (idx + row.cells.size() > flat.size())
                throw std::invalid_argument("flat weight vector shorter than alphabet");
            w.p.emplace_back(flat.begin() + idx, flat.begin() + idx + row.cells.size());
            idx += row.cells.size();
        }
        if (idx != flat.size()) throw std::invalid_argument("flat weight vector longer than alphabet");
        return w;
    }

    std::vector<double> flat() const {
        std::vector<double> out;
        for (const auto& row : p) out.insert(out.end(), row.begin(), row.end());
        return out;
    }

    std::vector<double> row_marginals() const {
        std::vector<double> q;
        q.reserve(p.size());
        for (const auto& row : p) {
            double s = 0.0;
            for (double x : row) s += x;
            q.push_back(s);
        }
        return q;
    }

    void check_shape(const LGScheme& scheme, double sum_tol = 1e-10) const {
        if (p.size() != scheme.row_count())
            throw std::invalid_argument("weights have " + std::to_string(p.size()) +
                                        " rows, scheme has " + std::to_string(scheme.row_count()));
        double sum = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i].size() != scheme.rows()[i].cells.size())
                throw std::invalid_argument("weights row " + std::to_string(i) +
                                            " does not match scheme row length");
            for (double x : p[i]) {
                if (x < 0.0) throw std::invalid_argument("weights must be nonnegative");
                sum += x;
            }
        }
        if (std::abs(sum - 1.0) > sum_tol)
            throw std::invalid_argument("weights must sum to 1, got " + std::to_string(sum));
    }
};

struct DimensionReport {
    double value = 0.0;
    CellWeights argmax;
    int restarts_used = 0;
    long iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
};

struct OptimizerOptions {
    int restarts = 8;
    long max_iters = 10000;
    std::uint64_t seed = 0;
    double tol_obj = 1e-12;
    double tol_grad = 1e-8;
    std::size_t alphabet_cap = 20000;
    int threads = 0;  // 0 = hardware concurrency
};

namespace detail {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Scheme flattened for the numeric kernels: per-cell log a with its row
// index, per-row log b.
struct FlatScheme {
    std::vector<double> log_a;
    std::vector<int> row_of;
    std::vector<double> log_b;
    std::size_t rows = 0;

    explicit FlatScheme(const LGScheme& s) {
        rows = s.row_count();
        log_b.reserve(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const auto& row = s.rows()[i];
            log_b.push_back(std::log(row.b));
            for (const auto& cell : row.cells) {
                log_a.push_back(std::log(cell.a));
                row_of.push_back(static_cast<int>(i));
            }
        }
    }

    std::size_t cells() const noexcept { return log_a.size(); }
};

// D(p) with the 0*log 0 = 0 convention; log_p may be null (computed on the fly).
inline double objective_flat(const FlatScheme& fs, const double* p, const double* log_p) {
    double num1 = 0.0, den1 = 0.0;
    std::vector<double> q(fs.rows, 0.0);
    for (std::size_t i = 0; i < fs.cells(); ++i) {
        const double pi = p[i];
        if (pi > 0.0) num1 += pi * (log_p ? log_p[i] : std::log(pi));
        den1 += pi * fs.log_a[i];
        q[static_cast<std::size_t>(fs.row_of[i])] += pi;
    }
    double num2 = 0.0, den2 = 0.0;
    for (std::size_t r = 0; r < fs.rows; ++r) {
        num2 += xlogx(q[r]);
        den2 += q[r] * fs.log_b[r];
    }
    return num1 / den1 + num2 * (1.0 / den2 - 1.0 / den1) + 0.0;  // +0.0 folds -0 into 0
}

// dD/dp_ij at a strictly interior p.
inline void gradient_flat(const FlatScheme& fs, const double* p, const double* log_p,
                          double* g_out) {
    double num1 = 0.0, den1 = 0.0;
    std::vector<double> q(fs.rows, 0.0);
    for (std::size_t i = 0; i < fs.cells(); ++i) {
        if (!(p[i] > 0.0)) throw std::domain_error("gradient requires strictly positive weights");
        num1 += p[i] * log_p[i];
        den1 += p[i] * fs.log_a[i];
        q[static_cast<std::size_t>(fs.row_of[i])] += p[i];
    }
    double num2 = 0.0, den2 = 0.0;
    std::vector<double> log_q(fs.rows);
    for (std::size_t r = 0; r < fs.rows; ++r) {
        log_q[r] = std::log(q[r]);
        num2 += q[r] * log_q[r];
        den2 += q[r] * fs.log_b[r];
    }
    const double inv1 = 1.0 / den1, inv2 = 1.0 / den2;
    for (std::size_t i = 0; i < fs.cells(); ++i) {
        const int r = fs.row_of[i];
        g_out[i] = (log_p[i] + 1.0) * inv1 - num1 * fs.log_a[i] * inv1 * inv1 +
                   (log_q[static_cast<std::size_t>(r)] + 1.0) * (inv2 - inv1) +
                   num2 * (fs.log_a[i] * inv1 * inv1 -
                           fs.log_b[static_cast<std::size_t>(r)] * inv2 * inv2);
    }
}

struct RestartResult {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<double> p;
    long iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
};

inline constexpr double kLogFloor = -600.0;  // keeps exp(log p) positive and log p finite

// One exponentiated-gradient ascent run: p <- p * exp(eta * dD), renormalized,
// with backtracking on eta.
inline RestartResult ascend(const FlatScheme& fs, std::vector<double> p,
                            const OptimizerOptions& opts) {
    const std::size_t n = fs.cells();
    std::vector<double> lp(n), g(n), cand(n), cand_lp(n);
    for (std::size_t i = 0; i < n; ++i) {
        lp[i] = std::max(std::log(std::max(p[i], 0.0)), kLogFloor);
    }
    auto renormalize = [&](std::vector<double>& logs, std::vector<double>& probs) {
        double mx = -std::numeric_limits<double>::infinity();
        for (double v : logs) mx = std::max(mx, v);
        double z = 0.0;
        for (double v : logs) z += std::exp(v - mx);
        const double log_z = mx + std::log(z);
        for (std::size_t i = 0; i < n; ++i) {
            logs[i] = std::max(logs[i] - log_z, kLogFloor);
            probs[i] = std::exp(logs[i]);
        }
    };
    renormalize(lp, p);

    RestartResult res;
    double obj = objective_flat(fs, p.data(), lp.data());
    double improvement = std::numeric_limits<double>::infinity();
    double eta = 1.0;

    for (long iter = 0; iter < opts.max_iters; ++iter) {
        res.iterations = iter + 1;
        gradient_flat(fs, p.data(), lp.data(), g.data());
        double mean = 0.0;
        for (double v : g) mean += v;
        mean /= static_cast<double>(n);
        double tnorm2 = 0.0;
        for (double v : g) tnorm2 += (v - mean) * (v - mean);
        res.gradient_norm = std::sqrt(tnorm2);

        if (res.gradient_norm < opts.tol_grad && improvement < opts.tol_obj) {
            res.converged = true;
            break;
        }

        bool accepted = false;
        while (eta >= 1e-18) {
            for (std::size_t i = 0; i < n; ++i) cand_lp[i] = lp[i] + eta * g[i];
            renormalize(cand_lp, cand);
            const double val = objective_flat(fs, cand.data(), cand_lp.data());
            if (val > obj) {
                improvement = val - obj;
                obj = val;
                p.swap(cand);
                lp.swap(cand_lp);
                eta = std::min(eta * 1.5, 1e6);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            // numerically stationary: no ascent step at any feasible eta
            res.converged = res.gradient_norm < opts.tol_grad;
            break;
        }
    }

    res.value = obj;
    res.p = std::move(p);
    return res;
}

}  // namespace detail

// D(p) = (sum p log p)/(sum p log a)
//      + (sum q log q) * (1/(sum q log b) - 1/(sum p log a)),
// natural logs, 0*log 0 = 0. Both denominators are strictly negative for any
// simplex p, so the value is finite.
inline double lg_objective(const LGScheme& scheme, const CellWeights& weights) {
    weights.check_shape(scheme);
    detail::FlatScheme fs(scheme);
    const std::vector<double> p = weights.flat();
    return detail::objective_flat(fs, p.data(), nullptr);
}

// Partial derivatives dD/dp_ij; requires p strictly inside the simplex. A
// one-cell alphabet has no interior (its simplex is the single boundary
// point p = 1), so it is rejected like any other boundary point.
inline CellWeights lg_gradient(const LGScheme& scheme, const CellWeights& weights) {
    weights.check_shape(scheme);
    if (scheme.alphabet_size() == 1)
        throw std::domain_error("gradient undefined on a one-point simplex");
    detail::FlatScheme fs(scheme);
    const std::vector<double> p = weights.flat();
    std::vector<double> lp(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) throw std::domain_error("gradient requires strictly positive weights");
        lp[i] = std::log(p[i]);
    }
    std::vector<double> g(p.size());
    detail::gradient_flat(fs, p.data(), lp.data(), g.data());
    return CellWeights::from_flat(scheme, g);
}

// Maximizes D over the simplex by exponentiated-gradient ascent with
// backtracking; restarts from uniform plus Dirichlet(1) samples drawn from
// the caller's seed. The best iterate is always returned; non-convergence is
// reported through the flags.
inline DimensionReport maximize_dimension(const LGScheme& scheme, const OptimizerOptions& opts = {}) {
    detail::FlatScheme fs(scheme);
    const std::size_t n = fs.cells();
    const int restarts = std::max(1, opts.restarts);

    std::vector<detail::RestartResult> results(static_cast<std::size_t>(restarts));
    auto run_one = [&](int r) {
        std::vector<double> start;
        if (r == 0) {
            start.assign(n, 1.0 / static_cast<double>(n));
        } else {
            rng::Stream stream(opts.seed, static_cast<std::uint64_t>(r));
            start = rng::dirichlet_uniform(stream, n);
        }
        results[static_cast<std::size_t>(r)] = detail::ascend(fs, std::move(start), opts);
    };

    int threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, restarts));
    if (threads <= 1 || restarts == 1) {
        for (int r = 0; r < restarts; ++r) run_one(r);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t)
            futs.push_back(std::async(std::launch::async, [&] {
                for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1)) run_one(r);
            }));
        for (auto& f : futs) f.get();
    }

    std::size_t best = 0;
    long total_iters = 0;
    for (std::size_t r = 0; r < results.size(); ++r) {
        total_iters += results[r].iterations;
        if (results[r].value > results[best].value) best = r;
    }
    // a converged restart that reached the same maximum (up to float noise)
    // beats an unconverged one that edged it out by rounding error
    if (!results[best].converged) {
        for (std::size_t r = 0; r < results.size(); ++r) {
            if (results[r].converged && results[r].value >= results[best].value - 1e-11) {
                best = r;
                break;
            }
        }
    }

    DimensionReport report;
    report.argmax = CellWeights::from_flat(scheme, results[best].p);
    report.value = lg_objective(scheme, report.argmax);
    report.restarts_used = restarts;
    report.iterations = total_iters;
    report.gradient_norm = results[best].gradient_norm;
    report.converged = results[best].converged;
    return report;
}

// Brute-force lower bound on the maximum: evaluate D on the lattice of
// simplex points with entries k/G, then hill-climb around the best point with
// the step halved three times. Only feasible for tiny alphabets.
inline double grid_search_oracle(const LGScheme& scheme, int resolution) {
    const std::size_t n = scheme.alphabet_size();
    if (n > 4) throw std::invalid_argument("grid search limited to alphabets of size <= 4");
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    detail::FlatScheme fs(scheme);

    std::vector<double> p(n, 0.0), best_p(n, 0.0);
    double best = -std::numeric_limits<double>::infinity();
    const double G = resolution;

    // enumerate compositions of `resolution` into n parts
    std::vector<int> ks(n, 0);
    auto evaluate = [&] {
        for (std::size_t i = 0; i < n; ++i) p[i] = ks[i] / G;
        const double v = detail::objective_flat(fs, p.data(), nullptr);
        if (v > best) {
            best = v;
            best_p = p;
        }
    };
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
        if (i + 1 == n) {
            ks[i] = remaining;
            evaluate();
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            ks[i] = k;
            rec(i + 1, remaining - k);
        }
    };
    rec(0, resolution);

    double step = 1.0 / G;
    for (int pass = 0; pass < 3; ++pass) {
        step *= 0.5;
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    if (best_p[j] < step) continue;
                    p = best_p;
                    p[i] += step;
                    p[j] -= step;
                    const double v = detail::objective_flat(fs, p.data(), nullptr);
                    if (v > best + 1e-16) {
                        best = v;
                        best_p = p;
                        improved = true;
                    }
                }
            }
        }
    }
    return best;
}

// Closed form for the uniform grid: log_m( sum_j t_j^(log_n m) ), where t_j
// are the chosen-cell counts of the nonempty rows.
inline double mcmullen_oracle(int n, int m, const std::vector<int>& row_counts) {
    if (m < 1 || n < m) throw std::invalid_argument("need n >= m >= 1");
    if (row_counts.empty() || row_counts.size() > static_cast<std::size_t>(m))
        throw std::invalid_argument("need 1..m nonempty rows");
    for (int t : row_counts)
        if (t < 1 || t > n)
            throw std::invalid_argument("row count " + std::to_string(t) + " outside 1.." +
                                        std::to_string(n));
    if (n == 1) return 0.0;  // single map
    if (m == 1) return std::log(static_cast<double>(row_counts[0])) / std::log(static_cast<double>(n));
    const double s = std::log(static_cast<double>(m)) / std::log(static_cast<double>(n));
    double sum = 0.0;
    for (int t : row_counts) sum += std::pow(static_cast<double>(t), s);
    return std::log(sum) / std::log(static_cast<double>(m));
}

struct FrequencyDimension {
    DimensionReport report;
    std::vector<int> word;
    FrequencyVector q;
};

// Dimension of the limit set driven by the canonical periodic word of a
// rational frequency vector: the period's composed scheme is itself a valid
// scheme and its attractor is the limit set, so its maximized formula value
// is returned directly.
inline FrequencyDimension dim_of_rational_frequency(const SchemeFamily& family,
                                                    const FrequencyVector& Q,
                                                    const OptimizerOptions& opts = {},
                                                    std::vector<int> word_override = {}) {
    if (Q.size() != family.size())
        throw std::invalid_argument("Q length does not match family size");
    if (!Q.rational) throw std::invalid_argument("Q must carry a rational form");
    if (!Q.positive()) throw std::invalid_argument("Q entries must be positive");

    std::vector<int> word;
    if (!word_override.empty()) {
        const auto& [nums, den] = *Q.rational;
        std::vector<std::int64_t> counts(nums.size(), 0);
        for (int s : word_override) {
            if (s < 1 || static_cast<std::size_t>(s) > nums.size())
                throw std::invalid_argument("word symbol out of range");
            counts[static_cast<std::size_t>(s - 1)]++;
        }
        const auto len = static_cast<std::int64_t>(word_override.size());
        for (std::size_t k = 0; k < nums.size(); ++k)
            if (counts[k] * den != nums[k] * len)
                throw std::invalid_argument("word composition does not realize Q");
        word = std::move(word_override);
    } else {
        word = canonical_period_word(Q);
    }

    LGScheme composed = compose_word(family, word, opts.alphabet_cap);
    FrequencyDimension out{maximize_dimension(composed, opts), std::move(word), Q};
    return out;
}

struct LimitTraceEntry {
    std::int64_t denominator = 0;
    FrequencyVector q;
    double delta = 0.0;
    double value = 0.0;
};

struct LimitReport {
    double value = 0.0;
    bool converged = false;
    std::vector<LimitTraceEntry> trace;
    DimensionReport last;
};

// Rational approximation of P with denominator d: entries rounded, then
// repaired so the numerators sum to d (largest-remainder adjustments).
inline std::vector<std::int64_t> round_frequencies(const FrequencyVector& P, std::int64_t d) {
    const std::size_t m = P.size();
    std::vector<std::int64_t> nums(m);
    std::vector<double> residue(m);
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double target = P.entries[k] * static_cast<double>(d);
        nums[k] = std::llround(target);
        residue[k] = target - static_cast<double>(nums[k]);
        sum += nums[k];
    }
    while (sum < d) {
        std::size_t pick = 0;
        for (std::size_t k = 1; k < m; ++k)
            if (residue[k] > residue[pick]) pick = k;
        nums[pick]++;
        residue[pick] -= 1.0;
        sum++;
    }
    while (sum > d) {
        std::size_t pick = 0;
        for (std::size_t k = 1; k < m; ++k)
            if (nums[k] > 0 && (nums[pick] == 0 || residue[k] < residue[pick])) pick = k;
        if (nums[pick] == 0) throw std::logic_error("cannot repair rounding");
        nums[pick]--;
        residue[pick] += 1.0;
        sum--;
    }
    return nums;
}

// Continuity extension: evaluate the rational-frequency dimension along
// rational approximations of P with growing denominators until successive
// values agree within tol or the composition cap stops growth. Values are
// reported as computed; no extrapolation beyond the data.
inline LimitReport dim_of_frequency_limit(const SchemeFamily& family, const FrequencyVector& P,
                                          double tol, const OptimizerOptions& opts = {},
                                          std::vector<std::int64_t> denominators = {},
                                          std::int64_t d_max = 64) {
    if (P.size() != family.size())
        throw std::invalid_argument("P length does not match family size");
    if (!P.positive()) throw std::invalid_argument("P entries must be positive");

    const bool explicit_ds = !denominators.empty();
    if (!explicit_ds)
        for (std::int64_t d = 1; d <= d_max; ++d) denominators.push_back(d);

    LimitReport report;
    std::map<std::pair<std::vector<std::int64_t>, std::int64_t>, FrequencyDimension> memo;

    for (std::int64_t d : denominators) {
        std::vector<std::int64_t> nums = round_frequencies(P, d);
        if (std::any_of(nums.begin(), nums.end(), [](std::int64_t x) { return x == 0; })) continue;

        FrequencyVector q = FrequencyVector::from_rational(nums, d);
        const std::vector<int> word = canonical_period_word(q);
        if (projected_alphabet_size(family, word) > static_cast<double>(opts.alphabet_cap)) {
            if (explicit_ds)
                throw CapExceededError("denominator " + std::to_string(d) + " exceeds alphabet cap",
                                       projected_alphabet_size(family, word));
            break;  // cap stops growth
        }

        const auto key = *q.rational;
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, dim_of_rational_frequency(family, q, opts)).first;

        LimitTraceEntry entry{d, q, P.delta(q), it->second.report.value};
        report.trace.push_back(entry);
        report.value = entry.value;
        report.last = it->second.report;

        if (entry.delta == 0.0) {
            report.converged = true;
            break;
        }
        const std::size_t t = report.trace.size();
        if (t >= 2 && std::abs(report.trace[t - 1].value - report.trace[t - 2].value) < tol) {
            report.converged = true;
            break;
        }
    }
    if (report.trace.empty())
        throw std::invalid_argument("no feasible rational approximation of P within the cap");
    return report;
}

}  // namespace lgdim
