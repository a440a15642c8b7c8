#pragma once

// Self-affine carpet schemes: axis-aligned maps
//     f_{i,j}(x, y) = (a_ij * x + c_ij, b_i * y + d_i)
// arranged in horizontal rows, with the horizontal contraction at least as
// strong as the vertical one (a_ij <= b_i) and ordered non-overlapping pieces.
// Validation, composition, and the uniform-grid special case live here.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lgdim/errors.hpp"

namespace lgdim {

// Non-strict inequalities are checked with this absolute slack so that
// composed offsets do not fail validation from float rounding alone.
inline constexpr double kValidationTol = 1e-12;

struct AffineCell {
    double a = 0.0;  // horizontal contraction, in (0,1)
    double c = 0.0;  // horizontal offset, in [0,1), c + a <= 1
};

struct SchemeRow {
    double b = 0.0;  // vertical contraction, in (0,1)
    double d = 0.0;  // vertical offset, in [0,1), d + b <= 1
    std::vector<AffineCell> cells;  // ordered by c, non-overlapping
};

// Raw, unvalidated scheme data as read from a file or built by hand.
struct SchemeDescription {
    std::vector<SchemeRow> rows;
};

class LGScheme;
LGScheme validate_scheme(const SchemeDescription& raw);

// A validated scheme. Instances exist only via validate_scheme (and the
// builders that go through it), so invariants hold by construction.
class LGScheme {
public:
    const std::vector<SchemeRow>& rows() const noexcept { return rows_; }
    const SchemeRow& row(std::size_t i) const { return rows_.at(i); }
    const AffineCell& cell(std::size_t i, std::size_t j) const { return rows_.at(i).cells.at(j); }

    std::size_t row_count() const noexcept { return rows_.size(); }

    std::size_t alphabet_size() const noexcept {
        std::size_t n = 0;
        for (const auto& r : rows_) n += r.cells.size();
        return n;
    }

    // true iff every ordering inequality is strict (no touching pieces)
    bool strictly_separated() const noexcept { return strictly_separated_; }

    SchemeDescription description() const { return SchemeDescription{rows_}; }

private:
    friend LGScheme validate_scheme(const SchemeDescription&);
    LGScheme(std::vector<SchemeRow> rows, bool strict)
        : rows_(std::move(rows)), strictly_separated_(strict) {}

    std::vector<SchemeRow> rows_;
    bool strictly_separated_ = false;
};

struct SchemeFamily {
    std::vector<LGScheme> schemes;

    std::size_t size() const noexcept { return schemes.size(); }
    const LGScheme& at(std::size_t k) const { return schemes.at(k); }
    // family symbols are 1-based throughout the public surface
    const LGScheme& by_symbol(int k) const { return schemes.at(static_cast<std::size_t>(k) - 1); }
};

inline LGScheme validate_scheme(const SchemeDescription& raw) {
    std::vector<ValidationIssue> issues;
    auto fail = [&](std::string where, std::string cond, std::string msg) {
        issues.push_back({std::move(where), std::move(cond), std::move(msg)});
    };
    const double tol = kValidationTol;
    bool strict = true;

    if (raw.rows.empty()) fail("scheme", "range", "scheme must have at least one row");

    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        const SchemeRow& r = raw.rows[i];
        const std::string rw = "row " + std::to_string(i);
        if (!(r.b > 0.0 && r.b < 1.0))
            fail(rw, "range", "b must lie in (0,1), got " + std::to_string(r.b));
        if (!(r.d >= -tol))
            fail(rw, "range", "d must be >= 0, got " + std::to_string(r.d));
        if (!(r.d + r.b <= 1.0 + tol))
            fail(rw, "range", "d + b must be <= 1, got " + std::to_string(r.d + r.b));
        if (r.cells.empty()) fail(rw, "range", "row must have at least one cell");

        for (std::size_t j = 0; j < r.cells.size(); ++j) {
            const AffineCell& cl = r.cells[j];
            const std::string cw = rw + " cell " + std::to_string(j);
            if (!(cl.a > 0.0 && cl.a < 1.0))
                fail(cw, "range", "a must lie in (0,1), got " + std::to_string(cl.a));
            if (!(cl.c >= -tol))
                fail(cw, "range", "c must be >= 0, got " + std::to_string(cl.c));
            if (!(cl.c + cl.a <= 1.0 + tol))
                fail(cw, "range", "c + a must be <= 1, got " + std::to_string(cl.c + cl.a));
            if (!(r.b >= cl.a - tol))
                fail(cw, "b_ge_a",
                     "vertical contraction b=" + std::to_string(r.b) +
                         " must be >= horizontal contraction a=" + std::to_string(cl.a));
            if (j + 1 < r.cells.size()) {
                const AffineCell& nx = r.cells[j + 1];
                const double edge = cl.c + cl.a;
                if (!(nx.c >= edge - tol))
                    fail(rw + " cells " + std::to_string(j) + "/" + std::to_string(j + 1),
                         "overlap",
                         "c_{j+1}=" + std::to_string(nx.c) + " must be >= a_j + c_j=" +
                             std::to_string(edge));
                if (!(nx.c > edge + tol)) strict = false;
            }
        }
        if (i + 1 < raw.rows.size()) {
            const SchemeRow& nx = raw.rows[i + 1];
            const double edge = r.d + r.b;
            if (!(nx.d >= edge - tol))
                fail("rows " + std::to_string(i) + "/" + std::to_string(i + 1), "ordering",
                     "d_{i+1}=" + std::to_string(nx.d) + " must be >= b_i + d_i=" +
                         std::to_string(edge));
            if (!(nx.d > edge + tol)) strict = false;
        }
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));
    return LGScheme(raw.rows, strict);
}

// Pairwise composition bookkeeping: which source row/cell pair produced each
// composed row/cell, in the canonical (sorted) output order.
struct PairwiseComposition {
    SchemeDescription description;
    std::vector<std::pair<std::size_t, std::size_t>> row_src;  // composed row -> (outer row, inner row)
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cell_src;  // [row][cell] -> (outer cell, inner cell)
};

// Composition outer.inner (outer applied last): a = aF*aG, c = cF + aF*cG,
// b = bF*bG, d = dF + bF*dG, for every pair of maps; rows re-sorted by d and
// cells by c (stable, so touching-piece ties keep generation order).
inline PairwiseComposition compose_traced_raw(const LGScheme& outer, const LGScheme& inner) {
    struct RowEntry {
        SchemeRow row;
        std::pair<std::size_t, std::size_t> src;
        std::vector<std::pair<std::size_t, std::size_t>> cells_src;
    };
    std::vector<RowEntry> entries;
    entries.reserve(outer.row_count() * inner.row_count());

    for (std::size_t i = 0; i < outer.row_count(); ++i) {
        const SchemeRow& rf = outer.rows()[i];
        for (std::size_t i2 = 0; i2 < inner.row_count(); ++i2) {
            const SchemeRow& rg = inner.rows()[i2];
            RowEntry e;
            e.src = {i, i2};
            e.row.b = rf.b * rg.b;
            e.row.d = rf.d + rf.b * rg.d;

            struct CellEntry {
                AffineCell cell;
                std::pair<std::size_t, std::size_t> src;
            };
            std::vector<CellEntry> cells;
            cells.reserve(rf.cells.size() * rg.cells.size());
            for (std::size_t j = 0; j < rf.cells.size(); ++j) {
                const AffineCell& cf = rf.cells[j];
                for (std::size_t j2 = 0; j2 < rg.cells.size(); ++j2) {
                    const AffineCell& cg = rg.cells[j2];
                    cells.push_back({{cf.a * cg.a, cf.c + cf.a * cg.c}, {j, j2}});
                }
            }
            std::stable_sort(cells.begin(), cells.end(),
                             [](const CellEntry& x, const CellEntry& y) { return x.cell.c < y.cell.c; });
            for (auto& ce : cells) {
                e.row.cells.push_back(ce.cell);
                e.cells_src.push_back(ce.src);
            }
            entries.push_back(std::move(e));
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RowEntry& x, const RowEntry& y) { return x.row.d < y.row.d; });

    PairwiseComposition out;
    for (auto& e : entries) {
        out.description.rows.push_back(std::move(e.row));
        out.row_src.push_back(e.src);
        out.cell_src.push_back(std::move(e.cells_src));
    }
    return out;
}

inline LGScheme compose(const LGScheme& outer, const LGScheme& inner) {
    return validate_scheme(compose_traced_raw(outer, inner).description);
}

inline double projected_alphabet_size(const SchemeFamily& family, const std::vector<int>& word) {
    double size = 1.0;
    for (int k : word) size *= static_cast<double>(family.by_symbol(k).alphabet_size());
    return size;
}

inline void check_word_symbols(const SchemeFamily& family, const std::vector<int>& word) {
    if (word.empty()) throw std::invalid_argument("word must be nonempty");
    for (int k : word)
        if (k < 1 || static_cast<std::size_t>(k) > family.size())
            throw std::invalid_argument("word symbol " + std::to_string(k) + " outside 1.." +
                                        std::to_string(family.size()));
}

// Left-to-right fold of compose over the schemes named by the word.
inline LGScheme compose_word(const SchemeFamily& family, const std::vector<int>& word,
                             std::size_t alphabet_cap = 20000) {
    check_word_symbols(family, word);
    const double projected = projected_alphabet_size(family, word);
    if (projected > static_cast<double>(alphabet_cap))
        throw CapExceededError("composed alphabet would exceed cap " + std::to_string(alphabet_cap),
                               projected);
    LGScheme acc = family.by_symbol(word[0]);
    for (std::size_t l = 1; l < word.size(); ++l) acc = compose(acc, family.by_symbol(word[l]));
    return acc;
}

// (row, cell) address within the scheme active at one position of a word.
struct CellAddress {
    int row = 0;
    int col = 0;
    friend bool operator==(const CellAddress&, const CellAddress&) = default;
};

using AddressWord = std::vector<CellAddress>;

// Composition of a whole word with provenance: for every composed row the
// per-position source rows, and for every composed cell the per-position
// (row, col) addresses. This is what lets block-structured measures map a
// length-L address block to its composed-alphabet cell.
struct ComposedWord {
    LGScheme scheme;
    std::vector<int> word;
    std::vector<std::vector<int>> row_path;            // [row][pos] -> source row
    std::vector<std::vector<AddressWord>> cell_path;   // [row][cell] -> address word of length |word|
};

inline ComposedWord compose_word_traced(const SchemeFamily& family, const std::vector<int>& word,
                                        std::size_t alphabet_cap = 20000) {
    check_word_symbols(family, word);
    const double projected = projected_alphabet_size(family, word);
    if (projected > static_cast<double>(alphabet_cap))
        throw CapExceededError("composed alphabet would exceed cap " + std::to_string(alphabet_cap),
                               projected);

    const LGScheme* first = &family.by_symbol(word[0]);
    ComposedWord acc{*first, word, {}, {}};
    for (std::size_t i = 0; i < first->row_count(); ++i) {
        acc.row_path.push_back({static_cast<int>(i)});
        std::vector<AddressWord> cp;
        for (std::size_t j = 0; j < first->rows()[i].cells.size(); ++j)
            cp.push_back({CellAddress{static_cast<int>(i), static_cast<int>(j)}});
        acc.cell_path.push_back(std::move(cp));
    }

    for (std::size_t l = 1; l < word.size(); ++l) {
        const LGScheme& next = family.by_symbol(word[l]);
        PairwiseComposition pc = compose_traced_raw(acc.scheme, next);
        ComposedWord out{validate_scheme(pc.description), word, {}, {}};
        out.row_path.reserve(pc.row_src.size());
        out.cell_path.reserve(pc.row_src.size());
        for (std::size_t r = 0; r < pc.row_src.size(); ++r) {
            const auto [iF, iG] = pc.row_src[r];
            std::vector<int> rp = acc.row_path[iF];
            rp.push_back(static_cast<int>(iG));
            out.row_path.push_back(std::move(rp));
            std::vector<AddressWord> cp;
            cp.reserve(pc.cell_src[r].size());
            for (const auto& [jF, jG] : pc.cell_src[r]) {
                AddressWord path = acc.cell_path[iF][jF];
                path.push_back(CellAddress{static_cast<int>(iG), static_cast<int>(jG)});
                cp.push_back(std::move(path));
            }
            out.cell_path.push_back(std::move(cp));
        }
        acc = std::move(out);
    }
    return acc;
}

// Uniform-grid special case: n columns, m rows (n >= m so a = 1/n <= b = 1/m),
// keeping the chosen (row, column) cells. Rows with no chosen cell are omitted.
inline LGScheme bedford_mcmullen(int columns, int rows,
                                 std::vector<std::pair<int, int>> chosen) {
    if (rows < 1 || columns < rows)
        throw std::invalid_argument("need columns >= rows >= 1, got columns=" +
                                    std::to_string(columns) + " rows=" + std::to_string(rows));
    if (chosen.empty()) throw std::invalid_argument("chosen cell set must be nonempty");
    for (auto [r, c] : chosen) {
        if (r < 0 || r >= rows)
            throw std::invalid_argument("chosen row " + std::to_string(r) + " outside 0.." +
                                        std::to_string(rows - 1));
        if (c < 0 || c >= columns)
            throw std::invalid_argument("chosen column " + std::to_string(c) + " outside 0.." +
                                        std::to_string(columns - 1));
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

    SchemeDescription desc;
    const double a = 1.0 / columns;
    const double b = 1.0 / rows;
    std::size_t idx = 0;
    while (idx < chosen.size()) {
        const int r = chosen[idx].first;
        SchemeRow row;
        row.b = b;
        row.d = static_cast<double>(r) / rows;
        while (idx < chosen.size() && chosen[idx].first == r) {
            row.cells.push_back({a, static_cast<double>(chosen[idx].second) / columns});
            ++idx;
        }
        desc.rows.push_back(std::move(row));
    }
    return validate_scheme(desc);
}

}  // namespace lgdim
