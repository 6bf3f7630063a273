#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "liftlab/bits.hpp"
#include "liftlab/exactmath.hpp"
#include "liftlab/gadget.hpp"

namespace liftlab {

struct Rectangle {
    Bitset rows, cols;
    std::optional<std::uint32_t> color;  // present iff monochromatic

    std::uint64_t area() const { return std::uint64_t(rows.count()) * cols.count(); }

    // canonical order: row set, then column set, then color
    bool operator<(const Rectangle& o) const {
        if (rows != o.rows) return rows < o.rows;
        if (cols != o.cols) return cols < o.cols;
        return color.value_or(0) < o.color.value_or(0);
    }
    bool operator==(const Rectangle& o) const { return rows == o.rows && cols == o.cols && color == o.color; }
};

// True iff m is constant on rect.rows x rect.cols; reports the constant.
inline bool rect_monochromatic(const GadgetMatrix& m, const Rectangle& rect, std::uint32_t* color_out = nullptr) {
    if (rect.rows.universe() != std::size_t(m.rows) || rect.cols.universe() != std::size_t(m.cols))
        throw std::invalid_argument("rectangle universe does not match matrix dimensions");
    if (!rect.rows.any() || !rect.cols.any()) return false;
    std::uint32_t c = m.at(int(rect.rows.lowest()), int(rect.cols.lowest()));
    for (std::size_t r = rect.rows.lowest(); r < rect.rows.universe(); r = rect.rows.next(r + 1))
        for (std::size_t j = rect.cols.lowest(); j < rect.cols.universe(); j = rect.cols.next(j + 1))
            if (m.at(int(r), int(j)) != c) return false;
    if (color_out) *color_out = c;
    return true;
}

struct RectCover {
    std::vector<Rectangle> rects;

    std::string to_string() const {
        std::string out;
        for (const auto& r : rects) {
            out += "color=" + std::to_string(r.color.value_or(0)) + " rows=" + r.rows.to_index_list() +
                   " cols=" + r.cols.to_index_list() + "\n";
        }
        return out;
    }

    static RectCover parse(const std::string& text, int rows, int cols) {
        RectCover cover;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        auto parse_list = [](const std::string& tok, const char* prefix, std::size_t universe, int lineno) {
            std::string p(prefix);
            if (tok.rfind(p, 0) != 0)
                throw ParseError("cover line " + std::to_string(lineno) + ": expected `" + p + "`");
            Bitset b(universe);
            std::istringstream ls(tok.substr(p.size()));
            std::string cell;
            bool got = false;
            while (std::getline(ls, cell, ',')) {
                try {
                    std::size_t used = 0;
                    long v = std::stol(cell, &used);
                    if (used != cell.size() || v < 0 || std::size_t(v) >= universe) throw std::invalid_argument("");
                    b.set(std::size_t(v));
                    got = true;
                } catch (const std::exception&) {
                    throw ParseError("cover line " + std::to_string(lineno) + ": bad index `" + cell + "`");
                }
            }
            if (!got) throw ParseError("cover line " + std::to_string(lineno) + ": empty index list");
            return b;
        };
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string tc, tr, tcol, extra;
            if (!(ls >> tc >> tr >> tcol) || (ls >> extra))
                throw ParseError("cover line " + std::to_string(lineno) + ": expected `color=… rows=… cols=…`");
            if (tc.rfind("color=", 0) != 0) throw ParseError("cover line " + std::to_string(lineno) + ": expected `color=`");
            Rectangle r;
            try {
                std::size_t used = 0;
                long v = std::stol(tc.substr(6), &used);
                if (used != tc.size() - 6 || v < 0) throw std::invalid_argument("");
                r.color = std::uint32_t(v);
            } catch (const std::exception&) {
                throw ParseError("cover line " + std::to_string(lineno) + ": bad color");
            }
            r.rows = parse_list(tr, "rows=", std::size_t(rows), lineno);
            r.cols = parse_list(tcol, "cols=", std::size_t(cols), lineno);
            cover.rects.push_back(std::move(r));
        }
        return cover;
    }
};

// Throws with a specific reason unless `cover` is a monochromatic cover of m.
inline void validate_cover(const GadgetMatrix& m, const RectCover& cover) {
    Bitset covered(std::size_t(m.rows) * m.cols);
    for (std::size_t i = 0; i < cover.rects.size(); ++i) {
        const Rectangle& r = cover.rects[i];
        std::uint32_t c = 0;
        if (!rect_monochromatic(m, r, &c))
            throw std::invalid_argument("cover rectangle " + std::to_string(i) + " is empty or not monochromatic");
        if (r.color && *r.color != c)
            throw std::invalid_argument("cover rectangle " + std::to_string(i) + " has wrong color label");
        for (std::size_t x = r.rows.lowest(); x < r.rows.universe(); x = r.rows.next(x + 1))
            for (std::size_t y = r.cols.lowest(); y < r.cols.universe(); y = r.cols.next(y + 1))
                covered.set(x * m.cols + y);
    }
    if (covered.count() != std::size_t(m.rows) * m.cols) throw std::invalid_argument("cover misses some cells");
}

// All inclusion-maximal monochromatic rectangles, by closure of row stars plus
// consensus (intersect an existing rectangle's columns with a star, close
// again) until fixpoint, per color. Dedup key: the row set, which determines a
// closed rectangle's column set. max_rects = 0 means unlimited; otherwise the
// enumeration aborts with BudgetError once it would exceed that many
// rectangles (the count can be exponential on unstructured matrices).
inline std::vector<Rectangle> enumerate_maximal_mono_rectangles(const GadgetMatrix& m, std::uint64_t max_rects = 0) {
    std::vector<Rectangle> out;
    std::vector<std::uint32_t> colors(m.cells);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());

    for (std::uint32_t c : colors) {
        // star[r] = columns where row r shows color c
        std::vector<Bitset> star(m.rows, Bitset(std::size_t(m.cols)));
        for (int r = 0; r < m.rows; ++r)
            for (int j = 0; j < m.cols; ++j)
                if (m.at(r, j) == c) star[std::size_t(r)].set(std::size_t(j));

        auto rows_with = [&](const Bitset& b) {
            Bitset a(std::size_t(m.rows));
            for (int r = 0; r < m.rows; ++r)
                if (b.is_subset_of(star[std::size_t(r)])) a.set(std::size_t(r));
            return a;
        };
        auto cols_with = [&](const Bitset& a) {
            Bitset b = Bitset::full(std::size_t(m.cols));
            for (std::size_t r = a.lowest(); r < a.universe(); r = a.next(r + 1)) b = b & star[r];
            return b;
        };

        std::unordered_set<Bitset, BitsetHash> seen;
        std::vector<Rectangle> found;
        std::deque<std::size_t> work;
        auto close_and_add = [&](const Bitset& b0) {
            if (b0.none()) return;
            Bitset a = rows_with(b0);
            Bitset b = cols_with(a);
            if (seen.insert(a).second) {
                if (max_rects && out.size() + found.size() >= max_rects)
                    throw BudgetError("maximal rectangle enumeration exceeded the rectangle budget");
                found.push_back({a, b, c});
                work.push_back(found.size() - 1);
            }
        };
        for (int r = 0; r < m.rows; ++r) close_and_add(star[std::size_t(r)]);
        while (!work.empty()) {
            std::size_t i = work.front();
            work.pop_front();
            Bitset cols_i = found[i].cols;  // copy: found may reallocate
            for (int r = 0; r < m.rows; ++r) close_and_add(cols_i & star[std::size_t(r)]);
        }
        out.insert(out.end(), found.begin(), found.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

enum class CoverMode { Exact, GreedyUpper };

struct CoverResult {
    int size = 0;
    bool exact = false;
    RectCover cover;
    std::uint64_t nodes = 0;  // branch-and-bound work units spent
};

namespace detail {

// Quotient of a matrix by duplicate rows and columns. Optimal covers are
// closed under duplicate classes (a monochromatic rectangle stays
// monochromatic when extended to every copy of its rows/columns), so the
// cover number of the quotient equals that of the original, and a quotient
// cover expands class-by-class to an original cover of the same size.
struct DedupQuotient {
    GadgetMatrix quotient;
    std::vector<std::size_t> row_class, col_class;  // original index -> class
    std::vector<std::size_t> row_rep, col_rep;      // class -> first original index
};

inline DedupQuotient dedup_matrix(const GadgetMatrix& m) {
    DedupQuotient q;
    q.row_class.resize(std::size_t(m.rows));
    q.col_class.resize(std::size_t(m.cols));
    std::map<std::vector<std::uint32_t>, std::size_t> seen;
    for (int r = 0; r < m.rows; ++r) {
        std::vector<std::uint32_t> pat(std::size_t(m.cols));
        for (int j = 0; j < m.cols; ++j) pat[std::size_t(j)] = m.at(r, j);
        auto [it, fresh] = seen.emplace(std::move(pat), q.row_rep.size());
        if (fresh) q.row_rep.push_back(std::size_t(r));
        q.row_class[std::size_t(r)] = it->second;
    }
    seen.clear();
    for (int j = 0; j < m.cols; ++j) {
        std::vector<std::uint32_t> pat(std::size_t(m.rows));
        for (int r = 0; r < m.rows; ++r) pat[std::size_t(r)] = m.at(r, j);
        auto [it, fresh] = seen.emplace(std::move(pat), q.col_rep.size());
        if (fresh) q.col_rep.push_back(std::size_t(j));
        q.col_class[std::size_t(j)] = it->second;
    }
    GadgetMatrix d{int(q.row_rep.size()), int(q.col_rep.size()), m.alphabet};
    for (std::size_t i = 0; i < q.row_rep.size(); ++i)
        for (std::size_t j = 0; j < q.col_rep.size(); ++j)
            d.at(int(i), int(j)) = m.at(int(q.row_rep[i]), int(q.col_rep[j]));
    q.quotient = std::move(d);
    return q;
}

// Lift a quotient rectangle back to the original matrix by taking every row
// and column in the touched duplicate classes.
inline Rectangle expand_rect(const Rectangle& r, const DedupQuotient& q) {
    Rectangle out{Bitset(q.row_class.size()), Bitset(q.col_class.size()), r.color};
    for (std::size_t i = 0; i < q.row_class.size(); ++i)
        if (r.rows.test(q.row_class[i])) out.rows.set(i);
    for (std::size_t j = 0; j < q.col_class.size(); ++j)
        if (r.cols.test(q.col_class[j])) out.cols.set(j);
    return out;
}

// Greedy set cover over the candidate rectangles; deterministic tie-break by
// candidate index. Returns chosen indices.
inline std::vector<std::size_t> greedy_cover(const std::vector<Bitset>& cells_of, Bitset uncovered) {
    std::vector<std::size_t> chosen;
    while (uncovered.any()) {
        std::size_t best = cells_of.size();
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < cells_of.size(); ++i) {
            std::size_t gain = (cells_of[i] & uncovered).count();
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == cells_of.size()) throw std::logic_error("greedy cover stuck: cell not covered by any rectangle");
        chosen.push_back(best);
        uncovered = uncovered.minus(cells_of[best]);
    }
    return chosen;
}

constexpr int kCoverInfeasible = INT_MAX / 4;

// Exact cover search as memoized branch-and-bound: the value of an uncovered
// set is independent of how we got there, and structured matrices revisit the
// same residual states along many branch orders, so a transposition table
// collapses the tree into a DAG. Each entry holds either the exact value or a
// proven lower bound, in the style of the exact-communication memo.
struct CoverEntry {
    int exact = -1, lower = 0;
    std::size_t rect = SIZE_MAX;  // optimal first rectangle, set with exact
};

struct CoverSearch {
    const std::vector<Bitset>& cells_of;
    const std::vector<std::vector<std::size_t>>& rects_of_cell;
    std::uint64_t nodes = 0, node_budget = 0;  // nodes counts work units, not just expansions
    std::unordered_map<Bitset, CoverEntry, BitsetHash> memo;
    std::vector<std::uint8_t> slack;      // scratch, rect -> capacity left
    std::vector<std::size_t> cell_order;  // cells by ascending candidate count

    void prepare_order(std::size_t universe) {
        cell_order.resize(universe);
        for (std::size_t c = 0; c < universe; ++c) cell_order[c] = c;
        std::stable_sort(cell_order.begin(), cell_order.end(),
                         [&](std::size_t a, std::size_t b) { return rects_of_cell[a].size() < rects_of_cell[b].size(); });
    }

    // Lower bound: greedily collect cells no two of which share a rectangle
    // (most-constrained cells first); any cover needs one rectangle each.
    int bound(const Bitset& uncovered) {
        slack.assign(cells_of.size(), 1);
        int total = 0;
        for (std::size_t cell : cell_order) {
            ++nodes;
            if (!uncovered.test(cell)) continue;
            bool take = true;
            for (std::size_t ri : rects_of_cell[cell]) {
                ++nodes;
                if (!slack[ri]) {
                    take = false;
                    break;
                }
            }
            if (!take) continue;
            ++total;
            for (std::size_t ri : rects_of_cell[cell]) slack[ri] = 0;
        }
        return total;
    }

    // Exact value if it is < limit (and then the memo holds the witness
    // choice); otherwise some lower bound >= limit.
    int solve(const Bitset& uncovered, int limit) {
        if (!uncovered.any()) return 0;
        if (limit <= 0) return kCoverInfeasible;
        int known_lower;
        {
            CoverEntry& e = memo[uncovered];  // careful: recursion below invalidates this reference
            if (e.exact >= 0) return e.exact;
            if (e.lower == 0) e.lower = bound(uncovered);
            if (e.lower >= limit) return e.lower;
            known_lower = e.lower;
        }
        if (++nodes > node_budget)
            throw BudgetError("exact cover search exceeded the node budget; use greedy mode");

        // branch on the uncovered cell with the fewest candidates
        std::size_t pick = uncovered.universe();
        std::size_t fewest = SIZE_MAX;
        for (std::size_t cell = uncovered.lowest(); cell < uncovered.universe(); cell = uncovered.next(cell + 1)) {
            ++nodes;
            if (rects_of_cell[cell].size() < fewest) {
                fewest = rects_of_cell[cell].size();
                pick = cell;
            }
        }
        // high-gain candidates first: a good early value prunes the siblings
        std::vector<std::pair<std::size_t, std::size_t>> cand;
        cand.reserve(rects_of_cell[pick].size());
        for (std::size_t ri : rects_of_cell[pick]) {
            ++nodes;
            cand.push_back({(uncovered & cells_of[ri]).count(), ri});
        }
        std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        // drop candidates whose fresh coverage is contained in another's
        if (cand.size() <= 64) {
            std::vector<Bitset> fresh;
            fresh.reserve(cand.size());
            for (const auto& [gain, ri] : cand) fresh.push_back(uncovered & cells_of[ri]);
            std::vector<std::pair<std::size_t, std::size_t>> keep;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                bool dominated = false;
                for (std::size_t j = 0; j < cand.size() && !dominated; ++j) {
                    ++nodes;
                    if (j == i) continue;
                    if (!fresh[i].is_subset_of(fresh[j])) continue;
                    // ties broken toward the earlier candidate
                    dominated = fresh[i] != fresh[j] || j < i;
                }
                if (!dominated) keep.push_back(cand[i]);
            }
            cand.swap(keep);
        }
        int best = limit;
        std::size_t best_rect = SIZE_MAX;
        for (const auto& [gain, ri] : cand) {
            int v = 1 + solve(uncovered.minus(cells_of[ri]), best - 1);
            if (v < best) {
                best = v;
                best_rect = ri;
                if (best <= known_lower) break;  // cannot beat the lower bound
            }
        }
        CoverEntry& e = memo[uncovered];
        if (best < limit) {
            e.exact = best;
            e.rect = best_rect;
        } else {
            e.lower = std::max(e.lower, limit);
        }
        return best;
    }

    // Re-walk the memoized choices to emit one optimal rectangle set.
    std::vector<std::size_t> reconstruct(Bitset uncovered) const {
        std::vector<std::size_t> out;
        while (uncovered.any()) {
            std::size_t ri = memo.at(uncovered).rect;
            out.push_back(ri);
            uncovered = uncovered.minus(cells_of[ri]);
        }
        return out;
    }
};

}  // namespace detail

// Minimum number of monochromatic rectangles covering all cells (exact mode),
// or a greedy upper bound flagged non-exact. Works on the duplicate-class
// quotient (same cover number, witness expanded back), and covers each color
// class independently: rectangles of different colors never share cells, so
// the optimum is the sum over colors.
inline CoverResult cover_number(const GadgetMatrix& m, CoverMode mode = CoverMode::Exact,
                                std::uint64_t node_budget = 20'000'000) {
    detail::DedupQuotient q = detail::dedup_matrix(m);
    const GadgetMatrix& d = q.quotient;
    std::vector<Rectangle> maximal =
        enumerate_maximal_mono_rectangles(d, std::min<std::uint64_t>(node_budget, 1'000'000));
    std::size_t universe = std::size_t(d.rows) * d.cols;
    std::vector<Bitset> cells_of(maximal.size(), Bitset(universe));
    std::vector<std::vector<std::size_t>> rects_of_cell(universe);
    for (std::size_t i = 0; i < maximal.size(); ++i) {
        for (std::size_t r = maximal[i].rows.lowest(); r < maximal[i].rows.universe(); r = maximal[i].rows.next(r + 1))
            for (std::size_t j = maximal[i].cols.lowest(); j < maximal[i].cols.universe(); j = maximal[i].cols.next(j + 1)) {
                cells_of[i].set(r * d.cols + j);
                rects_of_cell[r * d.cols + j].push_back(i);
            }
    }

    std::vector<std::uint32_t> colors(d.cells);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());

    CoverResult res;
    res.exact = mode == CoverMode::Exact;
    std::vector<std::size_t> chosen;
    detail::CoverSearch search{cells_of, rects_of_cell, 0, node_budget, {}, {}, {}};
    search.prepare_order(universe);
    for (std::uint32_t c : colors) {
        Bitset target(universe);
        for (int r = 0; r < d.rows; ++r)
            for (int j = 0; j < d.cols; ++j)
                if (d.at(r, j) == c) target.set(std::size_t(r) * d.cols + j);
        std::vector<std::size_t> greedy = detail::greedy_cover(cells_of, target);
        if (mode == CoverMode::GreedyUpper) {
            chosen.insert(chosen.end(), greedy.begin(), greedy.end());
        } else if (int(greedy.size()) == search.solve(target, int(greedy.size()))) {
            // greedy already optimal; it is a valid witness of the exact size
            chosen.insert(chosen.end(), greedy.begin(), greedy.end());
        } else {
            std::vector<std::size_t> opt = search.reconstruct(target);
            chosen.insert(chosen.end(), opt.begin(), opt.end());
        }
    }
    res.nodes = search.nodes;
    res.size = int(chosen.size());
    for (std::size_t i : chosen) res.cover.rects.push_back(detail::expand_rect(maximal[i], q));
    std::sort(res.cover.rects.begin(), res.cover.rects.end());
    return res;
}

struct DensestRect {
    Rectangle rect;
    mpq_class density;
};

// Monochromatic rectangle of maximum area; ties by canonical rectangle order.
// Maximum-area rectangles are duplicate-class closed, so search the quotient
// with class sizes as weights and expand the winner.
inline DensestRect max_density_mono_rectangle(const GadgetMatrix& m, std::uint64_t rect_budget = 1'000'000) {
    detail::DedupQuotient q = detail::dedup_matrix(m);
    std::vector<Rectangle> maximal = enumerate_maximal_mono_rectangles(q.quotient, rect_budget);
    std::vector<std::uint64_t> row_weight(q.row_rep.size(), 0), col_weight(q.col_rep.size(), 0);
    for (std::size_t cls : q.row_class) ++row_weight[cls];
    for (std::size_t cls : q.col_class) ++col_weight[cls];

    std::optional<Rectangle> best;
    std::uint64_t best_area = 0;
    for (const auto& r : maximal) {
        std::uint64_t rw = 0, cw = 0;
        for (std::size_t i : r.rows.indices()) rw += row_weight[i];
        for (std::size_t j : r.cols.indices()) cw += col_weight[j];
        std::uint64_t area = rw * cw;
        if (area < best_area) continue;
        Rectangle full = detail::expand_rect(r, q);
        if (area > best_area || (best && full < *best)) {
            best_area = area;
            best = std::move(full);
        }
    }
    if (!best) throw std::logic_error("a nonempty matrix always has a monochromatic cell");
    DensestRect out{*best, mpq_class(0)};
    out.density = mpq_class(long(best_area), long(std::uint64_t(m.rows) * m.cols));
    out.density.canonicalize();
    return out;
}

// Majority rectangle for matrices with a dominant color: rows that are
// not noticeably minority-colored, restricted to the columns where a maximal
// independent subset of them all show the majority color. Returns nothing when
// the matrix is not in the biased regime Pr[majority] > 1 - 1/(4 rk).
inline std::optional<Rectangle> biased_rectangle(const GadgetMatrix& m) {
    if (!m.is_boolean()) throw std::domain_error("biased_rectangle needs a Boolean matrix");
    std::uint64_t total = m.cell_count();
    std::uint64_t ones = 0;
    for (std::uint32_t v : m.cells) ones += v;
    std::uint32_t c = ones * 2 >= total ? 1 : 0;
    std::uint64_t majority = c ? ones : total - ones;
    int rk = rank_q(m);
    // Pr[c] > 1 - 1/(4 rk)  <=>  majority * 4rk > total * (4rk - 1)
    if (!(majority * 4 * std::uint64_t(rk) > total * (4 * std::uint64_t(rk) - 1))) return std::nullopt;

    // E: rows whose minority fraction is at least 1/(2 rk)
    Bitset keep(std::size_t(m.rows));  // complement of E
    for (int r = 0; r < m.rows; ++r) {
        std::uint64_t mi = 0;
        for (int j = 0; j < m.cols; ++j) mi += m.at(r, j) != c;
        if (!(mi * 2 * std::uint64_t(rk) >= std::uint64_t(m.cols))) keep.set(std::size_t(r));
    }
    if (keep.none()) throw std::logic_error("biased regime left no rows below the minority threshold");

    // maximal independent subset of the kept rows, greedily over Q
    std::vector<std::size_t> basis;
    Bitset basis_set(std::size_t(m.rows));
    int rank_now = 0;
    for (std::size_t r = keep.lowest(); r < keep.universe(); r = keep.next(r + 1)) {
        basis_set.set(r);
        int rk2 = rank_sub(m, basis_set, Bitset::full(std::size_t(m.cols)), Field::Rationals);
        if (rk2 > rank_now) {
            rank_now = rk2;
            basis.push_back(r);
        } else {
            basis_set.reset(r);
        }
    }

    Bitset g = Bitset::full(std::size_t(m.cols));
    for (std::size_t r : basis)
        for (int j = 0; j < m.cols; ++j)
            if (m.at(int(r), j) != c) g.reset(std::size_t(j));

    Rectangle rect{keep, g, c};
    std::uint32_t got = 0;
    if (!rect_monochromatic(m, rect, &got) || got != c)
        throw std::logic_error("biased rectangle construction produced a non-monochromatic rectangle");
    // density >= 1/4, exactly
    if (!(mpq_class(long(rect.area()), long(total)) >= mpq_class(1, 4)))
        throw std::logic_error("biased rectangle construction fell below density 1/4");
    return rect;
}

// Exact test of density >= 2^(-2T/s) * (4 rk)^(-2) with N = 2^T, done without
// floating point as density^s * N^2 * (4 rk)^(2s) >= 1.
inline bool density_bound_holds(const mpq_class& density, std::uint64_t cover_size, int s, int rk) {
    if (s < 1 || rk < 1 || cover_size < 1) throw std::invalid_argument("density bound needs s, rk, N >= 1");
    if (density <= 0) return false;
    mpq_class lhs = pow_mpq(density, static_cast<unsigned long>(s));
    lhs *= mpq_class(mpz_class(static_cast<unsigned long>(cover_size)) * mpz_class(static_cast<unsigned long>(cover_size)));
    lhs *= mpq_class(pow_mpz(mpz_class(4) * rk, 2 * static_cast<unsigned long>(s)));
    return lhs >= 1;
}

}  // namespace liftlab
