#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "liftlab/bits.hpp"
#include "liftlab/boolfn.hpp"
#include "liftlab/common.hpp"
#include "liftlab/exactmath.hpp"

namespace liftlab {

// Alphabet-valued communication matrix. alphabet=2 for plain Boolean gadgets,
// 2^n (or k^n) for tuple powers. Row/column labels are optional structured
// names (input tuples for compositions); they never enter the text format.
struct GadgetMatrix {
    int rows = 0, cols = 0;
    std::uint32_t alphabet = 2;
    std::vector<std::uint32_t> cells;  // row-major
    std::vector<std::vector<int>> row_labels, col_labels;

    GadgetMatrix() = default;
    GadgetMatrix(int r, int c, std::uint32_t k) : rows(r), cols(c), alphabet(k), cells(std::size_t(r) * c, 0) {
        if (r <= 0 || c <= 0 || k == 0) throw std::invalid_argument("matrix needs positive dimensions and alphabet");
    }

    std::uint32_t at(int r, int c) const { return cells[std::size_t(r) * cols + c]; }
    std::uint32_t& at(int r, int c) { return cells[std::size_t(r) * cols + c]; }
    std::uint64_t cell_count() const { return std::uint64_t(rows) * cols; }

    bool is_boolean() const { return alphabet == 2; }

    bool is_constant() const {
        for (std::uint32_t v : cells)
            if (v != cells[0]) return false;
        return true;
    }

    void validate() const {
        if (cells.size() != cell_count()) throw std::logic_error("matrix cell storage inconsistent");
        for (std::uint32_t v : cells)
            if (v >= alphabet) throw std::invalid_argument("matrix entry exceeds alphabet");
    }

    std::string to_string() const {
        std::string out = "rows=" + std::to_string(rows) + " cols=" + std::to_string(cols) +
                          " alphabet=" + std::to_string(alphabet) + "\n";
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                if (alphabet > 10 && c) out += ',';
                out += std::to_string(at(r, c));
            }
            out += '\n';
        }
        return out;
    }

    static GadgetMatrix parse(const std::string& text) {
        std::istringstream in(text);
        std::string header;
        if (!std::getline(in, header)) throw ParseError("empty matrix text");
        std::istringstream hs(header);
        std::string tr, tc, tk;
        if (!(hs >> tr >> tc >> tk)) throw ParseError("matrix header needs rows=, cols=, alphabet=");
        std::string extra;
        if (hs >> extra) throw ParseError("trailing junk in matrix header");
        auto field = [](const std::string& tok, const char* prefix) -> long {
            std::string p(prefix);
            if (tok.rfind(p, 0) != 0) throw ParseError("matrix header field must start with `" + p + "`");
            try {
                std::size_t used = 0;
                long v = std::stol(tok.substr(p.size()), &used);
                if (used != tok.size() - p.size()) throw std::invalid_argument("");
                return v;
            } catch (const std::exception&) {
                throw ParseError("bad number in matrix header field `" + tok + "`");
            }
        };
        long r = field(tr, "rows="), c = field(tc, "cols="), k = field(tk, "alphabet=");
        if (r < 1 || c < 1 || k < 1 || r > 100000 || c > 100000) throw ParseError("matrix dimensions out of range");
        GadgetMatrix m{int(r), int(c), std::uint32_t(k)};
        for (int i = 0; i < r; ++i) {
            std::string line;
            if (!std::getline(in, line)) throw ParseError("matrix text ends before row " + std::to_string(i));
            if (k > 10) {
                std::istringstream ls(line);
                std::string cell;
                int j = 0;
                while (std::getline(ls, cell, ',')) {
                    if (j >= c) throw ParseError("too many entries in matrix row " + std::to_string(i));
                    try {
                        std::size_t used = 0;
                        long v = std::stol(cell, &used);
                        if (used != cell.size() || v < 0 || v >= k) throw std::invalid_argument("");
                        m.at(i, j) = std::uint32_t(v);
                    } catch (const std::exception&) {
                        throw ParseError("bad matrix entry `" + cell + "`");
                    }
                    ++j;
                }
                if (j != c) throw ParseError("too few entries in matrix row " + std::to_string(i));
            } else {
                if (line.size() != std::size_t(c)) throw ParseError("matrix row " + std::to_string(i) + " has wrong length");
                for (int j = 0; j < c; ++j) {
                    if (line[j] < '0' || line[j] >= char('0' + k)) throw ParseError("matrix entry out of alphabet");
                    m.at(i, j) = std::uint32_t(line[j] - '0');
                }
            }
        }
        std::string rest;
        while (std::getline(in, rest))
            if (!rest.empty()) throw ParseError("trailing junk after matrix rows");
        return m;
    }
};

enum class Field { Rationals, F2 };

namespace detail {

// Fraction-free (Bareiss) elimination: every intermediate value is a minor of
// the input, divisions are exact. Returns the rank.
inline int rank_bareiss(std::vector<std::vector<mpz_class>> a) {
    if (a.empty()) return 0;
    int rows = int(a.size()), cols = int(a[0].size());
    mpz_class prev = 1;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(a[p], a[r]);
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j) {
                mpz_class t = a[i][j] * a[r][c] - a[i][c] * a[r][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = t;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

inline int rank_gf2(std::vector<std::vector<std::uint64_t>> rows, int cols) {
    int words = (cols + 63) / 64;
    int r = 0;
    for (int c = 0; c < cols && r < int(rows.size()); ++c) {
        int w = c >> 6;
        std::uint64_t bit = std::uint64_t{1} << (c & 63);
        int p = -1;
        for (int i = r; i < int(rows.size()); ++i)
            if (rows[i][w] & bit) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(rows[p], rows[r]);
        for (int i = 0; i < int(rows.size()); ++i) {
            if (i != r && (rows[i][w] & bit))
                for (int k = 0; k < words; ++k) rows[i][k] ^= rows[r][k];
        }
        ++r;
    }
    return r;
}

}  // namespace detail

// Exact rank of a Boolean submatrix over Q or GF(2).
inline int rank_sub(const GadgetMatrix& m, const Bitset& rowset, const Bitset& colset, Field field) {
    if (!m.is_boolean()) throw std::domain_error("rank is only defined here for Boolean (alphabet-2) matrices");
    auto rs = rowset.indices(), cs = colset.indices();
    if (field == Field::Rationals) {
        std::vector<std::vector<mpz_class>> a(rs.size(), std::vector<mpz_class>(cs.size()));
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) a[i][j] = int(m.at(int(rs[i]), int(cs[j])));
        return detail::rank_bareiss(std::move(a));
    }
    int words = (int(cs.size()) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> a(rs.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j)
            if (m.at(int(rs[i]), int(cs[j]))) a[i][j >> 6] |= std::uint64_t{1} << (j & 63);
    return detail::rank_gf2(std::move(a), int(cs.size()));
}

inline int rank_q(const GadgetMatrix& m) {
    return rank_sub(m, Bitset::full(m.rows), Bitset::full(m.cols), Field::Rationals);
}
inline int rank_f2(const GadgetMatrix& m) {
    return rank_sub(m, Bitset::full(m.rows), Bitset::full(m.cols), Field::F2);
}

// Rank of a general integer matrix (test support for subadditivity).
inline int rank_int(const std::vector<std::vector<long long>>& a) {
    if (a.empty()) return 0;
    std::vector<std::vector<mpz_class>> b(a.size(), std::vector<mpz_class>(a[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != a[0].size()) throw std::invalid_argument("ragged integer matrix");
        for (std::size_t j = 0; j < a[i].size(); ++j) b[i][j] = static_cast<long>(a[i][j]);
    }
    return detail::rank_bareiss(std::move(b));
}

inline bool rank_subadditivity_check(const std::vector<std::vector<long long>>& a,
                                     const std::vector<std::vector<long long>>& b) {
    if (a.size() != b.size() || (a.size() && a[0].size() != b[0].size()))
        throw std::invalid_argument("rank subadditivity needs equal dimensions");
    std::vector<std::vector<long long>> sum = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) sum[i][j] += b[i][j];
    return rank_int(sum) <= rank_int(a) + rank_int(b);
}

inline void check_cell_budget(std::uint64_t r, std::uint64_t c, std::uint64_t budget) {
    if (r == 0 || c == 0 || r > budget || c > budget || r * c > budget)
        throw BudgetError("matrix of " + std::to_string(r) + "x" + std::to_string(c) +
                          " cells exceeds the cell budget " + std::to_string(budget));
}

// --- named gadget constructors ---

// Equality on k-bit strings: 2^k x 2^k identity pattern.
inline GadgetMatrix make_eq(int k, std::uint64_t budget = kDefaultCellBudget) {
    if (k < 1 || k > 16) throw std::invalid_argument("EQ_k wants 1 <= k <= 16");
    std::uint64_t n = std::uint64_t{1} << k;
    check_cell_budget(n, n, budget);
    GadgetMatrix m{int(n), int(n), 2};
    for (int i = 0; i < m.rows; ++i) m.at(i, i) = 1;
    return m;
}

inline GadgetMatrix make_xor1() {
    GadgetMatrix m(2, 2, 2);
    m.at(0, 1) = m.at(1, 0) = 1;
    return m;
}

// Inner product on m coordinates; IP_1 is AND of one bit pair.
inline GadgetMatrix make_ip(int m_coords, std::uint64_t budget = kDefaultCellBudget) {
    if (m_coords < 1 || m_coords > 16) throw std::invalid_argument("IP_m wants 1 <= m <= 16");
    std::uint64_t n = std::uint64_t{1} << m_coords;
    check_cell_budget(n, n, budget);
    GadgetMatrix g{int(n), int(n), 2};
    for (int x = 0; x < g.rows; ++x)
        for (int y = 0; y < g.cols; ++y) g.at(x, y) = __builtin_popcount(unsigned(x) & unsigned(y)) & 1;
    return g;
}

inline GadgetMatrix make_and1() { return make_ip(1); }

// Indexing: row x in [m], column y in {0,1}^m, value y_x.
inline GadgetMatrix make_ind(int m_coords, std::uint64_t budget = kDefaultCellBudget) {
    if (m_coords < 1 || m_coords > 16) throw std::invalid_argument("Ind_m wants 1 <= m <= 16");
    std::uint64_t c = std::uint64_t{1} << m_coords;
    check_cell_budget(std::uint64_t(m_coords), c, budget);
    GadgetMatrix g(m_coords, int(c), 2);
    for (int x = 0; x < g.rows; ++x)
        for (int y = 0; y < g.cols; ++y) g.at(x, y) = (unsigned(y) >> x) & 1;
    return g;
}

// Indexing with a flip bit: row (b,i) with b in {0,1}, i in [m]; value y_i xor b.
// Unlike plain indexing, the row set is closed under complement (rows i and
// m+i negate each other), which the block-sensitivity reduction requires.
inline GadgetMatrix make_ind_flip(int m_coords, std::uint64_t budget = kDefaultCellBudget) {
    if (m_coords < 1 || m_coords > 16) throw std::invalid_argument("IndFlip_m wants 1 <= m <= 16");
    std::uint64_t c = std::uint64_t{1} << m_coords;
    check_cell_budget(std::uint64_t(2 * m_coords), c, budget);
    GadgetMatrix g(2 * m_coords, int(c), 2);
    for (int x = 0; x < g.rows; ++x) {
        int b = x / m_coords, i = x % m_coords;
        for (int y = 0; y < g.cols; ++y) g.at(x, y) = (((unsigned(y) >> i) & 1) ^ unsigned(b));
    }
    return g;
}

// Seeded Boolean matrix; each cell is 1 with probability bias_num/bias_den.
inline GadgetMatrix make_random(int rows, int cols, std::uint64_t seed, unsigned bias_num = 1, unsigned bias_den = 2,
                                std::uint64_t budget = kDefaultCellBudget) {
    if (bias_den == 0 || bias_num > bias_den) throw std::invalid_argument("bias must be a fraction in [0,1]");
    check_cell_budget(std::uint64_t(rows), std::uint64_t(cols), budget);
    GadgetMatrix g(rows, cols, 2);
    Rng rng(seed);
    for (auto& v : g.cells) v = rng.below(bias_den) < bias_num ? 1 : 0;
    return g;
}

// --- composition builders ---

namespace detail {

inline std::vector<int> odometer(std::uint64_t index, int base, int n) {
    std::vector<int> digits(n);
    for (int i = 0; i < n; ++i) {  // coordinate 0 is the fastest-moving digit
        digits[i] = int(index % base);
        index /= base;
    }
    return digits;
}

inline std::uint64_t tuple_space(int base, int n, std::uint64_t budget) {
    std::uint64_t v = 1;
    for (int i = 0; i < n; ++i) {
        v *= std::uint64_t(base);
        if (v > budget) throw BudgetError("tuple space exceeds cell budget");
    }
    return v;
}

}  // namespace detail

// M_{f o g}: Boolean matrix over X^n x Y^n with entry f(g(x_1,y_1),...,g(x_n,y_n)).
inline GadgetMatrix compose(const TruthTable& f, const GadgetMatrix& g, std::uint64_t budget = kDefaultCellBudget) {
    if (!g.is_boolean()) throw std::domain_error("compose needs a Boolean gadget");
    int n = f.arity();
    std::uint64_t r = detail::tuple_space(g.rows, n, budget);
    std::uint64_t c = detail::tuple_space(g.cols, n, budget);
    check_cell_budget(r, c, budget);
    GadgetMatrix m{int(r), int(c), 2};
    m.row_labels.resize(r);
    m.col_labels.resize(c);
    for (std::uint64_t i = 0; i < r; ++i) m.row_labels[i] = detail::odometer(i, g.rows, n);
    for (std::uint64_t j = 0; j < c; ++j) m.col_labels[j] = detail::odometer(j, g.cols, n);
    for (std::uint64_t i = 0; i < r; ++i)
        for (std::uint64_t j = 0; j < c; ++j) {
            std::uint32_t z = 0;
            for (int t = 0; t < n; ++t) z |= g.at(m.row_labels[i][t], m.col_labels[j][t]) << t;
            m.at(int(i), int(j)) = f.eval(z) ? 1 : 0;
        }
    return m;
}

// g^n: entry encodes the tuple (g(x_1,y_1),...,g(x_n,y_n)) in base `alphabet`.
inline GadgetMatrix tuple_power(const GadgetMatrix& g, int n, std::uint64_t budget = kDefaultCellBudget) {
    if (n < 1 || n > 16) throw std::invalid_argument("tuple power wants 1 <= n <= 16");
    std::uint64_t r = detail::tuple_space(g.rows, n, budget);
    std::uint64_t c = detail::tuple_space(g.cols, n, budget);
    check_cell_budget(r, c, budget);
    std::uint64_t alpha = 1;
    for (int i = 0; i < n; ++i) {
        alpha *= g.alphabet;
        if (alpha > (std::uint64_t{1} << 31)) throw BudgetError("tuple alphabet exceeds 2^31");
    }
    GadgetMatrix m{int(r), int(c), std::uint32_t(alpha)};
    m.row_labels.resize(r);
    m.col_labels.resize(c);
    for (std::uint64_t i = 0; i < r; ++i) m.row_labels[i] = detail::odometer(i, g.rows, n);
    for (std::uint64_t j = 0; j < c; ++j) m.col_labels[j] = detail::odometer(j, g.cols, n);
    for (std::uint64_t i = 0; i < r; ++i)
        for (std::uint64_t j = 0; j < c; ++j) {
            std::uint64_t code = 0, place = 1;
            for (int t = 0; t < n; ++t) {
                code += place * g.at(m.row_labels[i][t], m.col_labels[j][t]);
                place *= g.alphabet;
            }
            m.at(int(i), int(j)) = std::uint32_t(code);
        }
    return m;
}

// --- rank-inequality verifiers ---

struct RankLemmaReport {
    bool degenerate = false;  // f == constant 0: top coefficient convention undefined
    int deg_f = 0, rank_g = 0, rank_composed = 0;
    mpz_class bound;  // (rank_g - 1)^deg_f
    bool holds = false;
};

inline RankLemmaReport verify_rank_lemma(const TruthTable& f, const GadgetMatrix& g,
                                         std::uint64_t budget = kDefaultCellBudget) {
    RankLemmaReport rep;
    if (f == TruthTable::constant(f.arity(), false)) {
        rep.degenerate = true;
        return rep;
    }
    rep.deg_f = degree(f);
    rep.rank_g = rank_q(g);
    rep.rank_composed = rank_q(compose(f, g, budget));
    rep.bound = pow_mpz(mpz_class(rep.rank_g - 1), static_cast<unsigned long>(rep.deg_f));
    rep.holds = mpz_class(rep.rank_composed) >= rep.bound;
    return rep;
}

struct ParityRankReport {
    int n = 0, rank_g = 0, rank_composed = 0;
    mpz_class bound;  // (rank_g - 1)^n - 1
    bool holds = false;
};

inline ParityRankReport verify_parity_rank(const GadgetMatrix& g, int n, std::uint64_t budget = kDefaultCellBudget) {
    ParityRankReport rep;
    rep.n = n;
    rep.rank_g = rank_q(g);
    rep.rank_composed = rank_q(compose(TruthTable::parity(n), g, budget));
    rep.bound = pow_mpz(mpz_class(rep.rank_g - 1), static_cast<unsigned long>(n)) - 1;
    rep.holds = mpz_class(rep.rank_composed) >= rep.bound;
    return rep;
}

}  // namespace liftlab
