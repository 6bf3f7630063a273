#pragma once
// Constructive pipeline: product distributions conditioned on gadget values,
// dense monochromatic rectangle extraction from covers of a composition,
// cover-driven protocol synthesis with rank-decrement routing (over Q or F2),
// the block-sensitivity reduction, and composite verification reports.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "liftlab/boolfn.hpp"
#include "liftlab/common.hpp"
#include "liftlab/exactmath.hpp"
#include "liftlab/gadget.hpp"
#include "liftlab/protocol.hpp"
#include "liftlab/rectcover.hpp"

namespace liftlab {

// ---------------------------------------------------------------------------
// Lifted product distributions

// Product distribution over (X x Y)^n: coordinate i is uniform over the cells
// of g with value z[i], coordinates independent. Kept in product form; masses
// of rectangles in the composed space come from support counting.
class LiftedDistribution {
public:
    int coords() const { return static_cast<int>(z_.size()); }
    const GadgetMatrix& gadget() const { return g_; }
    const std::vector<int>& targets() const { return z_; }
    const std::vector<std::pair<int, int>>& fiber(int i) const {
        return by_value_[static_cast<std::size_t>(z_[static_cast<std::size_t>(i)])];
    }

    mpz_class support_size() const {
        mpz_class p = 1;
        for (int i = 0; i < coords(); ++i) p *= static_cast<unsigned long>(fiber(i).size());
        return p;
    }

    bool in_support(const std::vector<int>& xs, const std::vector<int>& ys) const {
        for (std::size_t i = 0; i < z_.size(); ++i)
            if (static_cast<int>(g_.at(xs[i], ys[i])) != z_[i]) return false;
        return true;
    }

    // Exact mass of a rectangle of the composed space; row/column indices
    // follow the odometer layout used by compose() and tuple_power().
    mpq_class rect_mass(const Rectangle& rect, std::uint64_t budget = kDefaultCellBudget) const {
        std::uint64_t nr = detail::tuple_space(g_.rows, coords(), budget);
        std::uint64_t nc = detail::tuple_space(g_.cols, coords(), budget);
        if (rect.rows.universe() != nr || rect.cols.universe() != nc)
            throw std::invalid_argument("rectangle dimensions do not match the composed space");
        std::vector<std::vector<int>> xt, yt;
        for (std::size_t r : rect.rows.indices()) xt.push_back(detail::odometer(r, g_.rows, coords()));
        for (std::size_t c : rect.cols.indices()) yt.push_back(detail::odometer(c, g_.cols, coords()));
        mpz_class hits = 0;
        for (const auto& x : xt)
            for (const auto& y : yt)
                if (in_support(x, y)) ++hits;
        mpq_class m(hits, support_size());
        m.canonicalize();
        return m;
    }

private:
    friend LiftedDistribution build_lifted_distribution(const GadgetMatrix&, const std::vector<int>&);
    GadgetMatrix g_;
    std::vector<int> z_;
    std::array<std::vector<std::pair<int, int>>, 2> by_value_;
};

inline LiftedDistribution build_lifted_distribution(const GadgetMatrix& g, const std::vector<int>& z) {
    g.validate();
    if (!g.is_boolean()) throw std::domain_error("lifted distributions need a Boolean gadget");
    if (z.empty()) throw std::invalid_argument("target vector must be nonempty");
    LiftedDistribution p;
    p.g_ = g;
    p.z_ = z;
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) p.by_value_[g.at(r, c)].emplace_back(r, c);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] != 0 && z[i] != 1) throw std::invalid_argument("targets must be bits");
        if (p.by_value_[static_cast<std::size_t>(z[i])].empty())
            throw std::invalid_argument("z not realizable: no gadget cell attains value " + std::to_string(z[i]) +
                                        " required at coordinate " + std::to_string(i));
    }
    return p;
}

// Both gadget values occur with probability at least 1/(4 rk_q); the exact
// complement of the regime served by biased_rectangle().
inline bool balanced_regime(const GadgetMatrix& g) {
    std::uint64_t ones = 0;
    for (std::uint32_t v : g.cells) ones += v;
    std::uint64_t minority = std::min(ones, g.cell_count() - ones);
    return mpz_class(minority) * 4 * rank_q(g) >= mpz_class(g.cell_count());
}

struct MaxRatioReport {
    bool in_balanced_regime = false;
    bool holds = false;   // prod_i 1/Pr[g = z_i] <= (4 rk_q)^coords, exact
    mpq_class ratio;
    mpz_class bound;
};

inline MaxRatioReport max_ratio_check(const LiftedDistribution& p) {
    const GadgetMatrix& g = p.gadget();
    MaxRatioReport rep;
    rep.in_balanced_regime = balanced_regime(g);
    rep.bound = pow_mpz(mpz_class(4) * rank_q(g), static_cast<unsigned long>(p.coords()));
    rep.ratio = 1;
    for (int i = 0; i < p.coords(); ++i) {
        mpq_class pr(static_cast<unsigned long>(p.fiber(i).size()), static_cast<unsigned long>(g.cell_count()));
        pr.canonicalize();
        rep.ratio /= pr;
    }
    rep.holds = rep.in_balanced_regime && rep.ratio <= mpq_class(rep.bound);
    return rep;
}

// ---------------------------------------------------------------------------
// Dense rectangle extraction

struct ExtractionOptions {
    std::uint64_t cover_size_override = 0;  // density bounds use this N when nonzero
    std::uint64_t cell_budget = kDefaultCellBudget;
};

struct ExtractionTrace {
    bool biased_branch = false;
    std::uint32_t sensitive_input = 0;  // input of f attaining the sensitivity
    std::vector<int> sensitive_coords;  // ascending
    std::vector<int> order;             // position -> original coordinate, sensitive ones first
    std::vector<int> targets;           // gadget value required at each position
    std::uint64_t cover_size = 0;       // N used in the bounds
    long rect_index = -1;               // canonical index of the chosen cover rectangle
    mpq_class rect_mass;                // its lifted mass, exact
    int position = -1;                  // accepted position among the first s
    std::vector<std::pair<int, int>> row_conditioning;  // (position, gadget row)
    std::vector<std::pair<int, int>> col_conditioning;  // (position, gadget column)
    double entropy_row = 0, entropy_col = 0, entropy_threshold = 0;
    mpq_class density;                  // |A||B| / (|X||Y|)
    bool density_ok = false;            // exact density bound against N, s, rk

    std::string to_string() const {
        std::ostringstream out;
        out << "branch=" << (biased_branch ? "biased" : "balanced") << "\n";
        out << "z=" << sensitive_input << " S=";
        for (std::size_t i = 0; i < sensitive_coords.size(); ++i)
            out << (i ? "," : "") << sensitive_coords[i];
        out << "\norder=";
        for (std::size_t i = 0; i < order.size(); ++i) out << (i ? "," : "") << order[i];
        out << " targets=";
        for (std::size_t i = 0; i < targets.size(); ++i) out << (i ? "," : "") << targets[i];
        out << "\ncover_size=" << cover_size << " rect_index=" << rect_index
            << " rect_mass=" << rect_mass.get_str() << "\n";
        out << "position=" << position << " cond_rows=";
        for (std::size_t i = 0; i < row_conditioning.size(); ++i)
            out << (i ? "," : "") << "(" << row_conditioning[i].first << ":" << row_conditioning[i].second << ")";
        out << " cond_cols=";
        for (std::size_t i = 0; i < col_conditioning.size(); ++i)
            out << (i ? "," : "") << "(" << col_conditioning[i].first << ":" << col_conditioning[i].second << ")";
        out << "\nentropy_row=" << std::setprecision(17) << entropy_row << " entropy_col=" << entropy_col
            << " threshold=" << entropy_threshold << "\n";
        out << "density=" << density.get_str() << " density_ok=" << (density_ok ? 1 : 0) << "\n";
        return out.str();
    }

    static ExtractionTrace parse(const std::string& text) {
        ExtractionTrace tr;
        std::istringstream in(text);
        std::string tok;
        auto next = [&](const char* prefix) {
            if (!(in >> tok) || tok.rfind(prefix, 0) != 0)
                throw ParseError(std::string("trace text: expected ") + prefix);
            return tok.substr(std::string(prefix).size());
        };
        auto ints = [](const std::string& s) {
            std::vector<int> v;
            std::istringstream ls(s);
            std::string item;
            while (std::getline(ls, item, ',')) v.push_back(std::stoi(item));
            return v;
        };
        auto pairs = [](const std::string& s) {
            std::vector<std::pair<int, int>> v;
            std::istringstream ls(s);
            std::string item;
            while (std::getline(ls, item, ',')) {
                std::size_t colon = item.find(':');
                if (item.size() < 5 || item.front() != '(' || item.back() != ')' || colon == std::string::npos)
                    throw ParseError("trace text: malformed conditioning pair " + item);
                v.emplace_back(std::stoi(item.substr(1, colon - 1)),
                               std::stoi(item.substr(colon + 1, item.size() - colon - 2)));
            }
            return v;
        };
        std::string branch = next("branch=");
        if (branch != "biased" && branch != "balanced") throw ParseError("trace text: unknown branch " + branch);
        tr.biased_branch = branch == "biased";
        tr.sensitive_input = std::uint32_t(std::stoul(next("z=")));
        tr.sensitive_coords = ints(next("S="));
        tr.order = ints(next("order="));
        tr.targets = ints(next("targets="));
        tr.cover_size = std::stoull(next("cover_size="));
        tr.rect_index = std::stol(next("rect_index="));
        tr.rect_mass = mpq_class(next("rect_mass="));
        tr.position = std::stoi(next("position="));
        tr.row_conditioning = pairs(next("cond_rows="));
        tr.col_conditioning = pairs(next("cond_cols="));
        tr.entropy_row = std::stod(next("entropy_row="));
        tr.entropy_col = std::stod(next("entropy_col="));
        tr.entropy_threshold = std::stod(next("threshold="));
        tr.density = mpq_class(next("density="));
        tr.density_ok = next("density_ok=") == "1";
        return tr;
    }
};

struct Extraction {
    Rectangle rect;  // monochromatic rectangle of the gadget
    ExtractionTrace trace;
};

namespace detail {

inline double entropy_of_counts(const std::map<int, long>& counts, long total) {
    double h = std::log2(static_cast<double>(total));
    double acc = 0;
    for (const auto& [v, c] : counts) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
    return h - acc / static_cast<double>(total);
}

}  // namespace detail

// Monochromatic rectangle of g whose density survives the cover-size bound.
// Biased gadgets route to biased_rectangle; otherwise the sensitive block is
// moved to the front, a cover rectangle holding a 1/N mass fraction is fixed,
// and conditional supports are scanned until the entropy sum clears the
// threshold and the exact density bound re-verifies.
inline Extraction extract_rectangle_from_cover(const TruthTable& f, const GadgetMatrix& g,
                                               const RectCover& cover, const ExtractionOptions& opt = {}) {
    g.validate();
    if (!g.is_boolean()) throw std::domain_error("extraction needs a Boolean gadget");
    SensitivityWitness sw = sensitive_point(f);
    int s = static_cast<int>(sw.coords.size());
    if (s < 1) throw std::invalid_argument("extraction requires sensitivity >= 1");
    GadgetMatrix composed = compose(f, g, opt.cell_budget);
    validate_cover(composed, cover);
    int rk = rank_q(g);
    int n = f.arity();

    Extraction out;
    ExtractionTrace& tr = out.trace;
    tr.sensitive_input = sw.point;
    tr.sensitive_coords = sw.coords;
    tr.cover_size = opt.cover_size_override ? opt.cover_size_override : cover.rects.size();
    tr.order = sw.coords;
    for (int j = 0; j < n; ++j)
        if (std::find(sw.coords.begin(), sw.coords.end(), j) == sw.coords.end()) tr.order.push_back(j);
    tr.targets.resize(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        tr.targets[static_cast<std::size_t>(t)] = static_cast<int>((sw.point >> tr.order[static_cast<std::size_t>(t)]) & 1);

    if (!balanced_regime(g)) {
        std::optional<Rectangle> r = biased_rectangle(g);
        if (!r) throw std::logic_error("biased regime without a dominant-color rectangle");
        out.rect = *r;
        tr.biased_branch = true;
        tr.density = mpq_class(mpz_class(out.rect.area()), mpz_class(g.cell_count()));
        tr.density.canonicalize();
        tr.density_ok = rk >= 1 ? density_bound_holds(tr.density, tr.cover_size, s, rk) : true;
        return out;
    }

    LiftedDistribution p = build_lifted_distribution(g, tr.targets);
    mpz_class support = p.support_size();

    // support cells, with values permuted into position order
    auto support_cells = [&](const Rectangle& rect, std::vector<std::vector<int>>* xs,
                             std::vector<std::vector<int>>* ys) {
        mpz_class hits = 0;
        for (std::size_t r : rect.rows.indices()) {
            const std::vector<int>& xt = composed.row_labels[r];
            for (std::size_t c : rect.cols.indices()) {
                const std::vector<int>& yt = composed.col_labels[c];
                bool in = true;
                for (int j = 0; j < n && in; ++j)
                    in = static_cast<int>(g.at(xt[static_cast<std::size_t>(j)], yt[static_cast<std::size_t>(j)])) ==
                         static_cast<int>((sw.point >> j) & 1);
                if (!in) continue;
                ++hits;
                if (xs) {
                    std::vector<int> xv(static_cast<std::size_t>(n)), yv(static_cast<std::size_t>(n));
                    for (int t = 0; t < n; ++t) {
                        xv[static_cast<std::size_t>(t)] = xt[static_cast<std::size_t>(tr.order[static_cast<std::size_t>(t)])];
                        yv[static_cast<std::size_t>(t)] = yt[static_cast<std::size_t>(tr.order[static_cast<std::size_t>(t)])];
                    }
                    xs->push_back(std::move(xv));
                    ys->push_back(std::move(yv));
                }
            }
        }
        return hits;
    };

    std::vector<Rectangle> sorted = cover.rects;
    std::sort(sorted.begin(), sorted.end());
    const Rectangle* chosen = nullptr;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        mpz_class hits = support_cells(sorted[k], nullptr, nullptr);
        if (hits * mpz_class(static_cast<unsigned long>(tr.cover_size)) >= support) {
            chosen = &sorted[k];
            tr.rect_index = static_cast<long>(k);
            tr.rect_mass = mpq_class(hits, support);
            tr.rect_mass.canonicalize();
            break;
        }
    }
    if (!chosen) throw std::logic_error("no cover rectangle captures a 1/N fraction of the lifted mass");

    std::vector<std::vector<int>> xs, ys;
    support_cells(*chosen, &xs, &ys);

    tr.entropy_threshold = std::log2(static_cast<double>(g.rows) * static_cast<double>(g.cols)) -
                           2.0 * std::log2(4.0 * static_cast<double>(rk)) -
                           2.0 * std::log2(static_cast<double>(tr.cover_size)) / static_cast<double>(s);

    for (int t = 0; t < s; ++t) {
        std::map<std::vector<int>, std::vector<std::size_t>> groups;
        for (std::size_t c = 0; c < xs.size(); ++c) {
            std::vector<int> key;
            for (int q = 0; q < t; ++q) key.push_back(xs[c][static_cast<std::size_t>(q)]);
            for (int q = s; q < n; ++q) key.push_back(xs[c][static_cast<std::size_t>(q)]);
            for (int q = t + 1; q < n; ++q) key.push_back(ys[c][static_cast<std::size_t>(q)]);
            groups[std::move(key)].push_back(c);
        }
        for (const auto& [key, idxs] : groups) {
            std::map<int, long> ra, cb;
            for (std::size_t c : idxs) {
                ++ra[xs[c][static_cast<std::size_t>(t)]];
                ++cb[ys[c][static_cast<std::size_t>(t)]];
            }
            double hx = detail::entropy_of_counts(ra, static_cast<long>(idxs.size()));
            double hy = detail::entropy_of_counts(cb, static_cast<long>(idxs.size()));
            if (hx + hy < tr.entropy_threshold - 1e-9) continue;
            int color = tr.targets[static_cast<std::size_t>(t)];
            for (const auto& [a, ca] : ra)
                for (const auto& [b, cbn] : cb)
                    if (static_cast<int>(g.at(a, b)) != color)
                        throw std::logic_error("extracted rectangle is not monochromatic");
            mpq_class dens(mpz_class(static_cast<unsigned long>(ra.size())) * static_cast<unsigned long>(cb.size()),
                           mpz_class(g.cell_count()));
            dens.canonicalize();
            if (!density_bound_holds(dens, tr.cover_size, s, rk)) continue;

            tr.position = t;
            for (int q = 0; q < t; ++q) tr.row_conditioning.emplace_back(q, xs[idxs[0]][static_cast<std::size_t>(q)]);
            for (int q = s; q < n; ++q) tr.row_conditioning.emplace_back(q, xs[idxs[0]][static_cast<std::size_t>(q)]);
            for (int q = t + 1; q < n; ++q) tr.col_conditioning.emplace_back(q, ys[idxs[0]][static_cast<std::size_t>(q)]);
            tr.entropy_row = hx;
            tr.entropy_col = hy;
            tr.density = dens;
            tr.density_ok = true;
            out.rect.rows = Bitset(static_cast<std::size_t>(g.rows));
            out.rect.cols = Bitset(static_cast<std::size_t>(g.cols));
            for (const auto& [a, ca] : ra) out.rect.rows.set(static_cast<std::size_t>(a));
            for (const auto& [b, cbn] : cb) out.rect.cols.set(static_cast<std::size_t>(b));
            out.rect.color = static_cast<std::uint32_t>(color);
            return out;
        }
    }
    throw std::logic_error("entropy averaging found no dense rectangle");
}

// ---------------------------------------------------------------------------
// Rank-decrement split

struct RankSplitReport {
    int side = 0;              // 0: partition rows into (rectangle rows, rest); 1: columns
    Bitset keep_in, keep_out;  // the two parts of the chosen side
    int rank_whole = 0;        // field rank of the current submatrix
    int rank_row_block = 0;    // rectangle rows x all current columns
    int rank_col_block = 0;    // all current rows x rectangle columns
    bool decrement_ok = false; // 2 * min <= rank_whole + 3
};

inline RankSplitReport rank_decrement_split(const GadgetMatrix& m, const Bitset& rowset, const Bitset& colset,
                                            const Rectangle& rect, Field field = Field::Rationals) {
    if (!rect.rows.is_subset_of(rowset) || !rect.cols.is_subset_of(colset))
        throw std::invalid_argument("rectangle must lie inside the current submatrix");
    if (rect.rows.none() || rect.cols.none()) throw std::invalid_argument("rectangle must be nonempty");
    if (!rect_monochromatic(m, rect)) throw std::invalid_argument("rectangle is not monochromatic");
    RankSplitReport rep;
    rep.rank_whole = rank_sub(m, rowset, colset, field);
    rep.rank_row_block = rank_sub(m, rect.rows, colset, field);
    rep.rank_col_block = rank_sub(m, rowset, rect.cols, field);
    rep.decrement_ok = 2 * std::min(rep.rank_row_block, rep.rank_col_block) <= rep.rank_whole + 3;
    rep.side = rep.rank_row_block <= rep.rank_col_block ? 0 : 1;  // rows on ties
    if (rep.side == 0) {
        rep.keep_in = rect.rows;
        rep.keep_out = rowset.minus(rect.rows);
    } else {
        rep.keep_in = rect.cols;
        rep.keep_out = colset.minus(rect.cols);
    }
    return rep;
}

inline RankSplitReport rank_decrement_split(const GadgetMatrix& m, const Rectangle& rect,
                                            Field field = Field::Rationals) {
    return rank_decrement_split(m, Bitset::full(static_cast<std::size_t>(m.rows)),
                                Bitset::full(static_cast<std::size_t>(m.cols)), rect, field);
}

// ---------------------------------------------------------------------------
// Protocol synthesis

struct SynthesisStep {
    int depth = 0;
    int rows = 0, cols = 0;
    int rank_before = 0;       // field rank of the submatrix at this node
    int side = 0;              // 0 = row split (Alice), 1 = column split (Bob)
    int rank_kept_block = 0;   // field rank of the block holding the rectangle
    bool decrement_ok = false; // 2 * rank_kept_block <= rank_before + 3
    bool biased_branch = false;
    mpq_class density;         // extracted rectangle density in the submatrix
    bool density_ok = false;
};

struct FinisherCall {
    int rank = 0;
    int depth = 0;
    int rows = 0, cols = 0;
    bool depth_ok = false;  // depth <= rank + 1
};

struct SynthesisStats {
    Field field = Field::Rationals;
    std::uint64_t cover_size = 0;
    int sensitivity = 0;
    std::vector<SynthesisStep> steps;
    std::vector<FinisherCall> finishers;
    std::uint64_t rank_shrink_steps = 0, density_shrink_steps = 0;
    std::uint64_t leaves = 0;
    int depth = 0;
    int rebalanced_depth = 0, rebalanced_bound = 0;
    bool all_decrements_ok = true, all_densities_ok = true, all_finishers_ok = true;
    bool verified = false;  // tree reproduces the gadget on every input
};

struct SynthesisResult {
    ProtocolTree tree;
    ProtocolTree rebalanced;
    SynthesisStats stats;
};

namespace detail {

struct SubGadget {
    GadgetMatrix m;
    std::vector<std::size_t> row_map, col_map;  // local -> global
};

inline SubGadget submatrix(const GadgetMatrix& g, const Bitset& rowset, const Bitset& colset) {
    SubGadget s;
    s.row_map = rowset.indices();
    s.col_map = colset.indices();
    s.m = GadgetMatrix(static_cast<int>(s.row_map.size()), static_cast<int>(s.col_map.size()), g.alphabet);
    for (std::size_t i = 0; i < s.row_map.size(); ++i)
        for (std::size_t j = 0; j < s.col_map.size(); ++j)
            s.m.at(static_cast<int>(i), static_cast<int>(j)) =
                g.at(static_cast<int>(s.row_map[i]), static_cast<int>(s.col_map[j]));
    return s;
}

inline std::uint64_t encode_tuple(const std::vector<int>& t, int base) {
    std::uint64_t idx = 0, place = 1;
    for (int v : t) {
        idx += place * static_cast<std::uint64_t>(v);
        place *= static_cast<std::uint64_t>(base);
    }
    return idx;
}

// A cover of compose(f, g) restricted to compose(f, sub): keep the composed
// rows/columns whose label tuples stay inside the submatrix, drop emptied
// rectangles. Indices are re-encoded into the local odometer layout.
inline RectCover restrict_cover(const RectCover& cover, int n, const GadgetMatrix& g, const SubGadget& sub,
                                std::uint64_t budget) {
    std::uint64_t nr = tuple_space(sub.m.rows, n, budget);
    std::uint64_t nc = tuple_space(sub.m.cols, n, budget);
    std::vector<std::size_t> row_glob(nr), col_glob(nc);
    for (std::uint64_t r = 0; r < nr; ++r) {
        std::vector<int> t = odometer(r, sub.m.rows, n);
        for (int& v : t) v = static_cast<int>(sub.row_map[static_cast<std::size_t>(v)]);
        row_glob[r] = encode_tuple(t, g.rows);
    }
    for (std::uint64_t c = 0; c < nc; ++c) {
        std::vector<int> t = odometer(c, sub.m.cols, n);
        for (int& v : t) v = static_cast<int>(sub.col_map[static_cast<std::size_t>(v)]);
        col_glob[c] = encode_tuple(t, g.cols);
    }
    RectCover out;
    for (const Rectangle& rect : cover.rects) {
        Rectangle local{Bitset(nr), Bitset(nc), rect.color};
        for (std::uint64_t r = 0; r < nr; ++r)
            if (rect.rows.test(row_glob[r])) local.rows.set(r);
        for (std::uint64_t c = 0; c < nc; ++c)
            if (rect.cols.test(col_glob[c])) local.cols.set(c);
        if (local.rows.any() && local.cols.any()) out.rects.push_back(std::move(local));
    }
    return out;
}

}  // namespace detail

// Builds a protocol for g itself out of a rectangle cover of compose(f, g):
// each step extracts a dense monochromatic rectangle from the restricted
// cover, announces one bit for the side whose rectangle block has the smaller
// field rank, and recurses; submatrices of rank <= 5 are finished by sending
// the row's values on a column basis followed by one output bit.
inline SynthesisResult synthesize_protocol(const TruthTable& f, const GadgetMatrix& g, const RectCover& cover,
                                           Field field = Field::Rationals,
                                           std::uint64_t cell_budget = kDefaultCellBudget) {
    g.validate();
    if (!g.is_boolean()) throw std::domain_error("synthesis needs a Boolean gadget");
    validate_cover(compose(f, g, cell_budget), cover);

    SynthesisResult res;
    SynthesisStats& st = res.stats;
    st.field = field;
    st.cover_size = cover.rects.size();
    st.sensitivity = sensitivity(f);
    ProtocolTree& t = res.tree;
    t.rows = g.rows;
    t.cols = g.cols;
    int n = f.arity();

    auto mono = [&](const Bitset& rs, const Bitset& cs, std::uint32_t* color) {
        return rect_monochromatic(g, Rectangle{rs, cs, std::nullopt}, color);
    };

    auto finisher = [&](const Bitset& rs, const Bitset& cs) -> int {
        int r = rank_sub(g, rs, cs, field);
        std::vector<std::size_t> basis;
        Bitset chosen(static_cast<std::size_t>(g.cols));
        for (std::size_t c : cs.indices()) {
            chosen.set(c);
            if (rank_sub(g, rs, chosen, field) == static_cast<int>(basis.size()) + 1) basis.push_back(c);
            else chosen.reset(c);
            if (static_cast<int>(basis.size()) == r) break;
        }
        auto frec = [&](auto&& self, const Bitset& frs, const Bitset& fcs, std::size_t idx) -> int {
            std::uint32_t color = 0;
            if (mono(frs, fcs, &color)) return t.add_leaf(color);
            if (idx < basis.size()) {
                std::size_t c = basis[idx];
                Bitset p0(static_cast<std::size_t>(g.rows)), p1(static_cast<std::size_t>(g.rows));
                for (std::size_t rr : frs.indices()) (g.at(static_cast<int>(rr), static_cast<int>(c)) ? p1 : p0).set(rr);
                if (p0.none() || p1.none()) return self(self, frs, fcs, idx + 1);
                int c0 = self(self, p0, fcs, idx + 1);
                int c1 = self(self, p1, fcs, idx + 1);
                return t.add_split(0, std::move(p0), std::move(p1), c0, c1);
            }
            // the basis values pin the row: remaining rows must be identical,
            // so the column side can reveal the output bit
            std::size_t a = frs.lowest();
            for (std::size_t rr : frs.indices())
                for (std::size_t cc : fcs.indices())
                    if (g.at(static_cast<int>(rr), static_cast<int>(cc)) != g.at(static_cast<int>(a), static_cast<int>(cc)))
                        throw std::logic_error("finisher rows disagree after the basis was announced");
            Bitset q0(static_cast<std::size_t>(g.cols)), q1(static_cast<std::size_t>(g.cols));
            for (std::size_t cc : fcs.indices()) (g.at(static_cast<int>(a), static_cast<int>(cc)) ? q1 : q0).set(cc);
            if (q0.none() || q1.none()) throw std::logic_error("finisher value split must be proper");
            int l0 = t.add_leaf(0), l1 = t.add_leaf(1);
            return t.add_split(1, std::move(q0), std::move(q1), l0, l1);
        };
        int node = frec(frec, rs, cs, 0);
        FinisherCall fc{r, t.depth_below(node), static_cast<int>(rs.count()), static_cast<int>(cs.count()), false};
        fc.depth_ok = fc.depth <= r + 1;
        st.finishers.push_back(fc);
        st.all_finishers_ok = st.all_finishers_ok && fc.depth_ok;
        return node;
    };

    auto rec = [&](auto&& self, const Bitset& rs, const Bitset& cs, int depth) -> int {
        std::uint32_t color = 0;
        if (mono(rs, cs, &color)) return t.add_leaf(color);
        int rk = rank_sub(g, rs, cs, field);
        if (rk <= 5) return finisher(rs, cs);

        detail::SubGadget sub = detail::submatrix(g, rs, cs);
        RectCover restricted = detail::restrict_cover(cover, n, g, sub, cell_budget);
        ExtractionOptions eo;
        eo.cover_size_override = st.cover_size;
        eo.cell_budget = cell_budget;
        Extraction ex = extract_rectangle_from_cover(f, sub.m, restricted, eo);

        Rectangle glob{Bitset(static_cast<std::size_t>(g.rows)), Bitset(static_cast<std::size_t>(g.cols)), ex.rect.color};
        for (std::size_t i : ex.rect.rows.indices()) glob.rows.set(sub.row_map[i]);
        for (std::size_t j : ex.rect.cols.indices()) glob.cols.set(sub.col_map[j]);
        RankSplitReport split = rank_decrement_split(g, rs, cs, glob, field);

        SynthesisStep step;
        step.depth = depth;
        step.rows = static_cast<int>(rs.count());
        step.cols = static_cast<int>(cs.count());
        step.rank_before = rk;
        step.side = split.side;
        step.rank_kept_block = split.side == 0 ? split.rank_row_block : split.rank_col_block;
        step.decrement_ok = split.decrement_ok;
        step.biased_branch = ex.trace.biased_branch;
        step.density = ex.trace.density;
        step.density_ok = ex.trace.density_ok;
        st.steps.push_back(step);
        st.all_decrements_ok = st.all_decrements_ok && split.decrement_ok;
        st.all_densities_ok = st.all_densities_ok && step.density_ok;

        if (split.keep_out.none()) throw std::logic_error("rectangle side spans the whole submatrix");
        ++st.rank_shrink_steps;
        int c0, c1;
        if (split.side == 0) {
            c0 = self(self, split.keep_in, cs, depth + 1);
            ++st.density_shrink_steps;
            c1 = self(self, split.keep_out, cs, depth + 1);
        } else {
            c0 = self(self, rs, split.keep_in, depth + 1);
            ++st.density_shrink_steps;
            c1 = self(self, rs, split.keep_out, depth + 1);
        }
        return t.add_split(split.side, split.keep_in, split.keep_out, c0, c1);
    };

    t.root = rec(rec, Bitset::full(static_cast<std::size_t>(g.rows)), Bitset::full(static_cast<std::size_t>(g.cols)), 0);
    t.validate_structure();
    st.leaves = static_cast<std::uint64_t>(t.leaf_count());
    st.depth = t.depth();
    st.verified = verify_protocol(t, g);
    res.rebalanced = rebalance(t);
    st.rebalanced_depth = res.rebalanced.depth();
    st.rebalanced_bound = rebalanced_depth_bound(st.leaves);
    return res;
}

// ---------------------------------------------------------------------------
// Block-sensitivity reduction

// Row involution x -> x' with g(x', y) = 1 - g(x, y) for every y, available
// exactly when the row set is closed under complementing rows.
inline std::optional<std::vector<int>> check_negation_symmetry(const GadgetMatrix& g) {
    g.validate();
    if (!g.is_boolean()) throw std::domain_error("negation symmetry needs a Boolean matrix");
    std::vector<int> map(static_cast<std::size_t>(g.rows), -1);
    for (int r = 0; r < g.rows; ++r) {
        for (int q = 0; q < g.rows && map[static_cast<std::size_t>(r)] < 0; ++q) {
            if (q == r) continue;
            bool comp = true;
            for (int c = 0; c < g.cols && comp; ++c) comp = g.at(q, c) == 1 - g.at(r, c);
            if (comp) map[static_cast<std::size_t>(r)] = q;
        }
        if (map[static_cast<std::size_t>(r)] < 0) return std::nullopt;
    }
    return map;
}

struct BsReduction {
    TruthTable reduced;                           // block count many inputs, full sensitivity
    std::uint32_t base_input = 0;                 // the block-sensitivity witness point
    std::vector<std::uint32_t> blocks;            // disjoint sensitive blocks there
    std::vector<int> block_of;                    // original coordinate -> block index, or -1
    std::vector<std::pair<int, int>> fixed_cell;  // value-z cell used outside all blocks
    std::vector<int> row_negation;                // gadget row involution

    // Translators: inputs of the reduced composition become inputs of the
    // original one, coordinate by coordinate.
    std::vector<int> expand_rows(const std::vector<int>& xs) const {
        std::vector<int> out(block_of.size());
        for (std::size_t j = 0; j < block_of.size(); ++j) {
            int i = block_of[j];
            if (i < 0) {
                out[j] = fixed_cell[j].first;
            } else {
                bool flip = (base_input >> j) & 1;
                int x = xs[static_cast<std::size_t>(i)];
                out[j] = flip ? row_negation[static_cast<std::size_t>(x)] : x;
            }
        }
        return out;
    }
    std::vector<int> expand_cols(const std::vector<int>& ys) const {
        std::vector<int> out(block_of.size());
        for (std::size_t j = 0; j < block_of.size(); ++j) {
            int i = block_of[j];
            out[j] = i < 0 ? fixed_cell[j].second : ys[static_cast<std::size_t>(i)];
        }
        return out;
    }
};

// Rewrites f as a function of one bit per sensitive block: flipping input i of
// the reduced function toggles block S_i around the witness point, which makes
// every input sensitive. Gadget rows simulate the per-block complement.
inline BsReduction bs_reduction(const TruthTable& f, const GadgetMatrix& g) {
    g.validate();
    if (!g.is_boolean()) throw std::domain_error("the reduction needs a Boolean gadget");
    std::optional<std::vector<int>> sym = check_negation_symmetry(g);
    if (!sym) throw std::invalid_argument("unsupported gadget: rows are not closed under complement");
    BlockSensitivityWitness bw = block_sensitivity(f);
    int b = bw.value, n = f.arity();

    BsReduction red;
    red.base_input = bw.point;
    red.blocks = bw.blocks;
    red.row_negation = *sym;
    red.block_of.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < bw.blocks.size(); ++i)
        for (int j = 0; j < n; ++j)
            if ((bw.blocks[i] >> j) & 1) red.block_of[static_cast<std::size_t>(j)] = static_cast<int>(i);
    red.fixed_cell.assign(static_cast<std::size_t>(n), {-1, -1});
    for (int j = 0; j < n; ++j) {
        if (red.block_of[static_cast<std::size_t>(j)] >= 0) continue;
        int want = static_cast<int>((bw.point >> j) & 1);
        bool found = false;
        for (int r = 0; r < g.rows && !found; ++r)
            for (int c = 0; c < g.cols && !found; ++c)
                if (static_cast<int>(g.at(r, c)) == want) {
                    red.fixed_cell[static_cast<std::size_t>(j)] = {r, c};
                    found = true;
                }
        if (!found)
            throw std::invalid_argument("unrealizable: the gadget never attains the value fixed at coordinate " +
                                        std::to_string(j));
    }

    std::vector<std::uint8_t> table(std::size_t{1} << b);
    for (std::uint32_t w = 0; w < (std::uint32_t{1} << b); ++w) {
        std::uint32_t zin = bw.point;
        for (int i = 0; i < b; ++i)
            if ((w >> i) & 1) zin ^= bw.blocks[static_cast<std::size_t>(i)];
        table[w] = f.eval(zin) ? 1 : 0;
    }
    red.reduced = TruthTable(b, std::move(table));
    if (sensitivity(red.reduced) != b) throw std::logic_error("reduced function must have full sensitivity");
    return red;
}

// ---------------------------------------------------------------------------
// Composite reports

struct FknnReport {
    int copies = 0;
    int gadget_cc = 0;  // exact communication complexity of the gadget
    bool cc_exact = false;
    std::uint64_t cover_size = 0;  // cover number of the tuple power
    bool cover_exact = false;
    double lhs = 0;      // log2 of the cover number
    double rhs = 0;      // copies * (sqrt(cc) - log2 log2 (|X||Y|) - 1)
    bool vacuous = false;
    bool holds = false;
};

inline FknnReport verify_fknn(const GadgetMatrix& g, int copies, std::uint64_t cell_budget = kDefaultCellBudget,
                              std::uint64_t cover_node_budget = 20'000'000) {
    if (copies < 1) throw std::invalid_argument("copies must be >= 1");
    if (g.cell_count() < 2) throw std::invalid_argument("the bound needs at least two cells");
    FknnReport rep;
    rep.copies = copies;
    CCResult cc = exact_cc(g);
    rep.gadget_cc = cc.value;
    rep.cc_exact = cc.exact;
    GadgetMatrix power = tuple_power(g, copies, cell_budget);
    CoverResult cov;
    try {
        cov = cover_number(power, CoverMode::Exact, cover_node_budget);
    } catch (const BudgetError&) {
        // a greedy cover only overestimates C; since C >= 1 the bound stays
        // certified whenever the right side is nonpositive
        cov = cover_number(power, CoverMode::GreedyUpper, cover_node_budget);
    }
    rep.cover_size = static_cast<std::uint64_t>(cov.size);
    rep.cover_exact = cov.exact;
    rep.lhs = std::log2(static_cast<double>(rep.cover_size));
    rep.rhs = copies * (std::sqrt(static_cast<double>(rep.gadget_cc)) -
                        std::log2(std::log2(static_cast<double>(g.rows) * static_cast<double>(g.cols))) - 1.0);
    rep.vacuous = rep.rhs <= 0;
    rep.holds = rep.lhs >= rep.rhs - 1e-9;
    return rep;
}

struct MainChainOptions {
    std::uint64_t cell_budget = kDefaultCellBudget;
    std::uint64_t cover_node_budget = 20'000'000;
    CCOptions cc;
};

struct MainChainReport {
    bool degenerate = false;  // constant f: extraction and synthesis are skipped
    MeasureRelations measures;
    int rank_g = 0, rank2_g = 0;
    int gadget_cc = 0;
    bool cc_exact = false;
    std::uint64_t cover_size = 0;  // cover number of the composition
    bool cover_exact = false;
    bool log_rank_ok = false;      // cc >= ceil log2 rank
    RankLemmaReport rank_lemma;
    bool extraction_ok = false;
    bool extraction_biased = false;
    SynthesisStats synth_q, synth_f2;
    bool rebalance_ok = false;     // rebalanced depth within the leaf-count bound, both fields
    // the two-sided composition inequality evaluated with constant 1;
    // reported for inspection only, never asserted: constants unspecified
    bool chain_defined = false;    // needs rank >= 2 and nonconstant f
    double chain_lhs = 0;          // log2 of the cover number of the composition
    double chain_rhs = 0;          // s * (cc / log2 rank - log2 rank)
    double chain_cor_rhs = 0;      // s deg/(2s + deg) * (cc / log2 rank + log2 rank)
    bool chain_asserted = false;   // by design

    bool ingredients_ok() const {
        bool synth = degenerate ||
                     (synth_q.verified && synth_q.all_decrements_ok && synth_q.all_densities_ok &&
                      synth_q.all_finishers_ok && synth_f2.verified && synth_f2.all_decrements_ok &&
                      synth_f2.all_densities_ok && synth_f2.all_finishers_ok);
        return measures.all_hold() && log_rank_ok && (rank_lemma.degenerate || rank_lemma.holds) &&
               (degenerate || extraction_ok) && synth && (degenerate || rebalance_ok);
    }
};

// Runs every exact ingredient of the composition lower bound on one (f, g)
// pair and reports the asymptotic two-sided inequality without asserting it.
inline MainChainReport verify_main_chain(const TruthTable& f, const GadgetMatrix& g,
                                         const MainChainOptions& opt = {}) {
    MainChainReport rep;
    rep.measures = check_measure_relations(f);
    rep.degenerate = rep.measures.degenerate;
    rep.rank_g = rank_q(g);
    rep.rank2_g = rank_f2(g);
    CCResult cc = exact_cc(g, opt.cc);
    rep.gadget_cc = cc.value;
    rep.cc_exact = cc.exact;
    rep.log_rank_ok = rep.rank_g <= 1 || rep.gadget_cc >= ceil_log2_u64(static_cast<std::uint64_t>(rep.rank_g));
    rep.rank_lemma = verify_rank_lemma(f, g, opt.cell_budget);
    GadgetMatrix composed = compose(f, g, opt.cell_budget);
    CoverResult cov = cover_number(composed, CoverMode::Exact, opt.cover_node_budget);
    rep.cover_size = static_cast<std::uint64_t>(cov.size);
    rep.cover_exact = cov.exact;
    rep.chain_lhs = std::log2(static_cast<double>(rep.cover_size));
    if (!rep.degenerate) {
        ExtractionOptions eo;
        eo.cell_budget = opt.cell_budget;
        Extraction ex = extract_rectangle_from_cover(f, g, cov.cover, eo);
        rep.extraction_ok = ex.trace.density_ok;
        rep.extraction_biased = ex.trace.biased_branch;
        SynthesisResult sq = synthesize_protocol(f, g, cov.cover, Field::Rationals, opt.cell_budget);
        SynthesisResult s2 = synthesize_protocol(f, g, cov.cover, Field::F2, opt.cell_budget);
        rep.synth_q = sq.stats;
        rep.synth_f2 = s2.stats;
        rep.rebalance_ok = sq.stats.rebalanced_depth <= sq.stats.rebalanced_bound &&
                           s2.stats.rebalanced_depth <= s2.stats.rebalanced_bound;
        if (rep.rank_g >= 2) {
            double lrk = std::log2(static_cast<double>(rep.rank_g));
            double s = rep.measures.s, dg = rep.measures.deg;
            rep.chain_defined = true;
            rep.chain_rhs = s * (static_cast<double>(rep.gadget_cc) / lrk - lrk);
            rep.chain_cor_rhs = (s * dg / (2 * s + dg)) * (static_cast<double>(rep.gadget_cc) / lrk + lrk);
        }
    }
    return rep;
}

}  // namespace liftlab
