#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liftlab/bits.hpp"
#include "liftlab/common.hpp"
#include "liftlab/exactmath.hpp"
#include "liftlab/gadget.hpp"
#include "liftlab/rectcover.hpp"

namespace liftlab {

// Deterministic protocol tree. Internal nodes bipartition the speaking side's
// current set; leaves announce an output symbol. Node 0 is not special: `root`
// names the root, children are indices into `nodes`.
struct ProtocolTree {
    struct Node {
        bool leaf = false;
        std::uint32_t symbol = 0;    // leaves only
        int owner = 0;               // 0 = Alice (rows), 1 = Bob (cols)
        Bitset part0, part1;         // bipartition of the owner's current set
        int child0 = -1, child1 = -1;
    };

    int rows = 0, cols = 0;
    std::vector<Node> nodes;
    int root = -1;

    static ProtocolTree single_leaf(int rows, int cols, std::uint32_t symbol) {
        ProtocolTree t;
        t.rows = rows;
        t.cols = cols;
        t.nodes.push_back({true, symbol, 0, Bitset(), Bitset(), -1, -1});
        t.root = 0;
        return t;
    }

    int add_leaf(std::uint32_t symbol) {
        nodes.push_back({true, symbol, 0, Bitset(), Bitset(), -1, -1});
        return int(nodes.size()) - 1;
    }
    int add_split(int owner, Bitset part0, Bitset part1, int child0, int child1) {
        nodes.push_back({false, 0, owner, std::move(part0), std::move(part1), child0, child1});
        return int(nodes.size()) - 1;
    }

    int depth_below(int id) const {
        const Node& n = nodes.at(std::size_t(id));
        if (n.leaf) return 0;
        return 1 + std::max(depth_below(n.child0), depth_below(n.child1));
    }
    int depth() const { return depth_below(root); }

    int leaves_below(int id) const {
        const Node& n = nodes.at(std::size_t(id));
        if (n.leaf) return 1;
        return leaves_below(n.child0) + leaves_below(n.child1);
    }
    int leaf_count() const { return leaves_below(root); }

    // Structural sanity: indices in range, partitions partition the owner's
    // current set, parts nonempty, node-sharing free (it's a tree).
    void validate_structure() const {
        if (rows < 1 || cols < 1) throw std::invalid_argument("protocol tree needs positive dimensions");
        if (root < 0 || root >= int(nodes.size())) throw std::invalid_argument("protocol tree root out of range");
        std::vector<char> seen(nodes.size(), 0);
        validate_rec(root, Bitset::full(std::size_t(rows)), Bitset::full(std::size_t(cols)), seen);
    }

    std::string to_string() const {
        std::string out = "rows=" + std::to_string(rows) + " cols=" + std::to_string(cols) + " ";
        print_rec(root, out);
        return out;
    }

    static ProtocolTree parse(const std::string& text) {
        std::size_t pos = 0;
        auto skip = [&] {
            while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t')) ++pos;
        };
        auto expect_prefix = [&](const std::string& p) {
            if (text.compare(pos, p.size(), p) != 0) throw ParseError("protocol text: expected `" + p + "`");
            pos += p.size();
        };
        auto read_int = [&]() -> long {
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) throw ParseError("protocol text: expected a number");
            return std::stol(text.substr(start, pos - start));
        };
        skip();
        expect_prefix("rows=");
        long r = read_int();
        skip();
        expect_prefix("cols=");
        long c = read_int();
        if (r < 1 || c < 1 || r > 100000 || c > 100000) throw ParseError("protocol dimensions out of range");
        ProtocolTree t;
        t.rows = int(r);
        t.cols = int(c);
        t.root = t.parse_rec(text, pos);
        skip();
        if (pos != text.size()) throw ParseError("protocol text: trailing junk");
        return t;
    }

private:
    void validate_rec(int id, const Bitset& a, const Bitset& b, std::vector<char>& seen) const {
        if (id < 0 || id >= int(nodes.size())) throw std::invalid_argument("protocol child index out of range");
        if (seen[std::size_t(id)]) throw std::invalid_argument("protocol node shared between branches");
        seen[std::size_t(id)] = 1;
        if (!a.any() || !b.any()) throw std::invalid_argument("protocol node has an empty rectangle");
        const Node& n = nodes[std::size_t(id)];
        if (n.leaf) return;
        const Bitset& cur = n.owner == 0 ? a : b;
        if (n.part0.universe() != cur.universe() || n.part1.universe() != cur.universe())
            throw std::invalid_argument("protocol partition universe mismatch");
        if (!n.part0.any() || !n.part1.any()) throw std::invalid_argument("protocol partition has an empty part");
        if (n.part0.intersects(n.part1)) throw std::invalid_argument("protocol partition parts overlap");
        if ((n.part0 | n.part1) != cur) throw std::invalid_argument("protocol partition does not cover the current set");
        if (n.owner == 0) {
            validate_rec(n.child0, n.part0, b, seen);
            validate_rec(n.child1, n.part1, b, seen);
        } else {
            validate_rec(n.child0, a, n.part0, seen);
            validate_rec(n.child1, a, n.part1, seen);
        }
    }

    void print_rec(int id, std::string& out) const {
        const Node& n = nodes.at(std::size_t(id));
        if (n.leaf) {
            out += "[sym=" + std::to_string(n.symbol) + "]";
            return;
        }
        out += '(';
        out += n.owner == 0 ? 'A' : 'B';
        out += ' ';
        out += n.part0.to_index_list();
        out += '|';
        out += n.part1.to_index_list();
        out += ' ';
        print_rec(n.child0, out);
        out += ' ';
        print_rec(n.child1, out);
        out += ')';
    }

    int parse_rec(const std::string& text, std::size_t& pos) {
        auto skip = [&] {
            while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t')) ++pos;
        };
        skip();
        if (pos >= text.size()) throw ParseError("protocol text: unexpected end");
        if (text[pos] == '[') {
            ++pos;
            if (text.compare(pos, 4, "sym=") != 0) throw ParseError("protocol leaf: expected `sym=`");
            pos += 4;
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start || pos >= text.size() || text[pos] != ']') throw ParseError("protocol leaf: malformed");
            std::uint32_t sym = std::uint32_t(std::stoul(text.substr(start, pos - start)));
            ++pos;
            return add_leaf(sym);
        }
        if (text[pos] != '(') throw ParseError("protocol text: expected `(` or `[`");
        ++pos;
        skip();
        if (pos >= text.size() || (text[pos] != 'A' && text[pos] != 'B')) throw ParseError("protocol node: owner must be A or B");
        int owner = text[pos] == 'A' ? 0 : 1;
        ++pos;
        skip();
        std::size_t universe = std::size_t(owner == 0 ? rows : cols);
        auto read_part = [&](char stop) {
            Bitset b(universe);
            bool got = false;
            while (true) {
                std::size_t start = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                if (pos == start) throw ParseError("protocol node: expected an index");
                long v = std::stol(text.substr(start, pos - start));
                if (v < 0 || std::size_t(v) >= universe) throw ParseError("protocol node: index out of range");
                b.set(std::size_t(v));
                got = true;
                if (pos < text.size() && text[pos] == ',') {
                    ++pos;
                    continue;
                }
                break;
            }
            if (!got || pos >= text.size() || text[pos] != stop) throw ParseError("protocol node: malformed partition");
            ++pos;
            return b;
        };
        Bitset p0 = read_part('|');
        Bitset p1 = read_part(' ');
        int c0 = parse_rec(text, pos);
        int c1 = parse_rec(text, pos);
        skip();
        if (pos >= text.size() || text[pos] != ')') throw ParseError("protocol node: expected `)`");
        ++pos;
        return add_split(owner, std::move(p0), std::move(p1), c0, c1);
    }
};

// Walk the tree on concrete inputs; throws on malformed trees (an input that
// falls in neither part means the partitions don't match the ancestors).
inline std::uint32_t eval_protocol(const ProtocolTree& t, int x, int y) {
    if (x < 0 || x >= t.rows || y < 0 || y >= t.cols) throw std::invalid_argument("protocol input out of range");
    int id = t.root;
    for (int guard = 0; guard <= int(t.nodes.size()); ++guard) {
        const ProtocolTree::Node& n = t.nodes.at(std::size_t(id));
        if (n.leaf) return n.symbol;
        std::size_t v = std::size_t(n.owner == 0 ? x : y);
        if (n.part0.test(v))
            id = n.child0;
        else if (n.part1.test(v))
            id = n.child1;
        else
            throw std::invalid_argument("protocol walk fell outside both parts: malformed tree");
    }
    throw std::invalid_argument("protocol walk did not terminate: malformed tree");
}

// True iff t is structurally valid for m's dimensions and every cell evaluates
// to its matrix entry (equivalently: every leaf rectangle is monochromatic
// with the leaf symbol).
inline bool verify_protocol(const ProtocolTree& t, const GadgetMatrix& m) {
    if (t.rows != m.rows || t.cols != m.cols) return false;
    try {
        t.validate_structure();
        for (int x = 0; x < m.rows; ++x)
            for (int y = 0; y < m.cols; ++y)
                if (eval_protocol(t, x, y) != m.at(x, y)) return false;
    } catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

struct CCOptions {
    bool merge_duplicates = true;       // merge identical rows/cols of the current submatrix
    std::uint64_t node_budget = 5'000'000;
};

struct CCResult {
    int value = 0;          // exact D(M), or the best upper bound if not exact
    bool exact = false;
    int lower = 0, upper = 0;
    ProtocolTree tree;      // witness achieving `upper` (exact => upper == value)
    std::uint64_t nodes = 0;
};

namespace detail {

struct CCKey {
    std::vector<std::uint64_t> w;
    bool operator==(const CCKey&) const = default;
};
struct CCKeyHash {
    std::size_t operator()(const CCKey& k) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint64_t x : k.w) {
            h ^= std::size_t(x);
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct CCEntry {
    int lower = 0;
    int exact_val = -1;  // >= 0 once solved exactly
};

struct BudgetStop {};  // internal: unwinds the search when the node budget runs out

class CCSearch {
public:
    CCSearch(const GadgetMatrix& m, const CCOptions& opt) : m_(m), opt_(opt), budget_(opt.node_budget) {}

    // headroom so witness reconstruction never dies right after a completed search
    void extend_budget() { budget_ += budget_ + 1000; }

    // Nonempty proper bipartitions of the class list, part0 containing class 0
    // (each split counted once). pick indexes which further classes join part0.
    static void expand_mask(const std::vector<Bitset>& groups, std::uint64_t pick, Bitset& part0, Bitset& part1) {
        std::uint64_t mask = (pick << 1) | 1;
        part0 = Bitset(groups[0].universe());
        part1 = Bitset(groups[0].universe());
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if ((mask >> gi) & 1)
                part0 = part0 | groups[gi];
            else
                part1 = part1 | groups[gi];
        }
    }

    // Exact value if it is <= limit; otherwise a valid lower bound > limit.
    int solve(const Bitset& a, const Bitset& b, int limit) {
        if (mono(a, b)) return 0;
        CCKey key = make_key(a, b);
        int lower;
        {
            CCEntry& e = memo_[key];  // careful: recursion below invalidates this reference
            if (e.exact_val >= 0) return e.exact_val;
            if (e.lower == 0) e.lower = static_lower(a, b);
            if (e.lower > limit) return e.lower;
            lower = e.lower;
        }
        if (++nodes_ > budget_) throw BudgetStop{};

        int best = INT_MAX;
        int fail_floor = INT_MAX;  // min over failed moves of their proven floor
        for (int owner = 0; owner < 2 && best > lower; ++owner) {
            std::vector<Bitset> groups = classes(a, b, owner);
            if (groups.size() < 2) continue;
            if (groups.size() > 24) throw BudgetStop{};  // 2^23 bipartitions is past any sane budget
            std::uint64_t splits = (std::uint64_t{1} << (groups.size() - 1)) - 1;
            Bitset part0, part1;
            for (std::uint64_t pick = 0; pick < splits && best > lower; ++pick) {
                expand_mask(groups, pick, part0, part1);
                const Bitset& a0 = owner == 0 ? part0 : a;
                const Bitset& b0 = owner == 0 ? b : part0;
                const Bitset& a1 = owner == 0 ? part1 : a;
                const Bitset& b1 = owner == 0 ? b : part1;
                int v0 = solve(a0, b0, limit - 1);
                if (v0 > limit - 1) {
                    fail_floor = std::min(fail_floor, 1 + v0);
                    continue;
                }
                int v1 = solve(a1, b1, limit - 1);
                if (v1 > limit - 1) {
                    fail_floor = std::min(fail_floor, 1 + v1);
                    continue;
                }
                best = std::min(best, 1 + std::max(v0, v1));
            }
        }
        CCEntry& e = memo_[key];
        if (best <= limit) {
            e.exact_val = best;
            return best;
        }
        // every bipartition forced some child above limit-1
        e.lower = std::max(e.lower, std::min(fail_floor, limit + 1));
        return e.lower;
    }

    // Rebuild a witness of depth <= d; only valid after solve(...) succeeded.
    int build(ProtocolTree& t, const Bitset& a, const Bitset& b, int d) {
        std::uint32_t color = 0;
        if (mono(a, b, &color)) return t.add_leaf(color);
        for (int owner = 0; owner < 2; ++owner) {
            std::vector<Bitset> groups = classes(a, b, owner);
            if (groups.size() < 2) continue;
            if (groups.size() > 24) throw BudgetStop{};
            std::uint64_t splits = (std::uint64_t{1} << (groups.size() - 1)) - 1;
            Bitset part0, part1;
            for (std::uint64_t pick = 0; pick < splits; ++pick) {
                expand_mask(groups, pick, part0, part1);
                const Bitset& a0 = owner == 0 ? part0 : a;
                const Bitset& b0 = owner == 0 ? b : part0;
                const Bitset& a1 = owner == 0 ? part1 : a;
                const Bitset& b1 = owner == 0 ? b : part1;
                if (solve(a0, b0, d - 1) <= d - 1 && solve(a1, b1, d - 1) <= d - 1) {
                    int c0 = build(t, a0, b0, d - 1);
                    int c1 = build(t, a1, b1, d - 1);
                    return t.add_split(owner, part0, part1, c0, c1);
                }
            }
        }
        throw std::logic_error("witness reconstruction found no feasible split at the promised depth");
    }

    // Halve the larger class list each round: cheap correct upper-bound tree.
    int build_greedy(ProtocolTree& t, const Bitset& a, const Bitset& b) {
        std::uint32_t color = 0;
        if (mono(a, b, &color)) return t.add_leaf(color);
        std::vector<Bitset> ra = classes(a, b, 0), rb = classes(a, b, 1);
        int owner = ra.size() >= rb.size() ? 0 : 1;
        std::vector<Bitset>& groups = owner == 0 ? ra : rb;
        Bitset part0(groups[0].universe()), part1(groups[0].universe());
        for (std::size_t gi = 0; gi < groups.size(); ++gi)
            (gi < (groups.size() + 1) / 2 ? part0 : part1) = (gi < (groups.size() + 1) / 2 ? part0 : part1) | groups[gi];
        int c0 = owner == 0 ? build_greedy(t, part0, b) : build_greedy(t, a, part0);
        int c1 = owner == 0 ? build_greedy(t, part1, b) : build_greedy(t, a, part1);
        return t.add_split(owner, part0, part1, c0, c1);
    }

    int static_lower(const Bitset& a, const Bitset& b) const {
        std::vector<std::uint32_t> colors;
        for (std::size_t r = a.lowest(); r < a.universe(); r = a.next(r + 1))
            for (std::size_t c = b.lowest(); c < b.universe(); c = b.next(c + 1)) colors.push_back(m_.at(int(r), int(c)));
        std::sort(colors.begin(), colors.end());
        colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
        int lb = ceil_log2_u64(colors.size());
        if (m_.is_boolean()) {
            int rk = rank_sub(m_, a, b, Field::Rationals);  // 0 for the all-zeros block
            if (rk > 0) lb = std::max(lb, ceil_log2_u64(std::uint64_t(rk)));
        }
        return lb;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    bool mono(const Bitset& a, const Bitset& b, std::uint32_t* color = nullptr) const {
        return rect_monochromatic(m_, Rectangle{a, b, std::nullopt}, color);
    }

    CCKey make_key(const Bitset& a, const Bitset& b) const {
        CCKey k;
        k.w.reserve(a.words().size() + b.words().size());
        k.w.insert(k.w.end(), a.words().begin(), a.words().end());
        k.w.insert(k.w.end(), b.words().begin(), b.words().end());
        return k;
    }

    // Equal lines of the current submatrix grouped into interchangeable
    // classes (or singletons when merging is off), ordered by lowest member.
    std::vector<Bitset> classes(const Bitset& a, const Bitset& b, int owner) const {
        const Bitset& own = owner == 0 ? a : b;
        const Bitset& other = owner == 0 ? b : a;
        std::vector<Bitset> groups;
        if (!opt_.merge_duplicates) {
            for (std::size_t i = own.lowest(); i < own.universe(); i = own.next(i + 1)) {
                Bitset g(own.universe());
                g.set(i);
                groups.push_back(std::move(g));
            }
            return groups;
        }
        std::vector<std::pair<std::vector<std::uint32_t>, std::size_t>> lines;
        for (std::size_t i = own.lowest(); i < own.universe(); i = own.next(i + 1)) {
            std::vector<std::uint32_t> pat;
            for (std::size_t j = other.lowest(); j < other.universe(); j = other.next(j + 1))
                pat.push_back(owner == 0 ? m_.at(int(i), int(j)) : m_.at(int(j), int(i)));
            lines.emplace_back(std::move(pat), i);
        }
        std::vector<char> used(lines.size(), 0);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (used[i]) continue;
            Bitset g(own.universe());
            for (std::size_t j = i; j < lines.size(); ++j) {
                if (!used[j] && lines[j].first == lines[i].first) {
                    used[j] = 1;
                    g.set(lines[j].second);
                }
            }
            groups.push_back(std::move(g));
        }
        return groups;
    }

    const GadgetMatrix& m_;
    const CCOptions& opt_;
    std::uint64_t budget_ = 0;
    std::unordered_map<CCKey, CCEntry, CCKeyHash> memo_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

// Exact deterministic communication complexity with a witness tree, by
// iterative-deepening minimax over (row set, column set) states with duplicate
// -line merging, rank and color-count floors, and memoization. On budget
// exhaustion the result degrades to proven bounds with a greedy witness.
inline CCResult exact_cc(const GadgetMatrix& m, const CCOptions& opt = {}) {
    m.validate();
    Bitset a = Bitset::full(std::size_t(m.rows)), b = Bitset::full(std::size_t(m.cols));
    detail::CCSearch search(m, opt);

    CCResult res;
    ProtocolTree greedy;
    greedy.rows = m.rows;
    greedy.cols = m.cols;
    greedy.root = search.build_greedy(greedy, a, b);
    greedy.validate_structure();
    int ub = greedy.depth();
    int lb = search.static_lower(a, b);

    int exact = -1;
    int completed = lb - 1;  // depths proven infeasible up to here
    auto degrade = [&]() {
        res.exact = false;
        res.lower = std::max(lb, completed + 1);
        res.upper = ub;
        res.value = ub;
        res.tree = greedy;
        res.nodes = search.nodes();
        return res;
    };
    try {
        for (int limit = lb; limit < ub; ++limit) {
            int v = search.solve(a, b, limit);
            if (v <= limit) {
                exact = v;
                break;
            }
            completed = limit;
        }
        if (exact < 0) exact = ub;  // greedy tree is optimal
        if (exact == ub) {
            res.tree = greedy;
        } else {
            search.extend_budget();
            ProtocolTree t;
            t.rows = m.rows;
            t.cols = m.cols;
            t.root = search.build(t, a, b, exact);
            res.tree = t;
        }
    } catch (const detail::BudgetStop&) {
        return degrade();
    }

    res.exact = true;
    res.lower = res.upper = res.value = exact;
    res.nodes = search.nodes();
    res.tree.validate_structure();
    return res;
}

// Seeded generator of a random correct (tree, matrix) pair: the tree's leaf
// rectangles partition the grid and define the matrix.
inline std::pair<ProtocolTree, GadgetMatrix> random_correct_protocol(int rows, int cols, int leaf_target,
                                                                     std::uint32_t alphabet, std::uint64_t seed) {
    if (rows < 1 || cols < 1 || leaf_target < 1 || alphabet < 1)
        throw std::invalid_argument("random protocol needs positive parameters");
    Rng rng(seed);
    ProtocolTree t;
    t.rows = rows;
    t.cols = cols;
    GadgetMatrix m(rows, cols, alphabet);

    auto rec = [&](auto&& self, const Bitset& a, const Bitset& b, int budget) -> int {
        bool can_a = a.count() >= 2, can_b = b.count() >= 2;
        if (budget <= 1 || (!can_a && !can_b)) {
            std::uint32_t sym = std::uint32_t(rng.below(alphabet));
            for (std::size_t x = a.lowest(); x < a.universe(); x = a.next(x + 1))
                for (std::size_t y = b.lowest(); y < b.universe(); y = b.next(y + 1)) m.at(int(x), int(y)) = sym;
            return t.add_leaf(sym);
        }
        int owner = can_a && can_b ? int(rng.below(2)) : (can_a ? 0 : 1);
        const Bitset& cur = owner == 0 ? a : b;
        Bitset part0(cur.universe()), part1(cur.universe());
        while (true) {
            part0 = Bitset(cur.universe());
            part1 = Bitset(cur.universe());
            for (std::size_t i = cur.lowest(); i < cur.universe(); i = cur.next(i + 1))
                (rng.coin() ? part0 : part1).set(i);
            if (part0.any() && part1.any()) break;
        }
        int b0 = 1 + int(rng.below(std::uint64_t(budget - 1)));
        int b1 = budget - b0;
        int c0 = owner == 0 ? self(self, part0, b, b0) : self(self, a, part0, b0);
        int c1 = owner == 0 ? self(self, part1, b, b1) : self(self, a, part1, b1);
        return t.add_split(owner, part0, part1, c0, c1);
    };
    t.root = rec(rec, Bitset::full(std::size_t(rows)), Bitset::full(std::size_t(cols)), leaf_target);
    t.validate_structure();
    return {t, m};
}

namespace detail {

struct Rebalancer {
    const ProtocolTree& in;
    ProtocolTree out;

    int live_below(int id, const Bitset& dead) const {
        const ProtocolTree::Node& n = in.nodes[std::size_t(id)];
        if (n.leaf) return dead.test(std::size_t(id)) ? 0 : 1;
        return live_below(n.child0, dead) + live_below(n.child1, dead);
    }

    void mark_dead(int id, Bitset& dead) const {
        const ProtocolTree::Node& n = in.nodes[std::size_t(id)];
        if (n.leaf) {
            dead.set(std::size_t(id));
            return;
        }
        mark_dead(n.child0, dead);
        mark_dead(n.child1, dead);
    }

    // Deepest node under `root` (ties to the preorder-leftmost) whose live
    // leaf count l satisfies total <= 3l <= 2 total.
    struct Pick {
        int id = -1, depth = -1;
        Bitset rect_rows, rect_cols;
    };
    void find(int id, int depth, const Bitset& dead, int total, const Bitset& a, const Bitset& b, Pick& best) const {
        int l = live_below(id, dead);
        if (3 * l >= total && 3 * l <= 2 * total && depth > best.depth) {
            best = {id, depth, a, b};
        }
        const ProtocolTree::Node& n = in.nodes[std::size_t(id)];
        if (n.leaf) return;
        if (n.owner == 0) {
            find(n.child0, depth + 1, dead, total, a & n.part0, b, best);
            find(n.child1, depth + 1, dead, total, a & n.part1, b, best);
        } else {
            find(n.child0, depth + 1, dead, total, a, b & n.part0, best);
            find(n.child1, depth + 1, dead, total, a, b & n.part1, best);
        }
    }

    int first_live_leaf(int id, const Bitset& dead) const {
        const ProtocolTree::Node& n = in.nodes[std::size_t(id)];
        if (n.leaf) return dead.test(std::size_t(id)) ? -1 : id;
        int l = first_live_leaf(n.child0, dead);
        return l >= 0 ? l : first_live_leaf(n.child1, dead);
    }

    // `id`: root of the residual protocol; (curA, curB): inputs still alive
    // given the announcements made so far in the output tree.
    int rebuild(int id, Bitset dead, const Bitset& curA, const Bitset& curB) {
        int total = live_below(id, dead);
        if (total <= 0) throw std::logic_error("rebalance reached a region with no live leaves");
        if (total == 1) {
            int leaf = first_live_leaf(id, dead);
            return out.add_leaf(in.nodes[std::size_t(leaf)].symbol);
        }
        Pick pick;
        find(id, 0, dead, total, Bitset::full(std::size_t(in.rows)), Bitset::full(std::size_t(in.cols)), pick);
        if (pick.id < 0) throw std::logic_error("rebalance found no 1/3-2/3 split node");

        // Inputs of curA x curB reach `pick` iff they lie in its rectangle.
        Bitset yesA = curA & pick.rect_rows, noA = curA.minus(pick.rect_rows);
        Bitset yesB = curB & pick.rect_cols, noB = curB.minus(pick.rect_cols);
        Bitset deadOut = dead;
        mark_dead(pick.id, deadOut);

        // No input at hand can reach pick: its leaves still drop out of the
        // residual count, so the region shrinks without spending a bit.
        if (!yesA.any() || !yesB.any()) return rebuild(id, deadOut, curA, curB);

        // Bob's half of the announcement (runs inside Alice's yes-branch).
        auto bob_side = [&](const Bitset& aNow) -> int {
            if (!noB.any()) return rebuild(pick.id, dead, aNow, yesB);  // Bob vacuous: all of curB reaches pick
            int yes = rebuild(pick.id, dead, aNow, yesB);
            int no = rebuild(id, deadOut, aNow, noB);
            return out.add_split(1, yesB, noB, yes, no);
        };
        if (!noA.any()) return bob_side(curA);  // Alice vacuous
        int yes = bob_side(yesA);
        int no = rebuild(id, deadOut, noA, curB);
        return out.add_split(0, yesA, noA, yes, no);
    }
};

}  // namespace detail

// Fact-9-style rebalancing: find a 1/3–2/3 node, spend at most two bits
// learning whether the input reaches it, recurse on the two residual
// protocols. Output depth <= ceil(2 log_{3/2} l) for an input tree with l
// leaves, computing the same function.
inline ProtocolTree rebalance(const ProtocolTree& t) {
    t.validate_structure();
    detail::Rebalancer r{t, {}};
    r.out.rows = t.rows;
    r.out.cols = t.cols;
    Bitset dead(t.nodes.size());
    r.out.root = r.rebuild(t.root, dead, Bitset::full(std::size_t(t.rows)), Bitset::full(std::size_t(t.cols)));
    r.out.validate_structure();
    return r.out;
}

}  // namespace liftlab
