#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "liftlab/common.hpp"

namespace liftlab {

// Boolean function on n bits as an explicit truth table. Encoding is
// little-endian throughout the project: bit j of the point index is input j,
// and values[z] = f(z). Arity 0 (a bare constant) is allowed in-memory; the
// text format only carries 1 <= n <= 16.
class TruthTable {
public:
    TruthTable() = default;
    TruthTable(int arity, std::vector<std::uint8_t> values) : n_(arity), v_(std::move(values)) {
        if (arity < 0 || arity > 16) throw std::invalid_argument("truth table arity out of range [0,16]");
        if (v_.size() != (std::size_t{1} << n_)) throw std::invalid_argument("truth table has wrong length for its arity");
        for (std::uint8_t b : v_)
            if (b > 1) throw std::invalid_argument("truth table values must be 0/1");
    }

    static TruthTable constant(int arity, bool value) {
        return TruthTable(arity, std::vector<std::uint8_t>(std::size_t{1} << arity, value ? 1 : 0));
    }
    static TruthTable dictator(int arity, int coord) {
        need(coord >= 0 && coord < arity, "dictator coordinate out of range");
        return build(arity, [&](std::uint32_t z) { return (z >> coord) & 1; });
    }
    static TruthTable parity(int arity) {
        return build(arity, [&](std::uint32_t z) { return __builtin_popcount(z) & 1; });
    }
    static TruthTable and_all(int arity) {
        return build(arity, [&](std::uint32_t z) { return z + 1 == (1u << arity) ? 1 : 0; });
    }
    static TruthTable or_all(int arity) {
        return build(arity, [&](std::uint32_t z) { return z != 0 ? 1 : 0; });
    }
    static TruthTable majority(int arity) {
        need(arity % 2 == 1, "majority wants odd arity");
        return build(arity, [&](std::uint32_t z) { return 2 * __builtin_popcount(z) > arity ? 1 : 0; });
    }
    // Multiplexer: low `addr_bits` bits select which of the 2^addr_bits data
    // bits is the output; total arity addr_bits + 2^addr_bits.
    static TruthTable address(int addr_bits) {
        need(addr_bits >= 1 && addr_bits <= 3, "address selector width out of range");
        int n = addr_bits + (1 << addr_bits);
        return build(n, [&](std::uint32_t z) {
            std::uint32_t a = z & ((1u << addr_bits) - 1);
            return (z >> (addr_bits + a)) & 1;
        });
    }
    static TruthTable random(int arity, std::uint64_t seed) {
        Rng rng(seed);
        return build(arity, [&](std::uint32_t) { return rng.coin() ? 1 : 0; });
    }
    // Table packed into the bits of idx (little-endian); for exhaustive sweeps
    // over all functions of small arity.
    static TruthTable from_index(int arity, std::uint64_t idx) {
        need(arity <= 6, "from_index only covers arity <= 6");
        return build(arity, [&](std::uint32_t z) { return (idx >> z) & 1; });
    }

    // Text form: `n=2 table=0110`, table little-endian, '0'/'1' only.
    static TruthTable parse(const std::string& line) {
        std::istringstream in(line);
        std::string tn, tt;
        if (!(in >> tn >> tt)) throw ParseError("truth table line needs `n=` and `table=` fields");
        std::string extra;
        if (in >> extra) throw ParseError("trailing junk after truth table fields");
        if (tn.rfind("n=", 0) != 0 || tt.rfind("table=", 0) != 0)
            throw ParseError("truth table line must look like `n=<arity> table=<bits>`");
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(tn.substr(2), &used);
            if (used != tn.size() - 2) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError("bad arity in `" + tn + "`");
        }
        if (n < 0 || n > 16) throw ParseError("arity must be in [0,16]");
        std::string bits = tt.substr(6);
        if (bits.size() != (std::size_t{1} << n)) throw ParseError("table length does not match 2^n");
        std::vector<std::uint8_t> v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != '0' && bits[i] != '1') throw ParseError("table characters must be '0'/'1'");
            v[i] = bits[i] == '1';
        }
        return TruthTable(n, std::move(v));
    }

    std::string to_string() const {
        std::string s = "n=" + std::to_string(n_) + " table=";
        for (std::uint8_t b : v_) s += b ? '1' : '0';
        return s;
    }

    int arity() const { return n_; }
    std::uint32_t table_size() const { return std::uint32_t{1} << n_; }
    bool eval(std::uint32_t z) const { return v_[z] != 0; }
    const std::vector<std::uint8_t>& values() const { return v_; }

    bool is_constant() const {
        for (std::uint8_t b : v_)
            if (b != v_[0]) return false;
        return true;
    }

    bool operator==(const TruthTable&) const = default;

private:
    template <class F>
    static TruthTable build(int arity, F fn) {
        need(arity >= 0 && arity <= 16, "arity out of range [0,16]");
        std::vector<std::uint8_t> v(std::size_t{1} << arity);
        for (std::uint32_t z = 0; z < v.size(); ++z) v[z] = fn(z) ? 1 : 0;
        return TruthTable(arity, std::move(v));
    }
    static void need(bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    }

    int n_ = 0;
    std::vector<std::uint8_t> v_ = {0};
};

struct SensitivityWitness {
    std::uint32_t point = 0;
    std::vector<int> coords;  // all sensitive coordinates at `point`
};

inline int sensitivity_at(const TruthTable& f, std::uint32_t z) {
    int c = 0;
    for (int i = 0; i < f.arity(); ++i)
        if (f.eval(z) != f.eval(z ^ (std::uint32_t{1} << i))) ++c;
    return c;
}

inline SensitivityWitness sensitive_point(const TruthTable& f) {
    SensitivityWitness best;
    int best_s = -1;
    for (std::uint32_t z = 0; z < f.table_size(); ++z) {
        int s = sensitivity_at(f, z);
        if (s > best_s) {
            best_s = s;
            best.point = z;
        }
    }
    for (int i = 0; i < f.arity(); ++i)
        if (f.eval(best.point) != f.eval(best.point ^ (std::uint32_t{1} << i))) best.coords.push_back(i);
    return best;
}

inline int sensitivity(const TruthTable& f) { return static_cast<int>(sensitive_point(f).coords.size()); }

struct BlockSensitivityWitness {
    int value = 0;
    std::uint32_t point = 0;
    std::vector<std::uint32_t> blocks;  // bitmasks, pairwise disjoint, ascending
};

namespace detail {

// Max number of pairwise-disjoint blocks from `blocks` that fit inside
// `avail`. Blocks are minimal sensitive blocks, which is enough: shrinking a
// block of any optimal packing to a minimal sensitive subset keeps it a
// packing. Memoized on the set of still-available coordinates.
class BlockPacker {
public:
    BlockPacker(const std::vector<std::uint32_t>& blocks, int n) : blocks_(blocks), memo_(std::size_t{1} << n, -1) {}

    int solve(std::uint32_t avail) {
        if (memo_[avail] >= 0) return memo_[avail];
        int r = 0;
        if (avail) {
            std::uint32_t low = avail & (~avail + 1);
            r = solve(avail ^ low);  // lowest free coordinate stays unused
            for (std::uint32_t b : blocks_)
                if ((b & low) && (b & ~avail) == 0) r = std::max(r, 1 + solve(avail & ~b));
        }
        memo_[avail] = static_cast<int>(r);
        return r;
    }

private:
    const std::vector<std::uint32_t>& blocks_;
    std::vector<std::int16_t> memo_;
};

}  // namespace detail

inline BlockSensitivityWitness block_sensitivity(const TruthTable& f) {
    int n = f.arity();
    std::uint32_t size = f.table_size();
    BlockSensitivityWitness best;

    std::vector<std::uint8_t> reach(size);
    std::vector<std::uint32_t> minimal;
    for (std::uint32_t z = 0; z < size; ++z) {
        bool fz = f.eval(z);
        // reach[m] = some submask of m (m included) is a sensitive block at z
        for (std::uint32_t m = 0; m < size; ++m) reach[m] = m && f.eval(z ^ m) != fz;
        for (int i = 0; i < n; ++i) {
            std::uint32_t bit = std::uint32_t{1} << i;
            for (std::uint32_t m = 0; m < size; ++m)
                if (m & bit) reach[m] |= reach[m ^ bit];
        }
        minimal.clear();
        for (std::uint32_t m = 1; m < size; ++m) {
            if (!reach[m] || f.eval(z ^ m) == fz) continue;
            bool mini = true;
            for (int i = 0; i < n && mini; ++i)
                if ((m >> i) & 1) mini = !reach[m ^ (std::uint32_t{1} << i)];
            if (mini) minimal.push_back(m);
        }
        if (minimal.empty()) continue;

        detail::BlockPacker packer(minimal, n);
        int v = packer.solve(size - 1);
        if (v > best.value) {
            best.value = v;
            best.point = z;
            best.blocks.clear();
            // smallest-block-first reconstruction = lexicographically least
            // decomposition among minimal blocks
            std::uint32_t avail = size - 1;
            int remaining = v;
            while (remaining > 0) {
                for (std::uint32_t b : minimal) {
                    if ((b & ~avail) == 0 && 1 + packer.solve(avail & ~b) == remaining) {
                        best.blocks.push_back(b);
                        avail &= ~b;
                        --remaining;
                        break;
                    }
                }
            }
        }
    }
    return best;
}

// Degree of the unique multilinear polynomial over the reals, via the integer
// Moebius transform. Constant functions (including constant 0, whose
// polynomial is 0 or 1) get degree 0.
inline int degree(const TruthTable& f) {
    std::vector<int> c(f.values().begin(), f.values().end());
    int n = f.arity();
    for (int i = 0; i < n; ++i) {
        std::uint32_t bit = std::uint32_t{1} << i;
        for (std::uint32_t m = 0; m < c.size(); ++m)
            if (m & bit) c[m] -= c[m ^ bit];
    }
    int deg = 0;
    for (std::uint32_t m = 0; m < c.size(); ++m)
        if (c[m] != 0) deg = std::max(deg, __builtin_popcount(m));
    return deg;
}

namespace detail {

inline std::string table_key(const std::vector<std::uint8_t>& t) {
    std::string k((t.size() + 7) / 8, '\0');
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i]) k[i >> 3] |= char(1 << (i & 7));
    return k;
}

inline int dt_rec(int m, const std::vector<std::uint8_t>& t, std::unordered_map<std::string, int>& memo) {
    bool constant = true;
    for (std::uint8_t b : t)
        if (b != t[0]) {
            constant = false;
            break;
        }
    if (constant) return 0;
    std::string key = table_key(t);
    key += char(m);  // tables of different arity may pack alike
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    int best = m;  // querying everything always works
    std::vector<std::uint8_t> sub(t.size() / 2);
    for (int i = 0; i < m && best > 1; ++i) {
        int worst = 0;
        for (int b = 0; b < 2 && worst < best; ++b) {
            // restrict variable i to b; survivors renumber downwards
            std::uint32_t low = (std::uint32_t{1} << i) - 1;
            for (std::uint32_t a = 0; a < sub.size(); ++a) {
                std::uint32_t z = (a & low) | (std::uint32_t(b) << i) | ((a & ~low) << 1);
                sub[a] = t[z];
            }
            worst = std::max(worst, dt_rec(m - 1, sub, memo));
        }
        best = std::min(best, 1 + worst);
    }
    memo[key] = best;
    return best;
}

}  // namespace detail

// Exact decision-tree depth by memoized recursion over restrictions; the memo
// key is the restriction's own truth table, so equal subfunctions reached by
// different query orders are solved once.
inline int decision_tree_depth(const TruthTable& f) {
    std::unordered_map<std::string, int> memo;
    return detail::dt_rec(f.arity(), f.values(), memo);
}

struct RelationCheck {
    std::string name;
    long long lhs = 0, rhs = 0;
    bool holds = false;
};

struct MeasureRelations {
    bool degenerate = false;  // constant f: the relations are skipped
    int s = 0, bs = 0, deg = 0, dt = 0;
    std::vector<RelationCheck> checks;
    bool all_hold() const {
        for (const auto& c : checks)
            if (!c.holds) return false;
        return true;
    }
};

inline MeasureRelations check_measure_relations(const TruthTable& f) {
    MeasureRelations r;
    if (f.is_constant()) {
        r.degenerate = true;
        return r;
    }
    r.s = sensitivity(f);
    r.bs = block_sensitivity(f).value;
    r.deg = degree(f);
    r.dt = decision_tree_depth(f);
    long long s = r.s, bs = r.bs, deg = r.deg, dt = r.dt;
    auto add = [&](const char* name, long long lhs, long long rhs) { r.checks.push_back({name, lhs, rhs, lhs <= rhs}); };
    add("deg<=DT", deg, dt);
    add("s<=DT", s, dt);
    add("deg<=s^2", deg, s * s);            // the sqrt(deg) <= s side, squared
    add("s<=2deg^2", s, 2 * deg * deg);
    add("DT<=2deg^3", dt, 2 * deg * deg * deg);
    add("DT<=bs*deg", dt, bs * deg);
    return r;
}

}  // namespace liftlab
