#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftlab {

// Dynamic fixed-universe bitset. std::bitset wants the size at compile time
// and boost isn't a dependency we need for sets over at most a few thousand
// row/column indices, so this is the thin wrapper used throughout.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t universe) : n_(universe), w_((universe + 63) / 64, 0) {}

    static Bitset full(std::size_t universe) {
        Bitset b(universe);
        for (std::size_t i = 0; i < universe; ++i) b.set(i);
        return b;
    }

    static Bitset of(std::size_t universe, std::initializer_list<std::size_t> idx) {
        Bitset b(universe);
        for (std::size_t i : idx) b.set(i);
        return b;
    }

    std::size_t universe() const { return n_; }

    void set(std::size_t i) {
        check(i);
        w_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    void reset(std::size_t i) {
        check(i);
        w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    bool test(std::size_t i) const {
        check(i);
        return (w_[i >> 6] >> (i & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    bool any() const {
        for (std::uint64_t w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    // Index of the lowest set bit; universe() if empty.
    std::size_t lowest() const { return next(0); }

    // Smallest set index >= from; universe() if none.
    std::size_t next(std::size_t from) const {
        if (from >= n_) return n_;
        std::size_t wi = from >> 6;
        std::uint64_t w = w_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return (wi << 6) + static_cast<std::size_t>(__builtin_ctzll(w));
            if (++wi == w_.size()) return n_;
            w = w_[wi];
        }
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::size_t i = next(0); i < n_; i = next(i + 1)) out.push_back(i);
        return out;
    }

    Bitset operator&(const Bitset& o) const { return apply(o, [](std::uint64_t a, std::uint64_t b) { return a & b; }); }
    Bitset operator|(const Bitset& o) const { return apply(o, [](std::uint64_t a, std::uint64_t b) { return a | b; }); }
    Bitset operator^(const Bitset& o) const { return apply(o, [](std::uint64_t a, std::uint64_t b) { return a ^ b; }); }
    // Set difference (this minus o).
    Bitset minus(const Bitset& o) const { return apply(o, [](std::uint64_t a, std::uint64_t b) { return a & ~b; }); }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    bool is_subset_of(const Bitset& o) const {
        same_universe(o);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    bool intersects(const Bitset& o) const {
        same_universe(o);
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    // Orders sets by their sorted index lists, lexicographically; this is the
    // canonical tie-break order used for witnesses. Equivalent trick: the first
    // index where membership differs decides, and it belongs to the smaller set.
    bool operator<(const Bitset& o) const {
        same_universe(o);
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t d = w_[i] ^ o.w_[i];
            if (d) {
                std::uint64_t low = d & (~d + 1);
                return (w_[i] & low) != 0;
            }
        }
        return false;
    }

    const std::vector<std::uint64_t>& words() const { return w_; }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint64_t w : w_) {
            h ^= static_cast<std::size_t>(w);
            h *= 1099511628211ull;
        }
        return h ^ n_;
    }

    // "0,2,5" — the comma-separated index list used by the file formats.
    std::string to_index_list() const {
        std::string s;
        for (std::size_t i = next(0); i < n_; i = next(i + 1)) {
            if (!s.empty()) s += ',';
            s += std::to_string(i);
        }
        return s;
    }

private:
    void check(std::size_t i) const {
        if (i >= n_) throw std::out_of_range("Bitset index " + std::to_string(i) + " out of range " + std::to_string(n_));
    }
    void same_universe(const Bitset& o) const {
        if (n_ != o.n_) throw std::invalid_argument("Bitset universe mismatch");
    }
    template <class F>
    Bitset apply(const Bitset& o, F f) const {
        same_universe(o);
        Bitset r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = f(w_[i], o.w_[i]);
        return r;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace liftlab
