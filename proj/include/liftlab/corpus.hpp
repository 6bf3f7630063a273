#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "liftlab/boolfn.hpp"
#include "liftlab/gadget.hpp"
#include "liftlab/lifting.hpp"

namespace liftlab {

// One gadget of the fixed verification corpus. `generator` + `seed` are the
// reproduction recipe: named builders ignore the seed, "random-kxk" gadgets
// regenerate bit-exactly via make_random(k, k, seed, bias_num, bias_den).
struct CorpusGadget {
    std::string name;
    std::string generator;
    std::uint64_t seed = 0;
    unsigned bias_num = 0, bias_den = 0;  // only for random draws
    GadgetMatrix matrix;
};

struct CorpusFunction {
    std::string name;
    int arity = 0;
    std::uint64_t mask = 0;  // truth table packed little-endian by input index
    TruthTable table;
};

namespace detail {

// First seed at or after seed0 whose draw is non-constant and falls in the
// requested balance regime. Deterministic: the scan order is the recipe.
inline CorpusGadget seeded_gadget(const std::string& name, int size, unsigned bias_num, unsigned bias_den,
                                  bool balanced, std::uint64_t seed0) {
    for (std::uint64_t s = seed0;; ++s) {
        GadgetMatrix m = make_random(size, size, s, bias_num, bias_den);
        if (m.is_constant()) continue;
        if (balanced_regime(m) != balanced) continue;
        return {name,     "random-" + std::to_string(size) + "x" + std::to_string(size),
                s,        bias_num,
                bias_den, std::move(m)};
    }
}

inline std::string hex_mask(int arity, std::uint64_t mask) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "n%d-0x%02llx", arity, static_cast<unsigned long long>(mask));
    return buf;
}

}  // namespace detail

// The fixed gadget list: six named constructions plus twenty seeded random
// draws, half balanced and half biased, split between 3x3 and 4x4 shapes.
inline std::vector<CorpusGadget> standard_gadgets() {
    std::vector<CorpusGadget> out;
    out.push_back({"eq1", "eq", 0, 0, 0, make_eq(1)});
    out.push_back({"xor1", "xor1", 0, 0, 0, make_xor1()});
    out.push_back({"and1", "and1", 0, 0, 0, make_and1()});
    out.push_back({"ip2", "ip", 0, 0, 0, make_ip(2)});
    out.push_back({"ind2", "ind", 0, 0, 0, make_ind(2)});
    out.push_back({"eq2", "eq", 0, 0, 0, make_eq(2)});
    for (int i = 0; i < 10; ++i) {
        int size = i < 5 ? 3 : 4;
        out.push_back(detail::seeded_gadget("rand" + std::to_string(size) + "x" + std::to_string(size) + "-bal-" +
                                                std::to_string(i % 5),
                                            size, 1, 2, true, 1000 + 100 * std::uint64_t(i)));
    }
    // biased draws alternate a 0-heavy and a 1-heavy coin; at these sizes the
    // 0-heavy regime forces rank 1 while 1-heavy admits rank 2
    for (int i = 0; i < 10; ++i) {
        int size = i < 5 ? 3 : 4;
        unsigned num = i % 2 ? 7 : 1;
        out.push_back(detail::seeded_gadget("rand" + std::to_string(size) + "x" + std::to_string(size) + "-bias-" +
                                                std::to_string(i % 5),
                                            size, num, 8, false, 5000 + 100 * std::uint64_t(i)));
    }
    return out;
}

// Gadgets of rational and GF(2) rank above the finisher threshold, so the
// synthesis recursion takes at least one genuine splitting step.
inline std::vector<CorpusGadget> high_rank_gadgets() {
    std::vector<CorpusGadget> out;
    out.push_back({"eq3", "eq", 0, 0, 0, make_eq(3)});
    for (std::uint64_t s = 9000;; ++s) {
        GadgetMatrix m = make_random(8, 8, s);
        if (m.is_constant() || rank_f2(m) < 7) continue;
        out.push_back({"rand8x8-highrank", "random-8x8", s, 1, 2, std::move(m)});
        break;
    }
    return out;
}

// Gadget pair for the block-sensitivity reduction: rows must be closed under
// complement, which holds for XOR_1 and indexing-with-flip-bit.
inline std::vector<CorpusGadget> reduction_gadgets() {
    std::vector<CorpusGadget> out;
    out.push_back({"xor1", "xor1", 0, 0, 0, make_xor1()});
    out.push_back({"indflip2", "indflip", 0, 0, 0, make_ind_flip(2)});
    return out;
}

inline CorpusFunction function_from_mask(int arity, std::uint64_t mask) {
    return {detail::hex_mask(arity, mask), arity, mask, TruthTable::from_index(arity, mask)};
}

// Every function of the given arity, by ascending truth-table mask.
inline std::vector<CorpusFunction> all_functions(int arity) {
    if (arity < 1 || arity > 5) throw std::invalid_argument("exhaustive function list wants 1 <= arity <= 5");
    std::vector<CorpusFunction> out;
    std::uint64_t end = std::uint64_t{1} << (std::uint64_t{1} << arity);
    for (std::uint64_t m = 0; m < end; ++m) out.push_back(function_from_mask(arity, m));
    return out;
}

// Seeded sample of distinct functions at the given arity.
inline std::vector<CorpusFunction> sampled_functions(int arity, int count, std::uint64_t seed) {
    if (arity < 1 || arity > 6) throw std::invalid_argument("sampled function list wants 1 <= arity <= 6");
    std::uint64_t space = std::uint64_t{1} << (std::uint64_t{1} << arity);
    if (std::uint64_t(count) > space) throw std::invalid_argument("sample larger than the function space");
    std::vector<CorpusFunction> out;
    std::vector<bool> taken(space, false);
    Rng rng(seed);
    while (int(out.size()) < count) {
        std::uint64_t m = rng.below(space);
        if (taken[m]) continue;
        taken[m] = true;
        out.push_back(function_from_mask(arity, m));
    }
    return out;
}

}  // namespace liftlab
