#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "liftlab/common.hpp"
#include "liftlab/exactmath.hpp"

namespace liftlab {

// Finite distribution with exact rational probabilities over opaque ordered
// labels. Probabilities are exact so that support questions (what the
// extraction turns into rectangles) never depend on rounding; only the
// entropies themselves are floating point.
template <class T>
class FiniteDistribution {
public:
    explicit FiniteDistribution(std::vector<std::pair<T, mpq_class>> atoms) {
        mpq_class sum = 0;
        for (auto& [label, p] : atoms) {
            if (p < 0) throw std::invalid_argument("negative probability");
            sum += p;
            if (p > 0) atoms_.emplace_back(label, p);  // zero-mass outcomes are not support
        }
        if (sum != 1) throw std::invalid_argument("probabilities must sum to exactly 1");
        std::sort(atoms_.begin(), atoms_.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t i = 1; i < atoms_.size(); ++i)
            if (!(atoms_[i - 1].first < atoms_[i].first)) throw std::invalid_argument("duplicate outcome in support");
        for (auto& [label, p] : atoms_) p.canonicalize();
    }

    static FiniteDistribution uniform(std::vector<T> support) {
        if (support.empty()) throw std::invalid_argument("uniform distribution needs a nonempty support");
        std::vector<std::pair<T, mpq_class>> atoms;
        mpq_class p(1, long(support.size()));
        for (auto& s : support) atoms.emplace_back(std::move(s), p);
        return FiniteDistribution(std::move(atoms));
    }

    const std::vector<std::pair<T, mpq_class>>& atoms() const { return atoms_; }
    std::size_t support_size() const { return atoms_.size(); }

    mpq_class prob(const T& label) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), label,
                                   [](const auto& a, const T& l) { return a.first < l; });
        if (it == atoms_.end() || it->first < label || label < it->first) return mpq_class(0);
        return it->second;
    }

private:
    std::vector<std::pair<T, mpq_class>> atoms_;
};

// Shannon entropy in bits.
template <class T>
double entropy(const FiniteDistribution<T>& p) {
    double h = 0;
    for (const auto& [label, q] : p.atoms()) h -= q.get_d() * log2_mpq(q);
    return h;
}

// H(B | A) for a joint distribution over pairs (a, b).
template <class A, class B>
double conditional_entropy(const FiniteDistribution<std::pair<A, B>>& joint) {
    std::map<A, mpq_class> marginal;
    for (const auto& [ab, p] : joint.atoms()) marginal[ab.first] += p;
    double h = 0;
    for (const auto& [ab, p] : joint.atoms()) h += p.get_d() * log2_mpq(marginal[ab.first] / p);
    return h;
}

// D(p || q) in bits; requires q > 0 wherever p > 0.
template <class T>
double kl_divergence(const FiniteDistribution<T>& p, const FiniteDistribution<T>& q) {
    double d = 0;
    for (const auto& [label, pp] : p.atoms()) {
        mpq_class qq = q.prob(label);
        if (qq == 0) throw std::domain_error("KL divergence undefined: q vanishes on the support of p");
        d += pp.get_d() * log2_mpq(pp / qq);
    }
    return d;
}

// Seeded random rational distribution on labels 0..outcomes-1 (test support):
// integer weights normalized exactly.
inline FiniteDistribution<int> random_distribution(int outcomes, std::uint64_t seed) {
    if (outcomes < 1) throw std::invalid_argument("need at least one outcome");
    Rng rng(seed);
    std::vector<long> w(static_cast<std::size_t>(outcomes));
    long total = 0;
    for (auto& x : w) {
        x = long(rng.below(1000));  // zeros allowed: they drop out of the support
        total += x;
    }
    if (total == 0) {
        w[0] = 1;
        total = 1;
    }
    std::vector<std::pair<int, mpq_class>> atoms;
    for (int i = 0; i < outcomes; ++i) {
        mpq_class p(w[std::size_t(i)], total);
        p.canonicalize();
        atoms.emplace_back(i, p);
    }
    return FiniteDistribution<int>(std::move(atoms));
}

// Seeded random joint distribution on pairs from [a_range] x [b_range].
inline FiniteDistribution<std::pair<int, int>> random_joint_distribution(int a_range, int b_range, std::uint64_t seed) {
    if (a_range < 1 || b_range < 1) throw std::invalid_argument("need at least one outcome per side");
    Rng rng(seed);
    std::vector<long> w(std::size_t(a_range) * b_range);
    long total = 0;
    for (auto& x : w) {
        x = long(rng.below(1000));
        total += x;
    }
    if (total == 0) {
        w[0] = 1;
        total = 1;
    }
    std::vector<std::pair<std::pair<int, int>, mpq_class>> atoms;
    for (int a = 0; a < a_range; ++a)
        for (int b = 0; b < b_range; ++b) {
            mpq_class p(w[std::size_t(a) * b_range + b], total);
            p.canonicalize();
            atoms.emplace_back(std::make_pair(a, b), p);
        }
    return FiniteDistribution<std::pair<int, int>>(std::move(atoms));
}

}  // namespace liftlab
