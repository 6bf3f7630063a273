// Exact-rational distributions and entropy facts with closed-form oracles.

#include <catch2/catch_amalgamated.hpp>

#include <liftlab/info.hpp>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

using namespace liftlab;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("distribution construction validates mass and support") {
    FiniteDistribution<int> p({{0, mpq_class(1, 2)}, {1, mpq_class(1, 2)}, {2, mpq_class(0)}});
    CHECK(p.support_size() == 2);  // zero-mass outcome dropped
    CHECK(p.prob(0) == mpq_class(1, 2));
    CHECK(p.prob(7) == 0);
    CHECK_THROWS_AS(FiniteDistribution<int>({{0, mpq_class(1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution<int>({{0, mpq_class(3, 2)}, {1, mpq_class(-1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution<int>({{0, mpq_class(1, 2)}, {0, mpq_class(1, 2)}}), std::invalid_argument);
}

TEST_CASE("entropy closed forms") {
    for (int k = 1; k <= 16; ++k) {
        std::vector<int> sup(std::size_t(k), 0);
        for (int i = 0; i < k; ++i) sup[std::size_t(i)] = i;
        CHECK(std::abs(entropy(FiniteDistribution<int>::uniform(sup)) - std::log2(double(k))) < kTol);
    }
    FiniteDistribution<int> point({{5, mpq_class(1)}});
    CHECK(entropy(point) == 0.0);
    // H(1/4) = 2 - (3/4) log2 3
    FiniteDistribution<int> quarter({{0, mpq_class(1, 4)}, {1, mpq_class(3, 4)}});
    CHECK(std::abs(entropy(quarter) - (2.0 - 0.75 * std::log2(3.0))) < kTol);
}

TEST_CASE("conditional entropy closed forms") {
    using Pair = std::pair<int, int>;
    // independent uniform bits: H(B|A) = H(B) = 1
    std::vector<std::pair<Pair, mpq_class>> ind;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ind.push_back({{a, b}, mpq_class(1, 4)});
    FiniteDistribution<Pair> indep(std::move(ind));
    CHECK(std::abs(conditional_entropy(indep) - 1.0) < kTol);
    // B determined by A: H(B|A) = 0
    FiniteDistribution<Pair> det({{{0, 0}, mpq_class(1, 2)}, {{1, 1}, mpq_class(1, 2)}});
    CHECK(std::abs(conditional_entropy(det)) < kTol);
    // anticorrelated with asymmetric marginal
    FiniteDistribution<Pair> mix({{{0, 0}, mpq_class(1, 2)}, {{0, 1}, mpq_class(1, 4)}, {{1, 0}, mpq_class(1, 4)}});
    // H(B|A=0) weighted 3/4, A=1 deterministic: (3/4) * H(1/3)
    double h13 = std::log2(3.0) - 2.0 / 3.0;
    CHECK(std::abs(conditional_entropy(mix) - 0.75 * h13) < kTol);
}

TEST_CASE("KL divergence closed forms and domain checks") {
    FiniteDistribution<int> half({{0, mpq_class(1, 2)}, {1, mpq_class(1, 2)}});
    FiniteDistribution<int> point({{0, mpq_class(1)}});
    CHECK(std::abs(kl_divergence(point, half) - 1.0) < kTol);  // log2(1/(1/2)) = 1
    CHECK(kl_divergence(half, half) == 0.0);
    FiniteDistribution<int> other({{1, mpq_class(1)}});
    CHECK_THROWS_AS(kl_divergence(half, other), std::domain_error);
    CHECK_THROWS_AS(kl_divergence(point, other), std::domain_error);
}

TEST_CASE("seeded generators are reproducible and exactly normalized") {
    FiniteDistribution<int> a = random_distribution(12, 42), b = random_distribution(12, 42);
    REQUIRE(a.support_size() == b.support_size());
    mpq_class total = 0;
    for (std::size_t i = 0; i < a.atoms().size(); ++i) {
        CHECK(a.atoms()[i] == b.atoms()[i]);
        total += a.atoms()[i].second;
    }
    CHECK(total == 1);
    auto j = random_joint_distribution(3, 4, 7);
    mpq_class jt = 0;
    for (const auto& [ab, p] : j.atoms()) jt += p;
    CHECK(jt == 1);
}

TEST_CASE("entropy inequalities hold on seeded joints") {
    using Pair = std::pair<int, int>;
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto joint = random_joint_distribution(2 + int(s % 5), 2 + int(s % 4), 1000 + s);
        std::map<int, mpq_class> ma, mb;
        for (const auto& [ab, p] : joint.atoms()) {
            ma[ab.first] += p;
            mb[ab.second] += p;
        }
        std::vector<std::pair<int, mpq_class>> aa(ma.begin(), ma.end()), bb(mb.begin(), mb.end());
        FiniteDistribution<int> pa(std::move(aa)), pb(std::move(bb));
        double hj = entropy(joint), hA = entropy(pa), hB = entropy(pb), hBgA = conditional_entropy(joint);
        CAPTURE(s);
        CHECK(std::abs(hj - hA - hBgA) < kTol);         // chain rule
        CHECK(hBgA <= hB + kTol);                       // conditioning cannot add entropy
        CHECK(hj <= std::log2(double(joint.support_size())) + kTol);
        // reversed chain via the swapped joint
        std::vector<std::pair<Pair, mpq_class>> sw;
        for (const auto& [ab, p] : joint.atoms()) sw.push_back({{ab.second, ab.first}, p});
        FiniteDistribution<Pair> swapped(std::move(sw));
        CHECK(std::abs(hj - hB - conditional_entropy(swapped)) < kTol);
    }
}

TEST_CASE("KL is nonnegative and zero exactly on itself") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto p = random_distribution(6, 2000 + s);
        // strictly positive q so the divergence is defined
        std::vector<std::pair<int, mpq_class>> qa;
        Rng rng(3000 + s);
        long total = 0;
        std::vector<long> w(6);
        for (auto& x : w) {
            x = 1 + long(rng.below(999));
            total += x;
        }
        for (int i = 0; i < 6; ++i) {
            mpq_class v(w[std::size_t(i)], total);
            v.canonicalize();
            qa.push_back({i, v});
        }
        FiniteDistribution<int> q(std::move(qa));
        CAPTURE(s);
        CHECK(kl_divergence(p, q) >= -kTol);
        CHECK(std::abs(kl_divergence(p, p)) <= kTol);
        CHECK(std::abs(kl_divergence(q, q)) <= kTol);
    }
}
