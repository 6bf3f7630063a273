// Protocol trees and exact communication: known values, witness soundness,
// budget degradation, rebalancing, and text round-trips.

#include <catch2/catch_amalgamated.hpp>

#include <liftlab/exactmath.hpp>
#include <liftlab/protocol.hpp>

#include <vector>

using namespace liftlab;

TEST_CASE("known exact communication values") {
    CCResult xr = exact_cc(make_xor1());
    CHECK(xr.exact);
    CHECK(xr.value == 2);
    CHECK(verify_protocol(xr.tree, make_xor1()));

    CHECK(exact_cc(make_eq(1)).value == 2);
    CHECK(exact_cc(make_and1()).value == 2);
    CHECK(exact_cc(make_eq(2)).value == 3);  // 2 bits from one side, 1 answer

    GadgetMatrix row(1, 2, 2);
    row.at(0, 1) = 1;
    CHECK(exact_cc(row).value == 1);

    CCResult cr = exact_cc(GadgetMatrix(3, 4, 2));
    CHECK(cr.exact);
    CHECK(cr.value == 0);
    CHECK(cr.tree.leaf_count() == 1);

    GadgetMatrix tri(2, 2, 3);  // three distinct symbols
    tri.at(0, 1) = 1;
    tri.at(1, 0) = 2;
    CHECK(exact_cc(tri).value == 2);
}

TEST_CASE("exact search satisfies the standard lower bounds and emits sound witnesses") {
    std::vector<GadgetMatrix> pool = {make_eq(2), make_ip(2), make_ind(2), make_ind_flip(2)};
    for (std::uint64_t s = 0; s < 10; ++s) pool.push_back(make_random(5, 5, 600 + s));
    for (std::size_t i = 0; i < pool.size(); ++i) {
        CAPTURE(i);
        CCResult r = exact_cc(pool[i]);
        REQUIRE(r.exact);
        CHECK(r.lower == r.value);
        CHECK(r.upper == r.value);
        CHECK(verify_protocol(r.tree, pool[i]));
        CHECK(r.tree.depth() == r.value);
        int rk = rank_q(pool[i]);
        if (rk > 0) CHECK(r.value >= ceil_log2_u64(std::uint64_t(rk)));
        int c = cover_number(pool[i]).size;
        CHECK(r.value >= ceil_log2_u64(std::uint64_t(c)));
        CHECK(std::uint64_t(r.tree.leaf_count()) >= std::uint64_t(c));  // leaves form a cover
        CCResult plain = exact_cc(pool[i], CCOptions{false, 5'000'000});
        CHECK(plain.value == r.value);  // duplicate merging is only a speedup
    }
}

TEST_CASE("budget exhaustion degrades to proven bounds with a working tree") {
    GadgetMatrix hard = make_random(12, 12, 999);
    CCResult r = exact_cc(hard, CCOptions{true, 300});
    CHECK_FALSE(r.exact);
    CHECK(r.lower <= r.upper);
    CHECK(r.value == r.upper);
    CHECK(verify_protocol(r.tree, hard));
    CHECK(r.tree.depth() == r.upper);
}

TEST_CASE("random correct protocols verify and respect the leaf target") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        auto [t, m] = random_correct_protocol(3 + int(s % 5), 3 + int(s % 4), 2 + int(s % 30), 2 + int(s % 2), s);
        CAPTURE(s);
        REQUIRE(verify_protocol(t, m));
        CHECK(t.leaf_count() <= 2 + int(s % 30));
        for (int x = 0; x < m.rows; ++x)
            for (int y = 0; y < m.cols; ++y) REQUIRE(eval_protocol(t, x, y) == m.at(x, y));
    }
}

TEST_CASE("rebalancing preserves the function and meets the depth bound") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        auto [t, m] = random_correct_protocol(2 + int(s % 7), 2 + int(s % 6), 2 + int(s % 40), 2, 7000 + s);
        ProtocolTree r = rebalance(t);
        CAPTURE(s, t.leaf_count(), r.depth());
        REQUIRE(verify_protocol(r, m));
        CHECK(r.depth() <= rebalanced_depth_bound(std::uint64_t(t.leaf_count())));
    }
    ProtocolTree leaf = ProtocolTree::single_leaf(3, 3, 1);
    CHECK(rebalance(leaf).depth() == 0);
}

TEST_CASE("rebalanced depth bound evaluates ceil(2 log_{3/2} leaves) exactly") {
    CHECK(rebalanced_depth_bound(1) == 0);
    CHECK(rebalanced_depth_bound(2) == 4);
    CHECK(rebalanced_depth_bound(64) == 21);
    CHECK_THROWS_AS(rebalanced_depth_bound(0), std::invalid_argument);
}

TEST_CASE("protocol text round-trips and rejects malformed input") {
    auto [t, m] = random_correct_protocol(4, 5, 9, 3, 123);
    std::string text = t.to_string();
    ProtocolTree back = ProtocolTree::parse(text);
    CHECK(back.to_string() == text);
    CHECK(verify_protocol(back, m));

    CCResult r = exact_cc(make_eq(2));
    ProtocolTree opt = ProtocolTree::parse(r.tree.to_string());
    CHECK(verify_protocol(opt, make_eq(2)));

    CHECK_THROWS_AS(ProtocolTree::parse(""), ParseError);
    CHECK_THROWS_AS(ProtocolTree::parse("rows=2 cols=2 [sym=0] junk"), ParseError);
    CHECK_THROWS_AS(ProtocolTree::parse("rows=0 cols=2 [sym=0]"), ParseError);
}

TEST_CASE("structural validation rejects broken trees") {
    ProtocolTree t;
    t.rows = t.cols = 2;
    int l0 = t.add_leaf(0), l1 = t.add_leaf(1);
    t.root = t.add_split(0, Bitset::of(2, {0}), Bitset::of(2, {1}), l0, l1);
    CHECK_NOTHROW(t.validate_structure());

    ProtocolTree overlap = t;
    overlap.nodes[std::size_t(overlap.root)].part1 = Bitset::of(2, {0, 1});
    CHECK_THROWS_AS(overlap.validate_structure(), std::invalid_argument);

    ProtocolTree gap = t;
    gap.nodes[std::size_t(gap.root)].part1 = Bitset(2);
    CHECK_THROWS_AS(gap.validate_structure(), std::invalid_argument);

    ProtocolTree shared = t;
    shared.nodes[std::size_t(shared.root)].child1 = l0;  // same leaf on both branches
    CHECK_THROWS_AS(shared.validate_structure(), std::invalid_argument);
}

TEST_CASE("protocol evaluation validates its inputs") {
    auto [t, m] = random_correct_protocol(3, 3, 4, 2, 1);
    CHECK_THROWS_AS(eval_protocol(t, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_protocol(t, 0, -1), std::invalid_argument);
}
