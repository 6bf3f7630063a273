// Constructive pipeline: lifted distributions, rectangle extraction, synthesis,
// the block-sensitivity reduction, and the composite reports.

#include <catch2/catch_amalgamated.hpp>

#include <liftlab/corpus.hpp>
#include <liftlab/lifting.hpp>

#include <algorithm>
#include <optional>
#include <vector>

using namespace liftlab;

namespace {

GadgetMatrix heavy_ones() {  // 15/16 ones, rank 2: firmly in the biased regime
    GadgetMatrix m(4, 4, 2);
    for (auto& v : m.cells) v = 1;
    m.at(3, 3) = 0;
    return m;
}

// composed 16x16 matrices need more search room than the one-matrix default
CoverResult exact_cover(const GadgetMatrix& m) { return cover_number(m, CoverMode::Exact, 200'000'000); }

}  // namespace

TEST_CASE("lifted distributions are product measures over the fibers") {
    GadgetMatrix g = make_xor1();
    LiftedDistribution p = build_lifted_distribution(g, {1, 0});
    CHECK(p.coords() == 2);
    CHECK(p.fiber(0).size() == 2);
    CHECK(p.fiber(1).size() == 2);
    CHECK(p.support_size() == 4);
    CHECK(p.in_support({0, 0}, {1, 0}));       // g(0,1)=1, g(0,0)=0
    CHECK_FALSE(p.in_support({0, 0}, {0, 0}));  // first coordinate misses target 1

    GadgetMatrix composed = compose(TruthTable::from_index(2, 0b0110), g);
    Rectangle whole{Bitset::full(std::size_t(composed.rows)), Bitset::full(std::size_t(composed.cols)), std::nullopt};
    CHECK(p.rect_mass(whole) == 1);
    Rectangle none{Bitset(std::size_t(composed.rows)), Bitset(std::size_t(composed.cols)), std::nullopt};
    CHECK(p.rect_mass(none) == 0);

    CHECK_THROWS_AS(build_lifted_distribution(GadgetMatrix(2, 2, 2), {1}), std::invalid_argument);
    CHECK_THROWS_AS(build_lifted_distribution(g, {}), std::invalid_argument);
}

TEST_CASE("balanced regime and the max-ratio inequality") {
    CHECK(balanced_regime(make_xor1()));
    CHECK(balanced_regime(make_eq(1)));
    CHECK_FALSE(balanced_regime(heavy_ones()));
    MaxRatioReport mr = max_ratio_check(build_lifted_distribution(make_xor1(), {1, 0, 1}));
    CHECK(mr.in_balanced_regime);
    CHECK(mr.holds);
    CHECK(mr.ratio == 8);       // (4/2)^3
    CHECK(mr.bound == 512);     // (4*2)^3
}

TEST_CASE("extraction returns a dense monochromatic rectangle on balanced gadgets") {
    std::vector<GadgetMatrix> gadgets = {make_xor1(), make_eq(1), make_eq(2), make_ip(2)};
    int done_small = 0, done_large = 0;
    for (std::uint64_t mask = 1; mask < 15; ++mask) {  // nonconstant f on 2 bits
        TruthTable f = TruthTable::from_index(2, mask);
        for (const GadgetMatrix& g : gadgets) {
            CAPTURE(mask, g.rows);
            CoverResult cov;
            try {
                cov = exact_cover(compose(f, g));
            } catch (const BudgetError&) {
                // some 16x16 compositions genuinely exceed the exact-search
                // budget; skipping them mirrors the verification suites
                REQUIRE(g.rows == 4);
                continue;
            }
            ++(g.rows == 2 ? done_small : done_large);
            REQUIRE(cov.exact);
            Extraction ex = extract_rectangle_from_cover(f, g, cov.cover);
            std::uint32_t color = 0;
            REQUIRE(rect_monochromatic(g, ex.rect, &color));
            CHECK(ex.trace.density_ok);
            CHECK_FALSE(ex.trace.biased_branch);
            CHECK(density_bound_holds(ex.trace.density, cov.cover.rects.size(), sensitivity(f), rank_q(g)));
            // the rectangle's color is the gadget value the accepted position wants
            REQUIRE(ex.trace.position >= 0);
            CHECK(ex.trace.position < sensitivity(f));
            CHECK(int(color) == ex.trace.targets[std::size_t(ex.trace.position)]);
            CHECK(ex.trace.cover_size == cov.cover.rects.size());
            CHECK(ex.trace.rect_index >= 0);
            // order must be a permutation starting with the sensitive block
            std::vector<int> sorted_order = ex.trace.order;
            std::sort(sorted_order.begin(), sorted_order.end());
            CHECK(sorted_order == std::vector<int>{0, 1});
        }
    }
    CHECK(done_small == 28);  // 2x2 gadgets always fit the budget
    CHECK(done_large >= 8);   // dictator-like f keeps the 4x4 quotients tiny
}

TEST_CASE("extraction routes biased gadgets to the dominant-color rectangle") {
    TruthTable f = TruthTable::parity(2);
    GadgetMatrix g = heavy_ones();
    CoverResult cov = exact_cover(compose(f, g));
    Extraction ex = extract_rectangle_from_cover(f, g, cov.cover);
    CHECK(ex.trace.biased_branch);
    std::uint32_t color = 0;
    REQUIRE(rect_monochromatic(g, ex.rect, &color));
    CHECK(color == 1);
    CHECK(ex.trace.density >= mpq_class(1, 4));
}

TEST_CASE("extraction rejects constant functions and mismatched covers") {
    GadgetMatrix g = make_xor1();
    CoverResult cov = exact_cover(compose(TruthTable::parity(2), g));
    CHECK_THROWS_AS(extract_rectangle_from_cover(TruthTable::constant(2, true), g, cov.cover), std::invalid_argument);
    RectCover broken = cov.cover;
    broken.rects.pop_back();
    CHECK_THROWS_AS(extract_rectangle_from_cover(TruthTable::parity(2), g, broken), std::invalid_argument);
}

TEST_CASE("extraction traces round-trip through their text form") {
    TruthTable f = TruthTable::from_index(2, 0b0111);
    GadgetMatrix g = make_eq(1);
    Extraction ex = extract_rectangle_from_cover(f, g, exact_cover(compose(f, g)).cover);
    std::string text = ex.trace.to_string();
    ExtractionTrace back = ExtractionTrace::parse(text);
    CHECK(back.to_string() == text);
    CHECK(back.biased_branch == ex.trace.biased_branch);
    CHECK(back.rect_mass == ex.trace.rect_mass);
    CHECK(back.density == ex.trace.density);
    CHECK(back.order == ex.trace.order);
    CHECK(back.row_conditioning == ex.trace.row_conditioning);
    CHECK_THROWS_AS(ExtractionTrace::parse("branch=weird\n"), ParseError);
}

TEST_CASE("rank-decrement split picks the cheaper side and checks the bound") {
    GadgetMatrix g = make_eq(2);
    Rectangle zeros{Bitset::of(4, {0, 1}), Bitset::of(4, {2, 3}), 0};
    RankSplitReport rs = rank_decrement_split(g, zeros);
    CHECK(rs.rank_whole == 4);
    CHECK(rs.rank_row_block == 2);
    CHECK(rs.rank_col_block == 2);
    CHECK(rs.decrement_ok);  // 2*2 <= 4+3
    CHECK(rs.side == 0);     // ties go to rows
    CHECK(rs.keep_in == zeros.rows);
    CHECK(rs.keep_out == Bitset::of(4, {2, 3}));

    Rectangle bad{Bitset::of(4, {0, 1}), Bitset::of(4, {0, 1}), std::nullopt};
    CHECK_THROWS_AS(rank_decrement_split(g, bad), std::invalid_argument);  // not monochromatic
}

TEST_CASE("synthesis on low-rank gadgets goes straight to the finisher") {
    TruthTable f = TruthTable::parity(2);
    GadgetMatrix g = make_xor1();
    RectCover cover = exact_cover(compose(f, g)).cover;
    for (Field field : {Field::Rationals, Field::F2}) {
        SynthesisResult sr = synthesize_protocol(f, g, cover, field);
        CHECK(sr.stats.steps.empty());  // rank 2 is under the finisher threshold
        REQUIRE(sr.stats.finishers.size() == 1);
        CHECK(sr.stats.finishers[0].depth_ok);
        CHECK(sr.stats.verified);
        CHECK(verify_protocol(sr.tree, g));
        CHECK(verify_protocol(sr.rebalanced, g));
        CHECK(sr.stats.rebalanced_depth <= sr.stats.rebalanced_bound);
        CHECK(sr.stats.depth <= rank_q(g) + 1);
    }
}

TEST_CASE("synthesis on high-rank gadgets takes genuine splitting steps") {
    TruthTable f = TruthTable::dictator(1, 0);
    GadgetMatrix g = make_eq(3);
    RectCover cover = exact_cover(compose(f, g)).cover;
    REQUIRE(cover.rects.size() == 13);  // 8 singletons plus a 5-rectangle 0-cover
    for (Field field : {Field::Rationals, Field::F2}) {
        SynthesisResult sr = synthesize_protocol(f, g, cover, field);
        CAPTURE(field == Field::Rationals ? "Q" : "F2");
        CHECK_FALSE(sr.stats.steps.empty());
        CHECK(sr.stats.all_decrements_ok);
        CHECK(sr.stats.all_densities_ok);
        CHECK(sr.stats.all_finishers_ok);
        CHECK(sr.stats.verified);
        CHECK(verify_protocol(sr.tree, g));
        CHECK(verify_protocol(sr.rebalanced, g));
        CHECK(sr.stats.rebalanced_depth <= sr.stats.rebalanced_bound);
        CHECK(sr.stats.cover_size == 13);
        for (const SynthesisStep& st : sr.stats.steps) CHECK(2 * st.rank_kept_block <= st.rank_before + 3);
        for (const FinisherCall& fc : sr.stats.finishers) CHECK(fc.depth <= fc.rank + 1);
    }
}

TEST_CASE("negation symmetry detection") {
    std::optional<std::vector<int>> x = check_negation_symmetry(make_xor1());
    REQUIRE(x.has_value());
    CHECK(*x == std::vector<int>{1, 0});
    std::optional<std::vector<int>> ifl = check_negation_symmetry(make_ind_flip(2));
    REQUIRE(ifl.has_value());
    CHECK(*ifl == std::vector<int>{2, 3, 0, 1});  // flip bit toggles the row half
    CHECK_FALSE(check_negation_symmetry(make_and1()).has_value());
    CHECK_FALSE(check_negation_symmetry(make_eq(2)).has_value());
}

TEST_CASE("block-sensitivity reduction achieves full sensitivity and translates inputs") {
    std::vector<GadgetMatrix> gadgets = {make_xor1(), make_ind_flip(2)};
    for (std::uint64_t mask = 0; mask < 256; mask += 7) {  // sample of 3-bit functions
        TruthTable f = TruthTable::from_index(3, mask);
        BlockSensitivityWitness bw = block_sensitivity(f);
        for (const GadgetMatrix& g : gadgets) {
            CAPTURE(mask, g.rows);
            BsReduction red = bs_reduction(f, g);
            REQUIRE(red.reduced.arity() == bw.value);
            CHECK(sensitivity(red.reduced) == bw.value);
            // exhaustive translated equality: reduced(g(xs,ys)...) == f(g(expand...)...)
            int b = red.reduced.arity(), n = f.arity();
            std::uint64_t xspace = 1, yspace = 1;
            for (int i = 0; i < b; ++i) {
                xspace *= std::uint64_t(g.rows);
                yspace *= std::uint64_t(g.cols);
            }
            for (std::uint64_t xi = 0; xi < xspace; ++xi)
                for (std::uint64_t yi = 0; yi < yspace; ++yi) {
                    std::vector<int> xs(std::size_t(b), 0), ys(std::size_t(b), 0);
                    std::uint64_t xr = xi, yr = yi;
                    for (int i = 0; i < b; ++i) {
                        xs[std::size_t(i)] = int(xr % std::uint64_t(g.rows));
                        xr /= std::uint64_t(g.rows);
                        ys[std::size_t(i)] = int(yr % std::uint64_t(g.cols));
                        yr /= std::uint64_t(g.cols);
                    }
                    std::uint32_t zred = 0;
                    for (int i = 0; i < b; ++i) zred |= g.at(xs[std::size_t(i)], ys[std::size_t(i)]) << i;
                    std::vector<int> fx = red.expand_rows(xs), fy = red.expand_cols(ys);
                    std::uint32_t zorig = 0;
                    for (int j = 0; j < n; ++j) zorig |= g.at(fx[std::size_t(j)], fy[std::size_t(j)]) << j;
                    REQUIRE(red.reduced.eval(zred) == f.eval(zorig));
                }
        }
    }
    CHECK_THROWS_AS(bs_reduction(TruthTable::parity(2), make_and1()), std::invalid_argument);
}

TEST_CASE("square-root cover bound report never claims a violation at desk scale") {
    for (int copies = 1; copies <= 2; ++copies) {
        for (const GadgetMatrix& g : {make_xor1(), make_eq(1), make_and1()}) {
            FknnReport rep = verify_fknn(g, copies);
            CAPTURE(copies, g.rows);
            CHECK(rep.holds);
            CHECK(rep.vacuous);  // sqrt(cc) never clears loglog(|X||Y|)+1 at these sizes
            CHECK(rep.rhs <= 0);
            CHECK(rep.cc_exact);
            CHECK(rep.cover_size >= 1);
        }
    }
    FknnReport one = verify_fknn(make_eq(1), 1);
    CHECK(one.gadget_cc == 2);
    CHECK(one.cover_size == 4);
    CHECK(one.cover_exact);
    CHECK_THROWS_AS(verify_fknn(make_xor1(), 0), std::invalid_argument);
}

TEST_CASE("main chain report wires every ingredient together") {
    MainChainReport rep = verify_main_chain(TruthTable::parity(2), make_xor1());
    CHECK(rep.ingredients_ok());
    CHECK(rep.cover_exact);
    CHECK(rep.cover_size == 4);
    CHECK(rep.gadget_cc == 2);
    CHECK(rep.cc_exact);
    CHECK(rep.log_rank_ok);
    CHECK(rep.chain_defined);
    CHECK_FALSE(rep.chain_asserted);  // reported, never asserted
    CHECK(rep.chain_lhs == 2.0);      // log2 of the cover number
    CHECK(rep.rank_lemma.holds);
    CHECK(rep.synth_q.verified);
    CHECK(rep.synth_f2.verified);

    MainChainReport degen = verify_main_chain(TruthTable::constant(2, false), make_xor1());
    CHECK(degen.degenerate);
    CHECK(degen.ingredients_ok());
    CHECK_FALSE(degen.chain_defined);
}
