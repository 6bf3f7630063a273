// Acceptance gate: one pass/fail line per shipping criterion, exit 0 only if
// every line passes. Runs the suites at their default budgets and pins the
// expected tallies, so any silent behavior drift shows up here first.

#include <liftlab/suites.hpp>

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

using namespace liftlab;

namespace {

struct Slice {
    std::uint64_t total = 0;
    std::array<std::uint64_t, 5> by{};
    std::uint64_t n(CheckStatus s) const { return by[std::size_t(s)]; }
};

Slice slice(const SuiteReport& rep, const std::string& prefix, const std::string& exclude = "") {
    Slice out;
    for (const SuiteCheck& c : rep.checks) {
        if (c.name.rfind(prefix, 0) != 0) continue;
        if (!exclude.empty() && c.name.rfind(exclude, 0) == 0) continue;
        ++out.total;
        ++out.by[std::size_t(c.status)];
    }
    return out;
}

int failures = 0;

void line(int id, bool ok, const std::string& text, const std::string& stats) {
    if (!ok) ++failures;
    std::printf("criterion %d: %s — %s [%s]\n", id, ok ? "PASS" : "FAIL", text.c_str(), stats.c_str());
    std::fflush(stdout);
}

std::string tally_str(const SuiteReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "checks=%zu pass=%llu fail=%llu vacuous=%llu degenerate=%llu skipped=%llu wall=%llums",
                  r.checks.size(), (unsigned long long)r.count(CheckStatus::Pass),
                  (unsigned long long)r.count(CheckStatus::Fail), (unsigned long long)r.count(CheckStatus::Vacuous),
                  (unsigned long long)r.count(CheckStatus::Degenerate),
                  (unsigned long long)r.count(CheckStatus::Skipped), (unsigned long long)r.wall_ms);
    return buf;
}

std::string slice_str(const Slice& s) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "checks=%llu pass=%llu fail=%llu degenerate=%llu skipped=%llu",
                  (unsigned long long)s.total, (unsigned long long)s.n(CheckStatus::Pass),
                  (unsigned long long)s.n(CheckStatus::Fail), (unsigned long long)s.n(CheckStatus::Degenerate),
                  (unsigned long long)s.n(CheckStatus::Skipped));
    return buf;
}

}  // namespace

int main() {
    std::printf("liftlab acceptance (seed=0, default budgets)\n");
    std::fflush(stdout);

    // 1. measure relations: exhaustive through arity 3 plus 200 sampled 4-bit
    // functions, inside one minute of wall clock
    {
        SuiteReport r = run_relations();
        bool ok = r.checks.size() == 476 && r.count(CheckStatus::Pass) == 470 &&
                  r.count(CheckStatus::Degenerate) == 6 && r.count(CheckStatus::Fail) == 0 && r.wall_ms < 60'000;
        line(1, ok, "polynomial measure relations hold on the full corpus within a minute", tally_str(r));

        // 2 and 3 share the rank-lemma report
        SuiteReport rl = run_rank_lemma();
        Slice prod = slice(rl, "product-rank/");
        bool ok2 = prod.total == 520 && prod.n(CheckStatus::Fail) == 0 && prod.n(CheckStatus::Degenerate) == 52 &&
                   prod.n(CheckStatus::Pass) == 468;
        line(2, ok2, "composed rank is at least (rank(g)-1)^deg(f), zero tolerance", slice_str(prod));

        Slice par = slice(rl, "parity-rank/");
        bool ok3 = par.total == 55 && par.n(CheckStatus::Pass) == 55;
        line(3, ok3, "parity-composition rank bound (rank(g)-1)^n - 1 holds for n=1..3", slice_str(par));
    }

    // 4. rectangle extraction: exact density bound, independent max-density
    // cross-check, replayable trace on every completed instance
    {
        SuiteReport r = run_lemma3();
        bool traces = true;
        for (const SuiteCheck& c : r.checks)
            if (c.status == CheckStatus::Pass) {
                bool has = !c.witnesses.empty() && c.witnesses[0].kind == "trace";
                if (has) {
                    try {
                        ExtractionTrace::parse(c.witnesses[0].payload);
                    } catch (...) {
                        has = false;
                    }
                }
                traces = traces && has;
            }
        bool ok = r.checks.size() == 7176 && r.count(CheckStatus::Pass) == 4820 &&
                  r.count(CheckStatus::Skipped) == 2200 && r.count(CheckStatus::Degenerate) == 156 &&
                  r.count(CheckStatus::Fail) == 0 && traces && r.wall_ms < 600'000;
        line(4, ok, "dense monochromatic rectangle extraction with replayable traces inside ten minutes",
             tally_str(r) + (traces ? "" : " MISSING-TRACES"));
    }

    // 5-7 share the synthesis report
    {
        SuiteReport r = run_synthesis();

        Slice reb = slice(r, "rebalance/");
        bool ok5 = reb.total == 100 && reb.n(CheckStatus::Pass) == 100;
        line(5, ok5, "rebalancing 100 seeded trees preserves the function within the depth bound", slice_str(reb));

        Slice f8 = slice(r, "fact8/");
        bool ok6 = f8.total == 29 && f8.n(CheckStatus::Pass) == 29;
        line(6, ok6, "exact communication meets the rank and cover lower bounds, with pinned anchors", slice_str(f8));

        Slice pair = slice(r, "synthesis/", "synthesis/highrank-");
        Slice high = slice(r, "synthesis/highrank-");
        bool chain_reported = false, chain_asserted = false;
        for (const SuiteCheck& c : r.checks)
            if (c.name.rfind("synthesis/", 0) == 0 && c.detail.find("chain_lhs=") != std::string::npos) {
                chain_reported = true;
                if (c.detail.find("(reported, not asserted)") == std::string::npos) chain_asserted = true;
            }
        bool ok7 = pair.total == 7176 && pair.n(CheckStatus::Fail) == 0 && pair.n(CheckStatus::Pass) == 4976 &&
                   pair.n(CheckStatus::Skipped) == 2200 && high.total == 2 && high.n(CheckStatus::Pass) == 2 &&
                   chain_reported && !chain_asserted;
        line(7, ok7, "protocol synthesis verifies in both fields; composition chain reported, never asserted",
             slice_str(pair) + " highrank=" + std::to_string(high.n(CheckStatus::Pass)) + "/2");
    }

    // 8. block-sensitivity reduction reaches full sensitivity and the
    // translated function agrees with the composition everywhere
    {
        SuiteReport r = run_bs_reduction();
        bool ok = r.checks.size() == 552 && r.count(CheckStatus::Pass) == 552;
        line(8, ok, "sensitivity of the reduced function equals block sensitivity, translation exact", tally_str(r));
    }

    // 9. the square-root cover bound is never violated; at desk scale the
    // right side is nonpositive and each check says so
    {
        SuiteReport r = run_fknn();
        bool documented = true;
        for (const SuiteCheck& c : r.checks)
            if (c.status == CheckStatus::Vacuous) documented = documented && c.detail.find("rhs<=0") != std::string::npos;
        bool ok = r.checks.size() == 52 && r.count(CheckStatus::Fail) == 0 && documented;
        line(9, ok, "tuple-power cover bound never violated; vacuous right sides documented",
             tally_str(r) + (documented ? "" : " UNDOCUMENTED-VACUITY"));
    }

    // 10. entropy and divergence identities on 1000 seeded rational
    // distributions at 1e-9 tolerance
    {
        SuiteReport r = run_info();
        bool ok = r.checks.size() == 750 && r.count(CheckStatus::Pass) == 750;
        line(10, ok, "entropy chain rule, conditioning, and divergence bounds at 1e-9 tolerance", tally_str(r));
    }

    std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
