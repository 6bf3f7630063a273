#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace liftlab {

// Malformed input text (truth tables, matrices, covers, protocol trees).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation would exceed an explicit cell/node budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Default ceiling on materialized matrix cells (rows*cols). The CLI lets the
// environment raise it; library callers pass an explicit budget to override.
inline constexpr std::uint64_t kDefaultCellBudget = 1u << 22;  // 4M cells

// Deterministic seeded randomness. We consume raw mt19937_64 outputs only:
// std::uniform_int_distribution is implementation-defined, and reports for a
// fixed seed must be identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform-ish value in [0, bound). Modulo bias is irrelevant for our
    // bounds (<= 2^32) and keeps the stream layout trivial to reproduce.
    std::uint64_t below(std::uint64_t bound) { return eng_() % bound; }

    bool coin() { return eng_() & 1; }

private:
    std::mt19937_64 eng_;
};

}  // namespace liftlab
