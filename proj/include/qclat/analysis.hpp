#pragma once

// Closed-form accounting: key size, rates, message expansion and the
// brute-force / differential attack cost estimates.

#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

namespace qclat {

struct SchemeParams {
    std::size_t b = 43;
    std::size_t n0 = 6;
    std::size_t dv = 3;
    std::size_t q = 43;
    std::int64_t L = 16;
    std::optional<unsigned> d; ///< control-line width; defaults to 7 ceil(log2 n)

    std::size_t n() const noexcept { return b * n0; }
    std::size_t k() const noexcept { return b * (n0 - 1); }
    std::size_t v() const noexcept { return n() / q; }
    unsigned l1() const noexcept;
    unsigned l2() const noexcept;
    unsigned gamma() const noexcept;
};

struct KeySize {
    std::size_t l1 = 0; ///< error-stream seed
    std::size_t l2 = 0; ///< control line
    std::size_t l3 = 0; ///< circulant supports
    std::size_t l4 = 0; ///< permutation seeds
    std::size_t total = 0;
    bool d_override = false; ///< l2 taken from an explicit d instead of 7 ceil(log2 n)
};

KeySize key_size_bits(const SchemeParams& p);

/// ((n-k) ceil(log2(4nL-1)) + k ceil(log2(2nL+3))) / (n ceil(log2(2L))).
mpq_class message_expansion(std::uint64_t n, std::uint64_t k, std::uint64_t L);

struct CostTerm {
    std::string label;
    double log2;
};

struct CostReport {
    std::vector<CostTerm> terms;
    double total_log2 = 0.0; ///< log2 of the product (brute force) or sum (differential)
};

/// Key-space factors: RDF code count bound, (2^l1 - 1)^2, 2^l2, (2^g)^v.
CostReport bruteforce_cost(const SchemeParams& p);
double bruteforce_cost_log2(const SchemeParams& p);

/// How many permutation rounds the differential attack has to cover.
enum class PermutationCount {
    key_space,   ///< (2^g)^v, every seed vector
    lfsr_period, ///< 2^g - 1, one permutation LFSR period
};

/// log2(k 2^{2d} + 2^{l1+l2+2} 2vq^2 + N_p k 2^{d+1}).
CostReport differential_cost(const SchemeParams& p,
                             PermutationCount np = PermutationCount::key_space);
double differential_cost_log2(const SchemeParams& p,
                              PermutationCount np = PermutationCount::key_space);

struct SchemeReport {
    SchemeParams params;
    std::size_t n = 0;
    std::size_t k = 0;
    KeySize key;
    double rate_constellation = 0.0;  ///< log2(2L) per coordinate
    double rate_packed = 0.0; ///< log2(L) bits per coordinate actually packed
    mpq_class expansion;
    CostReport bruteforce;
    CostReport differential;          ///< N_p = (2^g)^v
    CostReport differential_lfsr_np;  ///< N_p = 2^g - 1
    double rdf_count_log2 = 0.0;
};

SchemeReport scheme_report(const SchemeParams& p);

/// Aligned human-readable table.
std::string format_report_text(const SchemeReport& r);
/// key=value lines.
std::string format_report_kv(const SchemeReport& r);
/// One JSON object per line.
std::string format_report_jsonl(const SchemeReport& r);

} // namespace qclat
