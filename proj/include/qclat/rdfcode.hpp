#pragma once

// RDF-QC-LDPC codes: H = [H_0 | H_1 | ... | H_{n0-1}] with b x b circulant
// blocks, each described by the support of its first row.

#include "qclat/bitmat.hpp"

#include <cstdint>
#include <gmpxx.h>
#include <vector>

namespace qclat {

class QcCode {
public:
    /// `supports[i]` is the first-row support of H_i (strictly increasing, < b).
    QcCode(std::size_t b, std::vector<std::vector<std::uint32_t>> supports);

    std::size_t b() const noexcept { return b_; }
    std::size_t n0() const noexcept { return supports_.size(); }
    std::size_t dv() const noexcept { return supports_.front().size(); }
    std::size_t n() const noexcept { return b_ * n0(); }
    std::size_t k() const noexcept { return b_ * (n0() - 1); }
    std::size_t dc() const noexcept { return n0() * dv(); }

    const std::vector<std::vector<std::uint32_t>>& supports() const noexcept { return supports_; }
    Circulant block(std::size_t i) const { return Circulant(b_, supports_[i]); }

    /// Dense (n-k) x n parity-check matrix.
    BinMatrix parity_check() const;
    /// Column indices of the ones in parity-check row r.
    std::vector<std::size_t> check_neighbors(std::size_t r) const;
    /// H * c^T over GF(2) is zero.
    bool syndrome_zero(const BitVector& word) const;

    bool operator==(const QcCode&) const = default;

private:
    std::size_t b_;
    std::vector<std::vector<std::uint32_t>> supports_;
};

struct SystematicGen {
    BinMatrix g; ///< k x n, [I_k | A]
    BinMatrix a; ///< k x (n-k)
};

struct RdfSearchOptions {
    unsigned block_attempts = 2000; ///< rejections tolerated before restarting a block
    unsigned block_restarts = 50;   ///< block restarts before a global restart
    unsigned global_restarts = 200;
};

/// Random-difference-family search. Deterministic for a fixed seed.
/// Throws invalid_params for even dv or dv >= b and search_exhausted when
/// no 4-cycle-free family with invertible last block is found in budget.
QcCode rdf_search(std::size_t b, std::size_t n0, std::size_t dv, std::uint64_t seed,
                  const RdfSearchOptions& options = {});

/// True iff no two columns of H share two or more rows (girth >= 6).
bool girth_ok(const QcCode& code);

/// Throws singular_block when H_{n0-1} is not invertible over GF(2).
SystematicGen systematic_generator(const QcCode& code);

/// Lower bound on the number of 4-cycle-free RDF codes for (b, dv, n0),
/// evaluated exactly and floored.
mpz_class count_rdf_lower_bound(std::size_t b, std::size_t dv, std::size_t n0);
double count_rdf_lower_bound_log2(std::size_t b, std::size_t dv, std::size_t n0);

} // namespace qclat
