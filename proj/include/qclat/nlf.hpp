#pragma once

// Nonlinear map F(a, h) = a U^alpha, alpha = sum h_i 2^i, where U is a
// companion matrix and U^alpha is the GF(2) power read as a 0/1 matrix.

#include "qclat/bitmat.hpp"

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace qclat {

/// The d-bit multiplexer control line; bit i selects stage U^{2^i}.
struct ControlVector {
    std::uint64_t bits = 0;
    unsigned width = 0;

    ControlVector() = default;
    /// Throws invalid_params when width > 64 or bits has bits above width.
    ControlVector(std::uint64_t bits, unsigned width);
    bool get(unsigned i) const noexcept { return (bits >> i) & 1u; }
};

class NlfContext {
public:
    /// d <= 64 stages. `cache_capacity` bounds the number of memoized
    /// (U^alpha, inverse) pairs.
    NlfContext(CompanionMatrix u, unsigned d, std::size_t cache_capacity = 512);

    std::size_t n() const noexcept { return u_.degree(); }
    unsigned d() const noexcept { return d_; }
    const CompanionMatrix& companion() const noexcept { return u_; }
    /// U^{2^i} mod 2.
    const BinMatrix& stage(unsigned i) const { return stages_.at(i); }
    const BinMatrix& inverse_stage(unsigned i) const { return inverse_stages_.at(i); }

    /// U^alpha mod 2 as the chained product of the stages selected by h.
    BinMatrix power(const ControlVector& h) const;
    /// (U^alpha)^{-1} mod 2 from the inverse stages.
    BinMatrix inverse_power(const ControlVector& h) const;

    /// Memoized solver for v U^alpha = x. Thread-safe.
    std::shared_ptr<const TwoAdicSolver> solver(const ControlVector& h) const;

    std::size_t cache_size() const;

private:
    void check(const ControlVector& h) const;

    CompanionMatrix u_;
    unsigned d_;
    std::vector<BinMatrix> stages_;
    std::vector<BinMatrix> inverse_stages_;

    std::size_t capacity_;
    mutable std::mutex mutex_;
    mutable std::list<std::uint64_t> lru_;
    mutable std::unordered_map<std::uint64_t,
                               std::pair<std::shared_ptr<const TwoAdicSolver>,
                                         std::list<std::uint64_t>::iterator>>
        cache_;
};

std::vector<std::int64_t> apply_f(const NlfContext& ctx, std::span<const std::int64_t> a,
                                  const ControlVector& h);

/// Throws not_in_lattice when x has no integer preimage.
std::vector<std::int64_t> invert_f(const NlfContext& ctx, std::span<const std::int64_t> x,
                                   const ControlVector& h);

/// F' = F mod 2.
BitVector apply_f_mod2(const NlfContext& ctx, const BitVector& a, const ControlVector& h);

/// Algebraic degree of the Boolean function (a, h) -> coordinate i of F'.
/// Throws too_large when n + d > 24.
unsigned component_anf_degree(const NlfContext& ctx, std::size_t i);

/// Degree of the XOR of the coordinates selected by `mask` (length n).
unsigned combination_anf_degree(const NlfContext& ctx, const BitVector& mask);

/// l-th order derivative of F' at (base_a, base_h): XOR of F' over the 2^l
/// points base + span(directions). Directions are indices into the joint
/// input a || h (index j < n flips a_j, index n + i flips h_i).
BitVector higher_derivative(const NlfContext& ctx, std::span<const std::size_t> directions,
                            const BitVector& base_a, const ControlVector& base_h);

} // namespace qclat
