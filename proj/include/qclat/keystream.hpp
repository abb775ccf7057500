#pragma once

// LFSR key-schedule material: reseeded error-vector streams, per-frame
// control words and LFSR-driven block-diagonal permutations.

#include "qclat/bitmat.hpp"
#include "qclat/poly_table.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qclat {

using u128 = unsigned __int128;

/// Fibonacci LFSR of degree <= 64. State bit i is s_i; each step outputs s_0,
/// shifts right and inserts parity(state & taps) at the top. The state
/// update is the companion matrix of the feedback polynomial acting on the
/// state as a column vector.
class Lfsr {
public:
    Lfsr(PolyId poly, std::uint64_t state);

    PolyId poly() const noexcept { return poly_; }
    unsigned degree() const noexcept { return degree_; }
    std::uint64_t state() const noexcept { return state_; }
    /// Throws invalid_params for a zero or oversized state.
    void set_state(std::uint64_t state);
    std::uint64_t period() const noexcept;
    bool next_bit() noexcept;
    void step() noexcept { next_bit(); }
    /// Advance by `count` steps in O(log count) matrix products.
    void jump(std::uint64_t count);

private:
    PolyId poly_;
    unsigned degree_;
    std::uint64_t taps_;
    std::uint64_t state_;
};

/// Two-polynomial reseeding generator. The main (q) register runs for one
/// full period of 2^l - 1 steps; at the period boundary the reseed (p)
/// register takes one step and its state is loaded into the main register.
/// Both registers start from the seed. The joint state period is (2^l - 1)^2.
class ReseedingLfsr {
public:
    ReseedingLfsr(PolyId q, PolyId p, std::uint64_t seed);

    unsigned degree() const noexcept { return main_.degree(); }
    u128 period() const noexcept;
    u128 position() const noexcept { return position_; }

    bool next_bit();
    BitVector next_bits(std::size_t count);
    /// Jump to absolute stream position (reduced modulo the period).
    void seek(u128 position);

    std::uint64_t main_state() const noexcept { return main_.state(); }
    std::uint64_t reseed_state() const noexcept { return reseed_.state(); }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    Lfsr main_;
    Lfsr reseed_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0; ///< steps taken in the current main period
    u128 position_ = 0;
};

/// Next n bits of the stream.
BitVector next_error_vector(ReseedingLfsr& lfsr, std::size_t n);

/// ceil(log2 q), 0 for q = 1.
unsigned permutation_width(std::size_t q);

/// Emits one permutation of {0..q-1} per call from a ceil(log2 q)-bit LFSR:
/// a full period of states starting at the current one, mapped to
/// state - 1 and kept when below q; values never reached are appended in
/// increasing order. The state then advances one step.
class PermutationGenerator {
public:
    /// For q = 1 the polynomial and seed are ignored.
    PermutationGenerator(std::size_t q, std::uint64_t seed);
    PermutationGenerator(std::size_t q, PolyId poly, std::uint64_t seed);

    std::size_t q() const noexcept { return q_; }
    std::uint64_t state() const noexcept { return q_ == 1 ? 0 : lfsr_.state(); }
    std::vector<std::uint32_t> next_permutation();
    void jump(std::uint64_t frames);

private:
    std::size_t q_;
    Lfsr lfsr_;
};

/// Default polynomial for the permutation LFSR of block size q.
PolyId default_permutation_poly(std::size_t q);

class BlockPermutation {
public:
    BlockPermutation(std::size_t q, std::vector<std::vector<std::uint32_t>> blocks);
    static BlockPermutation identity(std::size_t q, std::size_t v);

    std::size_t q() const noexcept { return q_; }
    std::size_t v() const noexcept { return blocks_.size(); }
    std::size_t size() const noexcept { return q_ * blocks_.size(); }
    const std::vector<std::uint32_t>& block(std::size_t i) const { return blocks_.at(i); }

    /// out[i q + j] = x[i q + pi_i(j)], i.e. x P for the matrix of to_matrix().
    template <class T> std::vector<T> apply(std::span<const T> x) const;
    template <class T> std::vector<T> apply_inverse(std::span<const T> x) const;

    /// P with P[i q + pi_i(j)][i q + j] = 1.
    BinMatrix to_matrix() const;

private:
    void check_size(std::size_t len) const;

    std::size_t q_;
    std::vector<std::vector<std::uint32_t>> blocks_;
};

/// Slice i of t (bits [i g, (i+1) g), little-endian) seeds block i; the
/// blocks are those of frame `frame`. Throws zero_seed_slice for an
/// all-zero slice.
BlockPermutation build_block_permutation(const BitVector& t, std::size_t q, std::size_t v,
                                         PolyId poly, std::uint64_t frame = 0);
BlockPermutation build_block_permutation(const BitVector& t, std::size_t q, std::size_t v,
                                         std::uint64_t frame = 0);

// ----------------------------------------------------------------- inline

template <class T> std::vector<T> BlockPermutation::apply(std::span<const T> x) const
{
    check_size(x.size());
    std::vector<T> out(x.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        for (std::size_t j = 0; j < q_; ++j)
            out[i * q_ + j] = x[i * q_ + blocks_[i][j]];
    return out;
}

template <class T> std::vector<T> BlockPermutation::apply_inverse(std::span<const T> x) const
{
    check_size(x.size());
    std::vector<T> out(x.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        for (std::size_t j = 0; j < q_; ++j)
            out[i * q_ + blocks_[i][j]] = x[i * q_ + j];
    return out;
}

} // namespace qclat
