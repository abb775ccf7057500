#include "qclat/keystream.hpp"

#include "qclat/error.hpp"

#include <algorithm>
#include <bit>

namespace qclat {

namespace {

std::uint64_t low_mask(unsigned degree)
{
    return degree >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree) - 1;
}

std::uint64_t jump_state(PolyId poly, std::uint64_t state, std::uint64_t count)
{
    if (count == 0)
        return state;
    const BinMatrix step = companion_of(poly).matrix();
    return matrix_power_mod2(step, count).right_mul(BitVector::from_u64(state, poly.degree)).to_u64();
}

} // namespace

// --------------------------------------------------------------------- Lfsr

Lfsr::Lfsr(PolyId poly, std::uint64_t state)
    : poly_(poly), degree_(poly.degree), taps_(tap_mask(poly)), state_(state)
{
    if (degree_ == 0 || degree_ > 64)
        throw Error(Errc::invalid_params, "LFSR degree must be in 1..64");
    if (state_ == 0 || (state_ & ~low_mask(degree_)) != 0)
        throw Error(Errc::invalid_params, "LFSR state must be nonzero and fit the register");
}

void Lfsr::set_state(std::uint64_t state)
{
    if (state == 0 || (state & ~low_mask(degree_)) != 0)
        throw Error(Errc::invalid_params, "LFSR state must be nonzero and fit the register");
    state_ = state;
}

std::uint64_t Lfsr::period() const noexcept { return low_mask(degree_); }

bool Lfsr::next_bit() noexcept
{
    const bool out = state_ & 1u;
    const std::uint64_t fb = std::popcount(state_ & taps_) & 1u;
    state_ = (state_ >> 1) | (fb << (degree_ - 1));
    return out;
}

void Lfsr::jump(std::uint64_t count)
{
    count %= period();
    if (count < 256) {
        while (count--)
            step();
        return;
    }
    state_ = jump_state(poly_, state_, count);
}

// ------------------------------------------------------------ ReseedingLfsr

ReseedingLfsr::ReseedingLfsr(PolyId q, PolyId p, std::uint64_t seed)
    : main_(q, seed), reseed_(p, seed), seed_(seed)
{
    if (q.degree != p.degree)
        throw Error(Errc::invalid_params, "reseeding polynomials must share a degree");
}

u128 ReseedingLfsr::period() const noexcept
{
    const u128 n = main_.period();
    return n * n;
}

bool ReseedingLfsr::next_bit()
{
    const bool out = main_.next_bit();
    if (++counter_ == main_.period()) {
        reseed_.step();
        main_.set_state(reseed_.state());
        counter_ = 0;
    }
    if (++position_ == period())
        position_ = 0;
    return out;
}

BitVector ReseedingLfsr::next_bits(std::size_t count)
{
    BitVector out(count);
    for (std::size_t i = 0; i < count; ++i)
        out.set(i, next_bit());
    return out;
}

void ReseedingLfsr::seek(u128 position)
{
    const u128 n = main_.period();
    position %= period();
    reseed_.set_state(seed_);
    reseed_.jump(static_cast<std::uint64_t>(position / n));
    main_.set_state(reseed_.state());
    counter_ = static_cast<std::uint64_t>(position % n);
    main_.jump(counter_);
    position_ = position;
}

BitVector next_error_vector(ReseedingLfsr& lfsr, std::size_t n) { return lfsr.next_bits(n); }

} // namespace qclat

namespace qclat {

unsigned permutation_width(std::size_t q)
{
    if (q == 0)
        throw Error(Errc::invalid_params, "permutation of an empty block");
    return q == 1 ? 0u : static_cast<unsigned>(std::bit_width(q - 1));
}

PolyId default_permutation_poly(std::size_t q)
{
    const unsigned g = permutation_width(q);
    return PolyId{g == 0 ? 1u : g, 0};
}

PermutationGenerator::PermutationGenerator(std::size_t q, std::uint64_t seed)
    : PermutationGenerator(q, default_permutation_poly(q), q == 1 ? 1 : seed)
{
}

PermutationGenerator::PermutationGenerator(std::size_t q, PolyId poly, std::uint64_t seed)
    : q_(q), lfsr_(q == 1 ? PolyId{1, 0} : poly, q == 1 ? 1 : seed)
{
    if (q_ > 1 && poly.degree != permutation_width(q_))
        throw Error(Errc::invalid_params, "permutation LFSR degree must be ceil(log2 q)");
}

std::vector<std::uint32_t> PermutationGenerator::next_permutation()
{
    std::vector<std::uint32_t> perm;
    perm.reserve(q_);
    if (q_ == 1) {
        perm.push_back(0);
        return perm;
    }
    std::vector<char> seen(q_, 0);
    Lfsr walker = lfsr_;
    for (std::uint64_t i = 0; i < walker.period() && perm.size() < q_; ++i) {
        const std::uint64_t value = walker.state() - 1;
        if (value < q_ && !seen[value]) {
            seen[value] = 1;
            perm.push_back(static_cast<std::uint32_t>(value));
        }
        walker.step();
    }
    for (std::size_t v = 0; v < q_; ++v)
        if (!seen[v])
            perm.push_back(static_cast<std::uint32_t>(v));
    lfsr_.step();
    return perm;
}

void PermutationGenerator::jump(std::uint64_t frames)
{
    if (q_ > 1)
        lfsr_.jump(frames);
}

// --------------------------------------------------------- BlockPermutation

BlockPermutation::BlockPermutation(std::size_t q, std::vector<std::vector<std::uint32_t>> blocks)
    : q_(q), blocks_(std::move(blocks))
{
    if (q_ == 0 || blocks_.empty())
        throw Error(Errc::invalid_params, "empty block permutation");
    for (const auto& b : blocks_) {
        if (b.size() != q_)
            throw Error(Errc::size_mismatch, "permutation block of the wrong size");
        std::vector<char> seen(q_, 0);
        for (auto v : b) {
            if (v >= q_ || seen[v])
                throw Error(Errc::invalid_params, "block is not a bijection");
            seen[v] = 1;
        }
    }
}

BlockPermutation BlockPermutation::identity(std::size_t q, std::size_t v)
{
    std::vector<std::uint32_t> id(q);
    for (std::size_t j = 0; j < q; ++j)
        id[j] = static_cast<std::uint32_t>(j);
    return BlockPermutation(q, std::vector<std::vector<std::uint32_t>>(v, id));
}

void BlockPermutation::check_size(std::size_t len) const
{
    if (len != size())
        throw Error(Errc::size_mismatch, "permutation input length");
}

BinMatrix BlockPermutation::to_matrix() const
{
    BinMatrix p(size(), size());
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        for (std::size_t j = 0; j < q_; ++j)
            p.set(i * q_ + blocks_[i][j], i * q_ + j, true);
    return p;
}

BlockPermutation build_block_permutation(const BitVector& t, std::size_t q, std::size_t v,
                                         PolyId poly, std::uint64_t frame)
{
    const unsigned g = permutation_width(q);
    if (t.size() != v * g)
        throw Error(Errc::size_mismatch, "permutation seed vector length");
    std::vector<std::vector<std::uint32_t>> blocks;
    blocks.reserve(v);
    for (std::size_t i = 0; i < v; ++i) {
        std::uint64_t slice = 0;
        for (unsigned b = 0; b < g; ++b)
            slice |= static_cast<std::uint64_t>(t.get(i * g + b)) << b;
        if (g > 0 && slice == 0)
            throw Error(Errc::zero_seed_slice, "slice " + std::to_string(i) + " of t is zero");
        PermutationGenerator gen(q, poly, g == 0 ? 1 : slice);
        gen.jump(frame);
        blocks.push_back(gen.next_permutation());
    }
    return BlockPermutation(q, std::move(blocks));
}

BlockPermutation build_block_permutation(const BitVector& t, std::size_t q, std::size_t v,
                                         std::uint64_t frame)
{
    return build_block_permutation(t, q, v, default_permutation_poly(q), frame);
}

} // namespace qclat
