#include "qclat/nlf.hpp"

#include "qclat/error.hpp"

#include <algorithm>
#include <bit>

namespace qclat {

ControlVector::ControlVector(std::uint64_t b, unsigned w) : bits(b), width(w)
{
    if (w > 64 || (w < 64 && (b >> w) != 0))
        throw Error(Errc::invalid_params, "control vector wider than its line");
}

NlfContext::NlfContext(CompanionMatrix u, unsigned d, std::size_t cache_capacity)
    : u_(std::move(u)), d_(d), capacity_(std::max<std::size_t>(cache_capacity, 1))
{
    if (d_ > 64)
        throw Error(Errc::invalid_params, "control line wider than 64 bits");
    if (d_ == 0)
        return;
    const BinMatrix base = u_.matrix();
    auto base_inv = base.inverse();
    if (!base_inv)
        throw Error(Errc::singular, "companion matrix not invertible");
    stages_.reserve(d_);
    inverse_stages_.reserve(d_);
    stages_.push_back(base);
    inverse_stages_.push_back(*base_inv);
    for (unsigned i = 1; i < d_; ++i) {
        stages_.push_back(stages_.back() * stages_.back());
        inverse_stages_.push_back(inverse_stages_.back() * inverse_stages_.back());
    }
}

void NlfContext::check(const ControlVector& h) const
{
    if (h.width != d_)
        throw Error(Errc::size_mismatch, "control vector width differs from d");
}

namespace {

BinMatrix chain(const std::vector<BinMatrix>& stages, const ControlVector& h, std::size_t n)
{
    std::optional<BinMatrix> acc;
    for (unsigned i = 0; i < h.width; ++i) {
        if (!h.get(i))
            continue;
        acc = acc ? *acc * stages[i] : stages[i];
    }
    return acc ? std::move(*acc) : BinMatrix::identity(n);
}

} // namespace

BinMatrix NlfContext::power(const ControlVector& h) const
{
    check(h);
    return chain(stages_, h, n());
}

BinMatrix NlfContext::inverse_power(const ControlVector& h) const
{
    check(h);
    return chain(inverse_stages_, h, n());
}

std::shared_ptr<const TwoAdicSolver> NlfContext::solver(const ControlVector& h) const
{
    check(h);
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(h.bits); it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first;
        }
    }
    // Same matrices as power()/inverse_power(), built from x^alpha directly.
    auto made = std::make_shared<const TwoAdicSolver>(companion_power_mod2(u_, h.bits),
                                                      companion_inverse_power_mod2(u_, h.bits));
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(h.bits); it != cache_.end())
        return it->second.first;
    if (cache_.size() >= capacity_) {
        cache_.erase(lru_.back());
        lru_.pop_back();
    }
    lru_.push_front(h.bits);
    cache_.emplace(h.bits, std::make_pair(made, lru_.begin()));
    return made;
}

std::size_t NlfContext::cache_size() const
{
    std::lock_guard lock(mutex_);
    return cache_.size();
}

std::vector<std::int64_t> apply_f(const NlfContext& ctx, std::span<const std::int64_t> a,
                                  const ControlVector& h)
{
    if (a.size() != ctx.n())
        throw Error(Errc::size_mismatch, "F input length");
    return ctx.solver(h)->matrix().left_mul_int(a);
}

std::vector<std::int64_t> invert_f(const NlfContext& ctx, std::span<const std::int64_t> x,
                                   const ControlVector& h)
{
    if (x.size() != ctx.n())
        throw Error(Errc::size_mismatch, "F^-1 input length");
    return ctx.solver(h)->solve(x);
}

BitVector apply_f_mod2(const NlfContext& ctx, const BitVector& a, const ControlVector& h)
{
    if (a.size() != ctx.n())
        throw Error(Errc::size_mismatch, "F' input length");
    return ctx.power(h).left_mul(a);
}

namespace {

// Truth table indexed by a | (alpha << n), value = parity(a & column(alpha)).
unsigned anf_degree_of(const NlfContext& ctx, const BitVector& mask)
{
    const std::size_t n = ctx.n();
    const unsigned d = ctx.d();
    if (n + d > 24)
        throw Error(Errc::too_large, "exhaustive ANF needs n + d <= 24");
    const std::size_t total = std::size_t{1} << (n + d);
    std::vector<std::uint8_t> table(total, 0);
    for (std::uint64_t alpha = 0; alpha < (std::uint64_t{1} << d); ++alpha) {
        // column = U^alpha * mask (combination of the selected columns)
        const BinMatrix p = ctx.power(ControlVector(alpha, d));
        const std::uint64_t col = p.right_mul(mask).to_u64();
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a)
            table[a | (alpha << n)] = static_cast<std::uint8_t>(std::popcount(a & col) & 1);
    }
    for (std::size_t step = 1; step < total; step <<= 1)
        for (std::size_t i = 0; i < total; ++i)
            if (i & step)
                table[i] ^= table[i ^ step];
    unsigned degree = 0;
    for (std::size_t i = 0; i < total; ++i)
        if (table[i])
            degree = std::max<unsigned>(degree, static_cast<unsigned>(std::popcount(i)));
    return degree;
}

} // namespace

unsigned component_anf_degree(const NlfContext& ctx, std::size_t i)
{
    if (i >= ctx.n())
        throw Error(Errc::size_mismatch, "component index");
    BitVector mask(ctx.n());
    mask.set(i, true);
    return anf_degree_of(ctx, mask);
}

unsigned combination_anf_degree(const NlfContext& ctx, const BitVector& mask)
{
    if (mask.size() != ctx.n())
        throw Error(Errc::size_mismatch, "combination mask length");
    return anf_degree_of(ctx, mask);
}

BitVector higher_derivative(const NlfContext& ctx, std::span<const std::size_t> directions,
                            const BitVector& base_a, const ControlVector& base_h)
{
    const std::size_t n = ctx.n();
    if (base_a.size() != n)
        throw Error(Errc::size_mismatch, "derivative base length");
    if (directions.size() > 24)
        throw Error(Errc::too_large, "too many derivative directions");
    for (auto dir : directions)
        if (dir >= n + ctx.d())
            throw Error(Errc::size_mismatch, "derivative direction out of range");
    BitVector acc(n);
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << directions.size()); ++subset) {
        BitVector a = base_a;
        std::uint64_t h = base_h.bits;
        for (std::size_t j = 0; j < directions.size(); ++j) {
            if (!((subset >> j) & 1u))
                continue;
            if (directions[j] < n)
                a.flip(directions[j]);
            else
                h ^= std::uint64_t{1} << (directions[j] - n);
        }
        acc ^= apply_f_mod2(ctx, a, ControlVector(h, ctx.d()));
    }
    return acc;
}

} // namespace qclat
