#include "doctest.h"
#include "oracles.hpp"

#include "qclat/error.hpp"
#include "qclat/nlf.hpp"
#include "qclat/poly_table.hpp"
#include "qclat/rng.hpp"

#include <random>
#include <atomic>
#include <thread>

using namespace qclat;

namespace {

ControlVector random_h(unsigned d, std::mt19937_64& rng)
{
    const std::uint64_t mask = d == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;
    return ControlVector(rng() & mask, d);
}

std::vector<std::int64_t> random_ints(std::size_t n, std::int64_t span, std::mt19937_64& rng)
{
    std::vector<std::int64_t> v(n);
    for (auto& x : v)
        x = -span + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(2 * span + 1)));
    return v;
}

const NlfContext& big()
{
    static const NlfContext ctx(companion_of({258, 0}), 61);
    return ctx;
}

// a U^alpha with the power taken directly (no stages), integer product.
std::vector<std::int64_t> direct_apply(const CompanionMatrix& u, std::span<const std::int64_t> a,
                                       std::uint64_t alpha)
{
    const auto m = oracle::to_dense(companion_power_mod2(u, alpha));
    return oracle::vec_mul(std::vector<std::int64_t>(a.begin(), a.end()), m);
}

} // namespace

TEST_CASE("control vector")
{
    CHECK_NOTHROW(ControlVector(0b101, 3));
    CHECK_THROWS_AS(ControlVector(0b1000, 3), Error);
    CHECK_THROWS_AS(ControlVector(0, 65), Error);
    CHECK(ControlVector(0b101, 3).get(2));
    CHECK_FALSE(ControlVector(0b101, 3).get(1));
}

TEST_CASE("stages square and invert")
{
    const NlfContext ctx(companion_of({10, 0}), 12);
    const auto u = oracle::to_dense(ctx.companion().matrix());
    CHECK(oracle::to_dense(ctx.stage(0)) == u);
    for (unsigned i = 1; i < 12; ++i)
        CHECK(ctx.stage(i) == ctx.stage(i - 1) * ctx.stage(i - 1));
    for (unsigned i = 0; i < 12; ++i)
        CHECK((ctx.stage(i) * ctx.inverse_stage(i)).is_identity());
}

TEST_CASE("apply_f examples")
{
    const unsigned e3[] = {3, 1, 0};
    const NlfContext ctx(CompanionMatrix::from_exponents(e3), 1);
    const std::vector<std::int64_t> a = {1, 0, 0};
    CHECK(apply_f(ctx, a, ControlVector(1, 1)) == std::vector<std::int64_t>{0, 1, 0});
    CHECK(apply_f(ctx, a, ControlVector(0, 1)) == a);

    std::mt19937_64 rng(20);
    const auto& b = big();
    const auto x = random_ints(258, 100, rng);
    CHECK(apply_f(b, x, ControlVector(0, 61)) == x);
    CHECK(invert_f(b, x, ControlVector(0, 61)) == x);
    for (int t = 0; t < 20; ++t) {
        const auto h = random_h(61, rng);
        const auto a1 = random_ints(258, 1000, rng);
        const auto a2 = random_ints(258, 1000, rng);
        std::vector<std::int64_t> sum(258);
        for (std::size_t i = 0; i < 258; ++i)
            sum[i] = a1[i] + a2[i];
        const auto f1 = apply_f(b, a1, h);
        const auto f2 = apply_f(b, a2, h);
        const auto fs = apply_f(b, sum, h);
        for (std::size_t i = 0; i < 258; ++i)
            REQUIRE(fs[i] == f1[i] + f2[i]);
    }
}

TEST_CASE("stage decomposition equals the direct power")
{
    std::mt19937_64 rng(21);
    for (unsigned n : {4u, 7u, 12u, 16u}) {
        const unsigned d = 5;
        const NlfContext ctx(companion_of({n, 0}), d);
        const auto a = random_ints(n, 50, rng);
        for (std::uint64_t alpha = 0; alpha < (1u << d); ++alpha) {
            const ControlVector h(alpha, d);
            REQUIRE(ctx.power(h) == companion_power_mod2(ctx.companion(), alpha));
            REQUIRE(apply_f(ctx, a, h) == direct_apply(ctx.companion(), a, alpha));
            REQUIRE((ctx.power(h) * ctx.inverse_power(h)).is_identity());
        }
    }
    const auto& b = big();
    for (int t = 0; t < 4; ++t) {
        const auto h = random_h(61, rng);
        REQUIRE(b.power(h) == companion_power_mod2(b.companion(), h.bits));
    }
}

TEST_CASE("invert_f round trip at n = 258")
{
    const auto& b = big();
    std::mt19937_64 rng(22);
    for (int t = 0; t < 1000; ++t) {
        // a few control words repeat, exercising the solver cache
        const auto h = t % 4 == 0 ? ControlVector(static_cast<std::uint64_t>(t % 7), 61) : random_h(61, rng);
        const auto a = random_ints(258, 16, rng);
        REQUIRE(invert_f(b, apply_f(b, a, h), h) == a);
    }
    CHECK(b.cache_size() <= 512);
    CHECK(b.cache_size() > 0);
}

TEST_CASE("invert_f agrees with exact rational elimination")
{
    const NlfContext ctx(companion_of({16, 0}), 8);
    std::mt19937_64 rng(23);
    int throws = 0;
    for (int t = 0; t < 200; ++t) {
        const auto h = random_h(8, rng);
        const auto x = random_ints(16, 5, rng);
        std::optional<std::vector<std::int64_t>> ref;
        try {
            ref = exact_integer_inverse_apply(ctx.power(h), x);
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::not_in_lattice);
        }
        if (ref) {
            REQUIRE(invert_f(ctx, x, h) == *ref);
        } else {
            ++throws;
            try {
                invert_f(ctx, x, h);
                FAIL("expected NotInLattice");
            } catch (const Error& e) {
                CHECK(e.code() == Errc::not_in_lattice);
            }
        }
    }
    CHECK(throws > 0);
}

TEST_CASE("unit vectors outside the integer image are rejected at n = 258")
{
    const auto& b = big();
    std::mt19937_64 rng(24);
    const auto h = random_h(61, rng);
    int rejected = 0;
    for (std::size_t j = 0; j < 8; ++j) {
        std::vector<std::int64_t> x(258, 0);
        x[j] = 1;
        try {
            const auto v = invert_f(b, x, h);
            REQUIRE(apply_f(b, v, h) == x);
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::not_in_lattice);
            ++rejected;
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("solver cache is thread-safe")
{
    const NlfContext ctx(companion_of({32, 0}), 10, 8);
    std::vector<std::thread> pool;
    std::atomic<int> bad{0};
    for (int w = 0; w < 4; ++w)
        pool.emplace_back([&, w] {
            std::mt19937_64 rng(100 + w);
            for (int t = 0; t < 200; ++t) {
                const auto h = random_h(10, rng);
                const auto a = random_ints(32, 20, rng);
                if (invert_f(ctx, apply_f(ctx, a, h), h) != a)
                    ++bad;
            }
        });
    for (auto& th : pool)
        th.join();
    CHECK(bad == 0);
    CHECK(ctx.cache_size() <= 8);
}

TEST_CASE("mod-2 view")
{
    const NlfContext ctx(companion_of({12, 0}), 4);
    std::mt19937_64 rng(25);
    for (int t = 0; t < 50; ++t) {
        const auto h = random_h(4, rng);
        const auto a = random_ints(12, 9, rng);
        BitVector a2(12);
        for (std::size_t i = 0; i < 12; ++i)
            a2.set(i, a[i] & 1);
        const auto f = apply_f(ctx, a, h);
        const auto f2 = apply_f_mod2(ctx, a2, h);
        for (std::size_t i = 0; i < 12; ++i)
            REQUIRE(f2.get(i) == static_cast<bool>(f[i] & 1));
    }
}

TEST_CASE("ANF degree is d + 1")
{
    {
        const NlfContext ctx(companion_of({6, 0}), 0);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(component_anf_degree(ctx, i) == 1);
    }
    {
        const NlfContext ctx(companion_of({6, 0}), 2);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(component_anf_degree(ctx, i) == 3);
    }
    {
        const NlfContext ctx(companion_of({8, 0}), 3);
        for (std::size_t i = 0; i < 8; ++i)
            CHECK(component_anf_degree(ctx, i) == 4);
        std::mt19937_64 rng(26);
        for (int t = 0; t < 20; ++t) {
            BitVector mask;
            do
                mask = BitVector::from_u64(rng() & 0xFF, 8);
            while (!mask.any());
            CHECK(combination_anf_degree(ctx, mask) == 4);
        }
    }
    const NlfContext too_big(companion_of({20, 0}), 5);
    CHECK_THROWS_AS(component_anf_degree(too_big, 0), Error);
}

TEST_CASE("higher derivatives")
{
    const NlfContext ctx(companion_of({8, 0}), 3);
    std::mt19937_64 rng(27);
    const auto base_a = BitVector::from_u64(rng() & 0xFF, 8);
    const auto base_h = random_h(3, rng);

    CHECK(higher_derivative(ctx, {}, base_a, base_h) == apply_f_mod2(ctx, base_a, base_h));

    // first derivative along a_j is F'(e_j, h)
    for (std::size_t j = 0; j < 8; ++j) {
        const std::size_t dir[] = {j};
        BitVector ej(8);
        ej.set(j, true);
        CHECK(higher_derivative(ctx, dir, base_a, base_h) == apply_f_mod2(ctx, ej, base_h));
    }

    // order d + 1 (one a-direction, every h-direction) is base-independent
    for (std::size_t j = 0; j < 8; ++j) {
        const std::size_t dirs[] = {j, 8, 9, 10};
        const auto ref = higher_derivative(ctx, dirs, base_a, base_h);
        CHECK(ref.any());
        for (int t = 0; t < 50; ++t) {
            const auto a = BitVector::from_u64(rng() & 0xFF, 8);
            REQUIRE(higher_derivative(ctx, dirs, a, random_h(3, rng)) == ref);
        }
    }

    // order d + 2 vanishes
    const std::size_t dirs5[] = {0, 3, 8, 9, 10};
    CHECK_FALSE(higher_derivative(ctx, dirs5, base_a, base_h).any());
}
