#include "doctest.h"
#include "oracles.hpp"

#include "qclat/bitmat.hpp"
#include "qclat/error.hpp"
#include "qclat/rng.hpp"

#include <random>

using namespace qclat;

namespace {

BinMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng)
{
    BinMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, rng() & 1);
    return m;
}

BinMatrix random_invertible(std::size_t n, std::mt19937_64& rng)
{
    for (;;) {
        BinMatrix m = random_matrix(n, n, rng);
        if (m.rank() == n)
            return m;
    }
}

Errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::format;
}

} // namespace

TEST_CASE("bit vector basics")
{
    BitVector v(130);
    CHECK(v.size() == 130);
    CHECK_FALSE(v.any());
    v.set(0, true);
    v.set(129, true);
    v.flip(64);
    CHECK(v.popcount() == 3);
    CHECK(v.get(64));
    v.set(64, false);
    CHECK(v.popcount() == 2);
    CHECK(BitVector::from_u64(0b1011, 4).to_u64() == 0b1011);
    CHECK_THROWS(BitVector(3) ^= BitVector(4));
}

TEST_CASE("empty shapes are rejected")
{
    CHECK(code_of([] { BinMatrix(0, 0); }) == Errc::size_mismatch);
    CHECK(code_of([] { BinMatrix(0, 3); }) == Errc::size_mismatch);
}

TEST_CASE("product, transpose and vector products match the dense oracle")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t r = 1 + rng() % 70, k = 1 + rng() % 70, c = 1 + rng() % 70;
        const BinMatrix a = random_matrix(r, k, rng);
        const BinMatrix b = random_matrix(k, c, rng);
        CHECK(oracle::to_dense(a * b) == oracle::mul_mod2(oracle::to_dense(a), oracle::to_dense(b)));
        const auto at = oracle::to_dense(a.transpose());
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < k; ++j)
                REQUIRE(at[j][i] == a.get(i, j));

        BitVector v(r);
        std::vector<std::int64_t> iv(r);
        for (std::size_t i = 0; i < r; ++i) {
            v.set(i, rng() & 1);
            iv[i] = static_cast<std::int64_t>(rng() % 21) - 10;
        }
        const BitVector lv = a.left_mul(v);
        const auto li = a.left_mul_int(iv);
        const auto oi = oracle::vec_mul(iv, oracle::to_dense(a));
        CHECK(li == oi);
        for (std::size_t j = 0; j < k; ++j) {
            int acc = 0;
            for (std::size_t i = 0; i < r; ++i)
                acc ^= v.get(i) & a.get(i, j);
            REQUIRE(lv.get(j) == static_cast<bool>(acc));
        }
        BitVector w(k);
        for (std::size_t j = 0; j < k; ++j)
            w.set(j, rng() & 1);
        const BitVector rv = a.right_mul(w);
        for (std::size_t i = 0; i < r; ++i) {
            int acc = 0;
            for (std::size_t j = 0; j < k; ++j)
                acc ^= a.get(i, j) & w.get(j);
            REQUIRE(rv.get(i) == static_cast<bool>(acc));
        }
    }
}

TEST_CASE("rank and inverse agree with Gauss-Jordan")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng() % 90;
        const BinMatrix m = random_matrix(n, n, rng);
        const auto d = oracle::to_dense(m);
        CHECK(m.rank() == oracle::rank_mod2(d));
        const auto inv = m.inverse();
        const auto ref = oracle::inverse_mod2(d);
        REQUIRE(inv.has_value() == ref.has_value());
        if (inv) {
            CHECK(oracle::to_dense(*inv) == *ref);
            CHECK((m * *inv).is_identity());
        }
    }
    CHECK_FALSE(BinMatrix(3, 3).inverse().has_value());
    CHECK(BinMatrix::identity(5).inverse()->is_identity());
}

TEST_CASE("circulant expansion is a right cyclic shift per row")
{
    const Circulant c(11, {0, 3, 7});
    const BinMatrix d = c.dense();
    for (std::size_t i = 0; i < 11; ++i)
        for (std::size_t j = 0; j < 11; ++j)
            CHECK(d.get(i, j) == d.get(0, (j + 11 - i) % 11));
    CHECK(code_of([] { Circulant(5, {3, 1}); }) == Errc::size_mismatch);
    CHECK(code_of([] { Circulant(5, {5}); }) == Errc::size_mismatch);
}

TEST_CASE("circulant_mul")
{
    const Circulant x(5, {0, 2, 3});
    CHECK(circulant_mul(Circulant::identity(5), x) == x);
    CHECK(circulant_mul(Circulant::shift(5, 1), Circulant::shift(5, 2)) == Circulant::shift(5, 3));
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint32_t> sa, sb;
        for (std::uint32_t j = 0; j < 7; ++j) {
            if (rng() & 1)
                sa.push_back(j);
            if (rng() & 1)
                sb.push_back(j);
        }
        const Circulant a(7, sa), b(7, sb);
        CHECK(circulant_mul(a, b).dense() == a.dense() * b.dense());
    }
    CHECK(code_of([] { circulant_mul(Circulant::identity(4), Circulant::identity(5)); }) ==
          Errc::size_mismatch);
}

TEST_CASE("circulant transpose negates the support")
{
    const Circulant c(9, {0, 2, 5});
    CHECK(c.transpose().dense() == c.dense().transpose());
    CHECK(c.transpose() == Circulant(9, {0, 4, 7}));
}

TEST_CASE("circulant_inverse")
{
    CHECK(circulant_inverse(Circulant::identity(6)) == Circulant::identity(6));
    CHECK(circulant_inverse(Circulant::shift(5, 1)) == Circulant::shift(5, 4));
    std::mt19937_64 rng(14);
    int tested = 0;
    while (tested < 20) {
        std::vector<std::uint32_t> s;
        for (std::uint32_t j = 0; j < 17; ++j)
            if (rng() & 1)
                s.push_back(j);
        const Circulant a(17, s);
        if (a.dense().rank() != 17) {
            CHECK(code_of([&] { circulant_inverse(a); }) == Errc::singular_circulant);
            continue;
        }
        CHECK(circulant_mul(a, circulant_inverse(a)) == Circulant::identity(17));
        ++tested;
    }
    // (x + 1) divides x^b - 1, so even weight is always singular.
    CHECK(code_of([] { circulant_inverse(Circulant(8, {1, 6})); }) == Errc::singular_circulant);
}

TEST_CASE("companion matrix layout and integer determinant")
{
    const unsigned e[] = {3, 1, 0};
    const BinMatrix u = CompanionMatrix::from_exponents(e).matrix();
    // ones on the superdiagonal, last row (a0, a1, a2) = (1, 1, 0)
    const oracle::Dense want = {{0, 1, 0}, {0, 0, 1}, {1, 1, 0}};
    CHECK(oracle::to_dense(u) == want);
    CHECK(code_of([] {
              const unsigned bad[] = {3, 1};
              CompanionMatrix::from_exponents(bad);
          }) == Errc::singular);

    // det = (-1)^{n+1} a0 by expansion along the first column: magnitude 1
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 12;
        BitVector coeffs(n);
        coeffs.set(0, true);
        for (std::size_t i = 1; i < n; ++i)
            coeffs.set(i, rng() & 1);
        const BinMatrix m = CompanionMatrix(coeffs).matrix();
        CHECK(m.rank() == n);
        // exact integer solve succeeds for every integer right-hand side
        std::vector<std::int64_t> x(n);
        for (auto& v : x)
            v = static_cast<std::int64_t>(rng() % 101) - 50;
        const auto sol = exact_integer_inverse_apply(m, x);
        CHECK(oracle::vec_mul(sol, oracle::to_dense(m)) == x);
    }
}

TEST_CASE("companion powers")
{
    const unsigned e[] = {3, 1, 0};
    const CompanionMatrix u = CompanionMatrix::from_exponents(e);
    const auto ud = oracle::to_dense(u.matrix());
    CHECK(companion_power_mod2(u, 0).is_identity());
    CHECK(companion_power_mod2(u, 7).is_identity());
    CHECK(oracle::to_dense(companion_power_mod2(u, 3)) == oracle::pow_mod2(ud, 3));
    std::mt19937_64 rng(16);
    const unsigned e10[] = {10, 3, 0};
    const CompanionMatrix big = CompanionMatrix::from_exponents(e10);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint64_t a = rng() % 5000, b = rng() % 5000;
        CHECK(companion_power_mod2(big, a + b) == companion_power_mod2(big, a) * companion_power_mod2(big, b));
    }
    for (std::uint64_t a = 0; a < 40; ++a)
        CHECK(oracle::to_dense(companion_power_mod2(big, a)) == oracle::pow_mod2(oracle::to_dense(big.matrix()), a));
}

TEST_CASE("companion powers agree with repeated squaring, inverses included")
{
    std::mt19937_64 rng(17);
    const unsigned e1[] = {1, 0};
    const unsigned e4[] = {4, 3, 2, 1, 0}; // not primitive
    const unsigned e64[] = {64, 4, 3, 1, 0};
    const unsigned e258[] = {258, 7, 0};
    for (auto exps : {std::span<const unsigned>(e1), std::span<const unsigned>(e4),
                      std::span<const unsigned>(e64), std::span<const unsigned>(e258)}) {
        const CompanionMatrix u = CompanionMatrix::from_exponents(exps);
        const BinMatrix m = u.matrix();
        for (int trial = 0; trial < 4; ++trial) {
            const std::uint64_t a = trial == 0 ? 1 : rng() >> (trial * 15);
            const BinMatrix p = companion_power_mod2(u, a);
            REQUIRE(p == matrix_power_mod2(m, a));
            REQUIRE((p * companion_inverse_power_mod2(u, a)).is_identity());
        }
        CHECK(companion_inverse_power_mod2(u, 0).is_identity());
        CHECK((companion_inverse_power_mod2(u, 1) * m).is_identity());
    }
}

TEST_CASE("matrix order")
{
    CHECK(matrix_order(BinMatrix::identity(4), 10) == 1u);
    const unsigned e3[] = {3, 1, 0};
    const unsigned e4[] = {4, 1, 0};
    CHECK(matrix_order(CompanionMatrix::from_exponents(e3).matrix(), 100) == 7u);
    CHECK(matrix_order(CompanionMatrix::from_exponents(e4).matrix(), 100) == 15u);
    // x^4 + x^3 + x^2 + x + 1 is irreducible but not primitive: order 5
    const unsigned e5[] = {4, 3, 2, 1, 0};
    CHECK(matrix_order(CompanionMatrix::from_exponents(e5).matrix(), 100) == 5u);
    CHECK_FALSE(matrix_order(CompanionMatrix::from_exponents(e4).matrix(), 14).has_value());
    CHECK(code_of([] { matrix_order(BinMatrix(3, 3), 10); }) == Errc::singular);
}

TEST_CASE("exact integer inverse: examples")
{
    const std::vector<std::int64_t> x = {3, -2};
    CHECK(exact_integer_inverse_apply(BinMatrix::identity(2), x) == x);

    const unsigned e[] = {3, 1, 0};
    const BinMatrix u = CompanionMatrix::from_exponents(e).matrix();
    const std::vector<std::int64_t> v = {1, 2, 3};
    CHECK(exact_integer_inverse_apply(u, oracle::vec_mul(v, oracle::to_dense(u))) == v);

    // [[1,1],[1,0]] has det -1; [[1,1],[0,1]]... use a det-2 matrix for the
    // half-step case: rows (1,1),(1,-1) are not 0/1, so take [[1,1,0],[0,1,1],[1,0,1]]
    // (det 2): x = (1,0,0) has preimage (1/2, -1/2, 1/2).
    const BinMatrix m = oracle::from_dense({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    const std::vector<std::int64_t> half = {1, 0, 0};
    CHECK(code_of([&] { exact_integer_inverse_apply(m, half); }) == Errc::not_in_lattice);
    const std::vector<std::int64_t> ok = {2, 0, 0};
    CHECK(exact_integer_inverse_apply(m, ok) == std::vector<std::int64_t>{1, -1, 1});
    const BinMatrix sing = oracle::from_dense({{1, 1}, {1, 1}});
    const std::vector<std::int64_t> two = {1, 1};
    CHECK(code_of([&] { exact_integer_inverse_apply(sing, two); }) == Errc::singular);
}

TEST_CASE("exact integer inverse round trip on random matrices up to 32x32")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 32;
        const BinMatrix m = random_invertible(n, rng);
        std::vector<std::int64_t> v(n);
        for (auto& e : v)
            e = static_cast<std::int64_t>(rng() % 2001) - 1000;
        const auto x = oracle::vec_mul(v, oracle::to_dense(m));
        REQUIRE(exact_integer_inverse_apply(m, x) == v);
    }
}

TEST_CASE("2-adic solver agrees with fraction-free elimination")
{
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        const BinMatrix m = random_invertible(n, rng);
        const TwoAdicSolver solver(m);
        std::vector<std::int64_t> v(n);
        for (auto& e : v)
            e = static_cast<std::int64_t>(rng() % 200001) - 100000;
        const auto x = oracle::vec_mul(v, oracle::to_dense(m));
        REQUIRE(solver.solve(x) == v);
        REQUIRE(exact_integer_inverse_apply(m, x) == v);

        // perturbed right-hand sides: both routes agree on integrality
        auto y = x;
        y[rng() % n] += 1;
        bool bareiss_ok = true, adic_ok = true;
        std::vector<std::int64_t> a, b;
        try {
            a = exact_integer_inverse_apply(m, y);
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::not_in_lattice);
            bareiss_ok = false;
        }
        try {
            b = solver.solve(y);
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::not_in_lattice);
            adic_ok = false;
        }
        REQUIRE(bareiss_ok == adic_ok);
        if (bareiss_ok)
            REQUIRE(a == b);
    }
}

TEST_CASE("2-adic solver handles 258x258 companion powers")
{
    const unsigned e[] = {258, 83, 0};
    const CompanionMatrix u = CompanionMatrix::from_exponents(e);
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 3; ++trial) {
        const BinMatrix p = companion_power_mod2(u, rng() >> 3);
        const TwoAdicSolver solver(p);
        std::vector<std::int64_t> v(258);
        for (auto& x : v)
            x = static_cast<std::int64_t>(rng() % 33) - 16;
        const auto x = p.left_mul_int(v);
        CHECK(solver.solve(x) == v);
        CHECK(exact_integer_inverse_apply(p, x) == v);
    }
}
