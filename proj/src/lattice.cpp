#include "qclat/lattice.hpp"

#include "qclat/error.hpp"

#include <cmath>
#include <numbers>

namespace qclat {

LatticeCtx::LatticeCtx(QcCode code, IntVec limits)
    : code_(std::move(code)), gen_(systematic_generator(code_)), limits_(std::move(limits))
{
    if (limits_.size() != code_.n())
        throw Error(Errc::size_mismatch, "one shaping limit per coordinate");
    for (auto l : limits_)
        if (l < 1)
            throw Error(Errc::invalid_params, "shaping limits must be positive");
}

LatticeCtx::LatticeCtx(QcCode code, std::int64_t limit)
    : LatticeCtx(code, IntVec(code.n(), limit))
{
}

std::vector<IntVec> LatticeCtx::generator_matrix() const
{
    const std::size_t nn = n();
    const std::size_t kk = k();
    std::vector<IntVec> g(nn, IntVec(nn, 0));
    for (std::size_t i = 0; i < kk; ++i) {
        g[i][i] = 1;
        for (std::size_t c = 0; c < nn - kk; ++c)
            g[i][kk + c] = gen_.a.get(i, c) ? 1 : 0;
    }
    for (std::size_t i = kk; i < nn; ++i)
        g[i][i] = 2;
    return g;
}

IntVec LatticeCtx::parity_sums(std::span<const std::int64_t> x) const
{
    return gen_.a.left_mul_int(x.first(k()));
}

IntVec LatticeCtx::lattice_point(std::span<const std::int64_t> xi) const
{
    if (xi.size() != n())
        throw Error(Errc::size_mismatch, "lattice coordinate vector");
    const std::size_t kk = k();
    IntVec out(xi.begin(), xi.end());
    const IntVec s = parity_sums(xi);
    for (std::size_t c = 0; c < s.size(); ++c)
        out[kk + c] = s[c] + 2 * xi[kk + c];
    return out;
}

IntVec encode(const LatticeCtx& ctx, std::span<const std::int64_t> xi)
{
    IntVec y = ctx.lattice_point(xi);
    for (auto& v : y)
        v = 2 * v - 1;
    return y;
}

std::int64_t round_div(std::int64_t num, std::int64_t den)
{
    const std::int64_t mag = num < 0 ? -num : num;
    const std::int64_t q = mag / den;
    const std::int64_t rounded = 2 * (mag - q * den) >= den ? q + 1 : q;
    return num < 0 ? -rounded : rounded;
}

ShapedPoint shape(const LatticeCtx& ctx, std::span<const std::int64_t> x)
{
    const std::size_t n = ctx.n();
    const std::size_t k = ctx.k();
    if (x.size() != n)
        throw Error(Errc::size_mismatch, "shaping input length");
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t mag = x[i] < 0 ? -x[i] : x[i];
        if (2 * mag >= static_cast<std::int64_t>(n) * ctx.limits()[i])
            throw Error(Errc::shaping_overflow,
                        "coordinate " + std::to_string(i) + " outside the recoverable range");
    }
    ShapedPoint out;
    out.x_prime.assign(x.begin(), x.end());
    out.z.assign(n, 0);
    out.lambda_prime.assign(n, 0);
    const IntVec s = ctx.parity_sums(x);
    for (std::size_t i = 0; i < k; ++i)
        out.lambda_prime[i] = x[i];
    for (std::size_t i = k; i < n; ++i) {
        const std::int64_t m = ctx.modulus(i);
        const std::int64_t num = 2 * x[i] + s[i - k];
        const std::int64_t z = round_div(num, 2 * m);
        out.z[i] = z;
        out.x_prime[i] = x[i] - z * m;
        out.lambda_prime[i] = num - 2 * z * m;
    }
    return out;
}

IntVec lattice_coords(const LatticeCtx& ctx, std::span<const std::int64_t> lambda)
{
    const std::size_t n = ctx.n();
    const std::size_t k = ctx.k();
    if (lambda.size() != n)
        throw Error(Errc::size_mismatch, "lattice point length");
    IntVec xi(lambda.begin(), lambda.end());
    const IntVec s = ctx.parity_sums(lambda);
    for (std::size_t i = k; i < n; ++i) {
        const std::int64_t t = lambda[i] - s[i - k];
        if (t % 2 != 0)
            throw Error(Errc::not_lattice_point, "parity coordinate " + std::to_string(i));
        xi[i] = t / 2;
    }
    return xi;
}

std::int64_t signed_residue(std::int64_t v, std::int64_t limit, std::size_t n)
{
    const std::int64_t nl = static_cast<std::int64_t>(n) * limit;
    const std::int64_t m = nl - 1;
    std::int64_t r = v % m;
    if (r < 0)
        r += m;
    return 2 * r < nl ? r : r - m;
}

IntVec mod_recover(const LatticeCtx& ctx, std::span<const std::int64_t> lambda_tilde_prime)
{
    IntVec w(lambda_tilde_prime.begin(), lambda_tilde_prime.end());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if ((w[i] & 1) == 0)
            throw Error(Errc::not_lattice_point, "even component " + std::to_string(i));
        w[i] = (w[i] + 1) / 2;
    }
    IntVec x = lattice_coords(ctx, w);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = signed_residue(x[i], ctx.limits()[i], ctx.n());
    return x;
}

double vnr_sigma(std::size_t n, std::size_t k, double vnr_db)
{
    const double dn = static_cast<double>(n);
    const double vol = std::pow(4.0, (2.0 * dn - static_cast<double>(k)) / dn);
    return std::sqrt(vol / (2.0 * std::numbers::pi * std::numbers::e * std::pow(10.0, vnr_db / 10.0)));
}

double vnr_sigma(const LatticeCtx& ctx, double vnr_db)
{
    return vnr_sigma(ctx.n(), ctx.k(), vnr_db);
}

bool in_coset_lattice(const LatticeCtx& ctx, std::span<const std::int64_t> y)
{
    if (y.size() != ctx.n())
        throw Error(Errc::size_mismatch, "coset membership length");
    BitVector word(ctx.n());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if ((y[i] & 1) == 0)
            return false;
        word.set(i, ((y[i] + 1) / 2) & 1);
    }
    return ctx.code().syndrome_zero(word);
}

} // namespace qclat
