#include "qclat/rdfcode.hpp"

#include "qclat/error.hpp"
#include "qclat/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qclat {

QcCode::QcCode(std::size_t b, std::vector<std::vector<std::uint32_t>> supports)
    : b_(b), supports_(std::move(supports))
{
    if (b_ == 0 || supports_.size() < 2)
        throw Error(Errc::invalid_params, "QC code needs b >= 1 and n0 >= 2");
    const std::size_t dv = supports_.front().size();
    if (dv == 0)
        throw Error(Errc::invalid_params, "empty circulant support");
    for (const auto& s : supports_) {
        if (s.size() != dv)
            throw Error(Errc::invalid_params, "all blocks need the same column weight");
        Circulant(b_, s); // validates ordering and range
    }
}

BinMatrix QcCode::parity_check() const
{
    BinMatrix h(b_, n());
    for (std::size_t i = 0; i < n0(); ++i)
        for (std::size_t r = 0; r < b_; ++r)
            for (auto s : supports_[i])
                h.set(r, i * b_ + (r + s) % b_, true);
    return h;
}

std::vector<std::size_t> QcCode::check_neighbors(std::size_t r) const
{
    std::vector<std::size_t> cols;
    cols.reserve(dc());
    for (std::size_t i = 0; i < n0(); ++i)
        for (auto s : supports_[i])
            cols.push_back(i * b_ + (r + s) % b_);
    return cols;
}

bool QcCode::syndrome_zero(const BitVector& word) const
{
    if (word.size() != n())
        throw Error(Errc::size_mismatch, "syndrome of a word of the wrong length");
    for (std::size_t r = 0; r < b_; ++r) {
        bool parity = false;
        for (std::size_t i = 0; i < n0(); ++i)
            for (auto s : supports_[i])
                parity ^= word.get(i * b_ + (r + s) % b_);
        if (parity)
            return false;
    }
    return true;
}

namespace {

// Ordered cyclic differences s - t (mod b), s != t.
void append_differences(std::size_t b, const std::vector<std::uint32_t>& support,
                        std::vector<std::uint32_t>& out)
{
    for (auto s : support)
        for (auto t : support)
            if (s != t)
                out.push_back(static_cast<std::uint32_t>((s + b - t) % b));
}

// Grows a dv-subset one element at a time, each drawn uniformly among the
// residues whose new differences are unused so far. Empty on a dead end.
std::vector<std::uint32_t> sample_support(std::size_t b, std::size_t dv, const std::vector<char>& used,
                                          std::mt19937_64& rng)
{
    std::vector<std::uint32_t> support;
    std::vector<char> mark = used;
    std::vector<std::uint32_t> candidates;
    while (support.size() < dv) {
        candidates.clear();
        for (std::uint32_t c = 0; c < b; ++c) {
            bool ok = std::find(support.begin(), support.end(), c) == support.end();
            for (std::size_t i = 0; ok && i < support.size(); ++i) {
                const std::size_t d1 = (c + b - support[i]) % b;
                const std::size_t d2 = (support[i] + b - c) % b;
                ok = !mark[d1] && !mark[d2] && d1 != d2;
                // differences introduced by c must also be distinct among themselves
                for (std::size_t j = 0; ok && j < i; ++j) {
                    const std::size_t e1 = (c + b - support[j]) % b;
                    const std::size_t e2 = (support[j] + b - c) % b;
                    ok = e1 != d1 && e1 != d2 && e2 != d1 && e2 != d2;
                }
            }
            if (ok)
                candidates.push_back(c);
        }
        if (candidates.empty())
            return {};
        const std::uint32_t pick = candidates[uniform_below(rng, candidates.size())];
        for (auto s : support) {
            mark[(pick + b - s) % b] = 1;
            mark[(s + b - pick) % b] = 1;
        }
        support.push_back(pick);
    }
    std::sort(support.begin(), support.end());
    return support;
}

bool invertible(std::size_t b, const std::vector<std::uint32_t>& support)
{
    return Circulant(b, support).dense().rank() == b;
}

} // namespace

QcCode rdf_search(std::size_t b, std::size_t n0, std::size_t dv, std::uint64_t seed,
                  const RdfSearchOptions& options)
{
    if (dv % 2 == 0)
        throw Error(Errc::invalid_params, "dv must be odd");
    if (dv >= b || n0 < 2)
        throw Error(Errc::invalid_params, "need dv < b and n0 >= 2");
    // Every ordered difference must be a distinct nonzero residue.
    if (n0 * dv * (dv - 1) > b - 1)
        throw Error(Errc::search_exhausted, "too many differences for Z_b; no RDF exists");

    std::mt19937_64 rng(seed);
    for (unsigned global = 0; global < options.global_restarts; ++global) {
        std::vector<std::vector<std::uint32_t>> supports;
        std::vector<char> used(b, 0);
        bool failed = false;
        while (supports.size() < n0 && !failed) {
            const bool last = supports.size() + 1 == n0;
            bool placed = false;
            for (unsigned restart = 0; restart < options.block_restarts && !placed; ++restart) {
                for (unsigned attempt = 0; attempt < options.block_attempts; ++attempt) {
                    auto candidate = sample_support(b, dv, used, rng);
                    if (candidate.empty())
                        continue;
                    std::vector<std::uint32_t> diffs;
                    append_differences(b, candidate, diffs);
                    std::vector<char> mark = used;
                    bool ok = true;
                    for (auto d : diffs) {
                        if (mark[d]) {
                            ok = false;
                            break;
                        }
                        mark[d] = 1;
                    }
                    if (!ok || (last && !invertible(b, candidate)))
                        continue;
                    used = std::move(mark);
                    supports.push_back(std::move(candidate));
                    placed = true;
                    break;
                }
            }
            failed = !placed;
        }
        if (!failed)
            return QcCode(b, std::move(supports));
    }
    throw Error(Errc::search_exhausted, "restart budget exhausted");
}

bool girth_ok(const QcCode& code)
{
    std::vector<std::uint32_t> diffs;
    for (const auto& s : code.supports())
        append_differences(code.b(), s, diffs);
    std::vector<char> seen(code.b(), 0);
    for (auto d : diffs) {
        if (seen[d])
            return false;
        seen[d] = 1;
    }
    return true;
}

SystematicGen systematic_generator(const QcCode& code)
{
    const std::size_t b = code.b();
    const std::size_t n0 = code.n0();
    const std::size_t k = code.k();
    const std::size_t n = code.n();

    auto last_inv = code.block(n0 - 1).dense().inverse();
    if (!last_inv)
        throw Error(Errc::singular_block, "H_{n0-1} is not invertible over GF(2)");
    std::vector<std::uint32_t> inv_support;
    for (std::size_t j = 0; j < b; ++j)
        if (last_inv->get(0, j))
            inv_support.push_back(static_cast<std::uint32_t>(j));
    const Circulant inv(b, std::move(inv_support));

    BinMatrix a(k, n - k);
    for (std::size_t i = 0; i + 1 < n0; ++i) {
        const BinMatrix blk = circulant_mul(inv, code.block(i)).transpose().dense();
        for (std::size_t r = 0; r < b; ++r)
            for (std::size_t c = 0; c < b; ++c)
                if (blk.get(r, c))
                    a.set(i * b + r, c, true);
    }
    BinMatrix g(k, n);
    for (std::size_t r = 0; r < k; ++r) {
        g.set(r, r, true);
        for (std::size_t c = 0; c < n - k; ++c)
            if (a.get(r, c))
                g.set(r, k + c, true);
    }
    return {std::move(g), std::move(a)};
}

namespace {

mpq_class rdf_bound(std::size_t b_, std::size_t dv_, std::size_t n0_)
{
    const long b = static_cast<long>(b_);
    const long dv = static_cast<long>(dv_);
    const long n0 = static_cast<long>(n0_);
    mpz_class choose;
    mpz_bin_uiui(choose.get_mpz_t(), b_, dv_);
    mpz_class top;
    mpz_pow_ui(top.get_mpz_t(), choose.get_mpz_t(), n0_);
    mpq_class value(top, b);
    value.canonicalize();
    // Each factor is b/(b-j) - j[2 - b mod 2 + (j^2-1)/2 + l dv(dv-1)]/(b-j),
    // written over 2(b-j) to keep (j^2-1)/2 exact.
    for (long l = 0; l < n0; ++l) {
        for (long j = 1; j < dv; ++j) {
            const long num = 2 * b - j * (2 * (2 - b % 2) + (j * j - 1) + 2 * l * dv * (dv - 1));
            mpq_class factor(num, 2 * (b - j));
            factor.canonicalize();
            value *= factor;
        }
    }
    return value;
}

double log2_abs(const mpz_class& z)
{
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

} // namespace

mpz_class count_rdf_lower_bound(std::size_t b, std::size_t dv, std::size_t n0)
{
    const mpq_class v = rdf_bound(b, dv, n0);
    mpz_class floor;
    mpz_fdiv_q(floor.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return floor;
}

double count_rdf_lower_bound_log2(std::size_t b, std::size_t dv, std::size_t n0)
{
    const mpq_class v = rdf_bound(b, dv, n0);
    if (sgn(v) <= 0)
        return -INFINITY;
    return log2_abs(v.get_num()) - log2_abs(v.get_den());
}

} // namespace qclat
