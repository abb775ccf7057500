#include "qclat/bitmat.hpp"

#include "qclat/error.hpp"

#include <algorithm>
#include <bit>
#include <gmpxx.h>
#include <limits>

namespace qclat {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

template <typename F>
void for_each_set_bit(std::span<const std::uint64_t> words, F&& f)
{
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t bits = words[w];
        while (bits) {
            const int tz = std::countr_zero(bits);
            f(w * 64 + static_cast<std::size_t>(tz));
            bits &= bits - 1;
        }
    }
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src)
{
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] ^= src[i];
}

} // namespace

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

BitVector BitVector::from_u64(std::uint64_t value, std::size_t size)
{
    BitVector v(size);
    for (std::size_t i = 0; i < size && i < 64; ++i)
        v.set(i, (value >> i) & 1u);
    return v;
}

void BitVector::set(std::size_t i, bool value) noexcept
{
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
        words_[i >> 6] |= mask;
    else
        words_[i >> 6] &= ~mask;
}

std::size_t BitVector::popcount() const noexcept
{
    std::size_t count = 0;
    for (auto w : words_)
        count += static_cast<std::size_t>(std::popcount(w));
    return count;
}

bool BitVector::any() const noexcept
{
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::uint64_t BitVector::to_u64() const noexcept { return words_.empty() ? 0 : words_[0]; }

BitVector& BitVector::operator^=(const BitVector& other)
{
    if (other.size_ != size_)
        throw Error(Errc::size_mismatch, "bit vector xor");
    xor_into(words_, other.words_);
    return *this;
}

// ---------------------------------------------------------------- BinMatrix

BinMatrix::BinMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_(words_for(cols))
{
    if (rows == 0 || cols == 0)
        throw Error(Errc::size_mismatch, "empty binary matrix");
    bits_.assign(rows_ * wpr_, 0);
}

BinMatrix BinMatrix::identity(std::size_t n)
{
    BinMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

void BinMatrix::set(std::size_t r, std::size_t c, bool value) noexcept
{
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    auto& word = bits_[r * wpr_ + (c >> 6)];
    if (value)
        word |= mask;
    else
        word &= ~mask;
}

BitVector BinMatrix::row_vector(std::size_t r) const
{
    BitVector v(cols_);
    std::copy(row(r).begin(), row(r).end(), v.words().begin());
    return v;
}

BinMatrix BinMatrix::operator*(const BinMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw Error(Errc::size_mismatch, "matrix product");
    BinMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto dst = out.row(i);
        for_each_set_bit(row(i), [&](std::size_t j) { xor_into(dst, rhs.row(j)); });
    }
    return out;
}

BinMatrix BinMatrix::transpose() const
{
    BinMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for_each_set_bit(row(i), [&](std::size_t j) { out.set(j, i, true); });
    return out;
}

bool BinMatrix::is_identity() const noexcept
{
    if (rows_ != cols_)
        return false;
    for (std::size_t i = 0; i < rows_; ++i) {
        auto r = row(i);
        for (std::size_t w = 0; w < wpr_; ++w) {
            const std::uint64_t expect = (i >> 6) == w ? std::uint64_t{1} << (i & 63) : 0;
            if (r[w] != expect)
                return false;
        }
    }
    return true;
}

std::size_t BinMatrix::rank() const
{
    BinMatrix work = *this;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows_ && !work.get(pivot, c))
            ++pivot;
        if (pivot == rows_)
            continue;
        if (pivot != rank)
            std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(rank).begin());
        for (std::size_t r = rank + 1; r < rows_; ++r)
            if (work.get(r, c))
                xor_into(work.row(r), work.row(rank));
        ++rank;
    }
    return rank;
}

std::optional<BinMatrix> BinMatrix::inverse() const
{
    if (rows_ != cols_)
        throw Error(Errc::size_mismatch, "inverse of a non-square matrix");
    BinMatrix work = *this;
    BinMatrix inv = identity(rows_);
    for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t pivot = c;
        while (pivot < rows_ && !work.get(pivot, c))
            ++pivot;
        if (pivot == rows_)
            return std::nullopt;
        if (pivot != c) {
            std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(c).begin());
            std::swap_ranges(inv.row(pivot).begin(), inv.row(pivot).end(), inv.row(c).begin());
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r != c && work.get(r, c)) {
                xor_into(work.row(r), work.row(c));
                xor_into(inv.row(r), inv.row(c));
            }
        }
    }
    return inv;
}

BitVector BinMatrix::left_mul(const BitVector& v) const
{
    if (v.size() != rows_)
        throw Error(Errc::size_mismatch, "vector-matrix product");
    BitVector out(cols_);
    for_each_set_bit(v.words(), [&](std::size_t i) { xor_into(out.words(), row(i)); });
    return out;
}

BitVector BinMatrix::right_mul(const BitVector& v) const
{
    if (v.size() != cols_)
        throw Error(Errc::size_mismatch, "matrix-vector product");
    BitVector out(rows_);
    const auto vw = v.words();
    for (std::size_t i = 0; i < rows_; ++i) {
        auto r = row(i);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < wpr_; ++w)
            acc ^= r[w] & vw[w];
        out.set(i, std::popcount(acc) & 1);
    }
    return out;
}

std::vector<std::int64_t> BinMatrix::left_mul_int(std::span<const std::int64_t> v) const
{
    if (v.size() != rows_)
        throw Error(Errc::size_mismatch, "integer vector-matrix product");
    std::vector<std::int64_t> out(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const std::int64_t coef = v[i];
        if (coef == 0)
            continue;
        for_each_set_bit(row(i), [&](std::size_t j) { out[j] += coef; });
    }
    return out;
}

// ---------------------------------------------------------------- Circulant

Circulant::Circulant(std::size_t size, std::vector<std::uint32_t> support)
    : size_(size), support_(std::move(support))
{
    if (size_ == 0)
        throw Error(Errc::size_mismatch, "circulant of size 0");
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (support_[i] >= size_ || (i > 0 && support_[i] <= support_[i - 1]))
            throw Error(Errc::size_mismatch, "circulant support must be strictly increasing and < b");
    }
}

BinMatrix Circulant::dense() const
{
    BinMatrix m(size_, size_);
    for (std::size_t i = 0; i < size_; ++i)
        for (auto s : support_)
            m.set(i, (i + s) % size_, true);
    return m;
}

Circulant Circulant::transpose() const
{
    std::vector<std::uint32_t> neg;
    neg.reserve(support_.size());
    for (auto s : support_)
        neg.push_back(static_cast<std::uint32_t>((size_ - s) % size_));
    std::sort(neg.begin(), neg.end());
    return Circulant(size_, std::move(neg));
}

Circulant circulant_mul(const Circulant& a, const Circulant& b)
{
    if (a.size() != b.size())
        throw Error(Errc::size_mismatch, "circulant sizes differ");
    const std::size_t n = a.size();
    std::vector<std::uint8_t> acc(n, 0);
    for (auto s : a.support())
        for (auto t : b.support())
            acc[(s + t) % n] ^= 1;
    std::vector<std::uint32_t> support;
    for (std::size_t i = 0; i < n; ++i)
        if (acc[i])
            support.push_back(static_cast<std::uint32_t>(i));
    return Circulant(n, std::move(support));
}

Circulant circulant_inverse(const Circulant& a)
{
    auto inv = a.dense().inverse();
    if (!inv)
        throw Error(Errc::singular_circulant, "circulant is not invertible over GF(2)");
    std::vector<std::uint32_t> support;
    for_each_set_bit(inv->row(0), [&](std::size_t j) {
        if (j < a.size())
            support.push_back(static_cast<std::uint32_t>(j));
    });
    return Circulant(a.size(), std::move(support));
}

// ---------------------------------------------------------- CompanionMatrix

CompanionMatrix::CompanionMatrix(BitVector coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        throw Error(Errc::size_mismatch, "companion matrix of degree 0");
    if (!coeffs_.get(0))
        throw Error(Errc::singular, "companion polynomial needs a_0 = 1");
}

CompanionMatrix CompanionMatrix::from_exponents(std::span<const unsigned> exponents)
{
    if (exponents.empty())
        throw Error(Errc::size_mismatch, "empty polynomial");
    const unsigned degree = *std::max_element(exponents.begin(), exponents.end());
    BitVector coeffs(degree);
    for (auto e : exponents)
        if (e < degree)
            coeffs.flip(e);
    return CompanionMatrix(std::move(coeffs));
}

BinMatrix CompanionMatrix::matrix() const
{
    const std::size_t n = degree();
    BinMatrix m(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        m.set(i, i + 1, true);
    for (std::size_t j = 0; j < n; ++j)
        m.set(n - 1, j, coeffs_.get(j));
    return m;
}

BinMatrix matrix_power_mod2(const BinMatrix& m, std::uint64_t alpha)
{
    if (m.rows() != m.cols())
        throw Error(Errc::size_mismatch, "power of a non-square matrix");
    BinMatrix result = BinMatrix::identity(m.rows());
    BinMatrix base = m;
    while (alpha) {
        if (alpha & 1u)
            result = result * base;
        alpha >>= 1;
        if (alpha)
            base = base * base;
    }
    return result;
}

namespace {

// Row vector v times U is v * x modulo g, with e_i <-> x^i. Polynomials of
// degree < n live in packed words.
class PolyRing {
public:
    explicit PolyRing(const CompanionMatrix& u) : n_(u.degree()), g_(u.coeffs()) {}

    BitVector one() const
    {
        BitVector v(n_);
        v.set(0, true);
        return v;
    }
    BitVector x() const
    {
        if (n_ == 1)
            return one(); // x = 1 modulo x + 1
        BitVector v(n_);
        v.set(1, true);
        return v;
    }
    // x^{-1} = (g(x) - 1) / x.
    BitVector x_inverse() const
    {
        BitVector v(n_);
        for (std::size_t j = 1; j < n_; ++j)
            v.set(j - 1, g_.get(j));
        v.set(n_ - 1, true);
        return v;
    }

    void mul_x(BitVector& v) const
    {
        const bool top = v.get(n_ - 1);
        auto w = v.words();
        std::uint64_t carry = 0;
        for (auto& word : w) {
            const std::uint64_t next = word >> 63;
            word = (word << 1) | carry;
            carry = next;
        }
        if (n_ % 64 != 0)
            w.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
        if (top)
            v ^= g_;
    }

    BitVector mul(const BitVector& a, const BitVector& b) const
    {
        BitVector r(n_);
        for (std::size_t i = n_; i-- > 0;) {
            mul_x(r);
            if (b.get(i))
                r ^= a;
        }
        return r;
    }

    BitVector pow(BitVector base, std::uint64_t e) const
    {
        BitVector r = one();
        while (e) {
            if (e & 1u)
                r = mul(r, base);
            e >>= 1;
            if (e)
                base = mul(base, base);
        }
        return r;
    }

    // Rows x^i * r0 for i = 0..n-1.
    BinMatrix rows_from(BitVector r) const
    {
        BinMatrix m(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            auto dst = m.row(i);
            auto src = r.words();
            std::copy(src.begin(), src.end(), dst.begin());
            mul_x(r);
        }
        return m;
    }

private:
    std::size_t n_;
    BitVector g_;
};

} // namespace

BinMatrix companion_power_mod2(const CompanionMatrix& u, std::uint64_t alpha)
{
    const PolyRing ring(u);
    return ring.rows_from(ring.pow(ring.x(), alpha));
}

BinMatrix companion_inverse_power_mod2(const CompanionMatrix& u, std::uint64_t alpha)
{
    const PolyRing ring(u);
    return ring.rows_from(ring.pow(ring.x_inverse(), alpha));
}

std::optional<std::uint64_t> matrix_order(const BinMatrix& u, std::uint64_t max_order)
{
    if (u.rows() != u.cols() || u.rank() != u.rows())
        throw Error(Errc::singular, "order of a matrix that is not invertible over GF(2)");
    BinMatrix power = u;
    for (std::uint64_t e = 1; e <= max_order; ++e) {
        if (power.is_identity())
            return e;
        power = power * u;
    }
    return std::nullopt;
}

// ------------------------------------------------------ exact integer solve

std::vector<std::int64_t> exact_integer_inverse_apply(const BinMatrix& m,
                                                      std::span<const std::int64_t> x)
{
    const std::size_t n = m.rows();
    if (m.cols() != n || x.size() != n)
        throw Error(Errc::size_mismatch, "exact solve needs a square matrix and matching vector");

    // v * M = x  <=>  M^T v^T = x^T; eliminate on the augmented [M^T | x].
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = m.get(j, i) ? 1 : 0;
        a[i][n] = static_cast<long>(x[i]);
    }

    mpz_class prev = 1;
    mpz_class tmp;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && sgn(a[pivot][k]) == 0)
            ++pivot;
        if (pivot == n)
            throw Error(Errc::singular, "matrix is singular over the rationals");
        if (pivot != k)
            std::swap(a[pivot], a[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                tmp = a[k][k] * a[i][j];
                tmp -= a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }

    // y = det * v is integral (Cramer); back-substitute with exact divisions.
    const mpz_class det = a[n - 1][n - 1];
    std::vector<mpz_class> y(n);
    for (std::size_t ii = n; ii-- > 0;) {
        tmp = det * a[ii][n];
        for (std::size_t j = ii + 1; j < n; ++j)
            tmp -= a[ii][j] * y[j];
        mpz_divexact(y[ii].get_mpz_t(), tmp.get_mpz_t(), a[ii][ii].get_mpz_t());
    }

    std::vector<std::int64_t> v(n);
    mpz_class q;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mpz_divisible_p(y[i].get_mpz_t(), det.get_mpz_t()))
            throw Error(Errc::not_in_lattice, "preimage is not an integer vector");
        mpz_divexact(q.get_mpz_t(), y[i].get_mpz_t(), det.get_mpz_t());
        if (!q.fits_slong_p())
            throw Error(Errc::too_large, "preimage does not fit in 64 bits");
        v[i] = q.get_si();
    }
    return v;
}

TwoAdicSolver::TwoAdicSolver(BinMatrix m) : m_(std::move(m)), inv_(1, 1)
{
    auto inv = m_.inverse();
    if (!inv)
        throw Error(Errc::singular, "matrix is not invertible over GF(2)");
    inv_ = std::move(*inv);
}

TwoAdicSolver::TwoAdicSolver(BinMatrix m, BinMatrix m_inverse_mod2)
    : m_(std::move(m)), inv_(std::move(m_inverse_mod2))
{
    if (m_.rows() != m_.cols() || inv_.rows() != m_.rows() || inv_.cols() != m_.cols())
        throw Error(Errc::size_mismatch, "2-adic solver shapes");
}

std::vector<std::int64_t> TwoAdicSolver::solve(std::span<const std::int64_t> x) const
{
    const std::size_t n = m_.rows();
    if (x.size() != n)
        throw Error(Errc::size_mismatch, "2-adic solve");

    // Invariant at step s: x = low * M + 2^s * residual, low < 2^s.
    std::vector<std::int64_t> residual(x.begin(), x.end());
    std::vector<std::uint64_t> low(n, 0);
    std::vector<std::int64_t> digit(n);
    BitVector parity(n);

    for (unsigned s = 0; s <= 64; ++s) {
        for (std::size_t i = 0; i < n; ++i)
            parity.set(i, residual[i] & 1);
        const BitVector c = inv_.left_mul(parity);
        for (std::size_t i = 0; i < n; ++i)
            digit[i] = c.get(i) ? 1 : 0;
        const auto cm = m_.left_mul_int(digit);

        bool fixed = true;
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t next = (residual[i] - cm[i]) / 2;
            fixed = fixed && next == residual[i];
            residual[i] = next;
        }
        if (fixed) {
            // residual = -c*M, so x = (low - 2^s c) * M exactly.
            std::vector<std::int64_t> v(n);
            for (std::size_t i = 0; i < n; ++i) {
                __int128 value = static_cast<__int128>(low[i]);
                if (digit[i])
                    value -= static_cast<__int128>(1) << s;
                if (value < std::numeric_limits<std::int64_t>::min() ||
                    value > std::numeric_limits<std::int64_t>::max())
                    throw Error(Errc::not_in_lattice, "preimage outside the 64-bit range");
                v[i] = static_cast<std::int64_t>(value);
            }
            return v;
        }
        if (s < 64)
            for (std::size_t i = 0; i < n; ++i)
                low[i] |= static_cast<std::uint64_t>(digit[i]) << s;
    }
    throw Error(Errc::not_in_lattice, "no integer preimage");
}

} // namespace qclat
