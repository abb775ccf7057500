#pragma once

// Exact GF(2) and integer linear algebra used by the code, lattice and
// nonlinear-map layers. Rows are bit-packed into 64-bit words, row-major.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qclat {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size);

    static BitVector from_u64(std::uint64_t value, std::size_t size);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value) noexcept;
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t popcount() const noexcept;
    bool any() const noexcept;
    /// Low 64 bits as an unsigned integer (bit i has weight 2^i).
    std::uint64_t to_u64() const noexcept;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    bool operator==(const BitVector& other) const = default;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

class BinMatrix {
public:
    /// Zero matrix. Throws size_mismatch for a 0x0 (or any empty) shape.
    BinMatrix(std::size_t rows, std::size_t cols);

    static BinMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t words_per_row() const noexcept { return wpr_; }

    bool get(std::size_t r, std::size_t c) const noexcept
    {
        return (bits_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool value) noexcept;
    void flip(std::size_t r, std::size_t c) noexcept
    {
        bits_[r * wpr_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
    }

    std::span<const std::uint64_t> row(std::size_t r) const noexcept
    {
        return {bits_.data() + r * wpr_, wpr_};
    }
    std::span<std::uint64_t> row(std::size_t r) noexcept { return {bits_.data() + r * wpr_, wpr_}; }
    BitVector row_vector(std::size_t r) const;

    BinMatrix operator*(const BinMatrix& rhs) const;
    BinMatrix transpose() const;
    bool operator==(const BinMatrix& other) const = default;

    bool is_identity() const noexcept;
    std::size_t rank() const;
    /// Inverse over GF(2), or nullopt when singular.
    std::optional<BinMatrix> inverse() const;

    /// v * M over GF(2) (row vector times matrix).
    BitVector left_mul(const BitVector& v) const;
    /// M * v over GF(2) (matrix times column vector).
    BitVector right_mul(const BitVector& v) const;
    /// v * M over the integers, M read as a 0/1 matrix.
    std::vector<std::int64_t> left_mul_int(std::span<const std::int64_t> v) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t wpr_;
    std::vector<std::uint64_t> bits_;
};

/// b x b circulant given by the support of its first row; row i is row 0
/// cyclically shifted right by i.
class Circulant {
public:
    Circulant(std::size_t size, std::vector<std::uint32_t> support);

    static Circulant identity(std::size_t size) { return Circulant(size, {0}); }
    static Circulant shift(std::size_t size, std::uint32_t by) { return Circulant(size, {by}); }

    std::size_t size() const noexcept { return size_; }
    const std::vector<std::uint32_t>& support() const noexcept { return support_; }
    std::size_t weight() const noexcept { return support_.size(); }

    BinMatrix dense() const;
    Circulant transpose() const;
    bool operator==(const Circulant& other) const = default;

private:
    std::size_t size_;
    std::vector<std::uint32_t> support_;
};

Circulant circulant_mul(const Circulant& a, const Circulant& b);
/// Throws singular_circulant when `a` has rank < b over GF(2).
Circulant circulant_inverse(const Circulant& a);

/// Companion matrix of g(x) = x^n + a_{n-1}x^{n-1} + ... + a_0 over GF(2):
/// ones on the superdiagonal, last row (a_0, ..., a_{n-1}).
class CompanionMatrix {
public:
    /// `coeffs` holds a_0..a_{n-1}; a_0 must be 1.
    explicit CompanionMatrix(BitVector coeffs);
    /// Polynomial given by its nonzero exponents, e.g. {3, 1, 0} for x^3+x+1.
    static CompanionMatrix from_exponents(std::span<const unsigned> exponents);

    std::size_t degree() const noexcept { return coeffs_.size(); }
    const BitVector& coeffs() const noexcept { return coeffs_; }
    BinMatrix matrix() const;

private:
    BitVector coeffs_;
};

/// U^alpha over GF(2). Row i is x^(alpha + i) modulo the polynomial, so
/// this costs one polynomial exponentiation instead of matrix products.
BinMatrix companion_power_mod2(const CompanionMatrix& u, std::uint64_t alpha);
/// U^(-alpha) over GF(2), the inverse of companion_power_mod2(u, alpha).
BinMatrix companion_inverse_power_mod2(const CompanionMatrix& u, std::uint64_t alpha);
BinMatrix matrix_power_mod2(const BinMatrix& m, std::uint64_t alpha);

/// Least e in [1, max_order] with U^e = I. Throws singular for a matrix that
/// is not invertible over GF(2).
std::optional<std::uint64_t> matrix_order(const BinMatrix& u, std::uint64_t max_order);

/// Solves v * M = x over the integers with M read as a 0/1 matrix, using
/// fraction-free (Bareiss) elimination on arbitrary-precision integers.
/// Throws singular when det M = 0 and not_in_lattice when the unique
/// rational solution is not integral.
std::vector<std::int64_t> exact_integer_inverse_apply(const BinMatrix& m,
                                                      std::span<const std::int64_t> x);

/// Same contract as exact_integer_inverse_apply for matrices invertible over
/// GF(2), computed by 2-adic (Hensel) lifting against the GF(2) inverse. The
/// lifting stops once the residual reaches its fixed point, which happens iff
/// the preimage is an integer vector; preimages outside int64 are reported as
/// not_in_lattice.
class TwoAdicSolver {
public:
    explicit TwoAdicSolver(BinMatrix m);
    TwoAdicSolver(BinMatrix m, BinMatrix m_inverse_mod2);

    const BinMatrix& matrix() const noexcept { return m_; }
    std::vector<std::int64_t> solve(std::span<const std::int64_t> x) const;

private:
    BinMatrix m_;
    BinMatrix inv_;
};

} // namespace qclat
