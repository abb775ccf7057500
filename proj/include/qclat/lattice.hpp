#pragma once

// Construction-A lattice over a QC-LDPC code: G = [[I_k, A], [0, 2I_{n-k}]],
// encoding E(xi) = 2 xi G - 1, hypercube shaping and its inverse.

#include "qclat/rdfcode.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qclat {

using IntVec = std::vector<std::int64_t>;

class LatticeCtx {
public:
    /// Per-coordinate shaping limits, all >= 1.
    LatticeCtx(QcCode code, IntVec limits);
    /// Uniform limit L on every coordinate.
    LatticeCtx(QcCode code, std::int64_t limit);

    const QcCode& code() const noexcept { return code_; }
    const SystematicGen& generator() const noexcept { return gen_; }
    /// The k x (n-k) part A of the systematic generator.
    const BinMatrix& a() const noexcept { return gen_.a; }
    std::size_t n() const noexcept { return code_.n(); }
    std::size_t k() const noexcept { return code_.k(); }

    const IntVec& limits() const noexcept { return limits_; }
    /// n L_i - 1, the shaping modulus of coordinate i.
    std::int64_t modulus(std::size_t i) const noexcept
    {
        return static_cast<std::int64_t>(n()) * limits_[i] - 1;
    }

    /// Dense n x n integer generator, rows indexed first.
    std::vector<IntVec> generator_matrix() const;

    /// xi * G over the integers.
    IntVec lattice_point(std::span<const std::int64_t> xi) const;
    /// sum_{j<k} x_j a_{j,c} for every parity column c.
    IntVec parity_sums(std::span<const std::int64_t> x) const;

private:
    QcCode code_;
    SystematicGen gen_;
    IntVec limits_;
};

struct ShapedPoint {
    IntVec x_prime;
    IntVec lambda_prime; ///< x_prime * G
    IntVec z;            ///< x = x_prime + z (n L - 1), z_i = 0 for i < k
};

/// 2 xi G - 1.
IntVec encode(const LatticeCtx& ctx, std::span<const std::int64_t> xi);

/// Throws shaping_overflow unless 2|x_i| < n L_i for every coordinate.
ShapedPoint shape(const LatticeCtx& ctx, std::span<const std::int64_t> x);

/// Coordinates xi with xi G = lambda; throws not_lattice_point when lambda
/// is not in the lattice.
IntVec lattice_coords(const LatticeCtx& ctx, std::span<const std::int64_t> lambda);

/// Inverse of x -> 2 shape(x).x_prime G - 1 on the shaping domain. Throws
/// not_lattice_point when the input is not of the form 2 lambda - 1 with
/// lambda in the lattice.
IntVec mod_recover(const LatticeCtx& ctx, std::span<const std::int64_t> lambda_tilde_prime);

/// Per-coordinate signed residue used by mod_recover: the representative
/// of v modulo n L_i - 1 in (-n L_i / 2, n L_i / 2).
std::int64_t signed_residue(std::int64_t v, std::int64_t limit, std::size_t n);

/// Noise standard deviation for a VNR given in dB.
double vnr_sigma(std::size_t n, std::size_t k, double vnr_db);
double vnr_sigma(const LatticeCtx& ctx, double vnr_db);

/// All-odd vector y whose lifted word ((y + 1) / 2 mod 2) has zero syndrome.
bool in_coset_lattice(const LatticeCtx& ctx, std::span<const std::int64_t> y);

/// Round half away from zero of num / den, den > 0.
std::int64_t round_div(std::int64_t num, std::int64_t den);

} // namespace qclat
