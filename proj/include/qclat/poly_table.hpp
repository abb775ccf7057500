#pragma once

// Shipped primitive polynomials over GF(2), vetted by tools/primitive_polys.py
// (irreducibility plus the order test against the full factorization of
// 2^n - 1). Degrees <= 24 are re-checked by brute force in the unit tests.

#include "qclat/bitmat.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qclat {

struct PrimitivePoly {
    unsigned degree;
    std::vector<unsigned> exponents; ///< nonzero exponents, descending
};

/// Identifies a table entry as "<degree>.<index>" (index among entries of
/// that degree).
struct PolyId {
    unsigned degree = 0;
    unsigned index = 0;

    std::string str() const;
    static PolyId parse(const std::string& text);
    bool operator==(const PolyId&) const = default;
};

std::span<const PrimitivePoly> primitive_polys();
/// Number of shipped entries of a given degree.
unsigned primitive_poly_count(unsigned degree);
/// Throws invalid_params when no such entry is shipped.
const PrimitivePoly& primitive_poly(PolyId id);
CompanionMatrix companion_of(PolyId id);
/// Tap mask (bit i = coefficient of x^i, i < degree) for LFSR use; degree <= 64.
std::uint64_t tap_mask(PolyId id);

} // namespace qclat
