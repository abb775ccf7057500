#include "qclat/poly_table.hpp"

#include "qclat/error.hpp"

#include <algorithm>
#include <charconv>

namespace qclat {

namespace {

const std::vector<PrimitivePoly> kTable = {
    {1, {1, 0}},
    {2, {2, 1, 0}},
    {3, {3, 1, 0}},
    {3, {3, 2, 0}},
    {4, {4, 1, 0}},
    {4, {4, 3, 0}},
    {5, {5, 2, 0}},
    {5, {5, 3, 0}},
    {6, {6, 1, 0}},
    {6, {6, 5, 0}},
    {7, {7, 1, 0}},
    {7, {7, 3, 0}},
    {8, {8, 4, 3, 2, 0}},
    {8, {8, 5, 3, 1, 0}},
    {9, {9, 4, 0}},
    {9, {9, 5, 0}},
    {10, {10, 3, 0}},
    {10, {10, 7, 0}},
    {11, {11, 2, 0}},
    {11, {11, 9, 0}},
    {12, {12, 6, 4, 1, 0}},
    {12, {12, 6, 5, 3, 0}},
    {13, {13, 4, 3, 1, 0}},
    {13, {13, 5, 2, 1, 0}},
    {14, {14, 5, 3, 1, 0}},
    {14, {14, 5, 4, 3, 0}},
    {15, {15, 1, 0}},
    {15, {15, 4, 0}},
    {16, {16, 5, 3, 2, 0}},
    {16, {16, 5, 4, 3, 0}},
    {17, {17, 3, 0}},
    {17, {17, 5, 0}},
    {18, {18, 7, 0}},
    {18, {18, 11, 0}},
    {19, {19, 5, 2, 1, 0}},
    {19, {19, 6, 2, 1, 0}},
    {20, {20, 3, 0}},
    {20, {20, 17, 0}},
    {21, {21, 2, 0}},
    {21, {21, 19, 0}},
    {22, {22, 1, 0}},
    {22, {22, 21, 0}},
    {23, {23, 5, 0}},
    {23, {23, 9, 0}},
    {24, {24, 4, 3, 1, 0}},
    {24, {24, 7, 2, 1, 0}},
    {25, {25, 3, 0}},
    {25, {25, 7, 0}},
    {26, {26, 6, 2, 1, 0}},
    {26, {26, 6, 3, 2, 0}},
    {27, {27, 5, 2, 1, 0}},
    {27, {27, 7, 6, 4, 0}},
    {28, {28, 3, 0}},
    {28, {28, 9, 0}},
    {29, {29, 2, 0}},
    {29, {29, 27, 0}},
    {30, {30, 6, 4, 1, 0}},
    {30, {30, 8, 4, 1, 0}},
    {31, {31, 3, 0}},
    {31, {31, 6, 0}},
    {32, {32, 7, 6, 2, 0}},
    {32, {32, 8, 5, 2, 0}},
    {33, {33, 13, 0}},
    {33, {33, 20, 0}},
    {34, {34, 8, 4, 3, 0}},
    {34, {34, 9, 5, 1, 0}},
    {35, {35, 2, 0}},
    {35, {35, 33, 0}},
    {36, {36, 11, 0}},
    {36, {36, 25, 0}},
    {37, {37, 6, 4, 1, 0}},
    {37, {37, 6, 5, 4, 0}},
    {38, {38, 6, 5, 1, 0}},
    {38, {38, 7, 5, 1, 0}},
    {39, {39, 4, 0}},
    {39, {39, 8, 0}},
    {40, {40, 5, 4, 3, 0}},
    {40, {40, 8, 7, 5, 0}},
    {41, {41, 3, 0}},
    {41, {41, 20, 0}},
    {42, {42, 7, 4, 3, 0}},
    {42, {42, 7, 5, 2, 0}},
    {43, {43, 6, 4, 3, 0}},
    {43, {43, 6, 5, 1, 0}},
    {44, {44, 6, 5, 2, 0}},
    {44, {44, 6, 5, 3, 0}},
    {45, {45, 4, 3, 1, 0}},
    {45, {45, 5, 4, 2, 0}},
    {46, {46, 8, 7, 6, 0}},
    {46, {46, 9, 3, 1, 0}},
    {47, {47, 5, 0}},
    {47, {47, 14, 0}},
    {48, {48, 9, 7, 4, 0}},
    {48, {48, 9, 8, 6, 0}},
    {49, {49, 9, 0}},
    {49, {49, 12, 0}},
    {50, {50, 4, 3, 2, 0}},
    {50, {50, 6, 3, 2, 0}},
    {51, {51, 6, 3, 1, 0}},
    {51, {51, 6, 5, 3, 0}},
    {52, {52, 3, 0}},
    {52, {52, 19, 0}},
    {53, {53, 6, 2, 1, 0}},
    {53, {53, 6, 5, 4, 0}},
    {54, {54, 8, 6, 3, 0}},
    {54, {54, 10, 7, 1, 0}},
    {55, {55, 24, 0}},
    {55, {55, 31, 0}},
    {56, {56, 7, 4, 2, 0}},
    {56, {56, 8, 3, 2, 0}},
    {57, {57, 7, 0}},
    {57, {57, 22, 0}},
    {58, {58, 19, 0}},
    {58, {58, 39, 0}},
    {59, {59, 7, 4, 2, 0}},
    {59, {59, 7, 6, 2, 0}},
    {60, {60, 1, 0}},
    {60, {60, 11, 0}},
    {61, {61, 5, 2, 1, 0}},
    {61, {61, 7, 4, 1, 0}},
    {62, {62, 6, 5, 3, 0}},
    {62, {62, 8, 7, 6, 0}},
    {63, {63, 1, 0}},
    {63, {63, 5, 0}},
    {64, {64, 4, 3, 1, 0}},
    {64, {64, 4, 3, 2, 0}},
    {256, {256, 10, 5, 2, 0}},
    {258, {258, 83, 0}},
};

} // namespace

std::string PolyId::str() const { return std::to_string(degree) + "." + std::to_string(index); }

PolyId PolyId::parse(const std::string& text)
{
    const auto dot = text.find('.');
    PolyId id;
    if (dot == std::string::npos)
        throw Error(Errc::format, "polynomial id '" + text + "' is not <degree>.<index>");
    auto r1 = std::from_chars(text.data(), text.data() + dot, id.degree);
    auto r2 = std::from_chars(text.data() + dot + 1, text.data() + text.size(), id.index);
    if (r1.ec != std::errc{} || r1.ptr != text.data() + dot || r2.ec != std::errc{} ||
        r2.ptr != text.data() + text.size())
        throw Error(Errc::format, "polynomial id '" + text + "' is not <degree>.<index>");
    return id;
}

std::span<const PrimitivePoly> primitive_polys() { return kTable; }

unsigned primitive_poly_count(unsigned degree)
{
    return static_cast<unsigned>(std::count_if(kTable.begin(), kTable.end(),
                                               [&](const auto& p) { return p.degree == degree; }));
}

const PrimitivePoly& primitive_poly(PolyId id)
{
    unsigned seen = 0;
    for (const auto& p : kTable) {
        if (p.degree != id.degree)
            continue;
        if (seen++ == id.index)
            return p;
    }
    throw Error(Errc::invalid_params, "no shipped primitive polynomial " + id.str());
}

CompanionMatrix companion_of(PolyId id) { return CompanionMatrix::from_exponents(primitive_poly(id).exponents); }

std::uint64_t tap_mask(PolyId id)
{
    if (id.degree > 64)
        throw Error(Errc::invalid_params, "LFSR degree above 64");
    std::uint64_t mask = 0;
    for (auto e : primitive_poly(id).exponents)
        if (e < id.degree)
            mask |= std::uint64_t{1} << e;
    return mask;
}

} // namespace qclat
