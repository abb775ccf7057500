#include "qclat/error.hpp"

namespace qclat {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::singular: return "Singular";
    case Errc::singular_circulant: return "SingularCirculant";
    case Errc::singular_block: return "SingularBlock";
    case Errc::not_in_lattice: return "NotInLattice";
    case Errc::not_lattice_point: return "NotLatticePoint";
    case Errc::search_exhausted: return "SearchExhausted";
    case Errc::shaping_overflow: return "ShapingOverflow";
    case Errc::decode_failure: return "DecodeFailure";
    case Errc::too_large: return "TooLarge";
    case Errc::zero_seed_slice: return "ZeroSeedSlice";
    case Errc::constellation_violation: return "ConstellationViolation";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::format: return "FormatError";
    }
    return "Unknown";
}

} // namespace qclat
