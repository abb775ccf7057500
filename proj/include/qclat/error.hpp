#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qclat {

enum class Errc {
    size_mismatch,
    singular,
    singular_circulant,
    singular_block,
    not_in_lattice,
    not_lattice_point,
    search_exhausted,
    shaping_overflow,
    decode_failure,
    too_large,
    zero_seed_slice,
    constellation_violation,
    invalid_params,
    format,
};

std::string_view errc_name(Errc code) noexcept;

/// Every library failure is reported as this exception; `code()` names the
/// contract that was violated.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace qclat
