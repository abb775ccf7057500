#include "qclat/rng.hpp"

#include <cmath>
#include <numbers>

namespace qclat {

double standard_normal(std::mt19937_64& rng)
{
    const double u1 = uniform_open01(rng);
    const double u2 = uniform_open01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace qclat
