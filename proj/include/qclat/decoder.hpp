#pragma once

// Sum-product decoding of lattice points observed through AWGN.

#include "qclat/lattice.hpp"

#include <optional>
#include <span>

namespace qclat {

struct DecoderConfig {
    unsigned max_iterations = 50;
    double llr_clip = 30.0;
    unsigned coset_window = 4; ///< 4Z translates marginalized on each side

    /// Throws invalid_params unless I >= 1, T >= 1 and llr_clip > 0.
    void validate() const;
};

/// log P(r | coset +1) / P(r | coset -1) for the cosets +-1 + 4Z, each
/// marginalized over 2T+1 translates centred on r, clipped to +-clip.
double channel_llr(double r, double sigma, unsigned window, double clip = 30.0);

struct DecodeResult {
    IntVec lambda;
    unsigned iterations = 0; ///< 0 when the channel decisions were already a codeword
};

/// nullopt when the syndrome is still nonzero after max_iterations.
std::optional<DecodeResult> try_decode(const LatticeCtx& ctx, const DecoderConfig& cfg,
                                       std::span<const double> r, double sigma);

/// Throws decode_failure when try_decode gives up.
IntVec decode(const LatticeCtx& ctx, const DecoderConfig& cfg, std::span<const double> r,
              double sigma);

} // namespace qclat
