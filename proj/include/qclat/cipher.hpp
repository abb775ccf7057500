#pragma once

// Joint encryption / channel coding over a QC-LDPC lattice.
//
//   y = (2 x' G - 1 + 2e) P,   x' = shape(F(m + e, h))
//
// Raw mode drops the shaping step. Every frame j draws fresh (e, h, P) from
// the key's LFSR streams, so both ends must agree on the frame counter.

#include "qclat/decoder.hpp"
#include "qclat/keystream.hpp"
#include "qclat/lattice.hpp"
#include "qclat/nlf.hpp"
#include "qclat/poly_table.hpp"
#include "qclat/rdfcode.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qclat {

struct Params {
    std::size_t b = 43;
    std::size_t n0 = 6;
    std::size_t dv = 3;
    std::size_t q = 43;
    std::int64_t L = 16;
    unsigned d = 61;

    PolyId u_poly;    ///< companion matrix U, degree n
    PolyId e_q, e_p;  ///< error-vector stream, degree l1
    PolyId h_q, h_p;  ///< control-word stream, degree d
    PolyId perm_poly; ///< permutation LFSR, degree ceil(log2 q) (1 when q = 1)

    /// q = b and the first shipped polynomials of each required degree.
    static Params standard(std::size_t b, std::size_t n0, std::size_t dv, std::int64_t L,
                           unsigned d);

    std::size_t n() const noexcept { return b * n0; }
    std::size_t k() const noexcept { return b * (n0 - 1); }
    std::size_t v() const noexcept { return q == 0 ? 0 : n() / q; }
    unsigned l1() const noexcept;
    unsigned gamma() const;
    /// Bits carried by one coordinate of the packed payload.
    unsigned bits_per_symbol() const noexcept;

    /// Throws invalid_params describing the first violated constraint.
    void validate() const;

    /// Public parameters as canonical text (no secrets).
    std::string canonical() const;
    /// FNV-1a 64 of canonical().
    std::uint64_t digest() const;

    bool operator==(const Params&) const = default;
};

struct SecretKey {
    Params params;
    QcCode code;
    std::uint64_t s = 0;      ///< error-stream seed, l1 bits
    std::uint64_t h_seed = 0; ///< control-stream seed, d bits
    BitVector t;              ///< v permutation seeds of ceil(log2 q) bits

    /// Sum of the bit lengths of the secret fields as serialized.
    std::size_t secret_bits() const;
    bool operator==(const SecretKey&) const = default;
};

/// Throws invalid_params or search_exhausted.
SecretKey keygen(const Params& params, std::uint64_t master_seed);

std::string serialize_key(const SecretKey& key);
/// Throws format for malformed text and invalid_params for bad values.
SecretKey parse_key(const std::string& text);
void save_key(const SecretKey& key, const std::string& path);
SecretKey load_key(const std::string& path);

/// Immutable per-key state shared by sessions (lattice, nonlinear map and
/// its inverse cache). Safe to share across threads.
class CipherContext {
public:
    explicit CipherContext(SecretKey key, DecoderConfig decoder = {});

    const SecretKey& key() const noexcept { return key_; }
    const Params& params() const noexcept { return key_.params; }
    const LatticeCtx& lattice() const noexcept { return lattice_; }
    const NlfContext& nlf() const noexcept { return nlf_; }
    const DecoderConfig& decoder() const noexcept { return decoder_; }
    std::size_t n() const noexcept { return lattice_.n(); }

private:
    SecretKey key_;
    LatticeCtx lattice_;
    NlfContext nlf_;
    DecoderConfig decoder_;
};

struct FrameMaterial {
    BitVector e;
    ControlVector h;
    BlockPermutation p;
};

/// (e, h, P) of frame j.
FrameMaterial frame_material(const CipherContext& ctx, std::uint64_t frame);

struct Ciphertext {
    IntVec y;
    std::uint64_t counter = 0;
    std::uint64_t digest = 0;
};

/// Intermediate values of one joint encryption, for inspection.
struct EncryptTrace {
    IntVec m_prime;
    IntVec x;
    ShapedPoint shaped;
    IntVec lambda_tilde; ///< 2 lambda' - 1 + 2e, before permutation
};

/// Throws constellation_violation unless even (0-based) coordinates lie in
/// [0, L-1] and odd ones in [-L, -1].
void check_constellation(std::span<const std::int64_t> m, std::int64_t L);

/// Stateful frame-by-frame encryptor/decryptor. Every call consumes one
/// frame index, whether it succeeds or not.
class CipherSession {
public:
    explicit CipherSession(std::shared_ptr<const CipherContext> ctx, std::uint64_t counter = 0);

    const CipherContext& context() const noexcept { return *ctx_; }
    std::uint64_t counter() const noexcept { return counter_; }
    void seek(std::uint64_t counter) noexcept { counter_ = counter; }

    Ciphertext encrypt_joint(std::span<const std::int64_t> m, EncryptTrace* trace = nullptr);
    /// sigma = 0 treats r as the exact ciphertext. Throws decode_failure,
    /// not_lattice_point or not_in_lattice.
    IntVec decrypt_joint(std::span<const double> r, double sigma);
    IntVec decrypt_joint(std::span<const std::int64_t> y);

    IntVec encrypt_raw(std::span<const std::int64_t> m);
    IntVec decrypt_raw(std::span<const std::int64_t> y);

private:
    IntVec finish_decrypt(const IntVec& lambda_tilde, const FrameMaterial& fm);

    std::shared_ptr<const CipherContext> ctx_;
    std::uint64_t counter_;
};

// ------------------------------------------------------------ bit packing

struct PlainFrame {
    IntVec m;
    std::uint32_t payload_len = 0; ///< bytes of real data carried
};

/// Bytes carried per frame: floor(n log2 L / 8).
std::size_t frame_capacity(std::size_t n, std::int64_t L);

/// Splits data into constellation frames. Coordinate i takes the next
/// log2 L bits (LSB first) as u; even coordinates are u, odd ones -1 - u.
/// The last frame is zero-padded; empty input yields one empty frame.
std::vector<PlainFrame> pack_bits(std::span<const std::uint8_t> data, std::size_t n,
                                  std::int64_t L);
PlainFrame pack_frame(std::span<const std::uint8_t> chunk, std::size_t n, std::int64_t L);
/// Payload bytes of one frame (payload_len of them).
std::vector<std::uint8_t> unpack_frame(const PlainFrame& frame, std::int64_t L);
std::vector<std::uint8_t> unpack_bits(std::span<const PlainFrame> frames, std::int64_t L);

// ---------------------------------------------------------------- framing

enum class FrameKind : std::uint16_t { ciphertext = 0, observation = 1 };

struct StreamHeader {
    FrameKind kind = FrameKind::ciphertext;
    std::uint32_t n = 0;
    std::uint64_t digest = 0;
};

struct WireFrame {
    std::uint64_t counter = 0;
    std::uint32_t payload_len = 0;
    std::vector<double> values; ///< exact integers for ciphertext streams
};

/// "QLCT", u16 version, u16 kind, u32 n, u64 digest; then per frame u64
/// counter, u32 payload length and n coordinates (i32 or f64), all
/// little-endian.
class FrameWriter {
public:
    FrameWriter(std::ostream& out, StreamHeader header);
    void write(const WireFrame& frame);

private:
    std::ostream& out_;
    StreamHeader header_;
};

class FrameReader {
public:
    /// Throws format on a bad header.
    explicit FrameReader(std::istream& in);
    const StreamHeader& header() const noexcept { return header_; }
    /// False at a clean end of stream; throws format on truncation.
    bool next(WireFrame& frame);

private:
    std::istream& in_;
    StreamHeader header_;
};

} // namespace qclat
