#include "qclat/cipher.hpp"

#include "qclat/error.hpp"
#include "qclat/rng.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace qclat {

namespace {

unsigned ceil_log2(std::size_t x) { return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1)); }

std::uint64_t low_mask(unsigned bits)
{
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

PolyId first_of(unsigned degree, unsigned index)
{
    const unsigned count = primitive_poly_count(degree);
    if (count == 0)
        throw Error(Errc::invalid_params, "no shipped primitive polynomial of degree " + std::to_string(degree));
    return PolyId{degree, std::min(index, count - 1)};
}

} // namespace

// ------------------------------------------------------------------- Params

unsigned Params::l1() const noexcept { return ceil_log2(n()); }

unsigned Params::gamma() const { return permutation_width(q); }

unsigned Params::bits_per_symbol() const noexcept
{
    return L >= 2 ? static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(L)) - 1) : 0u;
}

Params Params::standard(std::size_t b, std::size_t n0, std::size_t dv, std::int64_t L, unsigned d)
{
    Params p;
    p.b = b;
    p.n0 = n0;
    p.dv = dv;
    p.q = b;
    p.L = L;
    p.d = d;
    p.u_poly = first_of(static_cast<unsigned>(p.n()), 0);
    p.e_q = first_of(p.l1(), 0);
    p.e_p = first_of(p.l1(), 1);
    p.h_q = first_of(d, 0);
    p.h_p = first_of(d, 1);
    p.perm_poly = default_permutation_poly(p.q);
    return p;
}

void Params::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(Errc::invalid_params, msg); };
    if (b < 2 || n0 < 2)
        fail("need b >= 2 and n0 >= 2");
    if (dv % 2 == 0)
        fail("dv must be odd");
    if (dv >= b)
        fail("dv must be below b");
    if (q != b)
        fail("q must equal b");
    if (n() % 2 != 0)
        fail("n = b n0 must be even");
    if (L < 2 || !std::has_single_bit(static_cast<std::uint64_t>(L)))
        fail("L must be a power of two >= 2");
    // ciphertext coordinates are stored as 32-bit integers
    if (static_cast<double>(n()) * static_cast<double>(L) * 2.0 + 3.0 > 2147483647.0)
        fail("n L too large for 32-bit ciphertext coordinates");
    if (d < 1 || d > 64)
        fail("d must be in 1..64");
    auto need = [&](PolyId id, unsigned degree, const char* what) {
        if (id.degree != degree)
            fail(std::string(what) + " polynomial must have degree " + std::to_string(degree));
        primitive_poly(id);
    };
    need(u_poly, static_cast<unsigned>(n()), "U");
    need(e_q, l1(), "error-stream");
    need(e_p, l1(), "error-stream reseed");
    need(h_q, d, "control-stream");
    need(h_p, d, "control-stream reseed");
    need(perm_poly, std::max(gamma(), 1u), "permutation");
}

std::string Params::canonical() const
{
    std::ostringstream os;
    os << "b " << b << "\nn0 " << n0 << "\ndv " << dv << "\nq " << q << "\nL " << L << "\nd " << d
       << "\npoly u=" << u_poly.str() << " eq=" << e_q.str() << " ep=" << e_p.str()
       << " hq=" << h_q.str() << " hp=" << h_p.str() << " perm=" << perm_poly.str() << "\n";
    return os.str();
}

std::uint64_t Params::digest() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------- SecretKey

std::size_t SecretKey::secret_bits() const
{
    const Params& p = params;
    return p.n0 * p.dv * ceil_log2(p.b) + p.l1() + p.d + p.v() * p.gamma();
}

SecretKey keygen(const Params& params, std::uint64_t master_seed)
{
    params.validate();
    std::mt19937_64 rng(master_seed);
    auto nonzero = [&](unsigned bits) { return uniform_below(rng, low_mask(bits)) + 1; };

    QcCode code = rdf_search(params.b, params.n0, params.dv, rng());
    const std::uint64_t s = nonzero(params.l1());
    const std::uint64_t h_seed = nonzero(params.d);
    const unsigned g = params.gamma();
    BitVector t(params.v() * g);
    for (std::size_t i = 0; i < params.v() && g > 0; ++i) {
        const std::uint64_t slice = nonzero(g);
        for (unsigned bit = 0; bit < g; ++bit)
            t.set(i * g + bit, (slice >> bit) & 1u);
    }
    return SecretKey{params, std::move(code), s, h_seed, std::move(t)};
}

namespace {

// Fields are bit strings; bit i sits in byte i/8 at position i%8.
std::string to_hex(const std::vector<bool>& bits)
{
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (auto b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 15];
    }
    return out;
}

std::vector<bool> from_hex(const std::string& hex, std::size_t nbits)
{
    if (hex.size() != 2 * ((nbits + 7) / 8))
        throw Error(Errc::format, "hex field has the wrong length");
    std::vector<bool> bits(nbits);
    for (std::size_t byte = 0; byte * 2 < hex.size(); ++byte) {
        unsigned v = 0;
        for (int h = 0; h < 2; ++h) {
            const char c = hex[byte * 2 + h];
            unsigned digit;
            if (c >= '0' && c <= '9')
                digit = c - '0';
            else if (c >= 'a' && c <= 'f')
                digit = c - 'a' + 10;
            else
                throw Error(Errc::format, "bad hex digit");
            v = v * 16 + digit;
        }
        for (unsigned bit = 0; bit < 8; ++bit) {
            const std::size_t i = byte * 8 + bit;
            const bool set = (v >> bit) & 1u;
            if (i < nbits)
                bits[i] = set;
            else if (set)
                throw Error(Errc::format, "padding bits must be zero");
        }
    }
    return bits;
}

void push_bits(std::vector<bool>& bits, std::uint64_t value, unsigned width)
{
    for (unsigned i = 0; i < width; ++i)
        bits.push_back((value >> i) & 1u);
}

std::uint64_t read_bits(const std::vector<bool>& bits, std::size_t at, unsigned width)
{
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i)
        if (bits[at + i])
            v |= std::uint64_t{1} << i;
    return v;
}

std::string field(const std::string& name, const std::vector<bool>& bits)
{
    return name + " " + std::to_string(bits.size()) + ":" + to_hex(bits) + "\n";
}

} // namespace

std::string serialize_key(const SecretKey& key)
{
    const Params& p = key.params;
    std::vector<bool> supports;
    const unsigned w = ceil_log2(p.b);
    for (const auto& block : key.code.supports())
        for (auto s : block)
            push_bits(supports, s, w);
    std::vector<bool> s;
    push_bits(s, key.s, p.l1());
    std::vector<bool> h;
    push_bits(h, key.h_seed, p.d);
    std::vector<bool> t;
    for (std::size_t i = 0; i < key.t.size(); ++i)
        t.push_back(key.t.get(i));
    return "qclat-key v1\n" + p.canonical() + field("supports", supports) + field("s", s) +
           field("h_seed", h) + field("t", t);
}

SecretKey parse_key(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    auto next = [&](const std::string& name) {
        if (!std::getline(in, line))
            throw Error(Errc::format, "key file ends before '" + name + "'");
        const auto sp = line.find(' ');
        if (sp == std::string::npos || line.substr(0, sp) != name)
            throw Error(Errc::format, "expected field '" + name + "'");
        return line.substr(sp + 1);
    };
    if (!std::getline(in, line) || line != "qclat-key v1")
        throw Error(Errc::format, "not a qclat key file (v1)");
    auto number = [&](const std::string& name) -> std::uint64_t {
        const std::string v = next(name);
        std::size_t used = 0;
        std::uint64_t out = 0;
        try {
            out = std::stoull(v, &used);
        } catch (const std::exception&) {
            throw Error(Errc::format, "field '" + name + "' is not a number");
        }
        if (used != v.size())
            throw Error(Errc::format, "field '" + name + "' is not a number");
        return out;
    };
    Params p;
    p.b = number("b");
    p.n0 = number("n0");
    p.dv = number("dv");
    p.q = number("q");
    p.L = static_cast<std::int64_t>(number("L"));
    p.d = static_cast<unsigned>(number("d"));
    {
        std::istringstream polys(next("poly"));
        std::map<std::string, PolyId> ids;
        std::string tok;
        while (polys >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw Error(Errc::format, "bad polynomial entry");
            ids[tok.substr(0, eq)] = PolyId::parse(tok.substr(eq + 1));
        }
        auto get = [&](const char* key) {
            auto it = ids.find(key);
            if (it == ids.end())
                throw Error(Errc::format, std::string("missing polynomial '") + key + "'");
            return it->second;
        };
        p.u_poly = get("u");
        p.e_q = get("eq");
        p.e_p = get("ep");
        p.h_q = get("hq");
        p.h_p = get("hp");
        p.perm_poly = get("perm");
    }
    p.validate();

    auto bits_field = [&](const std::string& name, std::size_t expect) {
        const std::string v = next(name);
        const auto colon = v.find(':');
        if (colon == std::string::npos || v.substr(0, colon) != std::to_string(expect))
            throw Error(Errc::format, "field '" + name + "' must hold " + std::to_string(expect) + " bits");
        return from_hex(v.substr(colon + 1), expect);
    };
    const unsigned w = ceil_log2(p.b);
    const auto sup = bits_field("supports", p.n0 * p.dv * w);
    std::vector<std::vector<std::uint32_t>> supports(p.n0);
    for (std::size_t i = 0; i < p.n0; ++i)
        for (std::size_t j = 0; j < p.dv; ++j)
            supports[i].push_back(static_cast<std::uint32_t>(read_bits(sup, (i * p.dv + j) * w, w)));
    QcCode code(p.b, std::move(supports));
    const std::uint64_t s = read_bits(bits_field("s", p.l1()), 0, p.l1());
    const std::uint64_t h = read_bits(bits_field("h_seed", p.d), 0, p.d);
    const auto tb = bits_field("t", p.v() * p.gamma());
    BitVector t(tb.size());
    for (std::size_t i = 0; i < tb.size(); ++i)
        t.set(i, tb[i]);
    if (s == 0 || h == 0)
        throw Error(Errc::invalid_params, "LFSR seeds must be nonzero");
    if (std::getline(in, line) && !line.empty())
        throw Error(Errc::format, "trailing data after key fields");
    return SecretKey{p, std::move(code), s, h, std::move(t)};
}

void save_key(const SecretKey& key, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::format, "cannot open '" + path + "' for writing");
    out << serialize_key(key);
    if (!out)
        throw Error(Errc::format, "write to '" + path + "' failed");
}

SecretKey load_key(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::format, "cannot open key file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key(ss.str());
}

// ------------------------------------------------------------ CipherContext

CipherContext::CipherContext(SecretKey key, DecoderConfig decoder)
    : key_(std::move(key)),
      lattice_(key_.code, key_.params.L),
      nlf_(companion_of(key_.params.u_poly), key_.params.d),
      decoder_(decoder)
{
    key_.params.validate();
    decoder_.validate();
}

FrameMaterial frame_material(const CipherContext& ctx, std::uint64_t frame)
{
    const Params& p = ctx.params();
    const SecretKey& key = ctx.key();
    ReseedingLfsr es(p.e_q, p.e_p, key.s);
    es.seek(static_cast<u128>(frame) * p.n());
    BitVector e = es.next_bits(p.n());
    ReseedingLfsr hs(p.h_q, p.h_p, key.h_seed);
    hs.seek(static_cast<u128>(frame) * p.d);
    std::uint64_t hbits = 0;
    for (unsigned i = 0; i < p.d; ++i)
        hbits |= static_cast<std::uint64_t>(hs.next_bit()) << i;
    return FrameMaterial{std::move(e), ControlVector(hbits, p.d),
                         build_block_permutation(key.t, p.q, p.v(), p.perm_poly, frame)};
}

void check_constellation(std::span<const std::int64_t> m, std::int64_t L)
{
    for (std::size_t i = 0; i < m.size(); ++i) {
        const bool ok = i % 2 == 0 ? (m[i] >= 0 && m[i] <= L - 1) : (m[i] >= -L && m[i] <= -1);
        if (!ok)
            throw Error(Errc::constellation_violation, "coordinate " + std::to_string(i) + " = " +
                                                           std::to_string(m[i]));
    }
}

// ------------------------------------------------------------ CipherSession

CipherSession::CipherSession(std::shared_ptr<const CipherContext> ctx, std::uint64_t counter)
    : ctx_(std::move(ctx)), counter_(counter)
{
    if (!ctx_)
        throw Error(Errc::invalid_params, "session without a context");
}

namespace {

IntVec add_bits(std::span<const std::int64_t> v, const BitVector& e, std::int64_t scale)
{
    IntVec out(v.begin(), v.end());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (e.get(i))
            out[i] += scale;
    return out;
}

} // namespace

Ciphertext CipherSession::encrypt_joint(std::span<const std::int64_t> m, EncryptTrace* trace)
{
    const CipherContext& c = *ctx_;
    if (m.size() != c.n())
        throw Error(Errc::size_mismatch, "message length differs from n");
    check_constellation(m, c.params().L);
    const std::uint64_t frame = counter_++;
    const FrameMaterial fm = frame_material(c, frame);

    IntVec m_prime = add_bits(m, fm.e, 1);
    IntVec x = apply_f(c.nlf(), m_prime, fm.h);
    ShapedPoint sp = shape(c.lattice(), x);
    IntVec lt(sp.lambda_prime.size());
    for (std::size_t i = 0; i < lt.size(); ++i)
        lt[i] = 2 * sp.lambda_prime[i] - 1 + (fm.e.get(i) ? 2 : 0);
    Ciphertext out{fm.p.apply<std::int64_t>(lt), frame, c.params().digest()};
    if (trace) {
        trace->m_prime = std::move(m_prime);
        trace->x = std::move(x);
        trace->shaped = std::move(sp);
        trace->lambda_tilde = std::move(lt);
    }
    return out;
}

IntVec CipherSession::finish_decrypt(const IntVec& lambda_tilde, const FrameMaterial& fm)
{
    const IntVec x = mod_recover(ctx_->lattice(), lambda_tilde);
    const IntVec m_prime = invert_f(ctx_->nlf(), x, fm.h);
    return add_bits(m_prime, fm.e, -1);
}

IntVec CipherSession::decrypt_joint(std::span<const double> r, double sigma)
{
    const CipherContext& c = *ctx_;
    if (r.size() != c.n())
        throw Error(Errc::size_mismatch, "observation length differs from n");
    if (!(sigma >= 0.0))
        throw Error(Errc::invalid_params, "sigma must be non-negative");
    const std::uint64_t frame = counter_++;
    const FrameMaterial fm = frame_material(c, frame);
    std::vector<double> rr = fm.p.apply_inverse<double>(r);
    for (std::size_t i = 0; i < rr.size(); ++i)
        if (fm.e.get(i))
            rr[i] -= 2.0;

    IntVec lambda_tilde;
    if (sigma == 0.0) {
        lambda_tilde.resize(rr.size());
        for (std::size_t i = 0; i < rr.size(); ++i) {
            if (rr[i] != std::nearbyint(rr[i]) || std::fabs(rr[i]) > 9.0e15)
                throw Error(Errc::decode_failure, "noiseless observation is not an integer vector");
            lambda_tilde[i] = static_cast<std::int64_t>(rr[i]);
        }
        if (!in_coset_lattice(c.lattice(), lambda_tilde))
            throw Error(Errc::decode_failure, "noiseless observation has a nonzero syndrome");
    } else {
        lambda_tilde = decode(c.lattice(), c.decoder(), rr, sigma);
    }
    return finish_decrypt(lambda_tilde, fm);
}

IntVec CipherSession::decrypt_joint(std::span<const std::int64_t> y)
{
    std::vector<double> r(y.begin(), y.end());
    return decrypt_joint(r, 0.0);
}

IntVec CipherSession::encrypt_raw(std::span<const std::int64_t> m)
{
    const CipherContext& c = *ctx_;
    if (m.size() != c.n())
        throw Error(Errc::size_mismatch, "message length differs from n");
    const std::uint64_t frame = counter_++;
    const FrameMaterial fm = frame_material(c, frame);
    const IntVec x = apply_f(c.nlf(), add_bits(m, fm.e, 1), fm.h);
    IntVec lt = c.lattice().lattice_point(x);
    for (std::size_t i = 0; i < lt.size(); ++i)
        lt[i] = 2 * lt[i] - 1 + (fm.e.get(i) ? 2 : 0);
    return fm.p.apply<std::int64_t>(lt);
}

IntVec CipherSession::decrypt_raw(std::span<const std::int64_t> y)
{
    const CipherContext& c = *ctx_;
    if (y.size() != c.n())
        throw Error(Errc::size_mismatch, "ciphertext length differs from n");
    const std::uint64_t frame = counter_++;
    const FrameMaterial fm = frame_material(c, frame);
    IntVec w = add_bits(fm.p.apply_inverse<std::int64_t>(y), fm.e, -2);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if ((w[i] & 1) == 0)
            throw Error(Errc::not_in_lattice, "even ciphertext component " + std::to_string(i));
        w[i] = (w[i] + 1) / 2;
    }
    IntVec x;
    try {
        x = lattice_coords(c.lattice(), w);
    } catch (const Error& err) {
        throw Error(Errc::not_in_lattice, err.what());
    }
    return add_bits(invert_f(c.nlf(), x, fm.h), fm.e, -1);
}

// ------------------------------------------------------------- bit packing

std::size_t frame_capacity(std::size_t n, std::int64_t L)
{
    if (L < 2 || !std::has_single_bit(static_cast<std::uint64_t>(L)))
        throw Error(Errc::invalid_params, "L must be a power of two >= 2");
    const auto w = static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(L)) - 1);
    return n * w / 8;
}

PlainFrame pack_frame(std::span<const std::uint8_t> chunk, std::size_t n, std::int64_t L)
{
    const std::size_t cap = frame_capacity(n, L);
    if (chunk.size() > cap)
        throw Error(Errc::size_mismatch, "chunk exceeds frame capacity");
    const auto w = static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(L)) - 1);
    PlainFrame f;
    f.payload_len = static_cast<std::uint32_t>(chunk.size());
    f.m.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t u = 0;
        for (unsigned b = 0; b < w; ++b) {
            const std::size_t bit = i * w + b;
            if (bit / 8 < chunk.size() && ((chunk[bit / 8] >> (bit % 8)) & 1u))
                u |= std::int64_t{1} << b;
        }
        f.m[i] = i % 2 == 0 ? u : -1 - u;
    }
    return f;
}

std::vector<PlainFrame> pack_bits(std::span<const std::uint8_t> data, std::size_t n, std::int64_t L)
{
    const std::size_t cap = frame_capacity(n, L);
    if (cap == 0)
        throw Error(Errc::invalid_params, "frame carries no whole byte");
    std::vector<PlainFrame> frames;
    for (std::size_t at = 0; at < data.size(); at += cap)
        frames.push_back(pack_frame(data.subspan(at, std::min(cap, data.size() - at)), n, L));
    if (frames.empty())
        frames.push_back(pack_frame({}, n, L));
    return frames;
}

std::vector<std::uint8_t> unpack_frame(const PlainFrame& frame, std::int64_t L)
{
    const std::size_t n = frame.m.size();
    if (frame.payload_len > frame_capacity(n, L))
        throw Error(Errc::format, "payload length exceeds frame capacity");
    const auto w = static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(L)) - 1);
    std::vector<std::uint8_t> out(frame.payload_len, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t u = i % 2 == 0 ? frame.m[i] : -1 - frame.m[i];
        for (unsigned b = 0; b < w; ++b) {
            const std::size_t bit = i * w + b;
            if (bit / 8 < out.size() && ((u >> b) & 1))
                out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
        }
    }
    return out;
}

std::vector<std::uint8_t> unpack_bits(std::span<const PlainFrame> frames, std::int64_t L)
{
    std::vector<std::uint8_t> out;
    for (const auto& f : frames) {
        const auto bytes = unpack_frame(f, L);
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    return out;
}

// ----------------------------------------------------------------- framing

namespace {

constexpr char kMagic[4] = {'Q', 'L', 'C', 'T'};
constexpr std::uint16_t kVersion = 1;

template <class T> void put(std::ostream& out, T value)
{
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T> bool get(std::istream& in, T& value)
{
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(T)))
        return false;
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    value = static_cast<T>(v);
    return true;
}

} // namespace

FrameWriter::FrameWriter(std::ostream& out, StreamHeader header) : out_(out), header_(header)
{
    out_.write(kMagic, 4);
    put<std::uint16_t>(out_, kVersion);
    put<std::uint16_t>(out_, static_cast<std::uint16_t>(header_.kind));
    put<std::uint32_t>(out_, header_.n);
    put<std::uint64_t>(out_, header_.digest);
}

void FrameWriter::write(const WireFrame& frame)
{
    if (frame.values.size() != header_.n)
        throw Error(Errc::size_mismatch, "frame length differs from the stream header");
    if (header_.kind == FrameKind::ciphertext)
        for (double v : frame.values)
            if (v != std::nearbyint(v) || v < -2147483648.0 || v > 2147483647.0)
                throw Error(Errc::format, "ciphertext coordinate is not a 32-bit integer");
    put<std::uint64_t>(out_, frame.counter);
    put<std::uint32_t>(out_, frame.payload_len);
    for (double v : frame.values) {
        if (header_.kind == FrameKind::ciphertext) {
            put<std::uint32_t>(out_, static_cast<std::uint32_t>(static_cast<std::int32_t>(v)));
        } else {
            put<std::uint64_t>(out_, std::bit_cast<std::uint64_t>(v));
        }
    }
    if (!out_)
        throw Error(Errc::format, "write failed");
}

FrameReader::FrameReader(std::istream& in) : in_(in)
{
    char magic[4];
    in_.read(magic, 4);
    if (in_.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw Error(Errc::format, "missing QLCT magic");
    std::uint16_t version = 0;
    std::uint16_t kind = 0;
    if (!get(in_, version) || !get(in_, kind) || !get(in_, header_.n) || !get(in_, header_.digest))
        throw Error(Errc::format, "truncated stream header");
    if (version != kVersion)
        throw Error(Errc::format, "unsupported stream version " + std::to_string(version));
    if (kind > 1)
        throw Error(Errc::format, "unknown frame kind");
    header_.kind = static_cast<FrameKind>(kind);
}

bool FrameReader::next(WireFrame& frame)
{
    if (in_.peek() == std::char_traits<char>::eof())
        return false;
    if (!get(in_, frame.counter) || !get(in_, frame.payload_len))
        throw Error(Errc::format, "truncated frame header");
    frame.values.resize(header_.n);
    for (auto& v : frame.values) {
        if (header_.kind == FrameKind::ciphertext) {
            std::uint32_t raw = 0;
            if (!get(in_, raw))
                throw Error(Errc::format, "truncated frame");
            v = static_cast<double>(static_cast<std::int32_t>(raw));
        } else {
            std::uint64_t raw = 0;
            if (!get(in_, raw))
                throw Error(Errc::format, "truncated frame");
            v = std::bit_cast<double>(raw);
        }
    }
    return true;
}

} // namespace qclat
