// qclat command-line tool: keygen, encrypt, decrypt, awgn, simulate, analyze.
//
// Exit status: 0 on success, 1 on a runtime failure, 2 on a usage error.

#include "qclat/analysis.hpp"
#include "qclat/channel.hpp"
#include "qclat/cipher.hpp"
#include "qclat/error.hpp"
#include "qclat/rng.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>

using namespace qclat;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool quiet = false;

void note(const std::string& msg)
{
    if (!quiet)
        std::cerr << msg << '\n';
}

// "-" selects the standard stream.
class Input {
public:
    explicit Input(const std::string& path)
    {
        if (path == "-") {
            in_ = &std::cin;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_)
            throw Error(Errc::format, "cannot open '" + path + "'");
        in_ = &file_;
    }
    std::istream& get() { return *in_; }

private:
    std::ifstream file_;
    std::istream* in_ = nullptr;
};

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path == "-") {
            out_ = &std::cout;
            return;
        }
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_)
            throw Error(Errc::format, "cannot open '" + path + "' for writing");
        out_ = &file_;
    }
    std::ostream& get() { return *out_; }
    void finish()
    {
        out_->flush();
        if (!*out_)
            throw Error(Errc::format, "write failed");
    }

private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

// Reads up to `want` bytes; fewer only at end of stream.
std::size_t read_chunk(std::istream& in, std::vector<std::uint8_t>& buf, std::size_t want)
{
    buf.resize(want);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(want));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (in.bad())
        throw Error(Errc::format, "read failed");
    buf.resize(got);
    return got;
}

template <class F> void as_usage(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        if (e.code() == Errc::invalid_params)
            throw UsageError(e.what());
        throw;
    }
}

// ------------------------------------------------------------------ keygen

struct KeygenOpts {
    std::size_t b = 0, n0 = 0, dv = 0;
    std::optional<std::size_t> q;
    std::int64_t L = 16;
    unsigned d = 61;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int run_keygen(const KeygenOpts& o)
{
    Params p = Params::standard(o.b, o.n0, o.dv, o.L, o.d);
    if (o.q)
        p.q = *o.q;
    as_usage([&] { p.validate(); });
    std::uint64_t seed;
    if (o.seed) {
        seed = *o.seed;
    } else {
        std::random_device rd;
        seed = (std::uint64_t{rd()} << 32) ^ rd();
    }
    const SecretKey key = keygen(p, seed);
    save_key(key, o.out);
    std::cout << "key size: " << key.secret_bits() << " bits\n";
    return 0;
}

// ----------------------------------------------------------------- encrypt

struct StreamOpts {
    std::string key;
    std::string in = "-";
    std::string out = "-";
    std::uint64_t counter = 0;
};

int run_encrypt(const StreamOpts& o)
{
    auto ctx = std::make_shared<const CipherContext>(load_key(o.key));
    const Params& p = ctx->params();
    CipherSession session(ctx, o.counter);
    Input in(o.in);
    Output out(o.out);
    FrameWriter writer(out.get(), {FrameKind::ciphertext, static_cast<std::uint32_t>(p.n()), p.digest()});
    const std::size_t cap = frame_capacity(p.n(), p.L);
    std::vector<std::uint8_t> chunk;
    std::uint64_t frames = 0;
    while (read_chunk(in.get(), chunk, cap) > 0) {
        const PlainFrame pf = pack_frame(chunk, p.n(), p.L);
        const Ciphertext c = session.encrypt_joint(pf.m);
        writer.write({c.counter, pf.payload_len, std::vector<double>(c.y.begin(), c.y.end())});
        ++frames;
        if (chunk.size() < cap)
            break;
    }
    out.finish();
    note("encrypted " + std::to_string(frames) + " frame(s)");
    return 0;
}

// ----------------------------------------------------------------- decrypt

struct DecryptOpts : StreamOpts {
    double sigma = 0.0;
    std::string on_fail = "abort";
};

int run_decrypt(const DecryptOpts& o)
{
    if (o.sigma < 0)
        throw UsageError("--sigma must be non-negative");
    auto ctx = std::make_shared<const CipherContext>(load_key(o.key));
    const Params& p = ctx->params();
    CipherSession session(ctx);
    Input in(o.in);
    Output out(o.out);
    FrameReader reader(in.get());
    if (reader.header().n != p.n())
        throw Error(Errc::format, "stream frame length " + std::to_string(reader.header().n) +
                                      " does not match the key (n = " + std::to_string(p.n()) + ")");
    if (reader.header().digest != p.digest())
        throw Error(Errc::format, "stream was produced under different public parameters");
    if (reader.header().kind == FrameKind::observation && o.sigma == 0.0)
        note("warning: decoding a noisy observation stream with --sigma 0 (exact mode)");

    const bool skip = o.on_fail == "skip";
    const std::size_t cap = frame_capacity(p.n(), p.L);
    WireFrame wf;
    std::uint64_t frames = 0, failed = 0;
    while (reader.next(wf)) {
        if (wf.payload_len > cap)
            throw Error(Errc::format, "frame " + std::to_string(wf.counter) + " payload exceeds capacity");
        session.seek(wf.counter);
        std::vector<std::uint8_t> bytes;
        try {
            PlainFrame pf{session.decrypt_joint(wf.values, o.sigma), wf.payload_len};
            bytes = unpack_frame(pf, p.L);
        } catch (const Error& e) {
            if (!skip)
                throw Error(e.code(), "frame " + std::to_string(wf.counter) + ": " + e.what());
            note("warning: frame " + std::to_string(wf.counter) + " failed (" + e.what() +
                 "); writing zeros");
            bytes.assign(wf.payload_len, 0);
            ++failed;
        }
        out.get().write(reinterpret_cast<const char*>(bytes.data()),
                        static_cast<std::streamsize>(bytes.size()));
        ++frames;
    }
    out.finish();
    note("decrypted " + std::to_string(frames) + " frame(s), " + std::to_string(failed) + " failed");
    return 0;
}

// -------------------------------------------------------------------- awgn

struct AwgnOpts {
    std::string in = "-";
    std::string out = "-";
    std::optional<double> sigma;
    std::optional<double> vnr_db;
    std::string key;
    std::uint64_t seed = 1;
};

int run_awgn(const AwgnOpts& o)
{
    if (o.sigma.has_value() == o.vnr_db.has_value())
        throw UsageError("give exactly one of --sigma and --vnr-db");
    if (o.vnr_db && o.key.empty())
        throw UsageError("--vnr-db needs --key to fix the lattice dimensions");
    if (o.sigma && *o.sigma < 0)
        throw UsageError("--sigma must be non-negative");
    double sigma = 0;
    if (o.sigma) {
        sigma = *o.sigma;
    } else {
        const Params p = load_key(o.key).params;
        sigma = vnr_sigma(p.n(), p.k(), *o.vnr_db);
    }
    Input in(o.in);
    Output out(o.out);
    FrameReader reader(in.get());
    if (reader.header().kind != FrameKind::ciphertext)
        throw Error(Errc::format, "input is already an observation stream");
    FrameWriter writer(out.get(), {FrameKind::observation, reader.header().n, reader.header().digest});
    WireFrame wf;
    while (reader.next(wf)) {
        auto rng = trial_rng(o.seed, 0, wf.counter);
        for (auto& v : wf.values)
            v += sigma * standard_normal(rng);
        writer.write(wf);
    }
    out.finish();
    std::cout << "sigma: " << sigma << '\n';
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    std::string key;
    std::string range = "0:0.5:6";
    unsigned trials = 1000;
    std::uint64_t seed = 1;
    std::optional<unsigned> workers;
    std::string out = "-";
};

int run_simulate(const SimulateOpts& o)
{
    SweepSpec spec;
    as_usage([&] { spec = SweepSpec::parse_range(o.range, o.trials, o.seed); });
    if (o.workers && *o.workers == 0)
        throw UsageError("--workers must be positive");
    auto ctx = std::make_shared<const CipherContext>(load_key(o.key));
    const unsigned workers = o.workers ? *o.workers : default_workers();
    const auto points = run_sweep(ctx, spec, workers, [](const SweepPoint& pt) {
        if (!quiet) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "vnr %.3g dB: ser %.4g fer %.4g (%llu frames)", pt.vnr_db,
                          pt.ser(), pt.fer(), static_cast<unsigned long long>(pt.frames));
            std::cerr << buf << std::endl;
        }
    });
    Output out(o.out);
    out.get() << sweep_csv(points, spec);
    out.finish();
    return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOpts {
    std::string key;
    std::size_t b = 43, n0 = 6, dv = 3;
    std::optional<std::size_t> q;
    std::int64_t L = 16;
    unsigned d = 61;
    bool d_formula = false;
    bool jsonl = false;
};

int run_analyze(const AnalyzeOpts& o)
{
    SchemeParams sp;
    if (!o.key.empty()) {
        const Params p = load_key(o.key).params;
        sp.b = p.b;
        sp.n0 = p.n0;
        sp.dv = p.dv;
        sp.q = p.q;
        sp.L = p.L;
        sp.d = p.d;
    } else {
        sp.b = o.b;
        sp.n0 = o.n0;
        sp.dv = o.dv;
        sp.q = o.q.value_or(o.b);
        sp.L = o.L;
        if (!o.d_formula)
            sp.d = o.d;
    }
    SchemeReport r;
    as_usage([&] { r = scheme_report(sp); });
    if (o.jsonl) {
        std::cout << format_report_jsonl(r);
    } else {
        std::cout << format_report_text(r) << '\n' << format_report_kv(r);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Joint encryption and channel coding over QC-LDPC lattices"};
    app.require_subcommand(1);
    app.add_flag("-q,--quiet", quiet, "Suppress progress and notes on stderr");

    KeygenOpts kg;
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate a secret key");
    keygen_cmd->add_option("--b", kg.b, "Circulant size")->required();
    keygen_cmd->add_option("--n0", kg.n0, "Number of circulant blocks")->required();
    keygen_cmd->add_option("--dv", kg.dv, "Column weight (odd)")->required();
    keygen_cmd->add_option("--q", kg.q, "Permutation block size (must equal b)");
    keygen_cmd->add_option("--L", kg.L, "Constellation size per coordinate (power of two)")->capture_default_str();
    keygen_cmd->add_option("--d", kg.d, "Control-line width")->capture_default_str();
    keygen_cmd->add_option("--seed", kg.seed, "Master seed (random if omitted)");
    keygen_cmd->add_option("-o,--out", kg.out, "Key file to write")->required();

    StreamOpts enc;
    auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a byte stream into ciphertext frames");
    encrypt_cmd->add_option("-k,--key", enc.key, "Key file")->required();
    encrypt_cmd->add_option("-i,--in", enc.in, "Input file ('-' for stdin)")->capture_default_str();
    encrypt_cmd->add_option("-o,--out", enc.out, "Output file ('-' for stdout)")->capture_default_str();
    encrypt_cmd->add_option("--counter", enc.counter, "First frame counter")->capture_default_str();

    DecryptOpts dec;
    auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt ciphertext or noisy observation frames");
    decrypt_cmd->add_option("-k,--key", dec.key, "Key file")->required();
    decrypt_cmd->add_option("-i,--in", dec.in, "Input file ('-' for stdin)")->capture_default_str();
    decrypt_cmd->add_option("-o,--out", dec.out, "Output file ('-' for stdout)")->capture_default_str();
    decrypt_cmd->add_option("--sigma", dec.sigma, "Channel noise std; 0 decodes exact ciphertexts")
        ->capture_default_str();
    decrypt_cmd->add_option("--on-fail", dec.on_fail, "Per-frame failure policy")
        ->check(CLI::IsMember({"abort", "skip"}))
        ->capture_default_str();

    AwgnOpts aw;
    auto* awgn_cmd = app.add_subcommand("awgn", "Pass a ciphertext stream through an AWGN channel");
    awgn_cmd->add_option("-i,--in", aw.in, "Ciphertext file ('-' for stdin)")->capture_default_str();
    awgn_cmd->add_option("-o,--out", aw.out, "Observation file ('-' for stdout)")->capture_default_str();
    awgn_cmd->add_option("--sigma", aw.sigma, "Noise standard deviation");
    awgn_cmd->add_option("--vnr-db", aw.vnr_db, "Volume-to-noise ratio in dB (needs --key)");
    awgn_cmd->add_option("-k,--key", aw.key, "Key file, for --vnr-db");
    awgn_cmd->add_option("--seed", aw.seed, "Noise seed")->capture_default_str();

    SimulateOpts sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo SER/FER sweep over VNR");
    simulate_cmd->add_option("-k,--key", sim.key, "Key file")->required();
    simulate_cmd->add_option("--vnr-db", sim.range, "start:step:stop in dB")->capture_default_str();
    simulate_cmd->add_option("--trials", sim.trials, "Frames per point")->capture_default_str();
    simulate_cmd->add_option("--seed", sim.seed, "Sweep seed")->capture_default_str();
    simulate_cmd->add_option("--workers", sim.workers, "Worker threads (default QCLAT_WORKERS or all cores)");
    simulate_cmd->add_option("-o,--out", sim.out, "CSV output ('-' for stdout)")->capture_default_str();

    AnalyzeOpts an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Key size, rates, expansion and attack costs");
    analyze_cmd->add_option("-k,--key", an.key, "Take parameters from a key file");
    analyze_cmd->add_option("--b", an.b)->capture_default_str();
    analyze_cmd->add_option("--n0", an.n0)->capture_default_str();
    analyze_cmd->add_option("--dv", an.dv)->capture_default_str();
    analyze_cmd->add_option("--q", an.q, "Defaults to b");
    analyze_cmd->add_option("--L", an.L)->capture_default_str();
    analyze_cmd->add_option("--d", an.d, "Control-line width")->capture_default_str();
    analyze_cmd->add_flag("--d-formula", an.d_formula, "Use d = 7 ceil(log2 n) instead of --d");
    analyze_cmd->add_flag("--jsonl", an.jsonl, "Emit JSON lines only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*keygen_cmd)
            return run_keygen(kg);
        if (*encrypt_cmd)
            return run_encrypt(enc);
        if (*decrypt_cmd)
            return run_decrypt(dec);
        if (*awgn_cmd)
            return run_awgn(aw);
        if (*simulate_cmd)
            return run_simulate(sim);
        if (*analyze_cmd)
            return run_analyze(an);
    } catch (const UsageError& e) {
        std::cerr << "qclat: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qclat: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
