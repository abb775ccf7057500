// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include "oracles.hpp"

#include "qclat/analysis.hpp"
#include "qclat/channel.hpp"
#include "qclat/cipher.hpp"
#include "qclat/error.hpp"
#include "qclat/nlf.hpp"
#include "qclat/poly_table.hpp"
#include "qclat/rng.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace qclat;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SchemeParams default_scheme()
{
    SchemeParams p;
    p.d = 61;
    return p;
}

Params default_params() { return Params::standard(43, 6, 3, 16, 61); }

IntVec random_message(std::size_t n, std::int64_t L, std::mt19937_64& rng)
{
    IntVec m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(L)));
        m[i] = i % 2 == 0 ? u : -1 - u;
    }
    return m;
}

// Bits carried by the secret fields of a serialized key.
std::size_t serialized_secret_bits(const std::string& text)
{
    std::size_t bits = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        for (std::string f : {"supports ", "s ", "h_seed ", "t "})
            if (line.rfind(f, 0) == 0)
                bits += std::stoul(line.substr(f.size()));
    return bits;
}

// ------------------------------------------------------------------------

Outcome key_size()
{
    const auto t0 = std::chrono::steady_clock::now();
    const SchemeReport r = scheme_report(default_scheme());
    const SecretKey key = keygen(default_params(), 1);
    const std::size_t ser = serialized_secret_bits(serialize_key(key));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = r.key.total == 214 && key.secret_bits() == 214 && ser == 214 && secs < 1.0;
    return {ok, fmt("report %zu bits, key %zu bits, serialized %zu bits, %.3f s", r.key.total,
                    key.secret_bits(), ser, secs)};
}

struct RoundTripStats {
    std::size_t joint_ok = 0, raw_ok = 0, frames = 0;
    std::size_t shaping_violations = 0, region_violations = 0, parity_violations = 0;
};

const RoundTripStats& round_trips()
{
    static const RoundTripStats stats = [] {
        RoundTripStats s;
        const auto ctx = std::make_shared<const CipherContext>(keygen(default_params(), 2024));
        const Params& p = ctx->params();
        const std::int64_t nL = static_cast<std::int64_t>(p.n()) * p.L;
        CipherSession enc(ctx), dec(ctx), raw_enc(ctx, 1u << 20), raw_dec(ctx, 1u << 20);
        std::mt19937_64 rng(99);
        s.frames = 10000;
        for (std::size_t f = 0; f < s.frames; ++f) {
            const IntVec m = random_message(p.n(), p.L, rng);
            EncryptTrace tr;
            const Ciphertext c = enc.encrypt_joint(m, &tr);
            for (std::size_t i = 0; i < p.n(); ++i) {
                if (std::llabs(tr.shaped.lambda_prime[i]) > nL - 1)
                    ++s.shaping_violations;
                if ((c.y[i] & 1) == 0)
                    ++s.parity_violations;
                const std::int64_t bound = i < p.k() ? nL + 1 : 2 * nL - 1;
                if (std::llabs(c.y[i]) > bound)
                    ++s.region_violations;
            }
            try {
                s.joint_ok += dec.decrypt_joint(c.y) == m;
            } catch (const Error&) {
            }

            IntVec big(p.n());
            for (auto& v : big)
                v = static_cast<std::int64_t>(uniform_below(rng, 2000001)) - 1000000;
            try {
                s.raw_ok += raw_dec.decrypt_raw(raw_enc.encrypt_raw(big)) == big;
            } catch (const Error&) {
            }
        }
        return s;
    }();
    return stats;
}

Outcome round_trip()
{
    const auto& s = round_trips();
    return {s.joint_ok == s.frames && s.raw_ok == s.frames,
            fmt("joint %zu/%zu, raw %zu/%zu exact", s.joint_ok, s.frames, s.raw_ok, s.frames)};
}

Outcome shaping_region()
{
    const auto& s = round_trips();
    const bool ok = s.shaping_violations == 0 && s.region_violations == 0 && s.parity_violations == 0;
    return {ok, fmt("%zu frames: %zu shaping, %zu region, %zu parity violations", s.frames,
                    s.shaping_violations, s.region_violations, s.parity_violations)};
}

// Every x in the valid box of a small lattice.
void exhaustive_box(const LatticeCtx& ctx, std::size_t& points, std::size_t& z_mismatch,
                    std::size_t& recover_mismatch)
{
    const std::size_t n = ctx.n();
    std::vector<std::int64_t> half(n);
    for (std::size_t i = 0; i < n; ++i)
        half[i] = static_cast<std::int64_t>(n) * ctx.limits()[i] / 2; // need |x_i| < half
    IntVec x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = -half[i] + 1;
    while (true) {
        ++points;
        const ShapedPoint sp = shape(ctx, x);
        const IntVec s = ctx.parity_sums(x);
        for (std::size_t i = 0; i < n; ++i) {
            if (i < ctx.k()) {
                z_mismatch += sp.z[i] != 0;
                continue;
            }
            const std::int64_t m = ctx.modulus(i);
            const auto zs = oracle::admissible_z(x[i], s[i - ctx.k()], m);
            // the closed form must pick a z of minimal |lambda'_i|
            long long best = LLONG_MAX;
            for (auto z : zs)
                best = std::min(best, std::llabs(2 * x[i] + s[i - ctx.k()] - 2 * z * m));
            const long long got = std::llabs(sp.lambda_prime[i]);
            z_mismatch += zs.empty() || got != best ||
                          std::find(zs.begin(), zs.end(), sp.z[i]) == zs.end();
        }
        try {
            recover_mismatch += mod_recover(ctx, encode(ctx, sp.x_prime)) != x;
        } catch (const Error&) {
            ++recover_mismatch;
        }
        std::size_t i = 0;
        while (i < n && x[i] == half[i] - 1) {
            x[i] = -half[i] + 1;
            ++i;
        }
        if (i == n)
            break;
        ++x[i];
    }
}

Outcome shaping_oracle()
{
    std::size_t points = 0, zm = 0, rm = 0;
    exhaustive_box(LatticeCtx(QcCode(2, {{0}, {0}}), 1), points, zm, rm);
    exhaustive_box(LatticeCtx(QcCode(2, {{0}, {0}}), 2), points, zm, rm);
    exhaustive_box(LatticeCtx(QcCode(2, {{0}, {0}}), 4), points, zm, rm);
    exhaustive_box(LatticeCtx(QcCode(2, {{0}, {0}}), IntVec{1, 2, 1, 3}), points, zm, rm);
    exhaustive_box(LatticeCtx(QcCode(3, {{1}, {0}}), 1), points, zm, rm);
    exhaustive_box(LatticeCtx(QcCode(3, {{1}, {0}}), 2), points, zm, rm);
    exhaustive_box(LatticeCtx(QcCode(4, {{0, 1, 2}, {0, 1, 3}}), 1), points, zm, rm);
    return {zm == 0 && rm == 0,
            fmt("n = 4, 6, 8 toys: %zu points, %zu z mismatches, %zu recovery mismatches", points, zm, rm)};
}

Outcome nonlinearity()
{
    std::mt19937_64 rng(5);
    std::size_t checks = 0, bad = 0, deriv_bad = 0;
    for (auto [n, d] : {std::pair{6u, 2u}, std::pair{8u, 3u}}) {
        const NlfContext ctx(companion_of({n, 0}), d);
        for (std::size_t i = 0; i < n; ++i, ++checks)
            bad += component_anf_degree(ctx, i) != d + 1;
        for (int t = 0; t < 20; ++t, ++checks) {
            BitVector mask;
            do
                mask = BitVector::from_u64(rng() & ((1u << n) - 1), n);
            while (!mask.any());
            bad += combination_anf_degree(ctx, mask) != d + 1;
        }
        // one a-direction and every h-direction: d + 1 in total
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> dirs = {j};
            for (unsigned k = 0; k < d; ++k)
                dirs.push_back(n + k);
            const auto ref = higher_derivative(ctx, dirs, BitVector(n), ControlVector(0, d));
            for (int b = 0; b < 50; ++b) {
                const auto a = BitVector::from_u64(rng() & ((1u << n) - 1), n);
                const ControlVector h(rng() & ((1u << d) - 1), d);
                deriv_bad += higher_derivative(ctx, dirs, a, h) != ref;
            }
        }
    }
    return {bad == 0 && deriv_bad == 0,
            fmt("%zu degree checks, %zu wrong; derivative base dependence in %zu of %d cases", checks, bad,
                deriv_bad, (6 + 8) * 50)};
}

Outcome companion_orders()
{
    std::size_t polys = 0, bad = 0;
    for (unsigned deg = 3; deg <= 10; ++deg)
        for (unsigned i = 0; i < primitive_poly_count(deg); ++i, ++polys) {
            const std::uint64_t want = (std::uint64_t{1} << deg) - 1;
            const oracle::Dense u = oracle::to_dense(companion_of({deg, i}).matrix());
            const oracle::Dense id = oracle::identity(deg);
            oracle::Dense acc = u;
            std::uint64_t order = 1;
            while (acc != id && order <= want) {
                acc = oracle::mul_mod2(acc, u);
                ++order;
            }
            bad += order != want;
        }
    return {bad == 0 && polys >= 8, fmt("%zu polynomials of degree 3..10, %zu with the wrong order", polys, bad)};
}

Outcome rdf_validity()
{
    std::size_t bad = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const QcCode code = rdf_search(43, 6, 3, seed);
        const BinMatrix h = code.parity_check();
        bool ok = girth_ok(code) && oracle::pairwise_column_girth_ok(code);
        for (std::size_t c = 0; c < h.cols() && ok; ++c) {
            std::size_t w = 0;
            for (std::size_t r = 0; r < h.rows(); ++r)
                w += h.get(r, c);
            ok = w == 3;
        }
        for (std::size_t r = 0; r < h.rows() && ok; ++r)
            ok = h.row_vector(r).popcount() == 18;
        ok = ok && code.block(5).dense().rank() == 43;
        bad += !ok;
    }
    const double lg = count_rdf_lower_bound_log2(43, 3, 6);
    return {bad == 0 && std::fabs(lg - 61) <= 1,
            fmt("100 searches, %zu invalid; log2 code-count bound %.4f", bad, lg)};
}

Outcome keystream_periods()
{
    std::size_t bad = 0, combos = 0;
    for (unsigned l = 1; l <= 8; ++l)
        for (unsigned qi = 0; qi < primitive_poly_count(l); ++qi)
            for (unsigned pi = 0; pi < primitive_poly_count(l); ++pi, ++combos) {
                ReseedingLfsr r({l, qi}, {l, pi}, 1);
                const auto start = std::make_tuple(r.main_state(), r.reseed_state(), r.counter());
                const std::uint64_t expect = ((1ull << l) - 1) * ((1ull << l) - 1);
                std::uint64_t steps = 0;
                do {
                    r.next_bit();
                    ++steps;
                } while (std::make_tuple(r.main_state(), r.reseed_state(), r.counter()) != start &&
                         steps <= expect);
                bad += steps != expect;
            }
    const Params p = default_params();
    ReseedingLfsr e(p.e_q, p.e_p, 0x1B5);
    double total = 0;
    for (int t = 0; t < 1000; ++t)
        total += static_cast<double>(next_error_vector(e, 258).popcount());
    const double mean = total / 1000;
    const bool weight_ok = std::fabs(mean - 129) <= 0.08 * 129;
    return {bad == 0 && weight_ok,
            fmt("%zu polynomial pairs, %zu wrong periods; mean error weight %.2f", combos, bad, mean)};
}

Outcome expansion()
{
    double lo = INFINITY, hi = 0;
    for (std::uint64_t L = 2; L <= (1u << 20); ++L) {
        const double v = message_expansion(258, 215, L).get_d();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo >= 1.0 && hi <= 5.6, fmt("L = 2..2^20: min %.4f, max %.4f", lo, hi)};
}

Outcome attack_costs()
{
    const double bf = bruteforce_cost_log2(default_scheme());
    const double df = differential_cost_log2(default_scheme());
    return {std::fabs(bf - 176) <= 1 && std::fabs(df - 129) <= 2,
            fmt("brute force 2^%.3f, differential 2^%.3f", bf, df)};
}

Outcome channel()
{
    // (a) 0..6 dB sweep, Wilson intervals on frame errors
    const auto ctx = std::make_shared<const CipherContext>(keygen(default_params(), 11));
    const auto spec = SweepSpec::parse_range("0:0.5:6", 1000, 17);
    const auto sweep = run_sweep(ctx, spec, default_workers());
    bool ordered = true;
    std::string ser_list;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        ser_list += fmt("%s%.3g", i ? " " : "", sweep[i].ser());
        if (i == 0)
            continue;
        const auto prev = wilson_interval(double(sweep[i - 1].frame_errors), double(sweep[i - 1].frames));
        const auto cur = wilson_interval(double(sweep[i].frame_errors), double(sweep[i].frames));
        ordered = ordered && cur.lo <= prev.hi;
    }
    const bool a = ordered && sweep.front().ser() > sweep.back().ser();

    // (b) shared waterfall point, 2.0 dB
    SweepSpec at2;
    at2.vnr_db_start = at2.vnr_db_stop = 2.0;
    at2.trials_per_point = 1000;
    at2.rng_seed = 23;
    const auto other = std::make_shared<const CipherContext>(keygen(Params::standard(128, 2, 7, 16, 61), 11));
    const SweepPoint p258 = run_sweep(ctx, at2, default_workers()).front();
    const SweepPoint p256 = run_sweep(other, at2, default_workers()).front();
    const auto i258 = wilson_interval(double(p258.frame_errors), double(p258.frames));
    const auto i256 = wilson_interval(double(p256.frame_errors), double(p256.frames));
    const bool b = p258.ser() < p256.ser() && i258.hi < i256.lo;

    // (c) toy lattice SPA vs exhaustive ML at 3.5 dB
    const LatticeCtx toy(oracle::toy_code(), 1);
    const auto words = oracle::codewords(toy.generator().g);
    const double sigma = vnr_sigma(toy, 3.5);
    std::mt19937_64 rng(31);
    const int trials = 2000;
    int agree = 0;
    for (int t = 0; t < trials; ++t) {
        IntVec xi(toy.n());
        for (auto& v : xi)
            v = static_cast<std::int64_t>(uniform_below(rng, 7)) - 3;
        const IntVec pt = encode(toy, xi);
        std::vector<double> r(pt.size());
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = static_cast<double>(pt[i]) + sigma * standard_normal(rng);
        const auto res = try_decode(toy, {}, r, sigma);
        agree += res && res->lambda == oracle::ml_decode(words, r);
    }
    const double agreement = double(agree) / trials;
    const bool c = agreement >= 0.99;

    return {a && b && c,
            fmt("(a) %s, SER by 0.5 dB: %s; (b) 2 dB SER (215,258) %.4f vs (128,256) %.4f %s; "
                "(c) toy SPA/ML agreement %.4f at sigma %.4f",
                a ? "ordered" : "NOT ordered", ser_list.c_str(), p258.ser(), p256.ser(),
                b ? "(separated)" : "(NOT separated)", agreement, sigma)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"key size", key_size},
        {"round trips", round_trip},
        {"shaping and region invariants", shaping_region},
        {"closed-form shaping vs exhaustive search", shaping_oracle},
        {"nonlinearity degree", nonlinearity},
        {"companion-matrix orders", companion_orders},
        {"RDF code validity", rdf_validity},
        {"keystream periods", keystream_periods},
        {"message expansion", expansion},
        {"attack-cost figures", attack_costs},
        {"channel behaviour", channel},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s  %2zu. %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
