#include "qclat/channel.hpp"

#include "qclat/error.hpp"
#include "qclat/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace qclat {

std::vector<double> add_awgn(std::span<const std::int64_t> x, double sigma, std::mt19937_64& rng)
{
    if (!(sigma >= 0.0))
        throw Error(Errc::invalid_params, "sigma must be non-negative");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(x[i]) + (sigma == 0.0 ? 0.0 : sigma * standard_normal(rng));
    return out;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t point, std::uint64_t trial)
{
    return std::mt19937_64(derive_seed(seed, point, trial));
}

void SweepSpec::validate() const
{
    if (!(vnr_db_step > 0.0) || !std::isfinite(vnr_db_start) || !std::isfinite(vnr_db_stop) ||
        vnr_db_stop < vnr_db_start)
        throw Error(Errc::invalid_params, "sweep range needs start <= stop and step > 0");
    if (trials_per_point < 1)
        throw Error(Errc::invalid_params, "trials per point must be at least 1");
}

std::vector<double> SweepSpec::points() const
{
    validate();
    std::vector<double> out;
    const double span = (vnr_db_stop - vnr_db_start) / vnr_db_step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(vnr_db_start + static_cast<double>(i) * vnr_db_step);
    return out;
}

SweepSpec SweepSpec::parse_range(const std::string& range, unsigned trials, std::uint64_t seed)
{
    double a = 0, step = 0, b = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(range);
    if (!(in >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || !in.eof())
        throw Error(Errc::invalid_params, "VNR range must look like start:step:stop");
    SweepSpec spec{a, b, step, trials, seed};
    spec.validate();
    return spec;
}

TrialOutcome run_trial(const std::shared_ptr<const CipherContext>& ctx, std::uint64_t frame,
                       double sigma, std::mt19937_64& rng)
{
    const std::size_t n = ctx->n();
    const std::int64_t L = ctx->params().L;
    IntVec m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(L)));
        m[i] = i % 2 == 0 ? u : -1 - u;
    }
    CipherSession tx(ctx, frame);
    const Ciphertext ct = tx.encrypt_joint(m);
    const std::vector<double> r = add_awgn(ct.y, sigma, rng);
    CipherSession rx(ctx, frame);
    TrialOutcome out;
    try {
        const IntVec got = rx.decrypt_joint(r, sigma);
        for (std::size_t i = 0; i < n; ++i)
            out.symbol_errors += got[i] != m[i];
        out.frame_error = out.symbol_errors > 0;
    } catch (const Error&) {
        out.symbol_errors = n;
        out.frame_error = true;
        out.decode_failed = true;
    }
    return out;
}

std::vector<SweepPoint> run_sweep(const std::shared_ptr<const CipherContext>& ctx,
                                  const SweepSpec& spec, unsigned workers, const SweepProgress& progress)
{
    const std::vector<double> vnrs = spec.points();
    if (workers == 0)
        workers = default_workers();
    const std::uint64_t trials = spec.trials_per_point;
    std::vector<SweepPoint> out;
    for (std::size_t p = 0; p < vnrs.size(); ++p) {
        SweepPoint pt;
        pt.vnr_db = vnrs[p];
        pt.sigma = vnr_sigma(ctx->lattice(), vnrs[p]);
        std::vector<TrialOutcome> results(trials);
        std::atomic<std::uint64_t> next{0};
        auto work = [&] {
            for (std::uint64_t t = next++; t < trials; t = next++) {
                auto rng = trial_rng(spec.rng_seed, p, t);
                results[t] = run_trial(ctx, p * trials + t, pt.sigma, rng);
            }
        };
        const unsigned used = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < used; ++w)
            pool.emplace_back(work);
        work();
        for (auto& th : pool)
            th.join();
        for (const auto& r : results) {
            pt.frames += 1;
            pt.frame_errors += r.frame_error;
            pt.symbols += ctx->n();
            pt.symbol_errors += r.symbol_errors;
        }
        if (progress)
            progress(pt);
        out.push_back(pt);
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points, const SweepSpec& spec)
{
    std::string out = "vnr_db,ser,fer,trials,seed\n";
    char line[160];
    for (const auto& p : points) {
        std::snprintf(line, sizeof line, "%.6g,%.9g,%.9g,%llu,%llu\n", p.vnr_db, p.ser(), p.fer(),
                      static_cast<unsigned long long>(p.frames),
                      static_cast<unsigned long long>(spec.rng_seed));
        out += line;
    }
    return out;
}

Interval wilson_interval(double successes, double trials, double z)
{
    if (trials <= 0.0)
        return {0.0, 1.0};
    const double p = successes / trials;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / trials;
    const double centre = (p + z2 / (2.0 * trials)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

unsigned default_workers()
{
    if (const char* env = std::getenv("QCLAT_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace qclat
