#pragma once

// AWGN channel and Monte-Carlo VNR sweeps over the full cipher pipeline.

#include "qclat/cipher.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qclat {

/// x + N(0, sigma^2) noise; sigma = 0 returns x exactly.
std::vector<double> add_awgn(std::span<const std::int64_t> x, double sigma, std::mt19937_64& rng);

/// Independent generator for trial `trial` of sweep point `point`.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t point, std::uint64_t trial);

struct SweepSpec {
    double vnr_db_start = 0.0;
    double vnr_db_stop = 6.0;
    double vnr_db_step = 0.5;
    unsigned trials_per_point = 1000;
    std::uint64_t rng_seed = 1;

    /// Throws invalid_params unless step > 0, stop >= start and trials >= 1.
    void validate() const;
    /// start, start + step, ... up to stop (inclusive, with rounding slack).
    std::vector<double> points() const;
    /// Parses "start:step:stop".
    static SweepSpec parse_range(const std::string& range, unsigned trials, std::uint64_t seed);
};

struct SweepPoint {
    double vnr_db = 0.0;
    double sigma = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0; ///< a failed frame counts all n symbols

    double ser() const noexcept { return symbols ? double(symbol_errors) / double(symbols) : 0.0; }
    double fer() const noexcept { return frames ? double(frame_errors) / double(frames) : 0.0; }
};

struct TrialOutcome {
    std::size_t symbol_errors = 0;
    bool frame_error = false;
    bool decode_failed = false;
};

/// One random constellation frame through encrypt, AWGN and decrypt at
/// frame counter `frame`.
TrialOutcome run_trial(const std::shared_ptr<const CipherContext>& ctx, std::uint64_t frame,
                       double sigma, std::mt19937_64& rng);

using SweepProgress = std::function<void(const SweepPoint&)>;

/// Deterministic for a given spec regardless of the worker count. Point p,
/// trial t uses frame counter p * trials + t and trial_rng(seed, p, t).
std::vector<SweepPoint> run_sweep(const std::shared_ptr<const CipherContext>& ctx,
                                  const SweepSpec& spec, unsigned workers = 0,
                                  const SweepProgress& progress = {});

/// Header `vnr_db,ser,fer,trials,seed` and one row per point.
std::string sweep_csv(const std::vector<SweepPoint>& points, const SweepSpec& spec);

struct Interval {
    double lo;
    double hi;
};

/// Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(double successes, double trials, double z = 1.96);

/// QCLAT_WORKERS if set and positive, else the hardware concurrency.
unsigned default_workers();

} // namespace qclat
