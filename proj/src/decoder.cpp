#include "qclat/decoder.hpp"

#include "qclat/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qclat {

void DecoderConfig::validate() const
{
    if (max_iterations < 1 || coset_window < 1 || !(llr_clip > 0.0))
        throw Error(Errc::invalid_params, "decoder needs I >= 1, T >= 1 and a positive clip");
}

namespace {

double round_half_away(double v) { return std::round(v); }

// log sum_{z in c + [-T, T]} exp(-(r - offset - 4z)^2 / (2 sigma^2))
double coset_log_mass(double r, double offset, double sigma, unsigned window)
{
    const double centre = round_half_away((r - offset) / 4.0);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    const long t = static_cast<long>(window);
    double peak = -std::numeric_limits<double>::infinity();
    for (long z = -t; z <= t; ++z) {
        const double dist = r - offset - 4.0 * (centre + static_cast<double>(z));
        peak = std::max(peak, -dist * dist * inv);
    }
    double sum = 0.0;
    for (long z = -t; z <= t; ++z) {
        const double dist = r - offset - 4.0 * (centre + static_cast<double>(z));
        sum += std::exp(-dist * dist * inv - peak);
    }
    return peak + std::log(sum);
}

} // namespace

double channel_llr(double r, double sigma, unsigned window, double clip)
{
    if (!(sigma > 0.0))
        throw Error(Errc::invalid_params, "channel LLR needs sigma > 0");
    const double llr = coset_log_mass(r, 1.0, sigma, window) - coset_log_mass(r, -1.0, sigma, window);
    return std::clamp(llr, -clip, clip);
}

std::optional<DecodeResult> try_decode(const LatticeCtx& ctx, const DecoderConfig& cfg,
                                       std::span<const double> r, double sigma)
{
    cfg.validate();
    const QcCode& code = ctx.code();
    const std::size_t n = code.n();
    const std::size_t m = code.b();
    const std::size_t dc = code.dc();
    if (r.size() != n)
        throw Error(Errc::size_mismatch, "observation length");
    if (!(sigma > 0.0))
        throw Error(Errc::invalid_params, "decoder needs sigma > 0");

    // Edge e = check * dc + slot. Internal messages are log P(0)/P(1),
    // where bit 1 is the +1 coset.
    std::vector<std::size_t> edge_var(m * dc);
    std::vector<std::vector<std::size_t>> var_edges(n);
    for (std::size_t c = 0; c < m; ++c) {
        const auto nbrs = code.check_neighbors(c);
        for (std::size_t s = 0; s < dc; ++s) {
            edge_var[c * dc + s] = nbrs[s];
            var_edges[nbrs[s]].push_back(c * dc + s);
        }
    }
    std::vector<double> prior(n);
    for (std::size_t i = 0; i < n; ++i)
        prior[i] = -channel_llr(r[i], sigma, cfg.coset_window, cfg.llr_clip);

    std::vector<double> c2v(m * dc, 0.0);
    std::vector<double> v2c(m * dc, 0.0);
    std::vector<double> post = prior;
    BitVector hard(n);
    std::vector<double> tanhs(dc), fwd(dc + 1), bwd(dc + 1);

    auto finish = [&](unsigned iters) {
        DecodeResult res;
        res.iterations = iters;
        res.lambda.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double c = hard.get(i) ? 1.0 : -1.0;
            res.lambda[i] = static_cast<std::int64_t>(c + 4.0 * round_half_away((r[i] - c) / 4.0));
        }
        return res;
    };
    auto decide = [&] {
        for (std::size_t i = 0; i < n; ++i)
            hard.set(i, post[i] < 0.0);
        return code.syndrome_zero(hard);
    };

    if (decide())
        return finish(0);
    const double limit = 1.0 - 1e-15;
    for (unsigned it = 1; it <= cfg.max_iterations; ++it) {
        for (std::size_t e = 0; e < v2c.size(); ++e)
            v2c[e] = post[edge_var[e]] - c2v[e];
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t base = c * dc;
            for (std::size_t s = 0; s < dc; ++s)
                tanhs[s] = std::tanh(0.5 * v2c[base + s]);
            fwd[0] = 1.0;
            for (std::size_t s = 0; s < dc; ++s)
                fwd[s + 1] = fwd[s] * tanhs[s];
            bwd[dc] = 1.0;
            for (std::size_t s = dc; s-- > 0;)
                bwd[s] = bwd[s + 1] * tanhs[s];
            for (std::size_t s = 0; s < dc; ++s) {
                const double prod = std::clamp(fwd[s] * bwd[s + 1], -limit, limit);
                c2v[base + s] = std::clamp(2.0 * std::atanh(prod), -cfg.llr_clip, cfg.llr_clip);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = prior[i];
            for (auto e : var_edges[i])
                acc += c2v[e];
            post[i] = acc;
        }
        if (decide())
            return finish(it);
    }
    return std::nullopt;
}

IntVec decode(const LatticeCtx& ctx, const DecoderConfig& cfg, std::span<const double> r,
              double sigma)
{
    auto res = try_decode(ctx, cfg, r, sigma);
    if (!res)
        throw Error(Errc::decode_failure, "syndrome nonzero after the iteration budget");
    return std::move(res->lambda);
}

} // namespace qclat
