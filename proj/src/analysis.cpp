#include "qclat/analysis.hpp"

#include "qclat/error.hpp"
#include "qclat/keystream.hpp"
#include "qclat/rdfcode.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

namespace qclat {

namespace {

unsigned ceil_log2_u(std::uint64_t x) { return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1)); }

// log2(2^a + 2^b + ...) without overflow.
double log2_sum(const std::vector<double>& exps)
{
    const double top = *std::max_element(exps.begin(), exps.end());
    double acc = 0.0;
    for (double e : exps)
        acc += std::exp2(e - top);
    return top + std::log2(acc);
}

void check(const SchemeParams& p)
{
    if (p.b < 1 || p.n0 < 2 || p.dv < 1 || p.q < 1 || p.L < 2 || p.n() % p.q != 0)
        throw Error(Errc::invalid_params, "scheme parameters out of range");
}

} // namespace

unsigned SchemeParams::l1() const noexcept { return ceil_log2_u(n()); }
unsigned SchemeParams::l2() const noexcept { return d ? *d : 7 * l1(); }
unsigned SchemeParams::gamma() const noexcept { return ceil_log2_u(q); }

KeySize key_size_bits(const SchemeParams& p)
{
    check(p);
    KeySize ks;
    ks.l1 = p.l1();
    ks.l2 = p.l2();
    ks.l3 = p.dv * ceil_log2_u(p.b) * p.n0;
    ks.l4 = p.v() * p.gamma();
    ks.total = ks.l1 + ks.l2 + ks.l3 + ks.l4;
    ks.d_override = p.d.has_value() && *p.d != 7 * p.l1();
    return ks;
}

mpq_class message_expansion(std::uint64_t n, std::uint64_t k, std::uint64_t L)
{
    if (L < 2 || k > n || n == 0)
        throw Error(Errc::invalid_params, "message expansion needs L >= 2 and 0 <= k <= n");
    const unsigned parity_bits = ceil_log2_u(4 * n * L - 1);
    const unsigned sys_bits = ceil_log2_u(2 * n * L + 3);
    const unsigned plain_bits = ceil_log2_u(2 * L);
    mpz_class num = mpz_class(static_cast<unsigned long>(n - k)) * parity_bits +
                    mpz_class(static_cast<unsigned long>(k)) * sys_bits;
    mpq_class r(num, mpz_class(static_cast<unsigned long>(n)) * plain_bits);
    r.canonicalize();
    return r;
}

CostReport bruteforce_cost(const SchemeParams& p)
{
    check(p);
    CostReport r;
    const double rdf = count_rdf_lower_bound_log2(p.b, p.dv, p.n0);
    const double period = 2.0 * std::log2(std::exp2(static_cast<double>(p.l1())) - 1.0);
    r.terms = {
        {"rdf_codes", rdf},
        {"error_stream_period", period},
        {"control_line", static_cast<double>(p.l2())},
        {"permutation_seeds", static_cast<double>(p.v() * p.gamma())},
    };
    for (const auto& t : r.terms)
        r.total_log2 += t.log2;
    return r;
}

double bruteforce_cost_log2(const SchemeParams& p) { return bruteforce_cost(p).total_log2; }

CostReport differential_cost(const SchemeParams& p, PermutationCount np)
{
    check(p);
    const double k = static_cast<double>(p.k());
    const double d = static_cast<double>(p.l2());
    const double lk = std::log2(k);
    const double np_log2 = np == PermutationCount::key_space
                               ? static_cast<double>(p.v() * p.gamma())
                               : std::log2(std::max(1.0, std::exp2(static_cast<double>(p.gamma())) - 1.0));
    CostReport r;
    r.terms = {
        {"first_stage", lk + 2.0 * d},
        {"recovery_stage", static_cast<double>(p.l1() + p.l2() + 2) +
                               std::log2(2.0 * static_cast<double>(p.v()) * double(p.q) * double(p.q))},
        {"permutation_rounds", np_log2 + lk + d + 1.0},
    };
    std::vector<double> exps;
    for (const auto& t : r.terms)
        exps.push_back(t.log2);
    r.total_log2 = log2_sum(exps);
    return r;
}

double differential_cost_log2(const SchemeParams& p, PermutationCount np)
{
    return differential_cost(p, np).total_log2;
}

SchemeReport scheme_report(const SchemeParams& p)
{
    check(p);
    SchemeReport r;
    r.params = p;
    r.n = p.n();
    r.k = p.k();
    r.key = key_size_bits(p);
    r.rate_constellation = std::log2(2.0 * static_cast<double>(p.L));
    r.rate_packed = std::log2(static_cast<double>(p.L));
    r.expansion = message_expansion(p.n(), p.k(), static_cast<std::uint64_t>(p.L));
    r.bruteforce = bruteforce_cost(p);
    r.differential = differential_cost(p, PermutationCount::key_space);
    r.differential_lfsr_np = differential_cost(p, PermutationCount::lfsr_period);
    r.rdf_count_log2 = count_rdf_lower_bound_log2(p.b, p.dv, p.n0);
    return r;
}

namespace {

std::string fmt(double v, int prec = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

struct Row {
    std::string key;
    std::string value;
    std::string label;
};

std::vector<Row> rows(const SchemeReport& r)
{
    const auto& p = r.params;
    std::vector<Row> out = {
        {"b", std::to_string(p.b), "circulant size b"},
        {"n0", std::to_string(p.n0), "circulant blocks n0"},
        {"dv", std::to_string(p.dv), "column weight dv"},
        {"q", std::to_string(p.q), "permutation block q"},
        {"v", std::to_string(p.v()), "permutation blocks v"},
        {"L", std::to_string(p.L), "shaping limit L"},
        {"d", std::to_string(p.l2()), "control line d"},
        {"n", std::to_string(r.n), "lattice dimension n"},
        {"k", std::to_string(r.k), "code dimension k"},
        {"key_bits", std::to_string(r.key.total), "key size (bits)"},
        {"key_l1", std::to_string(r.key.l1), "  error-stream seed"},
        {"key_l2", std::to_string(r.key.l2), "  control-line seed"},
        {"key_l3", std::to_string(r.key.l3), "  circulant supports"},
        {"key_l4", std::to_string(r.key.l4), "  permutation seeds"},
        {"key_d_override", r.key.d_override ? "1" : "0", "  d overrides 7*ceil(log2 n)"},
        {"rate_constellation", fmt(r.rate_constellation), "rate log2(2L) (bits/coord)"},
        {"rate_packed", fmt(r.rate_packed), "packed rate log2(L) (bits/coord)"},
        {"expansion", r.expansion.get_str(), "message expansion (exact)"},
        {"expansion_value", fmt(r.expansion.get_d()), "message expansion"},
        {"rdf_count_log2", fmt(r.rdf_count_log2), "log2 RDF code count bound"},
        {"bruteforce_log2", fmt(r.bruteforce.total_log2), "brute-force cost (log2)"},
    };
    for (const auto& t : r.bruteforce.terms)
        out.push_back({"bruteforce_" + t.label + "_log2", fmt(t.log2), "  " + t.label});
    out.push_back({"differential_log2", fmt(r.differential.total_log2), "differential cost (log2), N_p=(2^g)^v"});
    for (const auto& t : r.differential.terms)
        out.push_back({"differential_" + t.label + "_log2", fmt(t.log2), "  " + t.label});
    out.push_back({"differential_lfsr_np_log2", fmt(r.differential_lfsr_np.total_log2),
                   "differential cost (log2), N_p=2^g-1"});
    return out;
}

} // namespace

std::string format_report_text(const SchemeReport& r)
{
    std::string out;
    std::size_t width = 0;
    const auto rs = rows(r);
    for (const auto& row : rs)
        width = std::max(width, row.label.size());
    for (const auto& row : rs)
        out += row.label + std::string(width + 2 - row.label.size(), ' ') + row.value + "\n";
    return out;
}

std::string format_report_kv(const SchemeReport& r)
{
    std::string out;
    for (const auto& row : rows(r))
        out += row.key + "=" + row.value + "\n";
    return out;
}

std::string format_report_jsonl(const SchemeReport& r)
{
    nlohmann::ordered_json j;
    const auto& p = r.params;
    j["b"] = p.b;
    j["n0"] = p.n0;
    j["dv"] = p.dv;
    j["q"] = p.q;
    j["v"] = p.v();
    j["L"] = p.L;
    j["d"] = p.l2();
    j["n"] = r.n;
    j["k"] = r.k;
    j["key_bits"] = r.key.total;
    j["key_terms"] = {{"l1", r.key.l1}, {"l2", r.key.l2}, {"l3", r.key.l3}, {"l4", r.key.l4}};
    j["key_d_override"] = r.key.d_override;
    j["rate_constellation"] = r.rate_constellation;
    j["rate_packed"] = r.rate_packed;
    j["expansion"] = r.expansion.get_str();
    j["expansion_value"] = r.expansion.get_d();
    j["rdf_count_log2"] = r.rdf_count_log2;
    auto cost = [](const CostReport& c) {
        nlohmann::ordered_json o;
        o["total_log2"] = c.total_log2;
        for (const auto& t : c.terms)
            o[t.label + "_log2"] = t.log2;
        return o;
    };
    j["bruteforce"] = cost(r.bruteforce);
    j["differential"] = cost(r.differential);
    j["differential_lfsr_np"] = cost(r.differential_lfsr_np);
    return j.dump() + "\n";
}

} // namespace qclat
