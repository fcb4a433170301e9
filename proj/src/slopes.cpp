#include "twc/slopes.hpp"

#include <algorithm>
#include <numeric>

namespace twc {

namespace {

std::vector<std::vector<int>> all_perms(int n)
{
    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

}  // namespace

Rat slope_rank1(const Character& delta, const FieldShape& shape)
{
    return delta.uval() / Rat(shape.f);
}

SlopeReport etale_vgen(const TriangModule& d)
{
    if (d.tag != ClassTag::VeryGenericStronglyNonSplit)
        throw std::invalid_argument("etale_vgen: wrong class tag "
                                    + to_string(d.tag));
    SlopeReport report;
    Rat acc(0);
    const int n = d.n();
    for (int m = 1; m <= n; ++m) {
        acc += d.params[m - 1].uval();
        report.partials.push_back(acc);
        if (m < n && acc < Rat(0))
            report.violations.push_back(m);
    }
    report.total = acc;
    if (!acc.is_zero())
        report.violations.push_back(n);
    report.verdict = report.violations.empty();
    return report;
}

TwistFeasibility etale_pullback_vgen(const TriangModule& d, int j, const std::string& sigma)
{
    if (j < 1 || j > d.n())
        throw std::invalid_argument("etale_pullback_vgen: index out of range");
    if (!d.shape()->has_embedding(sigma))
        throw std::invalid_argument("etale_pullback_vgen: unknown embedding " + sigma);
    SlopeReport base = etale_vgen(d);
    if (!base.verdict)
        throw gate_error("etale", "etale_pullback_vgen: module is not etale");
    const int n = d.n();
    const Rat e(d.shape()->e);
    TwistFeasibility result;
    result.chi_uval = -Rat(j) / (Rat(n) * e);
    Rat acc(0);
    for (int m = 1; m < n; ++m) {
        acc += d.params[m - 1].uval();
        Rat lhs = acc;
        if (m > n - j)
            lhs += Rat(m - (n - j)) / e;
        if (lhs < Rat(m) * Rat(j) / (Rat(n) * e))
            result.violations.push_back(m);
    }
    result.feasible = result.violations.empty();
    return result;
}

SlopeReport etale_crys(const CrysModule& m)
{
    const int n = m.n();
    const Rat e(m.shape()->e);
    std::vector<Rat> alpha_vp;
    alpha_vp.reserve(n);
    for (const auto& phi : m.phis)
        alpha_vp.push_back(phi.uval());
    std::sort(alpha_vp.begin(), alpha_vp.end());

    SlopeReport report;
    Rat acc(0), weight_acc(0);
    for (int jj = 1; jj <= n; ++jj) {
        acc += alpha_vp[jj - 1];
        for (const auto& emb : m.shape()->embeddings)
            weight_acc += Rat(m.weights.at(emb)[jj - 1]);
        report.partials.push_back(acc);
        Rat bound = -weight_acc / e;
        if (jj < n ? acc < bound : acc != bound)
            report.violations.push_back(jj);
    }
    report.total = acc;
    report.verdict = report.violations.empty();
    return report;
}

EtaleOracleReport brute_force_etale(const CrysModule& m)
{
    const int n = m.n();
    if (n > 6)
        throw std::invalid_argument("brute_force_etale: n too large");
    const Rat e(m.shape()->e);
    std::vector<Rat> alpha_vp;
    for (const auto& phi : m.phis)
        alpha_vp.push_back(phi.uval());
    std::vector<Rat> weight_term(n, Rat(0));  // sum_sigma h_{i,sigma} / e
    for (int i = 0; i < n; ++i) {
        for (const auto& emb : m.shape()->embeddings)
            weight_term[i] += Rat(m.weights.at(emb)[i]);
        weight_term[i] /= e;
    }

    EtaleOracleReport out;
    bool total_zero = false;
    bool negative_found = false;
    for (const auto& w : all_perms(n)) {
        Rat deg(0);
        for (int i = 1; i <= n; ++i) {
            deg += alpha_vp[w[i - 1] - 1] + weight_term[i - 1];
            if (i == n)
                total_zero = deg.is_zero();
            else if (deg < Rat(0) && !negative_found) {
                negative_found = true;
                out.negative_witness = std::make_pair(w, i);
            }
        }
    }
    bool oracle_verdict = total_zero && !negative_found;
    out.report = etale_crys(m);
    out.agrees = oracle_verdict == out.report.verdict;
    return out;
}

namespace {

Rat degree_added(const Program& program, int e)
{
    Rat added(0);
    for (const auto& step : program)
        added += Rat(step.i) * Rat(step.mult) / Rat(e);
    return added;
}

}  // namespace

std::optional<Rat> twist_to_etale(const TriangModule& d, const Program& program)
{
    SlopeReport base = etale_vgen(d);
    if (!base.verdict)
        throw gate_error("etale", "twist_to_etale: module is not etale");
    const int n = d.n();
    const int e = d.shape()->e;
    Rat chi = -degree_added(program, e) / Rat(n);

    // uvals after the program: each (i, sigma, k) step adds k/e to the last i
    std::vector<Rat> uvals;
    for (const auto& p : d.params)
        uvals.push_back(p.uval());
    for (const auto& step : program)
        for (int t = n - step.i; t < n; ++t)
            uvals[t] += Rat(step.mult) / Rat(e);

    Rat acc(0);
    for (int m = 1; m < n; ++m) {
        acc += uvals[m - 1];
        if (acc + Rat(m) * chi < Rat(0))
            return std::nullopt;
    }
    return chi;
}

std::optional<Rat> twist_to_etale(const CrysModule& m, const Program& program)
{
    SlopeReport base = etale_crys(m);
    if (!base.verdict)
        throw gate_error("etale", "twist_to_etale: module is not etale");
    const int n = m.n();
    const int e = m.shape()->e;
    Rat chi = -degree_added(program, e) / Rat(n);

    std::map<std::string, std::vector<Rat>> new_weights;
    for (const auto& emb : m.shape()->embeddings) {
        std::vector<Rat> h;
        for (long long v : m.weights.at(emb))
            h.push_back(Rat(v));
        new_weights[emb] = std::move(h);
    }
    for (const auto& step : program)
        for (int t = n - step.i; t < n; ++t)
            new_weights[step.sigma][t] += Rat(step.mult);
    // the weight list of the modified module is the sorted multiset
    for (auto& [emb, h] : new_weights)
        std::sort(h.begin(), h.end(), [](const Rat& a, const Rat& b) { return b < a; });

    std::vector<Rat> alpha_vp;
    for (const auto& phi : m.phis)
        alpha_vp.push_back(phi.uval() + chi);
    std::sort(alpha_vp.begin(), alpha_vp.end());

    Rat acc(0), weight_acc(0);
    for (int jj = 1; jj <= n; ++jj) {
        acc += alpha_vp[jj - 1];
        for (const auto& emb : m.shape()->embeddings)
            weight_acc += new_weights[emb][jj - 1];
        Rat bound = -weight_acc / Rat(e);
        if (jj < n ? acc < bound : acc != bound)
            return std::nullopt;
    }
    return chi;
}

}  // namespace twc
