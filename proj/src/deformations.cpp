#include "twc/deformations.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace twc {

namespace {

void require_qp(const FieldShapePtr& shape, const char* who)
{
    if (shape->e != 1 || shape->f != 1)
        throw std::invalid_argument(std::string(who) + ": base field must be Qp");
}

const std::string& single_embedding(const FieldShapePtr& shape)
{
    return shape->embeddings.front();
}

}  // namespace

ExtClassModel ExtClassModel::make(TriangModule base, Refinement w,
                                  std::vector<DeformDirection> psis)
{
    require_qp(base.shape(), "ExtClassModel");
    if (base.tag != ClassTag::CrystabellineNonCritical)
        throw std::invalid_argument("ExtClassModel: base must be crystabelline non-critical");
    const int n = base.n();
    if (w.n() != n || static_cast<int>(psis.size()) != n)
        throw std::invalid_argument("ExtClassModel: refinement/psi length mismatch");
    ExtClassModel c;
    c.base = std::move(base);
    c.w = std::move(w);
    c.psis = std::move(psis);
    return c;
}

std::vector<Rat> kappa(const ExtClassModel& c)
{
    std::vector<Rat> out;
    out.reserve(2 * c.psis.size());
    for (const auto& psi : c.psis) {
        out.push_back(psi.at_p);
        out.push_back(psi.wtd);
    }
    return out;
}

ExtClassModel baer_sum(const ExtClassModel& c1, const ExtClassModel& c2)
{
    if (!(c1.base.params == c2.base.params) || !(c1.w == c2.w))
        throw std::invalid_argument("baer_sum: base or refinement mismatch");
    ExtClassModel out = c1;
    for (size_t i = 0; i < out.psis.size(); ++i)
        out.psis[i] = out.psis[i] + c2.psis[i];
    return out;
}

ExtClassModel negate(const ExtClassModel& c)
{
    ExtClassModel out = c;
    for (auto& psi : out.psis)
        psi = -psi;
    return out;
}

Poly<DualNum> sen_poly_deform(const ExtClassModel& c)
{
    const std::string& sigma = single_embedding(c.base.shape());
    std::vector<DualNum> roots;
    for (int i = 0; i < c.n(); ++i)
        roots.emplace_back(c.base.params[i].weight(sigma), c.psis[i].wtd);
    return Poly<DualNum>::from_roots(roots);
}

ExtClassModel pullback_ext(const ExtClassModel& c, const Program& program, ProgramMode mode)
{
    ExtClassModel out = c;
    out.base = apply_program(c.base, program, mode);
    return out;  // kappa coordinates stay fixed; only the base moves
}

UniversalExt::UniversalExt(std::vector<std::vector<Rat>> basis) : basis_(std::move(basis))
{
    if (basis_.empty())
        throw std::invalid_argument("UniversalExt: empty basis");
    std::vector<std::vector<Rat>> rows = basis_;
    if (rank(rows) != static_cast<int>(basis_.size()))
        throw std::invalid_argument("UniversalExt: dependent basis");
}

std::vector<Rat> UniversalExt::pullback(const std::vector<Rat>& coeffs) const
{
    if (coeffs.size() != basis_.size())
        throw std::invalid_argument("UniversalExt::pullback: coefficient length mismatch");
    std::vector<Rat> out(basis_[0].size(), Rat(0));
    for (size_t b = 0; b < basis_.size(); ++b)
        for (size_t i = 0; i < out.size(); ++i)
            out[i] += coeffs[b] * basis_[b][i];
    return out;
}

std::optional<std::vector<Rat>> UniversalExt::coordinates(const std::vector<Rat>& raw) const
{
    return solve_columns(basis_, raw);
}

UniversalExt universal_extension(const std::vector<std::vector<Rat>>& w_vectors)
{
    return UniversalExt(w_vectors);
}

WeightVec operator+(const WeightVec& a, const WeightVec& b)
{
    if (a.v.size() != b.v.size())
        throw std::invalid_argument("WeightVec: length mismatch");
    WeightVec out = a;
    for (size_t i = 0; i < out.v.size(); ++i)
        out.v[i] += b.v[i];
    return out;
}

WeightVec operator-(const WeightVec& a, const WeightVec& b)
{
    if (a.v.size() != b.v.size())
        throw std::invalid_argument("WeightVec: length mismatch");
    WeightVec out = a;
    for (size_t i = 0; i < out.v.size(); ++i)
        out.v[i] -= b.v[i];
    return out;
}

std::pair<WeightVec, WeightVec> theta_rho(int n)
{
    if (n < 1)
        throw std::invalid_argument("theta_rho: n must be positive");
    WeightVec theta, rho;
    for (int i = 0; i < n; ++i) {
        theta.v.push_back(Rat(-i));
        rho.v.push_back(Rat(BigInt(n - 1 - 2 * i), BigInt(2)));
    }
    return {theta, rho};
}

WeightVec permute(const Refinement& w, const WeightVec& v)
{
    if (w.n() != v.n())
        throw std::invalid_argument("permute: length mismatch");
    WeightVec out = v;
    for (int i = 0; i < v.n(); ++i)
        out.v[w.w[i] - 1] = v.v[i];  // (w.v)_{w(i)} = v_i
    return out;
}

WeightVec dot_action(const Refinement& w, const WeightVec& lambda)
{
    WeightVec rho = theta_rho(lambda.n()).second;
    return permute(w, lambda + rho) - rho;
}

WeightVec bar_dot_action(const Refinement& w, const WeightVec& lambda)
{
    WeightVec rho = theta_rho(lambda.n()).second;
    return permute(w, lambda - rho) + rho;
}

Refinement longest_element(int n)
{
    std::vector<int> images(n);
    for (int i = 0; i < n; ++i)
        images[i] = n - i;
    return Refinement::of(std::move(images));
}

AdmissibilityReport translation_admissible(const WeightVec& a, const WeightVec& b)
{
    AdmissibilityReport report;
    if (a.n() != b.n()) {
        report.ok = false;
        report.reasons.push_back("length mismatch");
        return report;
    }
    auto chamber = [](const WeightVec& v) {
        std::vector<int> order(v.n());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int x, int y) { return v.v[x] > v.v[y]; });
        return order;
    };
    auto regular = [](const WeightVec& v) {
        for (int i = 0; i < v.n(); ++i)
            for (int j = i + 1; j < v.n(); ++j)
                if (v.v[i] == v.v[j])
                    return false;
        return true;
    };
    if (!regular(a)) {
        report.ok = false;
        report.reasons.push_back("first weight lies on a wall (repeated entries)");
    }
    if (!regular(b)) {
        report.ok = false;
        report.reasons.push_back("second weight lies on a wall (repeated entries)");
    }
    for (int i = 0; i < a.n(); ++i)
        if (!(b.v[i] - a.v[i]).is_integer()) {
            report.ok = false;
            report.reasons.push_back("difference is not an integer vector");
            break;
        }
    if (report.ok && chamber(a) != chamber(b)) {
        report.ok = false;
        report.reasons.push_back("weights lie in different open chambers");
    }
    return report;
}

WeightVec translation_diff(const std::vector<long long>& multiplicities)
{
    WeightVec out;
    const int n = static_cast<int>(multiplicities.size());
    out.v.resize(n);
    Rat suffix(0);
    for (int i = n - 1; i >= 0; --i) {
        suffix += Rat(multiplicities[i]);
        out.v[i] = suffix;
    }
    return out;
}

IntertwineReport intertwine_check(const TriangModule& d, const Program& program,
                                  unsigned long long seed)
{
    require_qp(d.shape(), "intertwine_check");
    if (d.tag != ClassTag::CrystabellineNonCritical)
        throw std::invalid_argument("intertwine_check: base must be crystabelline non-critical");
    const std::string& sigma = single_embedding(d.shape());
    const int n = d.n();

    IntertwineReport report;
    auto regular_desc = [&](const std::vector<Rat>& h) -> std::optional<int> {
        for (int i = 0; i + 1 < n; ++i)
            if (!(h[i] > h[i + 1]))
                return i + 1;  // 1-based gap position
        return std::nullopt;
    };

    std::vector<Rat> h = d.sigma_weights(sigma);
    report.regular_before = !regular_desc(h).has_value();
    if (!report.regular_before) {
        report.violated_gap = regular_desc(h);
        report.detail = "weights not regular before the program";
        return report;
    }

    TriangModule after = apply_program(d, program, ProgramMode::Free);
    std::vector<Rat> h_after = after.sigma_weights(sigma);
    auto gap = regular_desc(h_after);
    report.regular_after = !gap.has_value();
    if (!report.regular_after) {
        report.violated_gap = gap;
        report.detail = "program breaks weight regularity at gap "
                        + std::to_string(*gap);
        return report;
    }

    // aggregate per-index multiplicities k_1..k_n of the program
    std::vector<long long> mult(n, 0);
    for (const auto& step : program) {
        if (step.i < 1 || step.i > n)
            throw std::invalid_argument("intertwine_check: bad program index");
        mult[step.i - 1] += step.mult;
    }

    // kappa is unchanged by pullback for sampled classes over every refinement
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(-4, 4);
    report.kappa_identity = true;
    std::vector<int> base_perm(n);
    std::iota(base_perm.begin(), base_perm.end(), 1);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(base_perm);
    } while (std::next_permutation(base_perm.begin(), base_perm.end()) && perms.size() < 720);
    for (const auto& wp : perms) {
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<DeformDirection> psis(n);
            for (auto& psi : psis)
                psi = {Rat(coin(rng)), Rat(coin(rng))};
            ExtClassModel c = ExtClassModel::make(d, Refinement::of(wp), psis);
            ExtClassModel moved = pullback_ext(c, program, ProgramMode::Free);
            if (kappa(moved) != kappa(c))
                report.kappa_identity = false;
        }
    }

    // lambda' = lambda + (h' - h), and h' - h must be the reversal of the
    // translation difference vector
    auto [theta, rho] = theta_rho(n);
    WeightVec lambda{h};
    WeightVec lambda_prime{h_after};
    lambda = lambda - theta;
    lambda_prime = lambda_prime - theta;
    WeightVec diff = translation_diff(mult);
    WeightVec gain = WeightVec{h_after} - WeightVec{h};
    WeightVec reversed;
    reversed.v.assign(diff.v.rbegin(), diff.v.rend());
    report.diff_consistent = gain == reversed;

    AdmissibilityReport adm = translation_admissible(lambda + rho, lambda_prime + rho);
    report.admissible = adm.ok;
    if (!adm.ok)
        report.detail = adm.reasons.empty() ? "translation not admissible" : adm.reasons.front();

    // kernel correspondence: a sampled kappa subspace is carried identically
    report.kernel_correspondence = true;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::vector<Rat>> w_vecs;
        for (int b = 0; b < 2; ++b) {
            std::vector<Rat> v(2 * n);
            for (auto& x : v)
                x = Rat(coin(rng));
            w_vecs.push_back(std::move(v));
        }
        std::vector<std::vector<Rat>> rows = w_vecs;
        if (rank(rows) != 2)
            continue;
        UniversalExt uni = universal_extension(w_vecs);
        for (int b = 0; b < 2; ++b) {
            std::vector<Rat> coeffs(2, Rat(0));
            coeffs[b] = Rat(1);
            std::vector<Rat> pulled = uni.pullback(coeffs);
            // the translation acts as the identity on kappa coordinates
            if (pulled != w_vecs[b])
                report.kernel_correspondence = false;
            auto coords = uni.coordinates(pulled);
            if (!coords || (*coords)[b] != Rat(1))
                report.kernel_correspondence = false;
        }
    }

    report.ok = report.regular_before && report.regular_after && report.kappa_identity
                && report.diff_consistent && report.admissible
                && report.kernel_correspondence;
    return report;
}

}  // namespace twc
