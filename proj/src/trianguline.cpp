#include "twc/trianguline.hpp"

#include <algorithm>
#include <numeric>

namespace twc {

namespace {

/// Canonical decomposition delta = x^{h} * phi with h the integer weight
/// vector and phi the weight-0 leftover. Requires integer weights.
struct CrysDecomp {
    std::map<std::string, long long> h;
    Character phi;
};

CrysDecomp decompose_crys(const Character& delta)
{
    const auto& shape = delta.shape();
    CrysDecomp d{{}, delta};
    for (const auto& emb : shape->embeddings) {
        Rat w = delta.weight(emb);
        if (!w.is_integer())
            throw std::invalid_argument("crystabelline parameter has non-integer weight "
                                        + w.to_string());
        long long h = w.as_int64();
        d.h[emb] = h;
        if (h != 0)
            d.phi = d.phi / Character::x(shape, emb, 1).pow(h);
    }
    return d;
}

bool ratio_is_generic(const Character& a, const Character& b)
{
    Character r = a / b;
    if (r.is_trivial())
        return false;
    FieldShapePtr shape = a.shape();
    if (r == Character::abs_k(shape) || r == Character::abs_k(shape).inverse())
        return false;
    return true;
}

void validate_crys_tail(const std::vector<Character>& params, size_t from, const char* what)
{
    std::vector<CrysDecomp> dec;
    for (size_t i = from; i < params.size(); ++i)
        dec.push_back(decompose_crys(params[i]));
    for (size_t a = 0; a < dec.size(); ++a) {
        if (!dec[a].phi.is_smooth())
            throw std::invalid_argument(std::string(what)
                                        + ": weight-0 part of a parameter is not smooth");
        for (size_t b = a + 1; b < dec.size(); ++b) {
            if (!ratio_is_generic(dec[a].phi, dec[b].phi))
                throw std::invalid_argument(std::string(what)
                                            + ": smooth parts fail genericity");
        }
    }
    // regular weights: strictly decreasing per embedding
    const auto& shape = params[from].shape();
    for (const auto& emb : shape->embeddings) {
        for (size_t i = from; i + 1 < params.size(); ++i) {
            if (!(params[i].weight(emb) > params[i + 1].weight(emb)))
                throw std::invalid_argument(std::string(what)
                                            + ": weights not strictly decreasing at " + emb);
        }
    }
}

std::vector<std::vector<int>> all_permutations(int n)
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

std::string to_string(ClassTag tag)
{
    switch (tag) {
    case ClassTag::VeryGenericStronglyNonSplit: return "very_generic_strongly_non_split";
    case ClassTag::CrystabellineGeneric: return "crystabelline_generic";
    case ClassTag::CrystabellineNonCritical: return "crystabelline_non_critical";
    case ClassTag::Mixed: return "mixed";
    case ClassTag::Plain: return "plain";
    }
    return "plain";
}

TriangModule TriangModule::make(std::vector<Character> params, std::vector<bool> step_nonsplit,
                                std::vector<bool> graded_nonsplit, ClassTag tag, int mixed_m)
{
    if (params.empty())
        throw std::invalid_argument("TriangModule: empty parameter sequence");
    const size_t n = params.size();
    for (size_t i = 1; i < n; ++i)
        if (!(*params[i].shape() == *params[0].shape()))
            throw std::invalid_argument("TriangModule: mismatched field shapes");
    if (step_nonsplit.size() != n - 1 || graded_nonsplit.size() != n - 1)
        throw std::invalid_argument("TriangModule: flag vectors must have length n-1");
    for (size_t t = 0; t + 1 < n; ++t)
        if (graded_nonsplit[t] && !step_nonsplit[t])
            throw std::invalid_argument(
                "TriangModule: graded_nonsplit implies step_nonsplit at step "
                + std::to_string(t + 2));

    auto require_all_graded = [&](const char* what) {
        for (size_t t = 0; t + 1 < n; ++t)
            if (!graded_nonsplit[t])
                throw std::invalid_argument(std::string(what) + " requires all graded_nonsplit");
    };

    switch (tag) {
    case ClassTag::VeryGenericStronglyNonSplit: {
        require_all_graded("very generic strongly non-split");
        RegularityFlags flags = tuple_regularity(params);
        if (!flags.in_Tcirc)
            throw std::invalid_argument(
                "very generic strongly non-split requires parameters in T^n_circ");
        break;
    }
    case ClassTag::CrystabellineGeneric:
        validate_crys_tail(params, 0, "crystabelline generic");
        break;
    case ClassTag::CrystabellineNonCritical:
        validate_crys_tail(params, 0, "crystabelline non-critical");
        break;
    case ClassTag::Mixed: {
        if (mixed_m < 1 || mixed_m >= static_cast<int>(n))
            throw std::invalid_argument("Mixed(m) requires 1 <= m <= n-1");
        require_all_graded("mixed");
        const auto& shape = params[0].shape();
        for (int i = 0; i < mixed_m; ++i)
            for (const auto& emb : shape->embeddings) {
                if (params[i].weight(emb).is_integer())
                    throw std::invalid_argument("mixed head weights must be non-integers");
                for (int j = 0; j < i; ++j) {
                    Rat diff = params[i].weight(emb) - params[j].weight(emb);
                    if (diff.is_integer())
                        throw std::invalid_argument(
                            "mixed head weight differences must be non-integers");
                }
            }
        validate_crys_tail(params, static_cast<size_t>(mixed_m), "mixed tail");
        break;
    }
    case ClassTag::Plain: break;
    }

    TriangModule d;
    d.params = std::move(params);
    d.step_nonsplit = std::move(step_nonsplit);
    d.graded_nonsplit = std::move(graded_nonsplit);
    d.tag = tag;
    d.mixed_m = tag == ClassTag::Mixed ? mixed_m : 0;
    return d;
}

TriangModule pullback_p(const TriangModule& d, int i, const std::string& sigma, long long k)
{
    if (i < 1 || i > d.n())
        throw std::invalid_argument("pullback_p: index i out of range");
    TriangModule out = d;
    if (k == 0)
        return out;
    Character twist = Character::x(d.shape(), sigma, k);
    for (int t = d.n() - i; t < d.n(); ++t)
        out.params[t] = out.params[t] * twist;
    return out;
}

TriangModule pushout_iota(const TriangModule& d, int i, const std::string& sigma, long long k)
{
    if (i < 1 || i > d.n())
        throw std::invalid_argument("pushout_iota: index i out of range");
    TriangModule out = d;
    if (k == 0)
        return out;
    Character twist = Character::x(d.shape(), sigma, -k);
    for (int t = 0; t < d.n() - i; ++t)
        out.params[t] = out.params[t] * twist;
    return out;
}

GateReport invertibility_gate(const TriangModule& d, int i,
                              const std::map<std::string, long long>& k)
{
    if (i < 1 || i > d.n())
        throw std::invalid_argument("invertibility_gate: index i out of range");
    GateReport report;
    for (const auto& [sigma, k_sigma] : k) {
        if (k_sigma <= 0)
            continue;
        for (int j = 1; j <= d.n() - i; ++j) {
            for (int l = d.n() - i + 1; l <= d.n(); ++l) {
                Rat diff = d.params[j - 1].weight(sigma) - d.params[l - 1].weight(sigma);
                if (diff.is_integer() && diff >= Rat(1) && diff <= Rat(k_sigma)) {
                    report.ok = false;
                    report.violations.push_back({j, l, sigma, diff});
                }
            }
        }
    }
    return report;
}

WallReport wall_member(const std::vector<Rat>& sigma_weights, int i, const WallInterval& window)
{
    const int n = static_cast<int>(sigma_weights.size());
    if (i < 1 || i > n)
        throw std::invalid_argument("wall_member: index i out of range");
    WallReport report;
    for (int j = 1; j <= n - i; ++j)
        for (int l = n - i + 1; l <= n; ++l)
            for (long long h = window.a; h <= window.b; ++h)
                if (sigma_weights[j - 1] == sigma_weights[l - 1] + Rat(h)) {
                    report.member = false;
                    report.hits.push_back({j, l, h});
                }
    return report;
}

WallReport wall_member(const TriangModule& d, const std::string& sigma, int i,
                       const WallInterval& window)
{
    return wall_member(d.sigma_weights(sigma), i, window);
}

ProgramWallReport wall_member_program(
    const std::map<std::string, std::vector<Rat>>& weights_per_sigma,
    const std::set<std::string>& s_set, const std::map<std::string, std::vector<int>>& i_sets,
    const std::map<std::string, std::vector<long long>>& multiplicities, bool negative)
{
    ProgramWallReport report;
    for (const auto& sigma : s_set) {
        const auto wit = weights_per_sigma.find(sigma);
        const auto iit = i_sets.find(sigma);
        const auto kit = multiplicities.find(sigma);
        if (wit == weights_per_sigma.end() || iit == i_sets.end() || kit == multiplicities.end())
            throw std::invalid_argument("wall_member_program: missing data for embedding "
                                        + sigma);
        const std::vector<Rat>& h = wit->second;
        const int n = static_cast<int>(h.size());
        const std::vector<int>& i_cut = iit->second;
        const std::vector<long long>& mult = kit->second;
        if (mult.size() != i_cut.size())
            throw std::invalid_argument("wall_member_program: multiplicities misaligned");
        const int d = static_cast<int>(i_cut.size());
        for (int t = 0; t < d; ++t) {
            if (i_cut[t] < 1 || i_cut[t] > n || (t > 0 && i_cut[t] <= i_cut[t - 1]))
                throw std::invalid_argument("wall_member_program: I_sigma must be a sorted "
                                            "subset of 1..n");
            if (mult[t] < 0)
                throw std::invalid_argument("wall_member_program: multiplicities must be "
                                            "nonnegative (use the sign flag)");
        }
        auto cut = [&](int m) {  // i_0 = 0, i_{d+1} = n
            if (m <= 0)
                return 0;
            if (m > d)
                return n;
            return i_cut[m - 1];
        };
        for (int m = 0; m <= d; ++m) {
            for (int j = n + 1 - cut(m + 1); j <= n - cut(m); ++j) {
                for (int mp = 0; mp < m; ++mp) {
                    long long bound = 0;
                    for (int r = mp + 1; r <= m; ++r)
                        bound += mult[r - 1];
                    for (int kk = n + 1 - cut(mp + 1); kk <= n - cut(mp); ++kk) {
                        for (long long a = 0; a <= bound; ++a) {
                            Rat shifted = h[kk - 1] + Rat(negative ? -a : a);
                            if (h[j - 1] == shifted) {
                                report.member = false;
                                report.hits.push_back({sigma, j, kk, negative ? -a : a});
                            }
                        }
                    }
                }
            }
        }
    }
    return report;
}

std::map<std::string, std::map<int, long long>> program_multiplicities(const Program& program)
{
    std::map<std::string, std::map<int, long long>> agg;
    for (const auto& step : program)
        agg[step.sigma][step.i] += step.mult;
    return agg;
}

TriangModule apply_program(const TriangModule& d, const Program& program, ProgramMode mode)
{
    if (mode == ProgramMode::Substack && !program.empty()) {
        auto agg = program_multiplicities(program);
        bool any_pos = false, any_neg = false;
        for (const auto& [sigma, per_i] : agg)
            for (const auto& [i, m] : per_i) {
                any_pos |= m > 0;
                any_neg |= m < 0;
            }
        if (any_pos && any_neg)
            throw std::invalid_argument("apply_program: mixed-sign program in substack mode");
        std::set<std::string> s_set;
        std::map<std::string, std::vector<int>> i_sets;
        std::map<std::string, std::vector<long long>> mults;
        std::map<std::string, std::vector<Rat>> weights;
        for (const auto& [sigma, per_i] : agg) {
            for (const auto& [i, m] : per_i) {
                if (m == 0)
                    continue;
                s_set.insert(sigma);
                i_sets[sigma].push_back(i);
                mults[sigma].push_back(m < 0 ? -m : m);
            }
            if (s_set.count(sigma))
                weights[sigma] = d.sigma_weights(sigma);
        }
        auto report = wall_member_program(weights, s_set, i_sets, mults, any_neg);
        if (!report.member) {
            const auto& hit = report.hits.front();
            throw gate_error("wall",
                             "apply_program: wall hit at sigma=" + hit.sigma + " (j="
                                 + std::to_string(hit.j) + ", k=" + std::to_string(hit.k)
                                 + ", shift=" + std::to_string(hit.a) + ")");
        }
    }
    TriangModule cur = d;
    int step_no = 0;
    for (const auto& step : program) {
        ++step_no;
        if (mode == ProgramMode::Strict && step.mult != 0) {
            long long k = step.mult < 0 ? -step.mult : step.mult;
            const TriangModule& gated =
                step.mult > 0 ? cur : pullback_p(cur, step.i, step.sigma, step.mult);
            GateReport gate = invertibility_gate(gated, step.i, {{step.sigma, k}});
            if (!gate.ok) {
                const auto& v = gate.violations.front();
                throw gate_error("invertibility",
                                 "apply_program: step " + std::to_string(step_no)
                                     + " fails the weight gate (j=" + std::to_string(v.j)
                                     + ", l=" + std::to_string(v.l) + ", sigma=" + v.sigma
                                     + ", diff=" + v.weight_difference.to_string() + ")");
            }
        }
        cur = pullback_p(cur, step.i, step.sigma, step.mult);
    }
    return cur;
}

std::vector<Triangulation> enumerate_triangulations(const TriangModule& d)
{
    const int n = d.n();
    if (d.tag == ClassTag::Plain)
        throw gate_error("classification",
                         "enumerate_triangulations: no classification applies to a plain module");
    if (d.tag == ClassTag::VeryGenericStronglyNonSplit) {
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 1);
        return {Triangulation{id, d.params}};
    }
    if (n > 8)
        throw std::invalid_argument("enumerate_triangulations: n too large");

    const int head = d.tag == ClassTag::Mixed ? d.mixed_m : 0;
    std::vector<CrysDecomp> dec;
    for (int i = head; i < n; ++i)
        dec.push_back(decompose_crys(d.params[i]));

    std::vector<Triangulation> out;
    for (const auto& tail_perm : all_permutations(n - head)) {
        Triangulation tri;
        tri.w.resize(n);
        std::iota(tri.w.begin(), tri.w.begin() + head, 1);
        for (int t = 0; t < n - head; ++t)
            tri.w[head + t] = head + tail_perm[t];
        tri.params.reserve(n);
        for (int i = 0; i < head; ++i)
            tri.params.push_back(d.params[i]);
        for (int t = 0; t < n - head; ++t) {
            // delta_{w,i} = x^{h_i} * phi_{w(i)}: weights stay with the position
            Character c = dec[tail_perm[t] - 1].phi;
            for (const auto& [emb, h] : dec[t].h)
                if (h != 0)
                    c = c * Character::x(d.shape(), emb, h);
            tri.params.push_back(std::move(c));
        }
        out.push_back(std::move(tri));
    }
    return out;
}

bool weight_uniform_check(const std::vector<std::map<std::string, std::vector<Rat>>>& orderings,
                          const std::set<std::string>& sigmas)
{
    if (orderings.empty())
        throw std::invalid_argument("weight_uniform_check: empty ordering list");
    for (const auto& sigma : sigmas) {
        const std::vector<Rat>* first = nullptr;
        for (const auto& ord : orderings) {
            auto it = ord.find(sigma);
            if (it == ord.end())
                throw std::invalid_argument("weight_uniform_check: missing embedding " + sigma);
            if (!first) {
                first = &it->second;
                continue;
            }
            if (it->second.size() != first->size())
                throw std::invalid_argument("weight_uniform_check: ragged weight sequences");
            if (it->second != *first)
                return false;
        }
    }
    return true;
}

}  // namespace twc
