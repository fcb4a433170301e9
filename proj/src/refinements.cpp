#include "twc/refinements.hpp"

#include <algorithm>
#include <numeric>

namespace twc {

namespace {

// dim of ((V ∩ F) + U) where all spaces are given by spanning vectors
int dim_meet_join(const std::vector<std::vector<Rat>>& v_span,
                  const std::vector<std::vector<Rat>>& f_span,
                  const std::vector<std::vector<Rat>>& u_span)
{
    // V ∩ F via kernels: x in V ∩ F iff x = V a = F b; solve [V | -F] null space
    const int n = v_span.empty() ? (f_span.empty() ? 0 : (int)f_span[0].size())
                                 : (int)v_span[0].size();
    const int kv = static_cast<int>(v_span.size());
    const int kf = static_cast<int>(f_span.size());
    std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(kv + kf, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < kv; ++j)
            rows[i][j] = v_span[j][i];
        for (int j = 0; j < kf; ++j)
            rows[i][kv + j] = -f_span[j][i];
    }
    std::vector<int> pivots = detail::echelonize(rows);
    std::vector<bool> is_pivot(kv + kf, false);
    for (int c : pivots)
        is_pivot[c] = true;
    std::vector<std::vector<Rat>> meet;
    for (int c = 0; c < kv + kf; ++c) {
        if (is_pivot[c])
            continue;
        // free column -> one null vector; its V-part gives a meet vector
        std::vector<Rat> coeff(kv + kf, Rat(0));
        coeff[c] = Rat(1);
        for (size_t r = 0; r < pivots.size(); ++r)
            coeff[pivots[r]] = -rows[r][c];
        std::vector<Rat> x(n, Rat(0));
        for (int j = 0; j < kv; ++j)
            for (int i = 0; i < n; ++i)
                x[i] += coeff[j] * v_span[j][i];
        meet.push_back(std::move(x));
    }
    std::vector<std::vector<Rat>> joined = meet;
    joined.insert(joined.end(), u_span.begin(), u_span.end());
    return rank(joined);
}

std::vector<std::vector<Rat>> basis_prefix(const Refinement& w, int count, int n)
{
    std::vector<std::vector<Rat>> v;
    for (int t = 0; t < count; ++t) {
        std::vector<Rat> e(n, Rat(0));
        e[w.w[t] - 1] = Rat(1);
        v.push_back(std::move(e));
    }
    return v;
}

std::vector<std::vector<Rat>> flag_step(const Mat<Rat>& flag, int step, int n)
{
    // columns step..n (1-based) span the step-th filtration subspace
    std::vector<std::vector<Rat>> f;
    for (int c = step - 1; c < n; ++c) {
        std::vector<Rat> col(n);
        for (int i = 0; i < n; ++i)
            col[i] = flag.at(i, c);
        f.push_back(std::move(col));
    }
    return f;
}

}  // namespace

Refinement Refinement::identity(int n)
{
    Refinement r;
    r.w.resize(n);
    std::iota(r.w.begin(), r.w.end(), 1);
    return r;
}

Refinement Refinement::of(std::vector<int> images)
{
    const int n = static_cast<int>(images.size());
    std::vector<bool> seen(n + 1, false);
    for (int v : images) {
        if (v < 1 || v > n || seen[v])
            throw std::invalid_argument("Refinement: not a permutation");
        seen[v] = true;
    }
    Refinement r;
    r.w = std::move(images);
    return r;
}

Refinement Refinement::compose_transposition(int i) const
{
    if (i < 1 || i >= n())
        throw std::invalid_argument("Refinement: transposition index out of range");
    Refinement r = *this;
    std::swap(r.w[i - 1], r.w[i]);
    return r;
}

bool CrysModule::regular(const std::string& sigma) const
{
    const auto& h = weights.at(sigma);
    for (size_t i = 0; i + 1 < h.size(); ++i)
        if (h[i] <= h[i + 1])
            return false;
    return true;
}

CrysModule CrysModule::make(std::vector<Character> phis,
                            std::map<std::string, std::vector<long long>> weights,
                            std::map<std::string, Mat<Rat>> flags)
{
    if (phis.empty())
        throw std::invalid_argument("CrysModule: need at least one character");
    const int n = static_cast<int>(phis.size());
    const auto& shape = phis[0].shape();
    for (const auto& phi : phis) {
        if (!(*phi.shape() == *shape))
            throw std::invalid_argument("CrysModule: mismatched field shapes");
        if (!phi.is_smooth())
            throw std::invalid_argument("CrysModule: characters must be smooth");
    }
    for (const auto& emb : shape->embeddings) {
        auto wit = weights.find(emb);
        if (wit == weights.end() || static_cast<int>(wit->second.size()) != n)
            throw std::invalid_argument("CrysModule: need n weights for embedding " + emb);
        for (size_t i = 0; i + 1 < wit->second.size(); ++i)
            if (wit->second[i] < wit->second[i + 1])
                throw std::invalid_argument("CrysModule: weights must be weakly decreasing");
        auto fit = flags.find(emb);
        if (fit == flags.end() || fit->second.n() != n)
            throw std::invalid_argument("CrysModule: need an n x n flag for embedding " + emb);
        if (!inverse(fit->second))
            throw std::invalid_argument("CrysModule: degenerate flag at embedding " + emb);
    }
    CrysModule m;
    m.phis = std::move(phis);
    m.weights = std::move(weights);
    m.flags = std::move(flags);
    return m;
}

GenericCheck generic_check(const std::vector<Character>& phis)
{
    if (phis.empty())
        throw std::invalid_argument("generic_check: empty tuple");
    const auto& shape = phis[0].shape();
    Character abs = Character::abs_k(shape);
    for (size_t i = 0; i < phis.size(); ++i) {
        for (size_t j = 0; j < phis.size(); ++j) {
            if (i == j)
                continue;
            Character ratio = phis[i] / phis[j];
            std::string reason;
            if (ratio.is_trivial())
                reason = "trivial";
            else if (ratio == abs)
                reason = "abs";
            else if (ratio == abs.inverse())
                reason = "abs_inverse";
            else
                continue;
            return {false, std::make_pair(static_cast<int>(i) + 1, static_cast<int>(j) + 1),
                    reason};
        }
    }
    return {};
}

std::vector<long long> flag_jumps(const Refinement& w, const Mat<Rat>& flag,
                                  const std::vector<long long>& jumps)
{
    const int n = w.n();
    if (flag.n() != n || static_cast<int>(jumps.size()) != n)
        throw std::invalid_argument("flag_jumps: dimension mismatch");
    for (int i = 0; i + 1 < n; ++i)
        if (jumps[i] >= jumps[i + 1])
            throw std::invalid_argument("flag_jumps: jumps must be strictly ascending");
    if (!inverse(flag))
        throw std::invalid_argument("flag_jumps: degenerate flag");

    std::vector<long long> out(n);
    for (int i = 1; i <= n; ++i) {
        auto v_i = basis_prefix(w, i, n);
        auto v_prev = basis_prefix(w, i - 1, n);
        // the unique m with dim(((V_i ∩ Fil^{jump_m}) + V_{i-1}) / V_{i-1}) = 1
        // and = 0 one step deeper; scan from the deepest step upward
        int found = -1;
        for (int m = n; m >= 1; --m) {
            if (dim_meet_join(v_i, flag_step(flag, m, n), v_prev) == i) {
                found = m;
                break;
            }
        }
        if (found < 0)
            throw std::logic_error("flag_jumps: no induced jump found");
        out[i - 1] = jumps[found - 1];
    }
    return out;
}

bool noncritical_check(const CrysModule& m, const Refinement& w, const std::string& sigma)
{
    if (!m.regular(sigma))
        throw std::invalid_argument("noncritical_check: criterion needs regular weights");
    const auto& h = m.weights.at(sigma);
    std::vector<long long> jumps(h.size());
    for (size_t i = 0; i < h.size(); ++i)
        jumps[i] = -h[i];  // ascending, index-aligned with the weights
    return flag_jumps(w, m.flags.at(sigma), jumps) == jumps;
}

bool noncritical_check(const CrysModule& m, const Refinement& w)
{
    for (const auto& emb : m.shape()->embeddings)
        if (!noncritical_check(m, w, emb))
            return false;
    return true;
}

std::optional<int> adjacent_swap(const Refinement& w, const Mat<Rat>& flag,
                                 const std::vector<long long>& jumps)
{
    const int n = w.n();
    std::vector<long long> j = flag_jumps(w, flag, jumps);
    if (std::is_sorted(j.begin(), j.end()))
        return std::nullopt;
    for (int i = 1; i < n; ++i) {
        std::vector<long long> j_swapped = flag_jumps(w.compose_transposition(i), flag, jumps);
        if (j_swapped[i - 1] == j[i])  // values moved, hence swapped
            return i;
    }
    return std::nullopt;  // unreachable per the rearrangement lemma
}

std::optional<std::pair<int, Refinement>> critical_split_witness(const CrysModule& m,
                                                                 const Refinement& w,
                                                                 const std::string& sigma)
{
    if (noncritical_check(m, w, sigma))
        return std::nullopt;
    const auto& h = m.weights.at(sigma);
    std::vector<long long> jumps(h.size());
    for (size_t i = 0; i < h.size(); ++i)
        jumps[i] = -h[i];
    auto i = adjacent_swap(w, m.flags.at(sigma), jumps);
    if (!i)
        return std::nullopt;
    return std::make_pair(*i, w.compose_transposition(*i));
}

}  // namespace twc
