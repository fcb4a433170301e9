#include "twc/senlattice.hpp"

#include <algorithm>
#include <map>

namespace twc {

namespace {

// Exact rational roots of a monic polynomial over Q, with multiplicities.
// Throws when the polynomial does not split into rational linear factors,
// which is outside the oracle's supported domain.
std::map<Rat, int, std::less<Rat>> rational_roots_or_throw(const Poly<Rat>& p)
{
    std::map<Rat, int, std::less<Rat>> roots;
    Poly<Rat> rem = p;
    // deflate zero roots first
    while (!rem.is_zero() && rem.coeff(0).is_zero() && rem.degree() > 0) {
        std::vector<Rat> shifted(rem.coeffs().begin() + 1, rem.coeffs().end());
        rem = Poly<Rat>(std::move(shifted));
        roots[Rat(0)] += 1;
    }
    // clear denominators: candidates u/v with u | numerator(constant), v | lcm
    auto divisors = [](BigInt z) {
        std::vector<BigInt> out;
        if (z < 0)
            z = -z;
        if (z == 0)
            return out;
        if (z > BigInt(1000000000))
            throw std::invalid_argument("brute_force_modifications: coefficients too large "
                                        "for rational root extraction");
        for (BigInt d = 1; d * d <= z; ++d) {
            if (z % d == 0) {
                out.push_back(d);
                if (d * d != z)
                    out.push_back(z / d);
            }
        }
        return out;
    };
    while (rem.degree() > 0) {
        BigInt denom_lcm = 1;
        for (const Rat& c : rem.coeffs())
            denom_lcm = boost::multiprecision::lcm(denom_lcm, c.den());
        BigInt a0 = (rem.coeff(0) * Rat(denom_lcm)).as_integer();
        BigInt lead = (rem.lead() * Rat(denom_lcm)).as_integer();
        bool found = false;
        for (const BigInt& u : divisors(a0)) {
            for (const BigInt& v : divisors(lead)) {
                for (int sign : {1, -1}) {
                    Rat cand(sign * u, v);
                    if (!rem.eval(cand).is_zero())
                        continue;
                    Poly<Rat> lin{-cand, Rat(1)};
                    while (rem.degree() > 0) {
                        auto [q, r] = divmod(rem, lin);
                        if (!r.is_zero())
                            break;
                        rem = q;
                        roots[cand] += 1;
                    }
                    found = true;
                    break;
                }
                if (found)
                    break;
            }
            if (found)
                break;
        }
        if (!found)
            throw std::invalid_argument(
                "brute_force_modifications: Sen polynomial does not split over Q");
    }
    return roots;
}

std::vector<std::vector<Rat>> reduced_basis(std::vector<std::vector<Rat>> vectors)
{
    detail::echelonize(vectors);
    while (!vectors.empty()
           && std::all_of(vectors.back().begin(), vectors.back().end(),
                          [](const Rat& r) { return r.is_zero(); }))
        vectors.pop_back();
    return vectors;
}

std::vector<std::vector<Rat>> span_sum(const std::vector<std::vector<Rat>>& a,
                                       const std::vector<std::vector<Rat>>& b)
{
    std::vector<std::vector<Rat>> all = a;
    all.insert(all.end(), b.begin(), b.end());
    return reduced_basis(std::move(all));
}

}  // namespace

BruteForceModifications brute_force_modifications(const SenLattice<Rat>& lat,
                                                  const Poly<Rat>& target)
{
    const Mat<Rat>& theta = lat.theta;
    const int n = lat.n();
    auto roots = rational_roots_or_throw(charpoly(theta));

    struct EigenData {
        Rat value;
        int alg_mult;
        std::vector<std::vector<std::vector<Rat>>> pieces;  // candidate stable subspaces
    };
    std::vector<EigenData> eigens;
    bool exhaustive = true;
    for (const auto& [value, mult] : roots) {
        EigenData e{value, mult, {}};
        Mat<Rat> shifted = theta;
        for (int i = 0; i < n; ++i)
            shifted.at(i, i) -= value;
        auto eigenspace = kernel_basis(shifted);
        const int geo = static_cast<int>(eigenspace.size());
        e.pieces.push_back({});  // the zero piece
        if (geo == 1) {
            // nonderogatory at this eigenvalue: the stable pieces form the
            // kernel chain of (theta - value)^j
            Mat<Rat> power = Mat<Rat>::identity(n);
            for (int j = 1; j <= mult; ++j) {
                power = power * shifted;
                e.pieces.push_back(kernel_basis(power));
            }
        } else {
            if (n > 3)
                throw std::invalid_argument(
                    "brute_force_modifications: derogatory operator with n > 3 unsupported");
            exhaustive = false;  // infinite invariant-subspace families; sample
            for (int a = 0; a < geo; ++a) {
                e.pieces.push_back({eigenspace[a]});
                for (int b = a + 1; b < geo; ++b) {
                    std::vector<Rat> sum(n), diff(n);
                    for (int t = 0; t < n; ++t) {
                        sum[t] = eigenspace[a][t] + eigenspace[b][t];
                        diff[t] = eigenspace[a][t] - eigenspace[b][t];
                    }
                    e.pieces.push_back({sum});
                    e.pieces.push_back({diff});
                    e.pieces.push_back({eigenspace[a], eigenspace[b]});
                }
            }
            if (geo >= 3 || geo == e.alg_mult)
                e.pieces.push_back(eigenspace);
        }
        eigens.push_back(std::move(e));
    }

    // enumerate sums of one candidate piece per eigenvalue
    std::vector<std::vector<std::vector<Rat>>> candidates = {{}};
    for (const auto& e : eigens) {
        std::vector<std::vector<std::vector<Rat>>> next;
        for (const auto& acc : candidates)
            for (const auto& piece : e.pieces)
                next.push_back(span_sum(acc, piece));
        candidates = std::move(next);
    }

    BruteForceModifications out;
    out.exhaustive = exhaustive;
    std::vector<std::vector<std::vector<Rat>>> seen;
    for (const auto& w : candidates) {
        if (std::find(seen.begin(), seen.end(), w) != seen.end())
            continue;
        seen.push_back(w);
        const int k = static_cast<int>(w.size());
        Poly<Rat> whole;
        if (k == 0) {
            whole = charpoly(theta).shift_arg(Rat(-1));
        } else if (k == n) {
            whole = charpoly(theta);
        } else {
            Mat<Rat> restr;
            try {
                restr = restriction_matrix(theta, w);
            } catch (const std::invalid_argument&) {
                continue;  // a sampled subspace that is not stable
            }
            Mat<Rat> quot = quotient_matrix(theta, w);
            whole = charpoly(restr) * charpoly(quot).shift_arg(Rat(-1));
        }
        if (whole == target)
            out.subspaces.push_back(w);
    }
    return out;
}

bool recover_factors_check(const Poly<Rat>& q, const Poly<Rat>& s, const Poly<Rat>& q_prime,
                           const Poly<Rat>& s_prime)
{
    for (const Poly<Rat>* p : {&q, &s, &q_prime, &s_prime})
        if (p->is_zero() || !p->is_monic())
            throw std::invalid_argument("recover_factors_check: inputs must be monic");
    if (q * s != q_prime * s_prime)
        throw std::invalid_argument("recover_factors_check: hypothesis QS = Q'S' fails");
    if (q.shift_arg(Rat(-1)) * s != q_prime.shift_arg(Rat(-1)) * s_prime)
        throw std::invalid_argument(
            "recover_factors_check: hypothesis Q(T-1)S = Q'(T-1)S' fails");
    if (!coprime_bezout(q, s))
        throw std::invalid_argument("recover_factors_check: hypothesis (Q,S) = 1 fails");
    return q == q_prime && s == s_prime;
}

bool recover_factors_check_comaximal(const Poly<Rat>& q, const Poly<Rat>& s,
                                     const Poly<Rat>& q_prime, const Poly<Rat>& s_prime)
{
    for (const Poly<Rat>* p : {&q, &s, &q_prime, &s_prime})
        if (p->is_zero() || !p->is_monic())
            throw std::invalid_argument("recover_factors_check: inputs must be monic");
    if (q.degree() != q_prime.degree() || s.degree() != s_prime.degree())
        throw std::invalid_argument("recover_factors_check: degree hypothesis fails");
    if (q * s != q_prime * s_prime)
        throw std::invalid_argument("recover_factors_check: hypothesis QS = Q'S' fails");
    for (const auto& [a, b] : {std::pair{&q, &s}, {&q_prime, &s}, {&q, &s_prime},
                               {&q_prime, &s_prime}})
        if (!coprime_bezout(*a, *b))
            throw std::invalid_argument("recover_factors_check: comaximality hypothesis fails");
    return q == q_prime && s == s_prime;
}

PullbackConsistencyReport pullback_consistency(const TriangModule& d, int i,
                                               const std::string& sigma)
{
    auto wall = wall_member(d, sigma, i, WallInterval(0, 0));
    if (!wall.member)
        throw gate_error("wall", "pullback_consistency: weight wall at i=" + std::to_string(i));

    const int n = d.n();
    PullbackConsistencyReport report;
    std::set<int> index_set;
    for (int t = n - i + 1; t <= n; ++t)
        index_set.insert(t);

    TriangModule pulled = pullback_p(d, i, sigma, 1);
    std::optional<Poly<Rat>> q_ref, s_ref;
    for (const auto& tri : enumerate_triangulations(d)) {
        std::vector<Rat> weights = weight_map(tri.params, sigma);
        Mat<Rat> theta(n);
        for (int t = 0; t < n; ++t) {
            theta.at(t, t) = weights[t];
            if (t + 1 < n)
                theta.at(t, t + 1) = Rat(1);
        }
        SenLattice<Rat> lat{theta};
        auto f = split_sen_poly(lat, weights, index_set);
        auto modified = modify_down(lat, f);

        PullbackConsistencyEntry entry;
        entry.w = tri.w;
        entry.q = f.q;
        entry.s = f.s;
        entry.new_weights = weights;
        for (int t = n - i; t < n; ++t)
            entry.new_weights[t] += Rat(1);

        if (charpoly(modified.lattice.theta) != Poly<Rat>::from_roots(entry.new_weights))
            report.weights_match = false;
        if (!q_ref) {
            q_ref = f.q;
            s_ref = f.s;
        } else if (f.q != *q_ref || f.s != *s_ref) {
            report.consistent = false;
        }
        for (size_t a = 0; a < entry.new_weights.size(); ++a)
            for (size_t b = a + 1; b < entry.new_weights.size(); ++b)
                if (entry.new_weights[a] == entry.new_weights[b])
                    report.post_regular = false;
        report.entries.push_back(std::move(entry));
    }

    // the pullback weights of the original ordering must agree with entry 0
    std::vector<Rat> pulled_weights = pulled.sigma_weights(sigma);
    if (!report.entries.empty() && report.entries.front().new_weights != pulled_weights)
        report.weights_match = false;
    return report;
}

}  // namespace twc
