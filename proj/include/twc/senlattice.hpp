#ifndef TWC_SENLATTICE_HPP
#define TWC_SENLATTICE_HPP

#include "twc/mat.hpp"
#include "twc/trianguline.hpp"

namespace twc {

/// Finite model of the sigma-component Sen module: the Sen operator acting on
/// an n-dimensional exact coordinate space.
template <class S>
struct SenLattice {
    Mat<S> theta;
    int n() const { return theta.n(); }
};

/// Certified comaximal monic factorization charpoly(theta) = q * s, together
/// with a Bezout witness a*q + b*s = 1. Root lists are kept when the
/// factorization was built from linear factors.
template <class S>
struct SenFactorization {
    Poly<S> q;
    Poly<S> s;
    Poly<S> bezout_a;
    Poly<S> bezout_b;
    std::vector<S> q_roots;
    std::vector<S> s_roots;
    bool roots_known = false;
};

template <class S>
struct ModifyResult {
    std::vector<std::vector<S>> w_basis;  // basis of ker s(theta)
    SenLattice<S> lattice;
};

/// Certifies a factorization of charpoly(theta): verifies q*s matches, both
/// monic, and produces the Bezout witness. Throws "not comaximal" otherwise.
template <class S>
SenFactorization<S> make_factorization(const SenLattice<S>& lat, const Poly<S>& q,
                                       const Poly<S>& s)
{
    if (!q.is_monic() || !s.is_monic())
        throw std::invalid_argument("make_factorization: factors must be monic");
    if (q * s != charpoly(lat.theta))
        throw std::invalid_argument("make_factorization: q*s is not the Sen polynomial");
    auto bez = coprime_bezout(q, s);
    if (!bez)
        throw gate_error("comaximal", "make_factorization: not comaximal");
    SenFactorization<S> f;
    f.q = q;
    f.s = s;
    f.bezout_a = bez->first;
    f.bezout_b = bez->second;
    return f;
}

/// Splits the Sen polynomial along a triangulation index subset I: q collects
/// the roots at positions in I, s the rest. Errors name a colliding root pair
/// when the split is not comaximal at the residue field.
template <class S>
SenFactorization<S> split_sen_poly(const SenLattice<S>& lat, const std::vector<S>& ordered_roots,
                                   const std::set<int>& index_set)
{
    if (static_cast<int>(ordered_roots.size()) != lat.n())
        throw std::invalid_argument("split_sen_poly: need one root per dimension");
    for (int i : index_set)
        if (i < 1 || i > lat.n())
            throw std::invalid_argument("split_sen_poly: index out of range");
    std::vector<S> q_roots, s_roots;
    for (int i = 1; i <= lat.n(); ++i)
        (index_set.count(i) ? q_roots : s_roots).push_back(ordered_roots[i - 1]);
    for (const S& qr : q_roots)
        for (const S& sr : s_roots)
            if (scalar_residue(qr) == scalar_residue(sr))
                throw gate_error("comaximal", "split_sen_poly: not comaximal, shared root "
                                                  + scalar_residue(qr).to_string());
    auto f = make_factorization(lat, Poly<S>::from_roots(q_roots), Poly<S>::from_roots(s_roots));
    f.q_roots = std::move(q_roots);
    f.s_roots = std::move(s_roots);
    f.roots_known = true;
    return f;
}

/// Downward modification (new lattice between t_sigma*D and D): on ker q the
/// induced operator picks up +1, on ker s it is unchanged. In ambient
/// coordinates that is theta + e_q(theta), whose characteristic polynomial is
/// exactly q(T-1)*s(T). The returned subspace is ker s(theta).
template <class S>
ModifyResult<S> modify_down(const SenLattice<S>& lat, const SenFactorization<S>& f)
{
    auto idem = crt_idempotents(f.q, f.s);
    Mat<S> proj_q = eval_poly(idem.e_q, lat.theta);
    Mat<S> proj_s = eval_poly(idem.e_s, lat.theta);
    ModifyResult<S> out;
    out.w_basis = image_basis(proj_s);
    out.lattice = SenLattice<S>{lat.theta + proj_q};
    return out;
}

/// Upward modification (between D and t_sigma^{-1}D): theta - e_q(theta),
/// with characteristic polynomial q(T+1)*s(T).
template <class S>
ModifyResult<S> modify_up(const SenLattice<S>& lat, const SenFactorization<S>& f)
{
    auto idem = crt_idempotents(f.q, f.s);
    Mat<S> proj_q = eval_poly(idem.e_q, lat.theta);
    Mat<S> proj_s = eval_poly(idem.e_s, lat.theta);
    ModifyResult<S> out;
    out.w_basis = image_basis(proj_s);
    out.lattice = SenLattice<S>{lat.theta - proj_q};
    return out;
}

/// Guard for the mutual-inverse claim: every root difference q_root - s_root
/// must avoid {-1, 0, 1}, equivalently (q, s), (q(T-1), s) and (q(T+1), s)
/// are simultaneously comaximal at the residue field.
template <class S>
bool roundtrip_invertible(const SenFactorization<S>& f)
{
    Poly<Rat> q = residue(f.q), s = residue(f.s);
    for (long long shift : {0LL, -1LL, 1LL}) {
        auto bez = coprime_bezout(q.shift_arg(Rat(shift)), s);
        if (!bez)
            return false;
    }
    return true;
}

struct BruteForceModifications {
    std::vector<std::vector<std::vector<Rat>>> subspaces;  // each a basis, vectors of length n
    bool exhaustive = true;
};

/// Oracle for the uniqueness claim: enumerates theta-stable subspaces W with
/// charpoly(theta|_W)(T) * charpoly(theta|_{D/W})(T-1) == target. Exhaustive
/// when theta is nonderogatory with rational eigenvalues (every stable
/// subspace is ker of a divisor); otherwise (n <= 3) eigenline samples are
/// added and the result is flagged non-exhaustive.
BruteForceModifications brute_force_modifications(const SenLattice<Rat>& lat,
                                                  const Poly<Rat>& target);

/// Conclusion of the coprime-factor recovery lemma: under QS = Q'S',
/// Q(T-1)S = Q'(T-1)S' and (Q,S) = 1 (all monic over the rationals), the
/// factors are forced: Q = Q', S = S'. Hypothesis violations throw; the
/// return value reports whether the conclusion holds.
bool recover_factors_check(const Poly<Rat>& q, const Poly<Rat>& s, const Poly<Rat>& q_prime,
                           const Poly<Rat>& s_prime);

/// Degree-matched variant with four-way comaximality in place of the shifted
/// product identity.
bool recover_factors_check_comaximal(const Poly<Rat>& q, const Poly<Rat>& s,
                                     const Poly<Rat>& q_prime, const Poly<Rat>& s_prime);

struct PullbackConsistencyEntry {
    std::vector<int> w;
    Poly<Rat> q;
    Poly<Rat> s;
    std::vector<Rat> new_weights;  // roots of the modified Sen polynomial, in order
};

struct PullbackConsistencyReport {
    bool consistent = true;      // identical factorization across triangulations
    bool weights_match = true;   // modified roots equal the pullback weights
    bool post_regular = true;    // modified weights still pairwise distinct
    std::vector<PullbackConsistencyEntry> entries;
};

/// Cross-checks the lattice modification against the parameter-level pullback:
/// for every triangulation ordering, builds an upper-triangular Sen operator
/// with the ordered sigma-weights on the diagonal, modifies along the last i
/// positions, and compares the resulting Sen roots with pullback_p weights.
PullbackConsistencyReport pullback_consistency(const TriangModule& d, int i,
                                               const std::string& sigma);

}  // namespace twc

#endif
