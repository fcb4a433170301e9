#ifndef TWC_POLY_HPP
#define TWC_POLY_HPP

#include "twc/dual.hpp"

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

namespace twc {

/// Univariate polynomial with coefficients stored in ascending degree.
/// The zero polynomial has an empty coefficient vector and degree -1.
template <class S>
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<S> ascending) : c_(ascending) { trim(); }
    explicit Poly(std::vector<S> ascending) : c_(std::move(ascending)) { trim(); }

    static Poly zero() { return {}; }
    static Poly constant(S v) { return Poly(std::vector<S>{std::move(v)}); }
    static Poly one() { return constant(S(1)); }
    static Poly variable() { return Poly(std::vector<S>{S(0), S(1)}); }

    /// prod (T - r) over the given roots.
    static Poly from_roots(const std::vector<S>& roots)
    {
        Poly p = one();
        for (const S& r : roots)
            p = p * Poly(std::vector<S>{-r, S(1)});
        return p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back() == S(1); }
    bool is_one() const { return degree() == 0 && c_[0] == S(1); }

    S coeff(int k) const
    {
        if (k < 0 || k >= static_cast<int>(c_.size()))
            return S(0);
        return c_[k];
    }
    const std::vector<S>& coeffs() const { return c_; }
    const S& lead() const { return c_.back(); }

    Poly make_monic() const
    {
        if (is_zero())
            throw std::domain_error("Poly::make_monic: zero polynomial");
        if (!scalar_is_unit(lead()))
            throw std::domain_error("Poly::make_monic: non-unit leading coefficient");
        return *this * Poly::constant(S(1) / lead());
    }

    Poly operator-() const
    {
        std::vector<S> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i)
            r[i] = -c_[i];
        return Poly(std::move(r));
    }

    friend Poly operator+(const Poly& a, const Poly& b)
    {
        std::vector<S> r(std::max(a.c_.size(), b.c_.size()), S(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i)
            r[i] += b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b)
    {
        if (a.is_zero() || b.is_zero())
            return zero();
        std::vector<S> r(a.c_.size() + b.c_.size() - 1, S(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    S eval(const S& x) const
    {
        S acc(0);
        for (size_t i = c_.size(); i-- > 0;)
            acc = acc * x + c_[i];
        return acc;
    }

    /// P(T + delta).
    Poly shift_arg(const S& delta) const
    {
        Poly t_plus(std::vector<S>{delta, S(1)});
        Poly acc = zero();
        for (size_t i = c_.size(); i-- > 0;)
            acc = acc * t_plus + constant(c_[i]);
        return acc;
    }

    Poly derivative() const
    {
        if (degree() < 1)
            return zero();
        std::vector<S> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i)
            r[i - 1] = c_[i] * S(static_cast<long long>(i));
        return Poly(std::move(r));
    }

    /// Quotient/remainder; the divisor must have a unit leading coefficient.
    friend std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den)
    {
        if (den.is_zero())
            throw std::domain_error("Poly: division by zero polynomial");
        if (!scalar_is_unit(den.lead()))
            throw std::domain_error("Poly: division by non-unit leading coefficient");
        std::vector<S> rem = num.c_;
        int dn = den.degree();
        if (num.degree() < dn)
            return {zero(), num};
        std::vector<S> quot(num.degree() - dn + 1, S(0));
        for (int k = num.degree(); k >= dn; --k) {
            S q = rem[k] / den.lead();
            if (scalar_is_zero(q))
                continue;
            quot[k - dn] = q;
            for (int j = 0; j <= dn; ++j)
                rem[k - dn + j] -= q * den.c_[j];
        }
        return {Poly(std::move(quot)), Poly(std::move(rem))};
    }

    std::string to_string(const std::string& var = "T") const
    {
        if (is_zero())
            return "0";
        std::string s;
        for (size_t i = c_.size(); i-- > 0;) {
            if (scalar_is_zero(c_[i]))
                continue;
            if (!s.empty())
                s += " + ";
            if (i == 0) {
                s += "(" + str_of(c_[i]) + ")";
            } else {
                s += "(" + str_of(c_[i]) + ")*" + var;
                if (i > 1)
                    s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    static std::string str_of(const Rat& v) { return v.to_string(); }
    static std::string str_of(const DualNum& v) { return v.to_string(); }

    void trim()
    {
        while (!c_.empty() && scalar_is_zero(c_.back()))
            c_.pop_back();
    }

    std::vector<S> c_;
};

template <class S>
struct GcdBezout {
    Poly<S> g;  // monic gcd
    Poly<S> a;  // a*p + b*q == g
    Poly<S> b;
};

/// Extended Euclid over a field (use S = Rat; dual-number inputs go through
/// residue reduction first, see coprime_bezout below).
inline GcdBezout<Rat> poly_gcd_bezout(const Poly<Rat>& p, const Poly<Rat>& q)
{
    if (p.is_zero() && q.is_zero())
        throw std::invalid_argument("poly_gcd_bezout: undefined gcd of (0, 0)");
    // invariant: r0 = a0*p + b0*q, r1 = a1*p + b1*q
    Poly<Rat> r0 = p, r1 = q;
    Poly<Rat> a0 = Poly<Rat>::one(), b0 = Poly<Rat>::zero();
    Poly<Rat> a1 = Poly<Rat>::zero(), b1 = Poly<Rat>::one();
    while (!r1.is_zero()) {
        auto [quot, rem] = divmod(r0, r1);
        Poly<Rat> a2 = a0 - quot * a1;
        Poly<Rat> b2 = b0 - quot * b1;
        r0 = r1;
        r1 = rem;
        a0 = a1;
        b0 = b1;
        a1 = a2;
        b1 = b2;
    }
    Rat lead = r0.lead();
    Poly<Rat> inv = Poly<Rat>::constant(Rat(1) / lead);
    return {r0 * inv, a0 * inv, b0 * inv};
}

template <class S>
Poly<Rat> residue(const Poly<S>& p)
{
    std::vector<Rat> r(p.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = scalar_residue(p.coeffs()[i]);
    return Poly<Rat>(std::move(r));
}

inline Poly<DualNum> lift(const Poly<Rat>& p)
{
    std::vector<DualNum> r(p.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = DualNum(p.coeffs()[i]);
    return Poly<DualNum>(std::move(r));
}

/// Certifies comaximality: returns (a, b) with a*q + b*s == 1, or nullopt.
/// Over the rationals this is Euclid; over dual numbers comaximality holds
/// iff the residue polynomials are coprime, and a residue-level Bezout pair
/// corrects to an exact one since 1 + eps*r is a unit in (E[eps])[T].
inline std::optional<std::pair<Poly<Rat>, Poly<Rat>>> coprime_bezout(const Poly<Rat>& q,
                                                                     const Poly<Rat>& s)
{
    if (q.is_zero() || s.is_zero())
        return std::nullopt;
    auto gb = poly_gcd_bezout(q, s);
    if (!gb.g.is_one())
        return std::nullopt;
    return std::make_pair(gb.a, gb.b);
}

inline std::optional<std::pair<Poly<DualNum>, Poly<DualNum>>> coprime_bezout(
    const Poly<DualNum>& q, const Poly<DualNum>& s)
{
    auto res = coprime_bezout(residue(q), residue(s));
    if (!res)
        return std::nullopt;
    Poly<DualNum> a = lift(res->first), b = lift(res->second);
    // a*q + b*s = 1 + eps*r; multiply through by the unit 1 - eps*r.
    Poly<DualNum> t = a * q + b * s - Poly<DualNum>::one();
    Poly<DualNum> unit = Poly<DualNum>::one() - t;  // t has only eps parts, t^2 = 0
    a = a * unit;
    b = b * unit;
    if (s.degree() > 0 && s.is_monic()) {  // reduce degrees when possible
        a = divmod(a, s).second;
        b = divmod(Poly<DualNum>::one() - a * q, s).first;
    }
    return std::make_pair(a, b);
}

template <class S>
struct CrtIdempotents {
    Poly<S> e_q;  // == 1 mod q, == 0 mod s: evaluated at a matrix it projects onto ker q
    Poly<S> e_s;  // == 1 mod s, == 0 mod q
};

/// Idempotents for A[T]/(q*s) ~ A[T]/q x A[T]/s, with e_q = b*s from a Bezout
/// identity a*q + b*s = 1.
template <class S>
CrtIdempotents<S> crt_idempotents(const Poly<S>& q, const Poly<S>& s)
{
    if (q.is_zero() || s.is_zero())
        throw std::invalid_argument("crt_idempotents: zero factor");
    if (!q.is_monic() || !s.is_monic())
        throw std::invalid_argument("crt_idempotents: factors must be monic");
    auto bez = coprime_bezout(q, s);
    if (!bez)
        throw std::domain_error("crt_idempotents: not comaximal");
    return {bez->second * s, bez->first * q};
}

/// Lifts a simple residue root of a dual-number polynomial: with P = P0 + eps*P1
/// and P0(r) = 0, P0'(r) != 0, the unique dual root above r is r - eps*P1(r)/P0'(r).
inline DualNum hensel_lift_root(const Poly<DualNum>& p, const Rat& root)
{
    Poly<Rat> p0 = residue(p);
    std::vector<Rat> eps_coeffs(p.coeffs().size());
    for (size_t i = 0; i < eps_coeffs.size(); ++i)
        eps_coeffs[i] = p.coeffs()[i].infinitesimal();
    Poly<Rat> p1{std::move(eps_coeffs)};
    if (!p0.eval(root).is_zero())
        throw std::invalid_argument("hensel_lift_root: not a residue root");
    Rat dp = p0.derivative().eval(root);
    if (dp.is_zero())
        throw std::domain_error("hensel_lift_root: residue root is not simple");
    return {root, -(p1.eval(root) / dp)};
}

}  // namespace twc

#endif
