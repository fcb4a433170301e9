#ifndef TWC_DUAL_HPP
#define TWC_DUAL_HPP

#include "twc/rat.hpp"

namespace twc {

/// Dual number a + b·eps over the rationals, with eps^2 = 0.
/// Reduction mod eps (residue) is a ring map; a + b·eps is a unit iff a != 0.
class DualNum {
public:
    DualNum() = default;
    DualNum(long long a) : a_(a) {}  // NOLINT: implicit on purpose
    DualNum(Rat a) : a_(std::move(a)) {}
    DualNum(Rat a, Rat b) : a_(std::move(a)), b_(std::move(b)) {}

    const Rat& value() const { return a_; }
    const Rat& infinitesimal() const { return b_; }
    Rat residue() const { return a_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_unit() const { return !a_.is_zero(); }

    DualNum operator-() const { return {-a_, -b_}; }

    friend DualNum operator+(const DualNum& x, const DualNum& y)
    {
        return {x.a_ + y.a_, x.b_ + y.b_};
    }
    friend DualNum operator-(const DualNum& x, const DualNum& y)
    {
        return {x.a_ - y.a_, x.b_ - y.b_};
    }
    friend DualNum operator*(const DualNum& x, const DualNum& y)
    {
        return {x.a_ * y.a_, x.a_ * y.b_ + x.b_ * y.a_};
    }
    friend DualNum operator/(const DualNum& x, const DualNum& y)
    {
        if (!y.is_unit())
            throw std::domain_error("DualNum: division by non-unit");
        return {x.a_ / y.a_, (x.b_ * y.a_ - x.a_ * y.b_) / (y.a_ * y.a_)};
    }

    DualNum& operator+=(const DualNum& o) { return *this = *this + o; }
    DualNum& operator-=(const DualNum& o) { return *this = *this - o; }
    DualNum& operator*=(const DualNum& o) { return *this = *this * o; }
    DualNum& operator/=(const DualNum& o) { return *this = *this / o; }

    friend bool operator==(const DualNum& x, const DualNum& y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const DualNum& x, const DualNum& y) { return !(x == y); }

    std::string to_string() const
    {
        if (b_.is_zero())
            return a_.to_string();
        std::string s = a_.to_string();
        s += b_.is_negative() ? "-" : "+";
        s += abs(b_).to_string() + "*eps";
        return s;
    }

    /// Parses "a", "a+b*eps" or "a-b*eps" (each part a rational literal).
    static DualNum parse(std::string_view sv)
    {
        size_t star = sv.rfind("*eps");
        if (star == std::string_view::npos)
            return DualNum(Rat::parse(sv));
        // split at the sign that separates value from eps part
        std::string_view head = sv.substr(0, star);
        for (size_t i = head.size(); i-- > 1;) {
            if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/' && head[i - 1] != '+'
                && head[i - 1] != '-') {
                Rat a = Rat::parse(head.substr(0, i));
                Rat b = Rat::parse(head.substr(i + (head[i] == '+' ? 1 : 0)));
                return {a, b};
            }
        }
        throw std::invalid_argument("DualNum::parse: bad literal '" + std::string(sv) + "'");
    }

private:
    Rat a_;
    Rat b_;
};

// Scalar glue shared by Rat and DualNum so that generic polynomial and
// matrix code can treat both uniformly.
inline bool scalar_is_zero(const Rat& x) { return x.is_zero(); }
inline bool scalar_is_zero(const DualNum& x) { return x.is_zero(); }
inline bool scalar_is_unit(const Rat& x) { return !x.is_zero(); }
inline bool scalar_is_unit(const DualNum& x) { return x.is_unit(); }
inline Rat scalar_residue(const Rat& x) { return x; }
inline Rat scalar_residue(const DualNum& x) { return x.residue(); }

}  // namespace twc

#endif
