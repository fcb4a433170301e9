#ifndef TWC_RAT_HPP
#define TWC_RAT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twc {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. Always reduced, denominator > 0.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}  // NOLINT: implicit on purpose
    Rat(BigInt n) : num_(std::move(n)), den_(1) {}
    Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    /// Integer value; throws unless den == 1.
    const BigInt& as_integer() const
    {
        if (den_ != 1)
            throw std::domain_error("Rat::as_integer: not an integer: " + to_string());
        return num_;
    }

    long long as_int64() const
    {
        const BigInt& z = as_integer();
        if (z > std::numeric_limits<long long>::max() || z < std::numeric_limits<long long>::min())
            throw std::domain_error("Rat::as_int64: out of range");
        return static_cast<long long>(z);
    }

    Rat operator-() const { return Rat(unchecked{}, -num_, den_); }

    friend Rat operator+(const Rat& a, const Rat& b)
    {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b)
    {
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b)
    {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b)
    {
        if (b.num_ == 0)
            throw std::domain_error("Rat: division by zero");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b)
    {
        return a.num_ * b.den_ < b.num_ * a.den_;  // denominators positive
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::string to_string() const
    {
        std::string s = num_.str();
        if (den_ != 1)
            s += "/" + den_.str();
        return s;
    }

    /// Parses "n" or "n/d" with optional leading sign.
    static Rat parse(std::string_view sv)
    {
        auto bad = [&] { return std::invalid_argument("Rat::parse: bad rational '" + std::string(sv) + "'"); };
        if (sv.empty())
            throw bad();
        size_t slash = sv.find('/');
        auto is_int = [](std::string_view t) {
            if (t.empty())
                return false;
            size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
            if (i == t.size())
                return false;
            for (; i < t.size(); ++i)
                if (t[i] < '0' || t[i] > '9')
                    return false;
            return true;
        };
        if (slash == std::string_view::npos) {
            if (!is_int(sv))
                throw bad();
            return Rat(BigInt(std::string(sv)));
        }
        std::string_view n = sv.substr(0, slash), d = sv.substr(slash + 1);
        if (!is_int(n) || !is_int(d))
            throw bad();
        BigInt dd{std::string(d)};
        if (dd == 0)
            throw bad();
        return Rat(BigInt(std::string(n)), dd);
    }

private:
    struct unchecked {};
    Rat(unchecked, BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize()
    {
        if (den_ == 0)
            throw std::domain_error("Rat: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0)
            den_ = 1;
    }

    BigInt num_;
    BigInt den_;  // > 0
};

inline Rat abs(const Rat& r) { return r.is_negative() ? -r : r; }

}  // namespace twc

#endif
