#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hk {

struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Small exact rational with checked 64-bit parts. Used for lattice and
// torus bookkeeping where entries stay tiny.
class Rat {
public:
    Rat() = default;
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) { set(n, d); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    double to_double() const { return double(num_) / double(den_); }

    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    // representative in [0,1)
    Rat frac() const { return *this - Rat(floor()); }

    Rat operator-() const { return Rat(-num_, den_); }
    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return make(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        return make((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend auto operator<=>(const Rat& a, const Rat& b) {
        return (__int128)a.num_ * b.den_ <=> (__int128)b.num_ * a.den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

    static Rat parse(const std::string& s) {
        auto p = s.find('/');
        if (p == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, p)), std::stoll(s.substr(p + 1)));
    }

private:
    long long num_ = 0, den_ = 1;

    void set(long long n, long long d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        *this = make(n, d);
    }
    static Rat make(__int128 n, __int128 d) {
        if (d < 0) n = -n, d = -d;
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) n /= a, d /= a;
        if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
            throw overflow_error("Rat: 64-bit overflow");
        Rat r;
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }
};

inline long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }
inline long long lcm_ll(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    return std::abs(a / std::gcd(a, b) * b);
}

} // namespace hk
