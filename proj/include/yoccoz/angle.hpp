#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace yoccoz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact point of R/Z stored as a reduced fraction num/den with 0 <= num < den.
class Angle {
public:
    Angle() : num_(0), den_(1) {}

    /// Reduce p/q modulo 1. Throws Error("invalid-denominator") when q == 0.
    static Angle normalize(const BigInt& p, const BigInt& q);
    /// Reduce an exact rational modulo 1.
    static Angle from_rational(const Rational& r);
    /// Parse "num/den" (or a bare integer).
    static Angle parse(const std::string& text);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    Rational value() const { return Rational(num_, den_); }
    double to_double() const;
    std::string str() const;

    /// 2^n * theta mod 1.
    Angle doubled(std::uint64_t n = 1) const;
    /// Both doubling preimages, theta/2 first.
    std::pair<Angle, Angle> halves() const;

    Angle operator+(const Angle& o) const;
    Angle operator-(const Angle& o) const;

    bool operator==(const Angle& o) const { return num_ == o.num_ && den_ == o.den_; }
    // Order on the representatives in [0,1); used for sorting only.
    std::strong_ordering operator<=>(const Angle& o) const;

private:
    Angle(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {}
    BigInt num_;
    BigInt den_;
};

struct OrbitInfo {
    std::size_t preperiod = 0;
    std::size_t period = 0;
    std::vector<Angle> orbit;  // preperiod + period distinct entries
};

OrbitInfo orbit(const Angle& theta);

enum class ArcPos { Inside, Outside, Boundary };

/// Position of theta relative to the open counterclockwise arc from a to b.
/// Requires a != b.
ArcPos in_arc(const Angle& theta, const Angle& a, const Angle& b);

/// Counterclockwise distance from a to b, in [0,1).
Rational ccw_length(const Angle& a, const Angle& b);

const char* to_string(ArcPos p);

}  // namespace yoccoz
