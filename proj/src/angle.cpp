#include "yoccoz/angle.hpp"

#include "yoccoz/error.hpp"

#include <boost/multiprecision/integer.hpp>

namespace yoccoz {

namespace {

BigInt floor_mod(const BigInt& p, const BigInt& q) {
    BigInt r = p % q;
    if (r < 0) r += q;
    return r;
}

}  // namespace

Angle Angle::normalize(const BigInt& p, const BigInt& q) {
    if (q == 0) throw Error("invalid-denominator", "angle denominator must be positive");
    BigInt qq = q < 0 ? BigInt(-q) : q;
    BigInt pp = q < 0 ? BigInt(-p) : p;
    BigInt r = floor_mod(pp, qq);
    if (r == 0) return Angle(0, 1);
    BigInt g = boost::multiprecision::gcd(r, qq);
    return Angle(r / g, qq / g);
}

Angle Angle::from_rational(const Rational& r) {
    return normalize(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

Angle Angle::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return normalize(BigInt(text), 1);
        return normalize(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("invalid-angle", "cannot parse angle '" + text + "'");
    }
}

double Angle::to_double() const { return static_cast<double>(value()); }

std::string Angle::str() const { return num_.str() + "/" + den_.str(); }

Angle Angle::doubled(std::uint64_t n) const {
    if (num_ == 0) return *this;
    // Cancel powers of two against the denominator first; the rest is a
    // modular exponent on the odd part.
    BigInt num = num_;
    BigInt den = den_;
    while (n > 0 && (den & 1) == 0) {
        den >>= 1;
        --n;
    }
    if (n > 0) {
        BigInt f = boost::multiprecision::powm(BigInt(2), BigInt(n), den);
        num *= f;
    }
    return normalize(num, den);
}

std::pair<Angle, Angle> Angle::halves() const {
    Angle h = normalize(num_, den_ * 2);
    return {h, h + Angle(1, 2)};
}

Angle Angle::operator+(const Angle& o) const { return from_rational(value() + o.value()); }
Angle Angle::operator-(const Angle& o) const { return from_rational(value() - o.value()); }

std::strong_ordering Angle::operator<=>(const Angle& o) const {
    BigInt l = num_ * o.den_;
    BigInt r = o.num_ * den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

OrbitInfo orbit(const Angle& theta) {
    OrbitInfo info;
    BigInt den = theta.den();
    while ((den & 1) == 0) {
        den >>= 1;
        ++info.preperiod;
    }
    // Multiplicative order of 2 modulo the odd part.
    if (den == 1) {
        info.period = 1;
    } else {
        BigInt x = 2 % den;
        info.period = 1;
        while (x != 1) {
            x = (x * 2) % den;
            ++info.period;
        }
    }
    info.orbit.reserve(info.preperiod + info.period);
    Angle a = theta;
    for (std::size_t i = 0; i < info.preperiod + info.period; ++i) {
        info.orbit.push_back(a);
        a = a.doubled();
    }
    return info;
}

ArcPos in_arc(const Angle& theta, const Angle& a, const Angle& b) {
    if (theta == a || theta == b) return ArcPos::Boundary;
    // Rotate so that a sits at 0 and compare counterclockwise offsets.
    return ccw_length(a, theta) < ccw_length(a, b) ? ArcPos::Inside : ArcPos::Outside;
}

Rational ccw_length(const Angle& a, const Angle& b) {
    Rational d = b.value() - a.value();
    if (d < 0) d += 1;
    return d;
}

const char* to_string(ArcPos p) {
    switch (p) {
        case ArcPos::Inside: return "inside";
        case ArcPos::Outside: return "outside";
        case ArcPos::Boundary: return "boundary";
    }
    return "?";
}

}  // namespace yoccoz
