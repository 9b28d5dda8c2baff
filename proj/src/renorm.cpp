#include "yoccoz/renorm.hpp"

#include "yoccoz/error.hpp"
#include "yoccoz/puzzle.hpp"

#include <algorithm>
#include <map>

namespace yoccoz {

const char* to_string(RenormStatus s) {
    switch (s) {
        case RenormStatus::Renormalizable: return "renormalizable";
        case RenormStatus::NotToBudget: return "not-renormalizable-to-budget";
        case RenormStatus::Undetermined: return "undetermined";
        case RenormStatus::OrbitHitsAlpha: return "not-renormalizable-orbit-hits-alpha";
    }
    return "?";
}

const char* to_string(RenormKind k) {
    switch (k) {
        case RenormKind::None: return "none";
        case RenormKind::Primitive: return "primitive";
        case RenormKind::Satellite: return "satellite";
    }
    return "?";
}

RenormReport detect(const Lamination& lam, std::size_t budget) {
    RenormReport rep;
    rep.budget = budget;
    rep.evidence_depth = lam.depth();
    const std::size_t depth = lam.depth();
    PieceTracker crit(lam, Point::critical_point(lam), depth);

    // Distinct points f^t(0), t >= 1, as angles: theta_v, 2 theta_v, ...
    OrbitInfo vo = orbit(lam.theta_v());
    auto value_at = [&](std::size_t t) {
        std::size_t i = t - 1;
        if (i >= vo.orbit.size()) i = vo.preperiod + (i - vo.preperiod) % vo.period;
        return vo.orbit[i];
    };

    bool complete = true;
    for (std::size_t n = 2; n <= budget; ++n) {
        if (n > depth) { complete = false; break; }
        for (std::size_t k = 0; k + n <= depth; ++k) {
            if (!crit.critical(n, k)) continue;
            bool degree_two = true;
            for (std::size_t j = 1; j < n && degree_two; ++j) degree_two = !crit.critical(j, k + n - j);
            if (!degree_two) continue;
            // f^{tn}(0) for t >= 1 repeats once tn passes the preperiod, with
            // period dividing the orbit period.
            PieceRef target = critical_piece(lam, k + n);
            std::size_t t_max = (vo.preperiod + 1 + n - 1) / n + vo.period + 1;
            bool returns = true;
            for (std::size_t t = 1; t <= t_max && returns; ++t)
                returns = piece_contains(lam, target, value_at(t * n));
            if (!returns) continue;
            rep.status = RenormStatus::Renormalizable;
            rep.period = n;
            rep.witness_level = k;
            rep.kind = n == lam.q() ? RenormKind::Satellite : RenormKind::Primitive;
            return rep;
        }
    }
    rep.status = complete ? RenormStatus::NotToBudget : RenormStatus::Undetermined;
    return rep;
}

RenormReport detect(unsigned p, unsigned q, const Angle& theta_v, std::size_t depth, std::size_t budget) {
    try {
        return detect(Lamination::build(p, q, theta_v, depth, 0), budget);
    } catch (const Error& e) {
        if (e.code() != "case1-degenerate") throw;
        RenormReport rep;
        rep.status = RenormStatus::OrbitHitsAlpha;
        rep.budget = budget;
        rep.evidence_depth = depth;
        return rep;
    }
}

BinaryExpansion BinaryExpansion::from_angle(const Angle& a) {
    OrbitInfo o = orbit(a);
    BinaryExpansion e;
    for (std::size_t i = 0; i < o.orbit.size(); ++i) {
        char bit = o.orbit[i].value() >= Rational(1, 2) ? '1' : '0';
        (i < o.preperiod ? e.prefix : e.cycle).push_back(bit);
    }
    return e;
}

BinaryExpansion BinaryExpansion::parse(const std::string& text) {
    if (text.find('/') != std::string::npos) return from_angle(Angle::parse(text));
    std::string body = text;
    if (body.rfind("0.", 0) == 0) body = body.substr(2);
    else if (!body.empty() && body[0] == '.') body = body.substr(1);
    auto open = body.find('(');
    BinaryExpansion e;
    if (open == std::string::npos || body.back() != ')')
        throw Error("invalid-expansion", "expected digits with a parenthesized cycle, e.g. .01(10)");
    e.prefix = body.substr(0, open);
    e.cycle = body.substr(open + 1, body.size() - open - 2);
    auto bad = [](const std::string& s) { return s.find_first_not_of("01") != std::string::npos; };
    if (e.cycle.empty() || bad(e.prefix) || bad(e.cycle))
        throw Error("invalid-expansion", "binary digits only, nonempty cycle");
    return e;
}

Angle BinaryExpansion::to_angle() const {
    // .P(C) = (P + C / (2^|C| - 1)) / 2^|P|
    BigInt p = 0, c = 0;
    for (char ch : prefix) p = p * 2 + (ch - '0');
    for (char ch : cycle) c = c * 2 + (ch - '0');
    BigInt cyc_den = (BigInt(1) << cycle.size()) - 1;
    Rational v = (Rational(p) + Rational(c, cyc_den)) / Rational(BigInt(1) << prefix.size());
    return Angle::from_rational(v);
}

std::string BinaryExpansion::str() const { return "." + prefix + "(" + cycle + ")"; }

BinaryExpansion BinaryExpansion::canonical() const {
    BinaryExpansion e = *this;
    for (std::size_t d = 1; d <= e.cycle.size(); ++d) {
        if (e.cycle.size() % d) continue;
        bool ok = true;
        for (std::size_t i = d; i < e.cycle.size() && ok; ++i) ok = e.cycle[i] == e.cycle[i - d];
        if (ok) { e.cycle.resize(d); break; }
    }
    while (!e.prefix.empty() && e.prefix.back() == e.cycle.back()) {
        e.prefix.pop_back();
        std::rotate(e.cycle.rbegin(), e.cycle.rbegin() + 1, e.cycle.rend());
    }
    return e;
}

BinaryExpansion tune(const std::string& a0, const std::string& a1, const BinaryExpansion& theta) {
    if (a0.empty() || a1.empty()) throw Error("invalid-substitution", "substitution words must be nonempty");
    auto subst = [&](const std::string& s) {
        std::string out;
        for (char ch : s) out += ch == '0' ? a0 : a1;
        return out;
    };
    return BinaryExpansion{subst(theta.prefix), subst(theta.cycle)}.canonical();
}

}  // namespace yoccoz
