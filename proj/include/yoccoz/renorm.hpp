#pragma once

#include "yoccoz/lamination.hpp"

#include <string>

namespace yoccoz {

enum class RenormStatus { Renormalizable, NotToBudget, Undetermined, OrbitHitsAlpha };
enum class RenormKind { None, Primitive, Satellite };

struct RenormReport {
    RenormStatus status = RenormStatus::Undetermined;
    std::size_t period = 0;
    std::size_t witness_level = 0;
    RenormKind kind = RenormKind::None;
    std::size_t budget = 0;
    std::size_t evidence_depth = 0;
    bool renormalizable() const { return status == RenormStatus::Renormalizable; }
};

const char* to_string(RenormStatus s);
const char* to_string(RenormKind k);

/// Searches periods 2..budget, then levels k, for f^n: P_{k+n}(0) -> P_k(0) of
/// degree two with f^{tn}(0) in P_{k+n}(0) for every t > 0. The return
/// condition is decided exactly: the critical orbit of a rational parameter is
/// eventually periodic, so finitely many t cover all of them.
RenormReport detect(const Lamination& lam, std::size_t budget);

/// Same search from the parameter. When the critical value lands on the alpha
/// cycle there is no nondegenerate puzzle and the answer is a definite no.
RenormReport detect(unsigned p, unsigned q, const Angle& theta_v, std::size_t depth, std::size_t budget);

/// Eventually periodic binary expansion .prefix(cycle)^infinity.
struct BinaryExpansion {
    std::string prefix;
    std::string cycle;  // nonempty

    static BinaryExpansion from_angle(const Angle& a);
    static BinaryExpansion parse(const std::string& text);  // "0.01(10)" style or "num/den"
    Angle to_angle() const;
    std::string str() const;
    /// Shortest equivalent form (minimal cycle, cycle rolled into prefix).
    BinaryExpansion canonical() const;
    bool operator==(const BinaryExpansion&) const = default;
};

/// Digit substitution 0 -> a0, 1 -> a1.
BinaryExpansion tune(const std::string& a0, const std::string& a1, const BinaryExpansion& theta);

}  // namespace yoccoz
