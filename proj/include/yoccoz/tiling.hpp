#pragma once

#include "yoccoz/puzzle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace yoccoz {

enum class CaseTag { TrivialCase1, Recurrent, PresumedNonRecurrent };
const char* to_string(CaseTag c);

struct CaseInfo {
    CaseTag tag = CaseTag::PresumedNonRecurrent;
    std::size_t evidence_depth = 0;
    /// Case 1: least n with f^n(0) = alpha.
    std::optional<std::size_t> alpha_time;
    /// Otherwise: least level N whose critical piece the orbit never re-enters
    /// (within the budget), when one was found.
    std::optional<std::size_t> avoided_level;
};

/// Case 1 is decided from the parameter alone; otherwise the critical orbit
/// f^j(0), 1 <= j <= budget, is tested against P_l(0) for l <= depth.
CaseInfo classify_case(unsigned p, unsigned q, const Angle& theta_v, std::size_t depth, std::size_t budget);

struct Tile {
    PieceRef piece;
    std::size_t level = 0;
};

struct AnnulusEntry {
    std::size_t n = 0;  // A_n(theta)
    long m = 0;         // tau(n) = m, tau(n+1) = m+1
    long cls = 0;       // conformal class: A_n(theta) is a copy of A_m(0)
};

struct CertificateEntry {
    Angle theta;
    std::vector<AnnulusEntry> annuli;
};

struct AnnulusCertificate {
    std::size_t base_level = 0;
    std::size_t n1 = 0, n2 = 0;
    std::size_t depth = 0;
    std::vector<CertificateEntry> entries;
    bool disjointness_checked = false;
};

struct Tiling {
    CaseTag tag = CaseTag::TrivialCase1;
    std::size_t L = 0;
    PieceRef piece;
    std::vector<Tile> tiles;
    /// Residual set R = {z in P_p(0) : tau(n, z) > L for all n >= p}; in the
    /// non-recurrent case it is the critical point alone.
    std::size_t residual_p = 0, residual_L = 0;
    bool residual_is_critical_point = false;
    bool residual_empty = false;
    std::size_t max_tile_level = 0;
    std::size_t unresolved = 0;  // failing pieces left at the enumeration cap
    std::size_t N = 0, n1 = 0, n2 = 0;
    std::optional<AnnulusCertificate> certificate;
};

/// Case 1: the piece is its own single tile and R is empty.
Tiling tile_trivial(const PieceRef& piece, std::size_t alpha_time);

struct TileOptions {
    std::size_t max_tile_level = 0;  // 0: level + 4
    std::size_t budget = 0;          // orbit / search budget; 0: lamination depth
};

/// Cases 2 and 3 for the critical piece of the given level (> L).
Tiling tile(const Lamination& lam, std::size_t level, const TileOptions& opt = {});

/// f^{level-L} univalent on the piece.
bool maps_univalently_to(const Lamination& lam, const PieceRef& piece, std::size_t L);

enum class Residual { InRToDepth, NotR, OrbitHitsAlpha };
const char* to_string(Residual r);

/// Membership in R, decided up to `depth`. `first_exit` receives the least
/// level n >= p with tau(n) <= L when the answer is NotR.
Residual residual_member(const Lamination& lam, const Angle& theta, std::size_t p, std::size_t L,
                         std::size_t depth, std::size_t* first_exit = nullptr);

/// Rises of tau(., theta) past (m, m+1) at times n in [p, depth) whose critical
/// annulus A_m(0) is A_N(0) or one of its descendants.
std::vector<AnnulusEntry> surrounding_annuli(const Lamination& lam, const Angle& theta, std::size_t N,
                                             std::size_t p, std::size_t depth);

AnnulusCertificate build_certificate(const Lamination& lam, const Tiling& tiling,
                                     const std::vector<Angle>& residual_angles, std::size_t depth);

struct CertificateReport {
    bool pass = true;
    bool vacuous = false;
    std::vector<std::string> warnings;
    std::vector<std::string> failures;  // each names a witness
    std::vector<std::vector<std::pair<long, std::size_t>>> class_counts;  // per entry: (class, count)
};

CertificateReport verify_certificate(const Lamination& lam, const AnnulusCertificate& cert);

/// Whether annuli A_k(z) and A_l(w) meet, and whether they coincide.
struct AnnulusRelation {
    bool intersect = false;
    bool equal = false;
};
AnnulusRelation annulus_relation(const Lamination& lam, const Angle& z, std::size_t k, const Angle& w,
                                 std::size_t l);

}  // namespace yoccoz
