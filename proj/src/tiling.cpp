#include "yoccoz/tiling.hpp"

#include "yoccoz/error.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace yoccoz {

const char* to_string(CaseTag c) {
    switch (c) {
        case CaseTag::TrivialCase1: return "trivial-case1";
        case CaseTag::Recurrent: return "recurrent";
        case CaseTag::PresumedNonRecurrent: return "presumed-non-recurrent";
    }
    return "?";
}

const char* to_string(Residual r) {
    switch (r) {
        case Residual::InRToDepth: return "inR-to-depth";
        case Residual::NotR: return "notR";
        case Residual::OrbitHitsAlpha: return "orbit-hits-alpha";
    }
    return "?";
}

namespace {

// Least level l <= depth such that no f^t(0), 1 <= t <= budget, lies in P_l(0).
std::optional<std::size_t> avoided_level(const Lamination& lam, std::size_t budget) {
    OrbitInfo vo = orbit(lam.theta_v());
    std::size_t distinct = std::min(budget, vo.orbit.size());
    PieceTracker crit(lam, Point::critical_point(lam), lam.depth());
    std::size_t l = 0;
    // Returns into P_l(0) only get rarer as l grows, so scan l upward once.
    for (; l <= lam.depth(); ++l) {
        bool returns = false;
        for (std::size_t i = 0; i < distinct && !returns; ++i) returns = same_piece(lam, crit, l, vo.orbit[i]);
        if (!returns) return l;
    }
    return std::nullopt;
}

}  // namespace

CaseInfo classify_case(unsigned p, unsigned q, const Angle& theta_v, std::size_t depth, std::size_t budget) {
    CaseInfo info;
    auto alpha = alpha_cycle(p, q);
    OrbitInfo vo = orbit(theta_v);
    for (std::size_t i = 0; i < vo.orbit.size(); ++i) {
        if (std::find(alpha.begin(), alpha.end(), vo.orbit[i]) != alpha.end()) {
            info.tag = CaseTag::TrivialCase1;
            info.alpha_time = i + 1;
            info.evidence_depth = i + 1;
            return info;
        }
    }
    Lamination lam = Lamination::build(p, q, theta_v, depth, 0);
    info.evidence_depth = depth;
    info.avoided_level = avoided_level(lam, budget);
    info.tag = info.avoided_level ? CaseTag::PresumedNonRecurrent : CaseTag::Recurrent;
    return info;
}

Tiling tile_trivial(const PieceRef& piece, std::size_t alpha_time) {
    Tiling t;
    t.tag = CaseTag::TrivialCase1;
    t.L = alpha_time;
    t.piece = piece;
    t.tiles.push_back(Tile{piece, piece.level});
    t.residual_empty = true;
    t.max_tile_level = piece.level;
    return t;
}

bool maps_univalently_to(const Lamination& lam, const PieceRef& piece, std::size_t L) {
    if (piece.level < L) return false;
    PieceTracker t(lam, piece.anchor, piece.level);
    for (std::size_t j = 0; j < piece.level - L; ++j)
        if (t.critical(j, piece.level - j)) return false;
    return true;
}

Tiling tile(const Lamination& lam, std::size_t level, const TileOptions& opt) {
    Tiling t;
    const std::size_t budget = opt.budget ? opt.budget : lam.depth();
    t.max_tile_level = opt.max_tile_level ? opt.max_tile_level : level + 4;
    if (t.max_tile_level > lam.depth()) throw Error("needs-deeper-lamination", "max tile level exceeds lamination depth");
    t.piece = critical_piece(lam, level);
    auto avoided = avoided_level(lam, budget);

    if (avoided) {
        t.tag = CaseTag::PresumedNonRecurrent;
        t.L = *avoided;
        t.N = *avoided;
        if (level <= t.L) throw Error("level-too-shallow", "piece level must exceed L = " + std::to_string(t.L));
        // Level-k pieces filling the critical annulus A_{k-1}(0).
        for (std::size_t k = level + 1; k <= t.max_tile_level; ++k) {
            for (auto& child : children(lam, critical_piece(lam, k - 1))) {
                if (child.anchor.critical) continue;
                t.tiles.push_back(Tile{child, k});
            }
        }
        t.residual_is_critical_point = true;
        t.residual_p = level;
        t.residual_L = t.L;
        t.unresolved = 1;  // the critical piece at the cap
        return t;
    }

    t.tag = CaseTag::Recurrent;
    t.N = first_nondegenerate(lam);
    std::tie(t.n1, t.n2) = fraternal_descendants(lam, t.N, budget);
    t.L = std::max(t.n1, t.n2) + 3;
    if (level <= t.L) throw Error("level-too-shallow", "piece level must exceed L = " + std::to_string(t.L));
    t.residual_p = level;
    t.residual_L = t.L;
    // Greedy descent: keep pieces that already map univalently to level L,
    // split the rest.
    std::deque<PieceRef> queue{t.piece};
    while (!queue.empty()) {
        PieceRef q = queue.front();
        queue.pop_front();
        if (maps_univalently_to(lam, q, t.L)) {
            t.tiles.push_back(Tile{q, q.level});
        } else if (q.level < t.max_tile_level) {
            for (auto& c : children(lam, q)) queue.push_back(std::move(c));
        } else {
            ++t.unresolved;
        }
    }
    return t;
}

Residual residual_member(const Lamination& lam, const Angle& theta, std::size_t p, std::size_t L,
                         std::size_t depth, std::size_t* first_exit) {
    if (depth > lam.depth()) throw Error("needs-deeper-lamination", "residual depth exceeds lamination depth");
    if (lam.is_vertex(theta, p)) return Residual::OrbitHitsAlpha;
    PieceTracker t(lam, Point::at(theta), depth);
    for (std::size_t n = p; n <= depth; ++n) {
        if (t.on_alpha(n)) return Residual::OrbitHitsAlpha;
        long value = -1;
        for (std::size_t j = 0; j <= n; ++j)
            if (t.critical(j, n - j)) { value = static_cast<long>(n - j); break; }
        if (value <= static_cast<long>(L)) {
            if (first_exit) *first_exit = n;
            return Residual::NotR;
        }
    }
    return Residual::InRToDepth;
}

std::vector<AnnulusEntry> surrounding_annuli(const Lamination& lam, const Angle& theta, std::size_t N,
                                             std::size_t p, std::size_t depth) {
    auto tau = tau_sequence(lam, Point::at(theta), depth);
    std::map<long, bool> desc;
    std::vector<AnnulusEntry> out;
    for (std::size_t n = p; n + 1 <= depth; ++n) {
        long m = tau[n];
        if (m < 0 || tau[n + 1] != m + 1) continue;
        if (static_cast<std::size_t>(m) < N) continue;
        auto it = desc.find(m);
        if (it == desc.end()) {
            bool d = static_cast<std::size_t>(m) == N || descendant_check(lam, m, N).is_descendant;
            it = desc.emplace(m, d).first;
        }
        if (it->second) out.push_back(AnnulusEntry{n, m, m});
    }
    return out;
}

AnnulusCertificate build_certificate(const Lamination& lam, const Tiling& tiling,
                                     const std::vector<Angle>& residual_angles, std::size_t depth) {
    AnnulusCertificate cert;
    cert.base_level = tiling.N;
    cert.n1 = tiling.n1;
    cert.n2 = tiling.n2;
    cert.depth = depth;
    for (const auto& theta : residual_angles) {
        if (residual_member(lam, theta, tiling.residual_p, tiling.residual_L, depth) != Residual::InRToDepth) continue;
        cert.entries.push_back({theta, surrounding_annuli(lam, theta, tiling.N, tiling.residual_p, depth)});
    }
    return cert;
}

AnnulusRelation annulus_relation(const Lamination& lam, const Angle& z, std::size_t k, const Angle& w,
                                 std::size_t l) {
    const Angle* a = &z;
    const Angle* b = &w;
    if (k > l) {
        std::swap(k, l);
        std::swap(a, b);
    }
    PieceTracker tz(lam, Point::at(*a), k + 1);
    AnnulusRelation rel;
    if (!same_piece(lam, tz, k, *b)) return rel;
    bool inner = same_piece(lam, tz, k + 1, *b);
    // Same level: the outer pieces agree, so the annuli overlap. Deeper w: its
    // piece lands in A_k(z) exactly when it escapes P_{k+1}(z).
    rel.intersect = k == l || !inner;
    rel.equal = k == l && inner;
    return rel;
}

CertificateReport verify_certificate(const Lamination& lam, const AnnulusCertificate& cert) {
    CertificateReport rep;
    std::size_t total = 0;
    for (const auto& e : cert.entries) total += e.annuli.size();
    if (total == 0) {
        rep.vacuous = true;
        rep.warnings.push_back("certificate lists no annuli; pass is vacuous");
    }
    auto name = [](const Angle& t, std::size_t n) { return "A_" + std::to_string(n) + "(" + t.str() + ")"; };

    std::map<long, bool> desc;
    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto& e = cert.entries[i];
        std::map<long, std::size_t> counts;
        std::vector<int> tau;
        std::size_t top = 0;
        for (const auto& a : e.annuli) top = std::max(top, a.n + 1);
        try {
            tau = tau_sequence(lam, Point::at(e.theta), top);
        } catch (const Error& err) {
            rep.failures.push_back(e.theta.str() + ": " + err.what());
            continue;
        }
        std::vector<std::size_t> seen;
        for (const auto& a : e.annuli) {
            if (std::find(seen.begin(), seen.end(), a.n) != seen.end())
                rep.failures.push_back("duplicate annulus " + name(e.theta, a.n));
            seen.push_back(a.n);
            if (tau[a.n] != a.m || tau[a.n + 1] != a.m + 1 || a.cls != a.m)
                rep.failures.push_back(name(e.theta, a.n) + " is not a rise of tau past (" + std::to_string(a.m) + "," +
                                       std::to_string(a.m + 1) + ")");
            if (a.m >= 0 && static_cast<std::size_t>(a.m) != cert.base_level) {
                auto it = desc.find(a.m);
                if (it == desc.end())
                    it = desc.emplace(a.m, static_cast<std::size_t>(a.m) > cert.base_level &&
                                               descendant_check(lam, a.m, cert.base_level).is_descendant).first;
                if (!it->second)
                    rep.failures.push_back(name(e.theta, a.n) + " copies A_" + std::to_string(a.m) +
                                           "(0), which does not cover A_" + std::to_string(cert.base_level) + "(0)");
            }
            ++counts[a.cls];
        }
        rep.class_counts.emplace_back(counts.begin(), counts.end());
    }

    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto& ei = cert.entries[i];
        for (std::size_t j = i + 1; j < cert.entries.size(); ++j) {
            const auto& ej = cert.entries[j];
            for (const auto& a : ei.annuli) {
                for (const auto& b : ej.annuli) {
                    auto rel = annulus_relation(lam, ei.theta, a.n, ej.theta, b.n);
                    if (rel.intersect && !rel.equal)
                        rep.failures.push_back("annuli " + name(ei.theta, a.n) + " and " + name(ej.theta, b.n) +
                                               " intersect");
                }
            }
            // No annulus may contain another residual angle.
            for (int side = 0; side < 2; ++side) {
                const auto& owner = side ? ej : ei;
                const auto& other = side ? ei : ej;
                for (const auto& a : owner.annuli) {
                    PieceTracker t(lam, Point::at(owner.theta), a.n + 1);
                    if (same_piece(lam, t, a.n, other.theta) && !same_piece(lam, t, a.n + 1, other.theta))
                        rep.failures.push_back(name(owner.theta, a.n) + " contains residual angle " + other.theta.str());
                }
            }
        }
    }
    rep.pass = rep.failures.empty();
    return rep;
}

}  // namespace yoccoz
