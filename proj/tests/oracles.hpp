#pragma once

// Brute-force references shared by the unit tests and the acceptance run.
// Each one recomputes its answer from definitions, without library shortcuts.

#include "yoccoz/lamination.hpp"
#include "yoccoz/puzzle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace oracles {

using namespace yoccoz;

// Every doubling cycle with denominator 2^q - 1 whose circular order is
// advanced by p steps, found by exhaustive enumeration of numerators.
inline std::vector<std::vector<Angle>> rotation_cycles(unsigned p, unsigned q) {
    const long den = (1L << q) - 1;
    std::vector<std::vector<Angle>> found;
    std::set<long> used;
    for (long a = 1; a < den; ++a) {
        if (used.count(a)) continue;
        std::vector<long> cyc{a};
        long x = (2 * a) % den;
        while (x != a) {
            cyc.push_back(x);
            x = (2 * x) % den;
        }
        for (long c : cyc) used.insert(c);
        if (cyc.size() != q) continue;
        std::vector<long> sorted = cyc;
        std::sort(sorted.begin(), sorted.end());
        bool ok = true;
        for (unsigned i = 0; i < q && ok; ++i) ok = sorted[(i + p) % q] == (2 * sorted[i]) % den;
        if (!ok) continue;
        std::vector<Angle> as;
        for (long c : sorted) as.push_back(Angle::normalize(c, den));
        found.push_back(as);
    }
    return found;
}

// Exact non-crossing test for a family of disjoint vertex sets: scanning the
// circle, a set may only resume when it is on top of the stack of open sets.
inline bool non_crossing(const std::map<std::vector<Angle>, std::size_t>& sets) {
    std::vector<std::pair<Angle, std::size_t>> pts;
    std::vector<std::size_t> size(sets.size());
    for (const auto& [vs, id] : sets) {
        for (const auto& v : vs) pts.push_back({v, id});
        size[id] = vs.size();
    }
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].first == pts[i - 1].first) return false;  // shared vertex
    std::vector<std::size_t> seen(sets.size(), 0), stack;
    for (const auto& [v, id] : pts) {
        if (seen[id] > 0) {
            if (stack.empty() || stack.back() != id) return false;
        } else {
            stack.push_back(id);
        }
        if (++seen[id] == size[id]) stack.pop_back();
    }
    return stack.empty();
}

inline bool arcs_contain(const std::vector<Arc>& arcs, const Angle& x) {
    for (const auto& a : arcs)
        if (in_arc(x, a.start, a.end) == ArcPos::Inside) return true;
    return false;
}

// tau by direct scan: the least j such that 2^j theta lies in the explicit
// boundary arcs of the critical piece of level n - j.
inline std::vector<int> tau_direct(const std::vector<std::vector<Arc>>& crit_arcs, const Angle& theta,
                                   std::size_t n_max) {
    std::vector<Angle> orb{theta};
    for (std::size_t j = 0; j < n_max; ++j) orb.push_back(orb.back().doubled());
    std::vector<int> out;
    for (std::size_t n = 0; n <= n_max; ++n) {
        int v = -1;
        for (std::size_t j = 0; j <= n; ++j)
            if (arcs_contain(crit_arcs[n - j], orb[j])) {
                v = static_cast<int>(n - j);
                break;
            }
        out.push_back(v);
    }
    return out;
}

// Rise-and-drop scan: rises, and the non-rise step (r, s) seen most often,
// ties going to the larger fall r - s and then to the smaller (r, s).
struct RadScan {
    std::vector<Rise> rises;
    std::optional<std::pair<long, long>> drop;
    std::vector<std::size_t> drop_times;
};

inline RadScan rad_scan(const std::vector<long>& a) {
    RadScan out;
    long lo = *std::min_element(a.begin(), a.end()), hi = *std::max_element(a.begin(), a.end());
    for (std::size_t t = 0; t + 1 < a.size(); ++t)
        if (a[t + 1] == a[t] + 1) out.rises.push_back({a[t], t});
    std::size_t best = 0;
    for (long r = lo; r <= hi; ++r)
        for (long s = lo; s <= r; ++s) {
            std::vector<std::size_t> times;
            for (std::size_t t = 0; t + 1 < a.size(); ++t)
                if (a[t] == r && a[t + 1] == s) times.push_back(t);
            if (times.empty()) continue;
            const bool better = times.size() > best ||
                                (times.size() == best && r - s > out.drop->first - out.drop->second);
            if (better) {
                best = times.size();
                out.drop = {r, s};
                out.drop_times = times;
            }
        }
    return out;
}

// Whether a rises past (m, m+1) at some time in [k, l).
inline bool rises_between(const std::vector<long>& a, std::size_t k, std::size_t l, long m) {
    for (std::size_t t = k; t < l; ++t)
        if (a[t] == m && a[t + 1] == m + 1) return true;
    return false;
}

}  // namespace oracles
