#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qseries/identities.hpp"
#include "qseries/laurent_series.hpp"
#include "qseries/theta.hpp"

namespace qseries {

/// Parts congruent to `residue` (and to modulus - residue when symmetric)
/// modulo the spec's modulus, each available in `colours` copies.
struct ResidueClass {
    std::int64_t residue = 1;
    std::int64_t colours = 1;
    bool symmetric = false;
};

/// How a symmetric class r with r = m - r (14 mod 28) is expanded.
///   doubled: r and m - r are listed separately, so the residue carries twice
///            the colours; this is what (q^{r+-}; q^m) = (q^r, q^{m-r}; q^m) gives.
///   single:  the residue is listed once with its stated colours.
enum class SelfPaired { doubled, single };

struct PartitionSpec {
    std::string name;
    std::int64_t modulus = 1;
    std::vector<ResidueClass> classes;
    SelfPaired self_paired = SelfPaired::doubled;
};

/// One residue after the +- expansion, with its total colour count.
struct PartType {
    std::int64_t residue;
    std::int64_t colours;
};

struct CountTable {
    PartitionSpec spec;
    std::vector<Integer> counts;  // counts[n] for 0 <= n <= n_max

    [[nodiscard]] const Integer& operator[](std::int64_t n) const { return counts.at(static_cast<std::size_t>(n)); }
};

class PartitionSpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Expands +- classes and merges repeated residues by adding colours.
inline std::vector<PartType> expand(const PartitionSpec& spec) {
    if (spec.modulus <= 0) throw PartitionSpecError("modulus must be positive");
    std::map<std::int64_t, std::int64_t> merged;
    for (const auto& c : spec.classes) {
        if (c.colours < 1) throw PartitionSpecError("colours must be at least 1");
        if (c.residue <= 0 || c.residue > spec.modulus) {
            throw PartitionSpecError("residue " + std::to_string(c.residue) + " outside 1.." + std::to_string(spec.modulus));
        }
        // Residue m is the class of multiples of m; store it as m so parts are positive.
        merged[c.residue] += c.colours;
        if (c.symmetric) {
            const std::int64_t mirror = spec.modulus - c.residue;
            if (mirror == 0) throw PartitionSpecError("residue " + std::to_string(c.residue) + " has no mirror");
            if (mirror != c.residue || spec.self_paired == SelfPaired::doubled) merged[mirror] += c.colours;
        }
    }
    std::vector<PartType> out;
    for (const auto& [r, c] : merged) out.push_back({r, c});
    return out;
}

/// Sum over n of (number of partitions) q^n as 1 / prod (q^r; q^m)^c.
inline CountTable gf_counts(const PartitionSpec& spec, std::int64_t n_max) {
    if (n_max < 0) throw PartitionSpecError("n_max must be nonnegative");
    PochhammerSpec product;
    for (const auto& t : expand(spec)) {
        product.push_back({SignedMonomial::q(t.residue), SignedMonomial::q(spec.modulus), t.colours});
    }
    const LaurentSeries gf = inverse(pochhammer_multi(product, n_max + 1));
    CountTable table{spec, {}};
    table.counts.reserve(static_cast<std::size_t>(n_max + 1));
    for (std::int64_t n = 0; n <= n_max; ++n) table.counts.push_back(gf.coefficient(n));
    return table;
}

/// Knapsack over part types: each admissible part size p with c colours is c
/// independent items of weight p, each usable any number of times.
inline CountTable enum_counts(const PartitionSpec& spec, std::int64_t n_max) {
    if (n_max < 0) throw PartitionSpecError("n_max must be nonnegative");
    std::vector<Integer> ways(static_cast<std::size_t>(n_max + 1));
    ways[0] = 1;
    for (const auto& t : expand(spec)) {
        for (std::int64_t p = t.residue; p <= n_max; p += spec.modulus) {
            for (std::int64_t colour = 0; colour < t.colours; ++colour) {
                for (std::int64_t n = p; n <= n_max; ++n) {
                    ways[static_cast<std::size_t>(n)] += ways[static_cast<std::size_t>(n - p)];
                }
            }
        }
    }
    return {spec, std::move(ways)};
}

/// Lists every coloured partition of n explicitly and counts them. Each part
/// is a (size, colour) pair; parts are emitted in nonincreasing order of the
/// pair so every multiset appears once. Exponential: intended for n <= 30.
inline std::uint64_t brute_force_count(const PartitionSpec& spec, std::int64_t n) {
    std::vector<std::pair<std::int64_t, std::int64_t>> kinds;  // (size, colour)
    for (const auto& t : expand(spec)) {
        for (std::int64_t p = t.residue; p <= n; p += spec.modulus) {
            for (std::int64_t c = 0; c < t.colours; ++c) kinds.emplace_back(p, c);
        }
    }
    std::sort(kinds.rbegin(), kinds.rend());
    std::uint64_t count = 0;
    std::function<void(std::size_t, std::int64_t)> walk = [&](std::size_t from, std::int64_t rest) {
        if (rest == 0) {
            ++count;
            return;
        }
        for (std::size_t k = from; k < kinds.size(); ++k) {
            if (kinds[k].first <= rest) walk(k, rest - kinds[k].first);
        }
    };
    walk(0, n);
    return count;
}

namespace partition_specs {

inline ResidueClass pm(std::int64_t r, std::int64_t colours = 1) { return {r, colours, true}; }

inline PartitionSpec C1() { return {"C1", 28, {pm(1), pm(6, 2), pm(13), pm(14, 2)}}; }
inline PartitionSpec C2() { return {"C2", 28, {pm(1), pm(8, 2), pm(13), pm(14, 2)}}; }
inline PartitionSpec C3() { return {"C3", 28, {pm(6, 2), pm(7, 2), pm(8, 2)}}; }
inline PartitionSpec D1() { return {"D1", 28, {pm(1, 2), pm(6), pm(8), pm(14, 2)}}; }
inline PartitionSpec D2() { return {"D2", 28, {pm(6), pm(8), pm(13, 2), pm(14, 2)}}; }
inline PartitionSpec D3() { return {"D3", 28, {pm(1, 2), pm(7, 2), pm(13, 2)}}; }
/// Every part in r colours.
inline PartitionSpec p_r(std::int64_t r) { return {"p" + std::to_string(r), 1, {{1, r, false}}}; }

inline std::optional<PartitionSpec> by_name(const std::string& name) {
    if (name == "C1") return C1();
    if (name == "C2") return C2();
    if (name == "C3") return C3();
    if (name == "D1") return D1();
    if (name == "D2") return D2();
    if (name == "D3") return D3();
    return std::nullopt;
}

}  // namespace partition_specs

inline PartitionSpec with_policy(PartitionSpec s, SelfPaired policy) {
    s.self_paired = policy;
    return s;
}

namespace detail {

// A(n) - B(n - shift) - C(n) = 0 for lo <= n <= n_max, computed from the
// generating functions and cross-checked against the knapsack counts.
inline CheckResult three_term_relation(const std::string& id, const PartitionSpec& a, const PartitionSpec& b,
                                       const PartitionSpec& c, std::int64_t shift, std::int64_t lo, std::int64_t n_max) {
    CheckResult result{id, Rational(n_max + 1), true, std::nullopt, {}};
    const CountTable ga = gf_counts(a, n_max), gb = gf_counts(b, n_max), gc = gf_counts(c, n_max);
    const CountTable ea = enum_counts(a, n_max), eb = enum_counts(b, n_max), ec = enum_counts(c, n_max);
    for (const auto* pair : {&ga, &gb, &gc}) {
        const CountTable& e = pair == &ga ? ea : pair == &gb ? eb : ec;
        for (std::int64_t n = 0; n <= n_max; ++n) {
            if ((*pair)[n] != e[n]) {
                result.pass = false;
                result.first_mismatch = Mismatch{Rational(n), (*pair)[n], e[n]};
                result.note = pair->spec.name + ": generating function and enumeration disagree";
                return result;
            }
        }
    }
    for (std::int64_t n = lo; n <= n_max; ++n) {
        const Integer rhs = (n - shift >= 0 ? gb[n - shift] : Integer(0)) + gc[n];
        if (ga[n] != rhs) {
            result.pass = false;
            result.first_mismatch = Mismatch{Rational(n), ga[n], rhs};
            result.note = a.name + "(n) != " + b.name + "(n-" + std::to_string(shift) + ") + " + c.name + "(n)";
            return result;
        }
    }
    return result;
}

}  // namespace detail

/// C1(n) - C2(n-1) - C3(n) = 0 for 1 <= n <= n_max.
inline CheckResult verify_thm31(std::int64_t n_max, SelfPaired policy = SelfPaired::doubled) {
    if (n_max < 1) throw PartitionSpecError("n_max must be at least 1");
    using namespace partition_specs;
    return detail::three_term_relation("thm3.1", with_policy(C1(), policy), with_policy(C2(), policy),
                                       with_policy(C3(), policy), 1, 1, n_max);
}

/// D1(n) - D2(n-6) - D3(n) = 0 for 6 <= n <= n_max.
inline CheckResult verify_thm32(std::int64_t n_max, SelfPaired policy = SelfPaired::doubled) {
    if (n_max < 6) throw PartitionSpecError("n_max must be at least 6");
    using namespace partition_specs;
    return detail::three_term_relation("thm3.2", with_policy(D1(), policy), with_policy(D2(), policy),
                                       with_policy(D3(), policy), 6, 6, n_max);
}

/// D1(n) - D3(n) for 1 <= n < 6, where the relation is not claimed.
inline std::vector<std::pair<std::int64_t, Integer>> thm32_low_range() {
    using namespace partition_specs;
    const CountTable d1 = gf_counts(D1(), 5), d3 = gf_counts(D3(), 5);
    std::vector<std::pair<std::int64_t, Integer>> out;
    for (std::int64_t n = 1; n < 6; ++n) out.emplace_back(n, d1[n] - d3[n]);
    return out;
}

/// The three-term product identities that the two partition theorems restate.
inline std::vector<IdentityCheck> gf_identity_checks() {
    // (q^{r1+-}, ..., q^{rk+-}; q^28)_inf^power with (q^{r+-}) = (q^r, q^{28-r}).
    auto pm = [](std::initializer_list<std::int64_t> rs, std::int64_t power) {
        PochhammerSpec out;
        for (std::int64_t r : rs) {
            out.push_back({SignedMonomial::q(r), SignedMonomial::q(28), power});
            out.push_back({SignedMonomial::q(28 - r), SignedMonomial::q(28), power});
        }
        return out;
    };
    auto prod = [](const PochhammerSpec& s) { return [s](const Rational& w) { return pochhammer_multi(s, w); }; };
    std::vector<IdentityCheck> out;
    // y3: (8)/(6) = q (6)/(8) + (1,13)(14)^2 / ((6,8)(7)^2)
    out.push_back({"gf.y3", prod(pm({8}, 1) + pm({6}, -1)),
                   [pm](const Rational& w) {
                       return add(shift(pochhammer_multi(pm({6}, 1) + pm({8}, -1), w - Rational(1)), 1),
                                  pochhammer_multi(pm({1, 13}, 1) + pm({14}, 2) + pm({6, 8}, -1) + pm({7}, -2), w));
                   },
                   1});
    // y4: 1/((6,14)^2 (1,13)) = q/((8,14)^2 (1,13)) + 1/(6,7,8)^2
    out.push_back({"gf.y4", prod(pm({6, 14}, -2) + pm({1, 13}, -1)),
                   [pm](const Rational& w) {
                       return add(shift(pochhammer_multi(pm({8, 14}, -2) + pm({1, 13}, -1), w - Rational(1)), 1),
                                  pochhammer_multi(pm({6, 7, 8}, -2), w));
                   },
                   1});
    // y13: 1/((1,14)^2 (6,8)) = q^6/((13,14)^2 (6,8)) + 1/(1,7,13)^2
    out.push_back({"gf.y13", prod(pm({1, 14}, -2) + pm({6, 8}, -1)),
                   [pm](const Rational& w) {
                       return add(shift(pochhammer_multi(pm({13, 14}, -2) + pm({6, 8}, -1), w - Rational(6)), 6),
                                  pochhammer_multi(pm({1, 7, 13}, -2), w));
                   },
                   1});
    return out;
}

inline std::vector<CheckResult> verify_gf_identities(const Rational& order) { return run_checks(gf_identity_checks(), order); }

}  // namespace qseries
