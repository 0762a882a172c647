#pragma once

// Named transitive permutation groups: constructive families and a curated
// list of nTm-labelled groups with facts used to validate them.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normtori/permgrp.hpp"

namespace normtori::catalog {

using Images = std::vector<std::int64_t>;

inline Perm cycle_perm(std::size_t n) {
    std::vector<std::uint32_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>((i + 1) % n);
    return Perm(std::move(v));
}

inline PermGroup cyclic(std::size_t n) { return PermGroup(n, {cycle_perm(n)}); }

/// Dihedral group of order 2n acting on the n-gon.
inline PermGroup dihedral(std::size_t n) {
    std::vector<std::uint32_t> refl(n);
    for (std::size_t i = 0; i < n; ++i) refl[i] = static_cast<std::uint32_t>((n - i) % n);
    return PermGroup(n, {cycle_perm(n), Perm(std::move(refl))});
}

/// Frobenius group C_p x| C_m on p points: x -> x+1 and x -> a x with a of order m mod p.
inline PermGroup frobenius(std::size_t p, std::size_t m) {
    if (!PermGroup::is_prime(p)) throw InvalidInput("F(p,m): p = " + std::to_string(p) + " is not prime");
    if (m == 0 || (p - 1) % m != 0) throw InvalidInput("F(p,m): m must divide p - 1");
    std::size_t a = 0;
    for (std::size_t c = 1; c < p && !a; ++c) {
        std::size_t x = 1, ord = 0;
        do {
            x = x * c % p;
            ++ord;
        } while (x != 1);
        if (ord == m) a = c;
    }
    std::vector<std::uint32_t> mul(p);
    for (std::size_t i = 0; i < p; ++i) mul[i] = static_cast<std::uint32_t>(i * a % p);
    return PermGroup(p, {cycle_perm(p), Perm(std::move(mul))});
}

inline PermGroup symmetric(std::size_t n) {
    if (n < 2) return PermGroup(n, {});
    std::vector<std::uint32_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::uint32_t>(i);
    std::swap(t[0], t[1]);
    return PermGroup(n, {cycle_perm(n), Perm(std::move(t))});
}

inline PermGroup alternating(std::size_t n) {
    if (n < 3) return PermGroup(n, {});
    std::vector<std::uint32_t> c3(n), lng(n);
    for (std::size_t i = 0; i < n; ++i) c3[i] = lng[i] = static_cast<std::uint32_t>(i);
    c3[0] = 1;
    c3[1] = 2;
    c3[2] = 0;
    if (n % 2 == 1) {
        for (std::size_t i = 0; i < n; ++i) lng[i] = static_cast<std::uint32_t>((i + 1) % n);
    } else {
        for (std::size_t i = 1; i < n; ++i) lng[i] = static_cast<std::uint32_t>(i + 1 == n ? 1 : i + 1);
    }
    return PermGroup(n, {Perm(std::move(c3)), Perm(std::move(lng))});
}

/// G1 x G2 acting on pairs (i, j), point i + deg1 * j.
inline PermGroup product(const PermGroup& a, const PermGroup& b) {
    const std::size_t da = a.degree(), db = b.degree(), n = da * db;
    std::vector<Perm> gens;
    for (const auto& g : a.generators()) {
        std::vector<std::uint32_t> v(n);
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t i = 0; i < da; ++i) v[i + da * j] = static_cast<std::uint32_t>(g(i) + da * j);
        gens.emplace_back(std::move(v));
    }
    for (const auto& g : b.generators()) {
        std::vector<std::uint32_t> v(n);
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t i = 0; i < da; ++i) v[i + da * j] = static_cast<std::uint32_t>(i + da * g(j));
        gens.emplace_back(std::move(v));
    }
    return PermGroup(n, std::move(gens));
}

inline PermGroup from_images(std::size_t degree, const std::vector<Images>& gens) {
    std::vector<Perm> ps;
    for (const auto& g : gens) {
        if (g.size() != degree)
            throw InvalidInput("generator has " + std::to_string(g.size()) + " images, degree is " + std::to_string(degree));
        ps.push_back(Perm::from_images_1based(g));
    }
    return PermGroup(degree, std::move(ps));
}

enum class FactKind {
    sylow_cyclic,
    sylow_not_cyclic,
    nilpotent,
    not_nilpotent,
    no_proper_transitive_subgroup,
    no_transitive_subgroup_of_order,
    has_transitive_subgroup_of_order,
};

struct Fact {
    FactKind kind;
    std::size_t value = 0;  // prime or subgroup order
};

struct Entry {
    std::string label;
    std::string name;
    std::size_t degree;
    std::size_t order;
    std::function<PermGroup()> build;
    std::vector<Fact> facts;
};

inline const std::vector<Entry>& entries() {
    static const std::vector<Entry> list = [] {
        using K = FactKind;
        auto lit = [](std::size_t deg, std::vector<Images> g) { return [deg, g] { return from_images(deg, g); }; };
        std::vector<Entry> e;
        e.push_back({"2T1", "C2", 2, 2, [] { return cyclic(2); }, {}});
        e.push_back({"3T1", "C3", 3, 3, [] { return cyclic(3); }, {}});
        e.push_back({"3T2", "S3", 3, 6, [] { return symmetric(3); }, {}});
        e.push_back({"4T1", "C4", 4, 4, [] { return cyclic(4); }, {}});
        e.push_back({"4T2", "C2 x C2", 4, 4, lit(4, {{2, 1, 4, 3}, {3, 4, 1, 2}}), {{K::sylow_not_cyclic, 2}}});
        e.push_back({"4T3", "D4", 4, 8, [] { return dihedral(4); }, {}});
        e.push_back({"4T4", "A4", 4, 12, [] { return alternating(4); }, {}});
        e.push_back({"4T5", "S4", 4, 24, [] { return symmetric(4); }, {}});

        e.push_back({"5T1", "C5", 5, 5, [] { return cyclic(5); }, {}});
        e.push_back({"5T2", "D5", 5, 10, [] { return dihedral(5); }, {}});
        e.push_back({"5T3", "F20", 5, 20, lit(5, {{2, 3, 4, 5, 1}, {1, 3, 5, 2, 4}}),
                     {{K::sylow_cyclic, 2}, {K::sylow_cyclic, 5}}});
        e.push_back({"5T4", "A5", 5, 60, [] { return alternating(5); }, {}});
        e.push_back({"5T5", "S5", 5, 120, [] { return symmetric(5); }, {}});

        e.push_back({"6T1", "C6", 6, 6, [] { return cyclic(6); }, {}});
        e.push_back({"6T2", "S3", 6, 6, lit(6, {{2, 3, 1, 5, 6, 4}, {4, 6, 5, 1, 3, 2}}), {}});
        e.push_back({"6T3", "D6", 6, 12, [] { return dihedral(6); }, {}});
        e.push_back({"6T4", "A4", 6, 12, lit(6, {{4, 1, 5, 2, 6, 3}, {1, 5, 4, 3, 2, 6}}), {}});

        e.push_back({"7T1", "C7", 7, 7, [] { return cyclic(7); }, {}});
        e.push_back({"7T2", "D7", 7, 14, [] { return dihedral(7); }, {}});
        e.push_back({"7T3", "F21", 7, 21, [] { return frobenius(7, 3); }, {}});
        e.push_back({"7T4", "F42", 7, 42, [] { return frobenius(7, 6); }, {}});
        e.push_back({"7T5", "PSL(3,2)", 7, 168,
                     lit(7, {{1, 6, 7, 4, 5, 2, 3}, {4, 1, 5, 2, 6, 3, 7}, {3, 2, 1, 4, 7, 6, 5}}), {}});
        e.push_back({"7T6", "A7", 7, 2520, [] { return alternating(7); }, {}});
        e.push_back({"7T7", "S7", 7, 5040, [] { return symmetric(7); }, {}});

        e.push_back({"8T1", "C8", 8, 8, [] { return cyclic(8); }, {{K::nilpotent}}});
        e.push_back({"8T2", "C4 x C2", 8, 8, lit(8, {{3, 4, 5, 6, 7, 8, 1, 2}, {2, 1, 4, 3, 6, 5, 8, 7}}),
                     {{K::sylow_not_cyclic, 2}}});
        e.push_back({"8T3", "C2 x C2 x C2", 8, 8,
                     lit(8, {{5, 6, 7, 8, 1, 2, 3, 4}, {3, 4, 1, 2, 7, 8, 5, 6}, {2, 1, 4, 3, 6, 5, 8, 7}}),
                     {{K::sylow_not_cyclic, 2}}});
        e.push_back({"8T4", "D4", 8, 8, lit(8, {{2, 3, 4, 1, 6, 7, 8, 5}, {5, 8, 7, 6, 1, 4, 3, 2}}),
                     {{K::sylow_not_cyclic, 2}}});
        e.push_back({"8T5", "Q8", 8, 8, lit(8, {{2, 5, 4, 7, 6, 1, 8, 3}, {3, 8, 5, 2, 7, 4, 1, 6}}),
                     {{K::sylow_not_cyclic, 2}}});
        e.push_back({"8T6", "D8", 8, 16, [] { return dihedral(8); }, {{K::nilpotent}}});
        e.push_back({"8T12", "SL(2,3)", 8, 24, lit(8, {{4, 8, 3, 7, 2, 6, 1, 5}, {6, 3, 1, 7, 4, 2, 8, 5}}),
                     {{K::not_nilpotent}, {K::sylow_not_cyclic, 2}}});
        e.push_back({"8T14", "S4", 8, 24, lit(8, {{3, 4, 7, 8, 1, 2, 5, 6}, {2, 4, 1, 3, 6, 8, 5, 7}}),
                     {{K::not_nilpotent}, {K::sylow_not_cyclic, 2}}});
        e.push_back({"8T23", "GL(2,3)", 8, 48,
                     lit(8, {{4, 8, 3, 7, 2, 6, 1, 5}, {6, 3, 1, 7, 4, 2, 8, 5}, {1, 2, 6, 7, 8, 3, 4, 5}}),
                     {{K::not_nilpotent}}});
        e.push_back({"8T37", "PSL(2,7)", 8, 168,
                     lit(8, {{2, 3, 4, 5, 6, 7, 1, 8}, {1, 3, 5, 7, 2, 4, 6, 8}, {8, 7, 4, 3, 6, 5, 2, 1}}), {}});

        e.push_back({"9T1", "C9", 9, 9, [] { return cyclic(9); }, {{K::sylow_cyclic, 3}}});
        e.push_back({"9T2", "C3 x C3", 9, 9,
                     lit(9, {{4, 5, 6, 7, 8, 9, 1, 2, 3}, {2, 3, 1, 5, 6, 4, 8, 9, 7}}), {{K::sylow_not_cyclic, 3}}});
        e.push_back({"9T3", "D9", 9, 18, [] { return dihedral(9); }, {{K::sylow_cyclic, 3}}});
        e.push_back({"9T27", "PSL(2,8)", 9, 504,
                     lit(9, {{2, 1, 4, 3, 6, 5, 8, 7, 9}, {1, 3, 5, 7, 4, 2, 8, 6, 9}, {9, 2, 6, 7, 8, 3, 4, 5, 1}}),
                     {{K::sylow_cyclic, 3}, {K::sylow_not_cyclic, 2}}});

        e.push_back({"10T1", "C10", 10, 10, lit(10, {{2, 3, 4, 5, 1, 7, 8, 9, 10, 6}, {6, 7, 8, 9, 10, 1, 2, 3, 4, 5}}), {}});
        e.push_back({"10T2", "D5", 10, 10, lit(10, {{2, 3, 4, 5, 1, 7, 8, 9, 10, 6}, {6, 10, 9, 8, 7, 1, 5, 4, 3, 2}}), {}});
        e.push_back({"10T3", "D10", 10, 20, [] { return dihedral(10); }, {}});
        e.push_back({"10T4", "F20", 10, 20, lit(10, {{2, 3, 4, 5, 1, 7, 8, 9, 10, 6}, {6, 8, 10, 7, 9, 1, 3, 5, 2, 4}}),
                     {{K::sylow_cyclic, 2}, {K::sylow_cyclic, 5}}});
        e.push_back({"10T5", "F20 x C2", 10, 40,
                     lit(10, {{2, 3, 4, 5, 1, 7, 8, 9, 10, 6}, {1, 3, 5, 2, 4, 6, 8, 10, 7, 9}, {6, 7, 8, 9, 10, 1, 2, 3, 4, 5}}),
                     {}});
        e.push_back({"10T6", "C5 wr C2", 10, 50, lit(10, {{2, 3, 4, 5, 1, 6, 7, 8, 9, 10}, {6, 7, 8, 9, 10, 1, 2, 3, 4, 5}}),
                     {{K::sylow_not_cyclic, 5}}});
        e.push_back({"10T7", "A5", 10, 60, lit(10, {{5, 6, 7, 1, 8, 9, 2, 10, 3, 4}, {5, 1, 6, 7, 2, 8, 9, 3, 4, 10}}), {}});
        e.push_back({"10T8", "C2^4 x| C5", 10, 80, lit(10, {{3, 4, 5, 6, 7, 8, 9, 10, 1, 2}, {2, 1, 4, 3, 5, 6, 7, 8, 9, 10}}),
                     {{K::sylow_not_cyclic, 2}}});
        e.push_back({"10T10", "1/2[D5^2]2", 10, 100,
                     lit(10, {{2, 3, 4, 5, 1, 6, 7, 8, 9, 10},
                              {1, 2, 3, 4, 5, 7, 8, 9, 10, 6},
                              {1, 5, 4, 3, 2, 6, 10, 9, 8, 7},
                              {6, 10, 9, 8, 7, 1, 2, 3, 4, 5}}),
                     {{K::no_transitive_subgroup_of_order, 50}, {K::has_transitive_subgroup_of_order, 20}}});
        e.push_back({"10T11", "A5 x C2", 10, 120,
                     lit(10, {{2, 3, 4, 5, 1, 7, 8, 9, 10, 6}, {2, 3, 1, 4, 5, 7, 8, 6, 9, 10}, {6, 7, 8, 9, 10, 1, 2, 3, 4, 5}}),
                     {}});
        e.push_back({"10T12", "S5", 10, 120, lit(10, {{2, 3, 4, 5, 1, 7, 8, 9, 10, 6}, {7, 6, 8, 9, 10, 2, 1, 3, 4, 5}}), {}});
        e.push_back({"10T18", "[5^2:4]2_2", 10, 200, lit(10, {{2, 3, 4, 5, 1, 6, 7, 8, 9, 10}, {6, 8, 10, 7, 9, 1, 2, 3, 4, 5}}),
                     {{K::no_proper_transitive_subgroup}}});
        e.push_back({"10T22", "S5 x C2", 10, 240,
                     lit(10, {{2, 3, 4, 5, 1, 7, 8, 9, 10, 6}, {2, 1, 3, 4, 5, 7, 6, 8, 9, 10}, {6, 7, 8, 9, 10, 1, 2, 3, 4, 5}}),
                     {{K::has_transitive_subgroup_of_order, 20},
                      {K::has_transitive_subgroup_of_order, 40},
                      {K::has_transitive_subgroup_of_order, 120}}});
        return e;
    }();
    return list;
}

inline const Entry* find_entry(const std::string& label) {
    for (const auto& e : entries())
        if (e.label == label) return &e;
    return nullptr;
}

namespace detail {

inline std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline std::vector<std::size_t> family_args(const std::string& s, std::size_t prefix) {
    if (s.size() < prefix + 2 || s[prefix] != '(' || s.back() != ')') return {};
    std::vector<std::size_t> out;
    for (const auto& part : split_top(s.substr(prefix + 1, s.size() - prefix - 2), ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) return {};
        out.push_back(std::stoul(part));
    }
    return out;
}

}  // namespace detail

/// Resolves an nTm label or a family expression: C(n), D(n), F(p,m), S(n), A(n),
/// and products such as "F(5,4)*C(2)".
inline PermGroup lookup(const std::string& label) {
    if (const Entry* e = find_entry(label)) return e->build();
    auto factors = detail::split_top(label, '*');
    if (factors.size() > 1) {
        PermGroup g = lookup(factors[0]);
        for (std::size_t i = 1; i < factors.size(); ++i) g = product(g, lookup(factors[i]));
        return g;
    }
    auto bad = [&] {
        return InvalidInput("unknown group label \"" + label +
                            "\"; use an nTm label from `catalog list`, a family such as C(n), D(n), F(p,m), S(n), "
                            "A(n), or supply generators in a JSON group file");
    };
    if (label.empty()) throw bad();
    const std::string head = label.substr(0, 1);
    auto args = detail::family_args(label, 1);
    if (args.empty()) throw bad();
    if (head == "C" && args.size() == 1 && args[0] >= 1) return cyclic(args[0]);
    if (head == "D" && args.size() == 1 && args[0] >= 3) return dihedral(args[0]);
    if (head == "S" && args.size() == 1 && args[0] >= 1) return symmetric(args[0]);
    if (head == "A" && args.size() == 1 && args[0] >= 3) return alternating(args[0]);
    if (head == "F" && args.size() == 2) return frobenius(args[0], args[1]);
    throw bad();
}

struct FactCheck {
    std::string label;
    std::string check;
    bool ok;
    std::string detail;
};

/// Order, transitivity and the embedded facts of every curated entry.
inline std::vector<FactCheck> self_test() {
    std::vector<FactCheck> out;
    for (const auto& e : entries()) {
        PermGroup g = e.build();
        out.push_back({e.label, "degree", g.degree() == e.degree, std::to_string(g.degree())});
        out.push_back({e.label, "order", g.order() == e.order, std::to_string(g.order())});
        out.push_back({e.label, "transitive", g.is_transitive(), ""});
        for (const auto& f : e.facts) {
            switch (f.kind) {
                case FactKind::sylow_cyclic:
                case FactKind::sylow_not_cyclic: {
                    bool cyc = g.sylow(f.value).is_cyclic();
                    bool want = f.kind == FactKind::sylow_cyclic;
                    out.push_back({e.label, "sylow " + std::to_string(f.value) + (want ? " cyclic" : " not cyclic"),
                                   cyc == want, ""});
                    break;
                }
                case FactKind::nilpotent:
                case FactKind::not_nilpotent: {
                    bool want = f.kind == FactKind::nilpotent;
                    out.push_back({e.label, want ? "nilpotent" : "not nilpotent", g.is_nilpotent() == want, ""});
                    break;
                }
                case FactKind::no_proper_transitive_subgroup: {
                    auto table = subgroup_classes(g);
                    std::size_t proper = 0;
                    for (const auto& c : table.classes)
                        if (c.order < g.order() && c.group.is_transitive()) ++proper;
                    out.push_back({e.label, "no proper transitive subgroup", proper == 0,
                                   std::to_string(proper) + " proper transitive classes"});
                    break;
                }
                case FactKind::no_transitive_subgroup_of_order:
                case FactKind::has_transitive_subgroup_of_order: {
                    auto table = subgroup_classes(g);
                    bool found = false;
                    for (const auto& c : table.classes)
                        if (c.order == f.value && c.group.is_transitive()) found = true;
                    bool want = f.kind == FactKind::has_transitive_subgroup_of_order;
                    out.push_back({e.label,
                                   std::string(want ? "has" : "no") + " transitive subgroup of order " +
                                       std::to_string(f.value),
                                   found == want, ""});
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace normtori::catalog
