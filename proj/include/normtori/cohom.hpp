#pragma once

// Tate cohomology of G-lattices in degrees -1, 0 and 1, and the flabby /
// coflabby tests over a table of subgroup classes.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "normtori/glattice.hpp"

namespace normtori {

struct AbelianGroupStructure {
    std::vector<Integer> elementary_divisors;  // all > 1, each dividing the next
    std::size_t free_rank = 0;

    [[nodiscard]] bool is_trivial() const { return elementary_divisors.empty() && free_rank == 0; }
    /// Order of the torsion part.
    [[nodiscard]] Integer torsion_order() const {
        Integer o = 1;
        for (const auto& d : elementary_divisors) o *= d;
        return o;
    }
    [[nodiscard]] std::string to_string() const {
        if (is_trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& d : elementary_divisors) {
            os << (first ? "" : " + ") << "Z/" << d;
            first = false;
        }
        for (std::size_t i = 0; i < free_rank; ++i) {
            os << (first ? "" : " + ") << "Z";
            first = false;
        }
        return os.str();
    }
    friend bool operator==(const AbelianGroupStructure&, const AbelianGroupStructure&) = default;
};

struct CohomLimits {
    std::size_t h1_cap = 200;  // largest |H| for which H^1 is computed
};

namespace detail {

/// Z^k modulo the column span of `rel` (k x m).
inline AbelianGroupStructure quotient_structure(const IntMatrix& rel, std::size_t k) {
    AbelianGroupStructure out;
    if (k == 0) return out;
    std::vector<Integer> divs = rel.cols() == 0 ? std::vector<Integer>{} : elementary_divisors(rel);
    for (const auto& d : divs)
        if (!d.is_one()) out.elementary_divisors.push_back(d);
    out.free_rank = k - divs.size();
    return out;
}

inline std::vector<std::size_t> subgroup_indices(const GLattice& m, const PermGroup& h) {
    if (!h.is_subgroup_of(m.group())) throw NotASubgroup("subgroup is not contained in the lattice's group");
    std::vector<std::size_t> idx;
    for (const auto& p : h.elements()) idx.push_back(*m.group().index_of(p));
    return idx;
}

}  // namespace detail

/// N_H = sum of the action matrices over all elements of H.
inline IntMatrix norm_matrix(const GLattice& m, const PermGroup& h) {
    h.require_order_cap("norm_matrix subgroup");
    IntMatrix n(m.rank(), m.rank());
    for (auto i : detail::subgroup_indices(m, h)) n += m.action(i);
    return n;
}

/// Ĥ^0(H, M) = M^H / N_H M.
inline AbelianGroupStructure tate_h0(const GLattice& m, const PermGroup& h) {
    auto fixed = fixed_sublattice(m, h);
    if (fixed.empty()) return {};
    IntMatrix nm = norm_matrix(m, h);
    IntMatrix coords = coordinate_map(fixed, m.rank()) * nm;
    return detail::quotient_structure(coords, fixed.size());
}

/// Ĥ^{-1}(H, M) = ker N_H / I_H M, with I_H M spanned by (A_h - 1) M over generators h of H.
inline AbelianGroupStructure tate_hminus1(const GLattice& m, const PermGroup& h) {
    IntMatrix nm = norm_matrix(m, h);
    auto ker = kernel_z(nm);
    if (ker.empty()) return {};
    std::vector<IntMatrix> blocks;
    for (const auto& p : h.generators()) {
        IntMatrix a = m.action(p);
        for (std::size_t i = 0; i < m.rank(); ++i) a(i, i) -= 1;
        blocks.push_back(std::move(a));
    }
    IntMatrix aug(m.rank(), 0);
    for (const auto& b : blocks) aug = IntMatrix::hstack(aug, b);
    IntMatrix coords = coordinate_map(ker, m.rank()) * aug;
    return detail::quotient_structure(coords, ker.size());
}

/// H^1(H, M) = Z^1 / B^1. A crossed homomorphism is determined by its values on
/// the generators of H; extending along the enumeration of H and imposing
/// f(s g) = f(s) + s f(g) for all generators s and elements g cuts out Z^1.
inline AbelianGroupStructure h1(const GLattice& m, const PermGroup& h, CohomLimits lim = {}) {
    if (h.order() > lim.h1_cap) throw CapExceeded("h1 subgroup order", lim.h1_cap, h.order());
    detail::subgroup_indices(m, h);
    const std::size_t n = m.rank();
    const auto& gens = h.generators();
    const std::size_t t = gens.size(), unknowns = t * n, order = h.order();
    if (t == 0 || n == 0) return {};
    std::vector<IntMatrix> act(t);
    for (std::size_t s = 0; s < t; ++s) act[s] = m.action(gens[s]);
    // f(x_i) = C_i * u, where u stacks the unknown values f(s_1), ..., f(s_t)
    std::vector<IntMatrix> c(order);
    c[0] = IntMatrix(n, unknowns);
    for (std::size_t i = 1; i < order; ++i) {
        std::size_t s = h.factor_gen(i), p = h.factor_parent(i);
        IntMatrix ci = act[s] * c[p];
        for (std::size_t r = 0; r < n; ++r) ci(r, s * n + r) += 1;
        c[i] = std::move(ci);
    }
    LatticeBasis rows(unknowns);
    for (std::size_t s = 0; s < t; ++s)
        for (std::size_t x = 0; x < order; ++x) {
            // f(s x) - f(s) - s f(x) = 0
            IntMatrix d = c[h.left_mul_gen(s, x)] - act[s] * c[x];
            for (std::size_t r = 0; r < n; ++r) d(r, s * n + r) -= 1;
            for (std::size_t r = 0; r < n; ++r) {
                IntVector row = d.row(r);
                if (std::any_of(row.begin(), row.end(), [](const Integer& v) { return !v.is_zero(); }))
                    rows.insert(std::move(row));
            }
        }
    auto basis = rows.basis();
    auto z1 = basis.empty() ? kernel_z(IntMatrix(0, unknowns)) : kernel_z(IntMatrix::from_rows(unknowns, basis));
    if (z1.empty()) return {};
    // coboundaries: m -> (s_j m - m)_j
    IntMatrix b(unknowns, n);
    for (std::size_t s = 0; s < t; ++s)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t col = 0; col < n; ++col) b(s * n + r, col) = act[s](r, col) - Integer(r == col ? 1 : 0);
    IntMatrix coords = coordinate_map(z1, unknowns) * b;
    return detail::quotient_structure(coords, z1.size());
}

/// H^1 from the full bar complex: unknowns f(x) for every x in H and the cocycle
/// identity over all pairs. Quadratic in |H|; kept as an independent check.
inline AbelianGroupStructure h1_bar_complex(const GLattice& m, const PermGroup& h) {
    const std::size_t n = m.rank(), order = h.order();
    if (n == 0) return {};
    std::vector<std::size_t> gidx = detail::subgroup_indices(m, h);
    std::vector<IntMatrix> act(order);
    for (std::size_t x = 0; x < order; ++x) act[x] = m.action(h.elements()[x]);
    const std::size_t unknowns = order * n;
    IntMatrix eq(order * order * n, unknowns);
    std::size_t row = 0;
    for (std::size_t x = 0; x < order; ++x)
        for (std::size_t y = 0; y < order; ++y) {
            std::size_t xy = *h.index_of(h.elements()[x] * h.elements()[y]);
            for (std::size_t r = 0; r < n; ++r, ++row) {
                eq(row, xy * n + r) += 1;
                eq(row, x * n + r) -= 1;
                for (std::size_t col = 0; col < n; ++col) eq(row, y * n + col) -= act[x](r, col);
            }
        }
    auto z1 = kernel_z(eq);
    if (z1.empty()) return {};
    IntMatrix b(unknowns, n);
    for (std::size_t x = 0; x < order; ++x)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t col = 0; col < n; ++col) b(x * n + r, col) = act[x](r, col) - Integer(r == col ? 1 : 0);
    IntMatrix coords = coordinate_map(z1, unknowns) * b;
    return detail::quotient_structure(coords, z1.size());
}

inline bool is_flabby(const GLattice& m, const SubgroupClassTable& table) {
    for (const auto& c : table.classes)
        if (!tate_hminus1(m, c.group).is_trivial()) return false;
    return true;
}

inline bool is_coflabby(const GLattice& m, const SubgroupClassTable& table, CohomLimits lim = {}) {
    for (const auto& c : table.classes)
        if (!h1(m, c.group, lim).is_trivial()) return false;
    return true;
}

}  // namespace normtori
