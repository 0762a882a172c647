#pragma once

// Flabby resolutions 0 -> M -> P -> F -> 0 with P a permutation lattice and F
// flabby, built by resolving the dual lattice with a coflabby surjection and
// dualizing back.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "normtori/cohom.hpp"

namespace normtori {

/// One summand Z[G/U] of a permutation base, mapping the coset U to `vector` in M^U.
struct BaseElement {
    std::size_t class_index = 0;  // U is table.classes[class_index]
    std::size_t fixed_index = 0;  // position of `vector` in the fixed-sublattice basis of U
    IntVector vector;

    friend bool operator==(const BaseElement& a, const BaseElement& b) {
        return a.class_index == b.class_index && a.fixed_index == b.fixed_index;
    }
};

struct PermutationBase {
    std::vector<BaseElement> elements;
    std::size_t rank = 0;  // sum of the indices [G:U]
    std::string strategy;
};

struct BaseSearchOptions {
    std::size_t restarts = 4;  // randomized deletion orders beyond the deterministic candidates
    std::uint64_t seed = 0;
};

struct CoflabbySurjection {
    GLattice P;
    GMap pi;      // P -> M
    GLattice C;   // kernel of pi
    IntMatrix kernel_basis;  // columns span C inside P
    PermutationBase base;
};

struct FlabbyResolution {
    GLattice M;
    GLattice P;
    std::vector<std::pair<std::size_t, std::size_t>> summands;  // (class index, multiplicity)
    PermutationBase base;
    GMap inject;   // M -> P
    GMap project;  // P -> F
    GLattice F;
};

struct FlabbyClassRep {
    GLattice F;
    FlabbyResolution resolution;
};

namespace detail {

/// Orbits of H on the cosets of a table, as lists of coset indices.
inline std::vector<std::vector<std::size_t>> coset_orbits(const PermGroup& h, const CosetTable& ct) {
    const std::size_t n = ct.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& s : h.generators())
        for (std::size_t c = 0; c < n; ++c) parent[find(c)] = find(ct.act(s, c));
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < n; ++c) groups[find(c)].push_back(c);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace detail

/// Decides whether a permutation base maps onto M^W for every subgroup W of the
/// group. Conjugates of a subgroup behave alike, so class representatives suffice.
class FixedPointChecker {
public:
    FixedPointChecker(GLattice m, const SubgroupClassTable& table) : m_(std::move(m)), table_(&table) {
        const std::size_t k = table.classes.size();
        fixed_.resize(k);
        coord_.resize(k);
        cosets_.resize(k);
        for (std::size_t w = 0; w < k; ++w) {
            fixed_[w] = fixed_sublattice(m_, table.classes[w].group);
            coord_[w] = coordinate_map(fixed_[w], m_.rank());
        }
    }

    [[nodiscard]] const GLattice& lattice() const noexcept { return m_; }
    [[nodiscard]] const SubgroupClassTable& table() const noexcept { return *table_; }
    [[nodiscard]] const std::vector<IntVector>& fixed_basis(std::size_t cls) const { return fixed_[cls]; }
    [[nodiscard]] std::size_t index_of_class(std::size_t cls) const {
        return table_->group.order() / table_->classes[cls].order;
    }

    const CosetTable& coset_table(std::size_t cls) {
        if (!cosets_[cls]) cosets_[cls] = cosets(table_->group, table_->classes[cls].group);
        return *cosets_[cls];
    }

    [[nodiscard]] BaseElement element(std::size_t cls, std::size_t k) const { return {cls, k, fixed_[cls][k]}; }

    /// Images in M^W coordinates of the W-orbit sums on G/U for the element (U, v).
    const std::vector<IntVector>& contributions(const BaseElement& e, std::size_t w) {
        auto key = std::make_tuple(e.class_index, e.fixed_index, w);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<IntVector> out;
        if (!fixed_[w].empty()) {
            const auto& ct = coset_table(e.class_index);
            const auto& images = coset_images(e);
            for (const auto& orbit : detail::coset_orbits(table_->classes[w].group, ct)) {
                IntVector sum(m_.rank());
                for (auto c : orbit)
                    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += images[c][i];
                IntVector y = coord_[w].apply(sum);
                if (std::any_of(y.begin(), y.end(), [](const Integer& x) { return !x.is_zero(); })) out.push_back(std::move(y));
            }
        }
        return cache_.emplace(key, std::move(out)).first->second;
    }

    /// g_c v for each coset c = g_c U.
    const std::vector<IntVector>& coset_images(const BaseElement& e) {
        auto key = std::make_pair(e.class_index, e.fixed_index);
        auto it = images_.find(key);
        if (it != images_.end()) return it->second;
        const auto& ct = coset_table(e.class_index);
        std::vector<IntVector> out;
        for (auto r : ct.rep_indices) out.push_back(m_.apply(r, e.vector));
        return images_.emplace(key, std::move(out)).first->second;
    }

    bool surjective_at(const std::vector<BaseElement>& base, std::size_t w) {
        const std::size_t f = fixed_[w].size();
        if (f == 0) return true;
        LatticeBasis lat(f);
        for (const auto& e : base) {
            for (const auto& y : contributions(e, w)) {
                lat.insert(y);
                if (lat.is_full()) return true;
            }
        }
        return lat.is_full();
    }

    bool surjective(const std::vector<BaseElement>& base) {
        for (std::size_t w = table_->classes.size(); w-- > 0;)
            if (!surjective_at(base, w)) return false;
        return true;
    }

private:
    GLattice m_;
    const SubgroupClassTable* table_;
    std::vector<std::vector<IntVector>> fixed_;
    std::vector<IntMatrix> coord_;
    std::vector<std::optional<CosetTable>> cosets_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<IntVector>> cache_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<IntVector>> images_;
};

inline std::size_t base_rank(const std::vector<BaseElement>& base, const SubgroupClassTable& table) {
    std::size_t r = 0;
    for (const auto& e : base) r += table.group.order() / table.classes[e.class_index].order;
    return r;
}

/// Every class representative U with every basis vector of M^U.
inline PermutationBase naive_base(FixedPointChecker& chk) {
    PermutationBase b;
    b.strategy = "naive";
    for (std::size_t u = 0; u < chk.table().classes.size(); ++u)
        for (std::size_t k = 0; k < chk.fixed_basis(u).size(); ++k) b.elements.push_back(chk.element(u, k));
    b.rank = base_rank(b.elements, chk.table());
    return b;
}

namespace detail {

/// Drops elements in the given order whenever the rest still surjects on all fixed points.
inline std::vector<BaseElement> prune(FixedPointChecker& chk, std::vector<BaseElement> base, const std::vector<std::size_t>& order) {
    std::vector<bool> alive(base.size(), true);
    for (auto i : order) {
        alive[i] = false;
        std::vector<BaseElement> rest;
        for (std::size_t j = 0; j < base.size(); ++j)
            if (alive[j]) rest.push_back(base[j]);
        if (!chk.surjective(rest)) alive[i] = true;
    }
    std::vector<BaseElement> out;
    for (std::size_t j = 0; j < base.size(); ++j)
        if (alive[j]) out.push_back(base[j]);
    return out;
}

/// Indices sorted so that the summands of largest rank are tried first.
inline std::vector<std::size_t> largest_first(const std::vector<BaseElement>& base, const SubgroupClassTable& table) {
    std::vector<std::size_t> order(base.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return table.classes[base[a].class_index].order < table.classes[base[b].class_index].order;
    });
    return order;
}

/// Walks the classes from the largest subgroup down, adding fixed basis vectors
/// of M^W until the base surjects onto M^W.
inline std::vector<BaseElement> grow(FixedPointChecker& chk, const std::vector<std::size_t>& class_order) {
    std::vector<BaseElement> base;
    for (auto w : class_order) {
        for (std::size_t k = 0; k < chk.fixed_basis(w).size() && !chk.surjective_at(base, w); ++k) {
            base.push_back(chk.element(w, k));
        }
    }
    return base;
}

}  // namespace detail

/// Candidate permutation bases for M, each surjective on U-fixed points for every
/// subgroup U, sorted by rank. Deterministic for a fixed seed.
inline std::vector<PermutationBase> minimize_base(FixedPointChecker& chk, BaseSearchOptions opt = {}) {
    const auto& table = chk.table();
    std::vector<PermutationBase> out;
    auto add = [&](std::vector<BaseElement> els, std::string strategy) {
        PermutationBase b{std::move(els), 0, std::move(strategy)};
        b.rank = base_rank(b.elements, table);
        out.push_back(std::move(b));
    };

    PermutationBase naive = naive_base(chk);
    auto order = detail::largest_first(naive.elements, table);
    add(detail::prune(chk, naive.elements, order), "naive-pruned");
    std::reverse(order.begin(), order.end());
    add(detail::prune(chk, naive.elements, order), "naive-pruned-smallest-first");

    std::vector<std::size_t> classes(table.classes.size());
    std::iota(classes.begin(), classes.end(), 0);
    std::reverse(classes.begin(), classes.end());
    auto grown = detail::grow(chk, classes);
    add(detail::prune(chk, grown, detail::largest_first(grown, table)), "grow-pruned");

    for (std::size_t r = 0; r < opt.restarts; ++r) {
        std::mt19937_64 rng(detail::splitmix64(opt.seed ^ (r + 1)));
        std::vector<std::size_t> order(naive.elements.size());
        std::iota(order.begin(), order.end(), 0);
        detail::seeded_shuffle(order, rng);
        add(detail::prune(chk, naive.elements, order), "random-prune-" + std::to_string(r));
    }
    // fewer summands first among equal ranks
    std::stable_sort(out.begin(), out.end(), [](const PermutationBase& a, const PermutationBase& b) {
        return std::make_pair(a.rank, a.elements.size()) < std::make_pair(b.rank, b.elements.size());
    });
    return out;
}

inline std::vector<PermutationBase> minimize_base(const GLattice& m, const SubgroupClassTable& table, BaseSearchOptions opt = {}) {
    FixedPointChecker chk(m, table);
    return minimize_base(chk, opt);
}

/// P = sum of Z[G/U_i] with pi(coset g U_i) = g v_i, and C = ker pi.
inline CoflabbySurjection surjection_from_base(FixedPointChecker& chk, PermutationBase base, bool with_kernel = true) {
    const GLattice& m = chk.lattice();
    const PermGroup& g = m.group();
    std::vector<GLattice> parts;
    std::vector<IntVector> columns;
    for (const auto& e : base.elements) {
        parts.push_back(permutation_lattice(chk.coset_table(e.class_index)));
        for (const auto& img : chk.coset_images(e)) columns.push_back(img);
    }
    GLattice p = parts.empty() ? GLattice::trivial(g, 0) : direct_sum(parts);
    IntMatrix pi = columns.empty() ? IntMatrix(m.rank(), 0) : IntMatrix::from_columns(m.rank(), columns);
    if (!with_kernel) {
        GMap map{p, m, std::move(pi)};
        return {std::move(p), std::move(map), GLattice{}, IntMatrix{}, std::move(base)};
    }
    auto ker = kernel_z(pi);
    IntMatrix k = ker.empty() ? IntMatrix(p.rank(), 0) : IntMatrix::from_columns(p.rank(), ker);
    std::vector<IntMatrix> cgens;
    for (const auto& a : p.generator_actions()) {
        auto x = solve_columns(k, a * k);
        if (!x) throw InternalError("coflabby surjection: kernel is not stable under the group");
        cgens.push_back(std::move(*x));
    }
    GLattice c = cgens.empty() ? GLattice::trivial(g, ker.size()) : GLattice(g, std::move(cgens));
    GMap map{p, m, std::move(pi)};
    return {std::move(p), std::move(map), std::move(c), std::move(k), std::move(base)};
}

/// Surjection onto M from a permutation lattice, onto fixed points for every subgroup.
/// With `minimize` false the naive base of all fixed-basis vectors is used.
inline CoflabbySurjection coflabby_surjection(const GLattice& m, const SubgroupClassTable& table, bool minimize = true,
                                              BaseSearchOptions opt = {}) {
    FixedPointChecker chk(m, table);
    PermutationBase base = minimize ? minimize_base(chk, opt).front() : naive_base(chk);
    if (!chk.surjective(base.elements)) throw InternalError("coflabby surjection: base is not surjective on fixed points");
    return surjection_from_base(chk, std::move(base));
}

/// Dualizes a coflabby surjection onto M° into 0 -> M -> P -> F -> 0.
inline FlabbyResolution resolution_from_surjection(const GLattice& m, const SubgroupClassTable& table, CoflabbySurjection s) {
    std::map<std::size_t, std::size_t> mult;
    for (const auto& e : s.base.elements) ++mult[e.class_index];
    FlabbyResolution r;
    r.M = m;
    r.P = s.P;  // permutation lattices are self-dual in the coset basis
    for (auto [cls, n] : mult) r.summands.emplace_back(cls, n);
    r.F = dual(s.C);
    r.inject = GMap{m, r.P, s.pi.matrix.transpose()};
    r.project = GMap{r.P, r.F, s.kernel_basis.transpose()};
    r.base = std::move(s.base);
    (void)table;
    return r;
}

inline FlabbyResolution flabby_resolution(const GLattice& m, const SubgroupClassTable& table, bool minimize = true,
                                          BaseSearchOptions opt = {}) {
    GLattice md = dual(m);
    return resolution_from_surjection(m, table, coflabby_surjection(md, table, minimize, opt));
}

/// Exactness of 0 -> M -> P -> F -> 0 by exact linear algebra, plus equivariance.
inline bool verify_resolution(const FlabbyResolution& r) {
    if (r.P.rank() != r.M.rank() + r.F.rank()) return false;
    if (!r.inject.is_equivariant() || !r.project.is_equivariant()) return false;
    if (!(r.project.matrix * r.inject.matrix).is_zero()) return false;
    auto all_ones = [](const IntMatrix& a, std::size_t expect) {
        if (expect == 0) return true;
        auto d = elementary_divisors(a);
        return d.size() == expect && std::all_of(d.begin(), d.end(), [](const Integer& x) { return x.is_one(); });
    };
    // saturated injective image and surjective projection; with the rank identity
    // this makes the image of inject equal to the kernel of project
    return all_ones(r.inject.matrix, r.M.rank()) && all_ones(r.project.matrix, r.F.rank());
}

inline FlabbyClassRep flabby_class(const GLattice& m, const SubgroupClassTable& table, BaseSearchOptions opt = {}) {
    auto r = flabby_resolution(m, table, true, opt);
    GLattice f = r.F;
    return {std::move(f), std::move(r)};
}

}  // namespace normtori
