#pragma once

// G-lattices: integral representations of a permutation group given by one
// unimodular matrix per generator.
//
// Matrices act on column vectors: A_g e_i is the image of the i-th basis
// vector, and A_{gh} = A_g A_h. The transposed (row) convention, where row i
// lists the coordinates of g(u_i), is available through row_action().

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "normtori/intlat.hpp"
#include "normtori/permgrp.hpp"

namespace normtori {

class GLattice {
public:
    GLattice() = default;
    GLattice(PermGroup g, std::vector<IntMatrix> generator_actions)
        : group_(std::move(g)), gens_(std::move(generator_actions)), cache_(std::make_shared<Cache>()) {
        if (gens_.size() != group_.generators().size())
            throw DimensionMismatch("GLattice: " + std::to_string(gens_.size()) + " matrices for " +
                                    std::to_string(group_.generators().size()) + " generators");
        rank_ = gens_.empty() ? 0 : gens_.front().rows();
        for (const auto& a : gens_) {
            if (!a.is_square() || a.rows() != rank_) throw DimensionMismatch("GLattice: action matrices must be square of equal size");
        }
    }
    /// Lattice of the given rank for a group with no generators (or trivial action).
    static GLattice trivial(const PermGroup& g, std::size_t rank = 1) {
        std::vector<IntMatrix> gens(g.generators().size(), IntMatrix::identity(rank));
        GLattice m;
        m.group_ = g;
        m.gens_ = std::move(gens);
        m.rank_ = rank;
        m.cache_ = std::make_shared<Cache>();
        return m;
    }

    [[nodiscard]] const PermGroup& group() const noexcept { return group_; }
    [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
    [[nodiscard]] const std::vector<IntMatrix>& generator_actions() const noexcept { return gens_; }

    /// Action matrix of the element with the given enumeration index.
    [[nodiscard]] IntMatrix action(std::size_t element) const {
        if (element == 0) return IntMatrix::identity(rank_);
        if (memo_allowed()) return memo()[element];
        IntMatrix m = IntMatrix::identity(rank_);
        // element = g_k1 * g_k2 * ... along the factorization chain
        std::vector<std::size_t> word;
        for (std::size_t e = element; e != 0; e = group_.factor_parent(e)) word.push_back(group_.factor_gen(e));
        for (auto it = word.rbegin(); it != word.rend(); ++it) m = gens_[*it] * m;
        return m;
    }
    /// action(element) * v, applied one generator at a time.
    [[nodiscard]] IntVector apply(std::size_t element, IntVector v) const {
        if (memo_allowed()) return memo()[element].apply(v);
        std::vector<std::size_t> word;
        for (std::size_t e = element; e != 0; e = group_.factor_parent(e)) word.push_back(group_.factor_gen(e));
        for (auto it = word.rbegin(); it != word.rend(); ++it) v = gens_[*it].apply(v);
        return v;
    }
    [[nodiscard]] IntMatrix action(const Perm& p) const {
        auto i = group_.index_of(p);
        if (!i) throw NotASubgroup("GLattice::action: " + p.to_cycles() + " is not in the group");
        return action(*i);
    }
    /// Row convention: row i holds the coordinates of g(u_i).
    [[nodiscard]] IntMatrix row_action(const Perm& p) const { return action(p).transpose(); }

    /// Checks that the generator matrices are unimodular and satisfy every relation,
    /// i.e. action(s * x) = A_s action(x) for all generators s and elements x.
    [[nodiscard]] bool verify() const {
        for (const auto& a : gens_)
            if (!is_unimodular(a)) return false;
        const std::size_t n = group_.order();
        for (std::size_t s = 0; s < gens_.size(); ++s)
            for (std::size_t x = 0; x < n; ++x)
                if (action(group_.left_mul_gen(s, x)) != gens_[s] * action(x)) return false;
        return true;
    }

private:
    static constexpr std::size_t memo_budget = 4'000'000;  // matrix entries kept per lattice

    struct Cache {
        std::once_flag once;
        std::vector<IntMatrix> all;
    };

    bool memo_allowed() const { return group_.order() * rank_ * rank_ <= memo_budget; }
    const std::vector<IntMatrix>& memo() const {
        std::call_once(cache_->once, [this] {
            const std::size_t n = group_.order();
            std::vector<IntMatrix> all(n);
            all[0] = IntMatrix::identity(rank_);
            for (std::size_t i = 1; i < n; ++i) all[i] = gens_[group_.factor_gen(i)] * all[group_.factor_parent(i)];
            cache_->all = std::move(all);
        });
        return cache_->all;
    }

    PermGroup group_;
    std::vector<IntMatrix> gens_;
    std::size_t rank_ = 0;
    std::shared_ptr<Cache> cache_;
};

/// Equivariant homomorphism; `matrix` is target.rank() x source.rank().
struct GMap {
    GLattice source;
    GLattice target;
    IntMatrix matrix;

    [[nodiscard]] bool is_equivariant() const {
        if (matrix.rows() != target.rank() || matrix.cols() != source.rank()) return false;
        for (std::size_t s = 0; s < source.generator_actions().size(); ++s)
            if (target.generator_actions()[s] * matrix != matrix * source.generator_actions()[s]) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Constructors

/// Z[G/H] in the coset basis of `cosets(G, H)`.
inline GLattice permutation_lattice(const CosetTable& ct) {
    std::vector<IntMatrix> gens;
    const std::size_t n = ct.size();
    for (const auto& p : ct.generator_action) {
        IntMatrix a(n, n);
        for (std::size_t c = 0; c < n; ++c) a(p(c), c) = 1;
        gens.push_back(std::move(a));
    }
    if (gens.empty()) return GLattice::trivial(ct.group, n);
    return GLattice(ct.group, std::move(gens));
}

inline GLattice permutation_lattice(const PermGroup& g, const PermGroup& h) { return permutation_lattice(cosets(g, h)); }

/// Permutation lattice on the points the group acts on.
inline GLattice point_lattice(const PermGroup& g) {
    std::vector<IntMatrix> gens;
    const std::size_t n = g.degree();
    for (const auto& p : g.generators()) {
        IntMatrix a(n, n);
        for (std::size_t c = 0; c < n; ++c) a(p(c), c) = 1;
        gens.push_back(std::move(a));
    }
    if (gens.empty()) return GLattice::trivial(g, n);
    return GLattice(g, std::move(gens));
}

/// J = Z[points] / Z(e_1 + ... + e_n), basis e_1..e_{n-1} with e_n = -(e_1 + ... + e_{n-1}).
inline GLattice chevalley_module(const PermGroup& g) {
    if (!g.is_transitive()) throw InvalidInput("chevalley_module: group is not transitive");
    const std::size_t n = g.degree();
    if (n == 0) throw InvalidInput("chevalley_module: degree 0");
    std::vector<IntMatrix> gens;
    for (const auto& p : g.generators()) {
        IntMatrix a(n - 1, n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            std::size_t k = p(j);
            if (k + 1 < n) a(k, j) = 1;
            else
                for (std::size_t i = 0; i + 1 < n; ++i) a(i, j) = -1;
        }
        gens.push_back(std::move(a));
    }
    if (gens.empty()) return GLattice::trivial(g, n - 1);
    return GLattice(g, std::move(gens));
}

/// Surjection Z[points] -> J from the defining quotient.
inline GMap chevalley_projection(const PermGroup& g) {
    GLattice src = point_lattice(g), dst = chevalley_module(g);
    const std::size_t n = g.degree();
    IntMatrix q(n - 1, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        q(i, i) = 1;
        q(i, n - 1) = -1;
    }
    return {std::move(src), std::move(dst), std::move(q)};
}

inline GLattice dual(const GLattice& m) {
    std::vector<IntMatrix> gens;
    for (const auto& a : m.generator_actions()) gens.push_back(unimodular_inverse(a).transpose());
    if (gens.empty()) return GLattice::trivial(m.group(), m.rank());
    return GLattice(m.group(), std::move(gens));
}

inline GLattice direct_sum(const std::vector<GLattice>& ms) {
    if (ms.empty()) throw InvalidInput("direct_sum: empty list");
    const PermGroup& g = ms.front().group();
    std::size_t total = 0;
    for (const auto& m : ms) {
        if (!m.group().same_as(g)) throw InvalidInput("direct_sum: lattices over different groups");
        total += m.rank();
    }
    if (g.generators().empty()) return GLattice::trivial(g, total);
    std::vector<IntMatrix> gens;
    for (std::size_t s = 0; s < g.generators().size(); ++s) {
        std::vector<IntMatrix> blocks;
        for (const auto& m : ms) blocks.push_back(m.generator_actions()[s]);
        gens.push_back(IntMatrix::block_diagonal(blocks));
    }
    return GLattice(g, std::move(gens));
}

/// The same lattice viewed as a module over a subgroup.
inline GLattice restrict(const GLattice& m, const PermGroup& sub) {
    if (!sub.is_subgroup_of(m.group())) throw NotASubgroup("restrict: not a subgroup of the lattice's group");
    std::vector<IntMatrix> gens;
    for (const auto& p : sub.generators()) gens.push_back(m.action(p));
    if (gens.empty()) return GLattice::trivial(sub, m.rank());
    return GLattice(sub, std::move(gens));
}

/// Saturated basis of M^H, as the kernel of the stacked (A_h - I) over generators of H.
inline std::vector<IntVector> fixed_sublattice(const GLattice& m, const PermGroup& h) {
    if (!h.is_subgroup_of(m.group())) throw NotASubgroup("fixed_sublattice: not a subgroup of the lattice's group");
    std::vector<IntMatrix> blocks;
    for (const auto& p : h.generators()) {
        IntMatrix a = m.action(p);
        for (std::size_t i = 0; i < m.rank(); ++i) a(i, i) -= 1;
        blocks.push_back(std::move(a));
    }
    if (blocks.empty()) return kernel_z(IntMatrix(0, m.rank()));
    return kernel_z(IntMatrix::vstack(blocks));
}

/// Matrix L with L K = I for a saturated basis K (columns), so that L y gives the
/// coordinates of any y in the span of K.
inline IntMatrix coordinate_map(const std::vector<IntVector>& basis, std::size_t dim) {
    if (basis.empty()) return IntMatrix(0, dim);
    IntMatrix k = IntMatrix::from_columns(dim, basis);
    auto d = snf(k);
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!d.s(i, i).is_one()) throw InvalidInput("coordinate_map: basis does not span a saturated sublattice");
    return d.v * d.u.row_block(0, basis.size());
}

}  // namespace normtori
