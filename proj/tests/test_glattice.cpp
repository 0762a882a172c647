#include <gtest/gtest.h>

#include "normtori/catalog.hpp"
#include "normtori/glattice.hpp"

using namespace normtori;

namespace {

// Sends point i to e_i; e_n goes to minus the sum of the others.
IntVector chevalley_image(std::size_t n, std::size_t point) {
    IntVector v(n - 1);
    if (point + 1 < n) v[point] = 1;
    else
        for (auto& x : v) x = -1;
    return v;
}

}  // namespace

TEST(GLattice, CyclicThreeRowAction) {
    auto g = catalog::cyclic(3);
    auto j = chevalley_module(g);
    ASSERT_EQ(j.rank(), 2u);
    EXPECT_EQ(j.row_action(catalog::cycle_perm(3)), (IntMatrix{{0, 1}, {-1, -1}}));
    EXPECT_TRUE(j.verify());
}

TEST(GLattice, SignLatticeOfC2) {
    auto g = catalog::cyclic(2);
    auto j = chevalley_module(g);
    EXPECT_EQ(j.generator_actions()[0], (IntMatrix{{-1}}));
    EXPECT_EQ(dual(j).generator_actions()[0], (IntMatrix{{-1}}));
}

TEST(GLattice, ChevalleyModuleMatchesPointImages) {
    for (const char* label : {"5T3", "6T4", "8T3", "10T3", "9T2"}) {
        auto g = catalog::lookup(label);
        auto j = chevalley_module(g);
        ASSERT_TRUE(j.verify()) << label;
        const std::size_t n = g.degree();
        for (std::size_t e = 0; e < g.order(); ++e) {
            auto a = j.action(e);
            const Perm& p = g.elements()[e];
            for (std::size_t i = 0; i + 1 < n; ++i)
                ASSERT_EQ(a.col(i), chevalley_image(n, p(i))) << label << " element " << e;
        }
    }
}

TEST(GLattice, ProjectionIsEquivariantWithKernelAllOnes) {
    for (const char* label : {"4T3", "7T3", "10T5"}) {
        auto g = catalog::lookup(label);
        auto pr = chevalley_projection(g);
        EXPECT_TRUE(pr.is_equivariant()) << label;
        auto ker = kernel_z(pr.matrix);
        ASSERT_EQ(ker.size(), 1u);
        IntVector ones(g.degree(), Integer(1));
        IntVector neg(g.degree(), Integer(-1));
        EXPECT_TRUE(ker[0] == ones || ker[0] == neg);
    }
}

TEST(GLattice, DualIsAnInvolution) {
    for (const char* label : {"5T3", "6T4", "10T3"}) {
        auto j = chevalley_module(catalog::lookup(label));
        auto jj = dual(dual(j));
        EXPECT_EQ(jj.generator_actions(), j.generator_actions());
        auto d = dual(j);
        EXPECT_TRUE(d.verify());
        for (std::size_t e = 0; e < j.group().order(); ++e)
            ASSERT_EQ(d.action(e).transpose() * j.action(e), IntMatrix::identity(j.rank()));
    }
}

TEST(GLattice, PermutationLatticeFixedRankIsOrbitCount) {
    for (const char* label : {"5T3", "6T4", "8T3", "10T3", "10T5"}) {
        auto g = catalog::lookup(label);
        auto table = subgroup_classes(g);
        for (const auto& k : table.classes) {
            auto ct = cosets(g, k.group);
            auto p = permutation_lattice(ct);
            ASSERT_TRUE(p.verify());
            for (const auto& h : table.classes)
                ASSERT_EQ(fixed_sublattice(p, h.group).size(), orbit_count(h.group, ct))
                    << label << " K=" << k.structure << " H=" << h.structure;
        }
    }
}

TEST(GLattice, FixedSublatticeOfChevalleyModule) {
    // J^G = 0 for a transitive G, and J^1 = J.
    auto g = catalog::lookup("10T3");
    auto j = chevalley_module(g);
    EXPECT_TRUE(fixed_sublattice(j, g).empty());
    EXPECT_EQ(fixed_sublattice(j, PermGroup(g.degree(), {})).size(), 9u);
}

TEST(GLattice, RestrictAgreesWithAction) {
    auto g = catalog::lookup("10T3");
    auto j = chevalley_module(g);
    auto table = subgroup_classes(g);
    for (const auto& c : table.classes) {
        auto r = restrict(j, c.group);
        ASSERT_TRUE(r.verify());
        for (const auto& p : c.group.elements()) ASSERT_EQ(r.action(p), j.action(p));
    }
    EXPECT_THROW(restrict(j, PermGroup(10, {Perm::from_cycles(10, "(1 2 3)")})), NotASubgroup);
}

TEST(GLattice, DirectSumIsBlockDiagonal) {
    auto g = catalog::lookup("5T3");
    auto j = chevalley_module(g);
    auto t = GLattice::trivial(g, 2);
    auto s = direct_sum({j, t, dual(j)});
    EXPECT_EQ(s.rank(), 10u);
    EXPECT_TRUE(s.verify());
    EXPECT_THROW(direct_sum({j, chevalley_module(catalog::cyclic(5))}), InvalidInput);
}

TEST(GLattice, CoordinateMapInvertsSaturatedBasis) {
    auto g = catalog::lookup("10T3");
    auto p = permutation_lattice(g, subgroup_classes(g).classes[1].group);
    for (const auto& c : subgroup_classes(g).classes) {
        auto k = fixed_sublattice(p, c.group);
        if (k.empty()) continue;
        auto l = coordinate_map(k, p.rank());
        EXPECT_TRUE((l * IntMatrix::from_columns(p.rank(), k)).is_identity());
    }
    EXPECT_THROW(coordinate_map({IntVector{Integer(2), Integer(0)}}, 2), InvalidInput);
}

TEST(GLattice, RejectsBadInput) {
    auto g = catalog::cyclic(3);
    EXPECT_THROW(GLattice(g, {}), DimensionMismatch);
    EXPECT_THROW(chevalley_module(PermGroup(4, {Perm::from_cycles(4, "(1 2)")})), InvalidInput);
    GLattice bad(g, {IntMatrix{{2}}});
    EXPECT_FALSE(bad.verify());
    GLattice wrong_order(g, {IntMatrix{{-1}}});
    EXPECT_FALSE(wrong_order.verify());
}

TEST(GMap, EquivarianceCheck) {
    auto g = catalog::cyclic(4);
    auto p = point_lattice(g);
    auto t = GLattice::trivial(g);
    GMap aug{p, t, IntMatrix{{1, 1, 1, 1}}};
    EXPECT_TRUE(aug.is_equivariant());
    GMap bad{p, t, IntMatrix{{1, 0, 0, 0}}};
    EXPECT_FALSE(bad.is_equivariant());
}
