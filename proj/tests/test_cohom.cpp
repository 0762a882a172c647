#include <gtest/gtest.h>

#include "normtori/catalog.hpp"
#include "normtori/cohom.hpp"

using namespace normtori;

namespace {

AbelianGroupStructure cyclic_group(std::int64_t n) {
    AbelianGroupStructure a;
    if (n > 1) a.elementary_divisors.push_back(Integer(n));
    return a;
}

// Abelianization order of H, from the commutator subgroup.
std::size_t abelianization_order(const PermGroup& h) {
    std::vector<Perm> comm;
    for (const auto& x : h.elements())
        for (const auto& y : h.elements()) comm.push_back(x.inverse() * y.inverse() * x * y);
    PermGroup d(h.degree(), comm);
    return h.order() / d.order();
}

const std::vector<const char*> small_labels = {"3T2", "4T2", "4T3", "5T3", "6T4", "8T3", "10T3"};

}  // namespace

TEST(Cohomology, TrivialLattice) {
    for (const char* label : small_labels) {
        auto g = catalog::lookup(label);
        auto z = GLattice::trivial(g);
        for (const auto& c : subgroup_classes(g).classes) {
            EXPECT_EQ(tate_h0(z, c.group), cyclic_group(static_cast<std::int64_t>(c.order))) << label;
            EXPECT_TRUE(tate_hminus1(z, c.group).is_trivial());
            EXPECT_TRUE(h1(z, c.group).is_trivial());
        }
    }
}

TEST(Cohomology, SignLattice) {
    auto g = catalog::cyclic(2);
    auto s = chevalley_module(g);
    EXPECT_TRUE(tate_h0(s, g).is_trivial());
    EXPECT_EQ(tate_hminus1(s, g), cyclic_group(2));
    EXPECT_EQ(h1(s, g), cyclic_group(2));
    EXPECT_EQ(tate_hminus1(s, g).to_string(), "Z/2");
}

TEST(Cohomology, ShapiroVanishingOnRegularLattice) {
    for (const char* label : small_labels) {
        auto g = catalog::lookup(label);
        auto reg = permutation_lattice(g, PermGroup(g.degree(), {}));
        for (const auto& c : subgroup_classes(g).classes) {
            EXPECT_TRUE(tate_h0(reg, c.group).is_trivial()) << label;
            EXPECT_TRUE(tate_hminus1(reg, c.group).is_trivial()) << label;
            EXPECT_TRUE(h1(reg, c.group).is_trivial()) << label;
        }
    }
}

TEST(Cohomology, PermutationLatticesAreFlabbyAndCoflabby) {
    for (const char* label : small_labels) {
        auto g = catalog::lookup(label);
        auto table = subgroup_classes(g);
        for (const auto& k : table.classes) {
            auto p = permutation_lattice(g, k.group);
            EXPECT_TRUE(is_flabby(p, table)) << label << " " << k.structure;
            EXPECT_TRUE(is_coflabby(p, table)) << label << " " << k.structure;
        }
    }
}

TEST(Cohomology, AugmentationQuotientOfRegularLattice) {
    // 0 -> Z -> Z[G] -> J_G -> 0 shifts degrees: Ĥ^{-1}(J_G) = Z/|G|, H^1(J_G) = H^2(G, Z) of order |G^ab|.
    for (const char* label : {"3T1", "4T2", "3T2", "8T3", "8T4"}) {
        auto g = catalog::lookup(label);
        if (g.order() != g.degree()) continue;
        auto j = chevalley_module(g);
        EXPECT_EQ(tate_hminus1(j, g), cyclic_group(static_cast<std::int64_t>(g.order()))) << label;
        EXPECT_TRUE(tate_h0(j, g).is_trivial()) << label;
        EXPECT_EQ(h1(j, g).torsion_order(), Integer(static_cast<std::int64_t>(abelianization_order(g)))) << label;
    }
}

TEST(Cohomology, GeneratorMethodMatchesBarComplex) {
    for (const char* label : {"3T2", "4T3", "5T3", "6T4", "8T3", "10T3"}) {
        auto g = catalog::lookup(label);
        auto j = chevalley_module(g);
        std::vector<GLattice> lattices = {j, dual(j), direct_sum({j, GLattice::trivial(g)})};
        for (const auto& c : subgroup_classes(g).classes) {
            if (c.order > 12) continue;
            for (const auto& m : lattices) ASSERT_EQ(h1(m, c.group), h1_bar_complex(m, c.group)) << label << " " << c.structure;
        }
    }
}

TEST(Cohomology, DualityBetweenDegreesMinusOneAndOne) {
    for (const char* label : small_labels) {
        auto g = catalog::lookup(label);
        auto j = chevalley_module(g);
        for (const auto& c : subgroup_classes(g).classes) {
            EXPECT_EQ(h1(dual(j), c.group), tate_hminus1(j, c.group)) << label;
            EXPECT_EQ(h1(j, c.group), tate_hminus1(dual(j), c.group)) << label;
        }
    }
}

TEST(Cohomology, CyclicPeriodicity) {
    // For cyclic H, Ĥ^{-1} and H^1 agree.
    for (const char* label : small_labels) {
        auto g = catalog::lookup(label);
        auto j = chevalley_module(g);
        auto d = dual(j);
        for (const auto& c : subgroup_classes(g).classes) {
            if (!c.group.is_cyclic()) continue;
            EXPECT_EQ(h1(j, c.group), tate_hminus1(j, c.group)) << label << " " << c.structure;
            EXPECT_EQ(h1(d, c.group), tate_hminus1(d, c.group)) << label << " " << c.structure;
        }
    }
}

TEST(Cohomology, Additivity) {
    auto g = catalog::lookup("6T4");
    auto j = chevalley_module(g);
    auto d = dual(j);
    auto s = direct_sum({j, d});
    for (const auto& c : subgroup_classes(g).classes) {
        auto a = tate_h0(j, c.group), b = tate_h0(d, c.group), ab = tate_h0(s, c.group);
        EXPECT_EQ(ab.torsion_order(), a.torsion_order() * b.torsion_order());
        auto x = h1(j, c.group), y = h1(d, c.group), xy = h1(s, c.group);
        EXPECT_EQ(xy.torsion_order(), x.torsion_order() * y.torsion_order());
        EXPECT_EQ(xy.free_rank, 0u);
    }
}

TEST(Cohomology, ChevalleyModuleOfKleinFourIsNotFlabby) {
    // Ĥ^{-1}(V4, J) = Ĥ^0(V4, Z) = Z/4 for the regular action of V4.
    auto g = catalog::lookup("4T2");
    auto j = chevalley_module(g);
    EXPECT_EQ(tate_hminus1(j, g), cyclic_group(4));
    EXPECT_FALSE(is_flabby(j, subgroup_classes(g)));
    EXPECT_FALSE(is_coflabby(j, subgroup_classes(g)));
}

TEST(Cohomology, CapsAndErrors) {
    auto g = catalog::symmetric(5);
    auto j = chevalley_module(g);
    CohomLimits lim;
    lim.h1_cap = 60;
    EXPECT_THROW(h1(j, g, lim), CapExceeded);
    EXPECT_NO_THROW(h1(j, catalog::alternating(5), lim));
    auto a5 = chevalley_module(catalog::alternating(5));
    EXPECT_THROW(tate_h0(a5, PermGroup(5, {Perm::from_cycles(5, "(1 2)")})), NotASubgroup);
}
