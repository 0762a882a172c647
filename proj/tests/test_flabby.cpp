#include <gtest/gtest.h>

#include <algorithm>

#include "normtori/catalog.hpp"
#include "normtori/cohom.hpp"
#include "normtori/flabby.hpp"

using namespace normtori;

namespace {

// every group of order at most 60 used across the suites
const std::vector<const char*> labels = {"2T1", "3T1", "3T2", "4T1", "4T2", "4T3", "5T2", "5T3", "6T1",
                                         "6T2", "6T3", "6T4", "8T2", "8T3", "8T4", "8T5", "10T3", "5T4"};

}  // namespace

TEST(FlabbyResolution, ExactAndFlabby) {
    for (const char* label : labels) {
        SCOPED_TRACE(label);
        PermGroup g = catalog::lookup(label);
        auto table = subgroup_classes(g);
        GLattice j = chevalley_module(g);
        auto r = flabby_resolution(j, table);
        EXPECT_TRUE(verify_resolution(r));
        EXPECT_EQ(r.P.rank(), r.M.rank() + r.F.rank());
        EXPECT_TRUE(r.F.verify());
        EXPECT_TRUE(is_flabby(r.F, table));

        auto s = coflabby_surjection(dual(j), table);
        EXPECT_TRUE(s.pi.is_equivariant());
        EXPECT_EQ(s.P.rank(), j.rank() + s.C.rank());
        EXPECT_TRUE(is_coflabby(s.C, table));
    }
}

TEST(FlabbyResolution, RankOfFixedPartCountsSummands) {
    for (const char* label : {"4T3", "5T3", "10T3"}) {
        SCOPED_TRACE(label);
        PermGroup g = catalog::lookup(label);
        auto table = subgroup_classes(g);
        auto r = flabby_resolution(chevalley_module(g), table);
        std::size_t summands = 0;
        for (auto [cls, mult] : r.summands) summands += mult;
        // J^G = 0, and the sequence stays exact on G-fixed points up to finite index
        EXPECT_EQ(fixed_sublattice(r.F, g).size(), summands);
    }
}

TEST(FlabbyResolution, SignLatticeHasTrivialClass) {
    // J for C2 on two points is the sign lattice; 0 -> J -> Z[C2] -> Z -> 0
    PermGroup g = catalog::cyclic(2);
    auto r = flabby_resolution(chevalley_module(g), subgroup_classes(g));
    ASSERT_EQ(r.F.rank(), 1u);
    for (const auto& a : r.F.generator_actions()) EXPECT_EQ(a, IntMatrix::identity(1));
    EXPECT_EQ(r.P.rank(), 2u);
}

TEST(FlabbyResolution, Dihedral10Ranks) {
    PermGroup g = catalog::lookup("10T3");
    auto table = subgroup_classes(g);
    GLattice j = chevalley_module(g);
    auto cands = minimize_base(dual(j), table);
    std::vector<std::size_t> ranks;
    for (const auto& b : cands) ranks.push_back(b.rank);
    EXPECT_LE(ranks.front(), 22u);
    EXPECT_NE(std::find(ranks.begin(), ranks.end(), 22u), ranks.end());
    EXPECT_NE(std::find(ranks.begin(), ranks.end(), 30u), ranks.end());
    auto r = flabby_resolution(j, table);
    EXPECT_EQ(r.F.rank(), 13u);
    EXPECT_EQ(r.P.rank(), 22u);
}

TEST(FlabbyResolution, CandidateBasesAreSurjective) {
    PermGroup g = catalog::lookup("5T3");
    auto table = subgroup_classes(g);
    FixedPointChecker chk(dual(chevalley_module(g)), table);
    auto naive = naive_base(chk);
    EXPECT_TRUE(chk.surjective(naive.elements));
    auto cands = minimize_base(chk);
    ASSERT_FALSE(cands.empty());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        EXPECT_TRUE(chk.surjective(cands[i].elements));
        EXPECT_LE(cands[i].rank, naive.rank);
        if (i > 0) EXPECT_LE(cands[i - 1].rank, cands[i].rank);
    }
    // dropping any element of a pruned base loses surjectivity
    const auto& best = cands.front().elements;
    for (std::size_t k = 0; k < best.size(); ++k) {
        auto fewer = best;
        fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
        EXPECT_FALSE(chk.surjective(fewer));
    }
}

TEST(FlabbyResolution, NaiveAndMinimalBasesAreStablyEquivalent) {
    // F from different bases differ by permutation summands, which are invisible to H^-1 and H^1
    PermGroup g = catalog::lookup("4T3");
    auto table = subgroup_classes(g);
    GLattice j = chevalley_module(g);
    auto naive = flabby_resolution(j, table, false);
    auto minimal = flabby_resolution(j, table, true);
    EXPECT_TRUE(verify_resolution(naive));
    EXPECT_GE(naive.F.rank(), minimal.F.rank());
    for (const auto& c : table.classes) {
        EXPECT_EQ(tate_hminus1(naive.F, c.group), tate_hminus1(minimal.F, c.group));
        EXPECT_EQ(h1(naive.F, c.group), h1(minimal.F, c.group));
    }
}

TEST(FlabbyResolution, PermutationLatticeSplits) {
    // a permutation lattice resolves with F of rank 0 when the base is the identity
    PermGroup g = catalog::lookup("5T3");
    auto table = subgroup_classes(g);
    GLattice p = point_lattice(g);
    auto r = flabby_resolution(p, table);
    EXPECT_TRUE(verify_resolution(r));
    EXPECT_EQ(r.F.rank(), 0u);
}
