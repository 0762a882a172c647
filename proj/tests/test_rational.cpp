#include <gtest/gtest.h>

#include "normtori/catalog.hpp"
#include "normtori/rational.hpp"

using namespace normtori;

namespace {

GLattice flabby_of(const PermGroup& g, const SubgroupClassTable& table) {
    return flabby_class(chevalley_module(g), table).F;
}

ClassifyConfig quick() {
    ClassifyConfig cfg;
    cfg.trials = 20000;
    cfg.time_budget_seconds = 10;
    return cfg;
}

}  // namespace

TEST(Invertibility, AgreesWithTheoremRules) {
    // groups whose retract verdict is settled without lattice computations
    for (const char* label : {"3T2", "4T1", "4T2", "4T3", "5T2", "5T3", "6T1", "6T2", "8T3", "8T4", "8T5", "10T4"}) {
        SCOPED_TRACE(label);
        PermGroup g = catalog::lookup(label);
        auto rules = theorem_rules(g, g.point_stabilizer(0));
        ASSERT_NE(rules.retract.value, Truth::unknown) << label;
        auto table = subgroup_classes(g);
        auto inv = is_invertible_class(flabby_of(g, table), table);
        EXPECT_EQ(inv.invertible, rules.retract.value == Truth::yes);
        if (inv.invertible) {
            EXPECT_TRUE(inv.verified);
            EXPECT_EQ(inv.pi * inv.section, IntMatrix::identity(inv.pi.rows()));
        }
    }
}

TEST(Invertibility, PermutationLatticeIsInvertible) {
    PermGroup g = catalog::lookup("5T3");
    auto table = subgroup_classes(g);
    auto inv = is_invertible_class(point_lattice(g), table);
    EXPECT_TRUE(inv.invertible);
    EXPECT_TRUE(inv.verified);
}

TEST(Rules, GaloisCases) {
    auto c6 = classify_galois(catalog::cyclic(6));
    EXPECT_EQ(c6.retract.value, Truth::yes);
    EXPECT_EQ(c6.stably.value, Truth::yes);
    auto s3 = classify_galois(catalog::lookup("6T2"));
    EXPECT_EQ(s3.stably.value, Truth::yes);
    auto v4 = classify_galois(catalog::lookup("4T2"));
    EXPECT_EQ(v4.retract.value, Truth::no);
    EXPECT_EQ(v4.stably.value, Truth::no);
    // C4 x| C4 style obstruction: Q8 is Sylow-noncyclic
    EXPECT_EQ(classify_galois(catalog::lookup("8T5")).retract.value, Truth::no);
}

TEST(Rules, SylowCyclic) {
    PermGroup d5 = catalog::dihedral(5);
    auto r = classify_sylow_cyclic(d5, d5.point_stabilizer(0));
    EXPECT_EQ(r.retract.value, Truth::yes);
    EXPECT_EQ(r.stably.value, Truth::yes);
    PermGroup f20 = catalog::frobenius(5, 4);
    auto f = classify_sylow_cyclic(f20, f20.point_stabilizer(0));
    EXPECT_EQ(f.retract.value, Truth::yes);
    EXPECT_EQ(f.stably.value, Truth::no);
    EXPECT_THROW(classify_sylow_cyclic(d5, PermGroup(5, {})), InvalidInput);
    EXPECT_THROW(classify_sylow_cyclic(catalog::lookup("4T2"), catalog::lookup("4T2").point_stabilizer(0)), InvalidInput);
}

TEST(Rules, KnownFamilies) {
    auto s3 = known_family_rule(catalog::symmetric(3));
    ASSERT_TRUE(s3);
    EXPECT_EQ(s3->stably.value, Truth::yes);
    auto s5 = known_family_rule(catalog::symmetric(5));
    EXPECT_EQ(s5->retract.value, Truth::yes);
    EXPECT_EQ(s5->stably.value, Truth::no);
    auto a5 = known_family_rule(catalog::alternating(5));
    EXPECT_EQ(a5->stably.value, Truth::yes);
    auto s4 = known_family_rule(catalog::symmetric(4));
    EXPECT_EQ(s4->retract.value, Truth::no);
    auto a4 = known_family_rule(catalog::alternating(4));
    EXPECT_EQ(a4->retract.value, Truth::no);
    auto a7 = known_family_rule(catalog::alternating(7));
    EXPECT_EQ(a7->retract.value, Truth::yes);
    EXPECT_EQ(a7->stably.value, Truth::no);
    EXPECT_FALSE(known_family_rule(catalog::dihedral(5)));
}

TEST(Rules, NilpotentAndSylowReduction) {
    PermGroup d4 = catalog::lookup("4T3");
    EXPECT_EQ(nilpotent_rule(d4, d4.point_stabilizer(0)).value, Truth::no);
    EXPECT_EQ(nilpotent_rule(d4, PermGroup(4, {})).value, Truth::unknown);
    EXPECT_EQ(sylow_reduction(catalog::lookup("8T14")).value, Truth::no);
    EXPECT_EQ(sylow_reduction(catalog::lookup("5T3")).value, Truth::unknown);
}

TEST(Family, Arithmetic) {
    auto a = psl_family_params(3, 2);
    EXPECT_EQ(a.p, Integer(7));
    EXPECT_EQ(a.order_H, Integer(21));
    EXPECT_EQ(a.order_G, Integer(168));
    auto b = psl_family_params(2, 4);
    EXPECT_EQ(b.p, Integer(5));
    EXPECT_EQ(b.order_H, Integer(10));
    EXPECT_EQ(b.order_G, Integer(60));
    EXPECT_EQ(b.characteristic, 2u);
    EXPECT_EQ(b.e, 2u);
    auto msg = [](std::size_t d, std::size_t q) {
        try {
            (void)psl_family_params(d, q);
        } catch (const InvalidInput& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(msg(5, 3).find("p not prime"), std::string::npos);
    EXPECT_NE(msg(4, 2).find("d composite"), std::string::npos);
    EXPECT_NE(msg(4, 3).find("d composite"), std::string::npos);
    EXPECT_NE(msg(2, 6).find("not a prime power"), std::string::npos);
}

TEST(PossibilitySystem, Dihedral10) {
    PermGroup g = catalog::lookup("10T3");
    auto table = subgroup_classes(g);
    auto sys = possibility_vectors(flabby_of(g, table), table);
    ASSERT_TRUE(sys.feasible);
    ASSERT_FALSE(sys.candidates.empty());
    // every candidate solves the system and balances ranks
    for (const auto& v : sys.candidates) {
        ASSERT_EQ(v.size(), table.classes.size() + 1);
        EXPECT_EQ(v.back(), -1);
        IntVector x;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) x.push_back(Integer(v[i]));
        // equations act on the class columns; F enters through the right-hand side
        EXPECT_EQ(sys.equations.apply(x), sys.rhs);
    }
}

TEST(PossibilitySystem, Witnesses) {
    // 2x = 1 is rationally solvable, blocked by the divisor 2
    auto w = detail::witness_infeasible(IntMatrix(1, 1, {Integer(2)}), IntVector{Integer(1)});
    EXPECT_TRUE(w.rational_feasible);
    ASSERT_TRUE(w.obstruction);
    EXPECT_TRUE(w.consistent());
    // x = 0 and x = 1 is inconsistent over Q and modulo every prime
    auto v = detail::witness_infeasible(IntMatrix(2, 1, {Integer(1), Integer(1)}), IntVector{Integer(0), Integer(1)});
    EXPECT_FALSE(v.rational_feasible);
    EXPECT_TRUE(v.consistent());
}

TEST(Certificate, FoundVerifiedAndFragile) {
    PermGroup g = catalog::lookup("10T3");
    auto rep = classify(g, ClassifyConfig{}, "10T3");
    ASSERT_EQ(rep.stably.value, Truth::yes);
    ASSERT_TRUE(rep.stably.certificate);
    const auto& cert = *rep.stably.certificate;
    EXPECT_TRUE(verify_certificate(cert));
    EXPECT_EQ(cert.matrix.rows(), cert.matrix.cols());

    auto bad = cert;
    bad.matrix(0, 0) += 1;
    EXPECT_FALSE(verify_certificate(bad));
    auto wrong_vec = cert;
    wrong_vec.vector[0] += 1;
    EXPECT_FALSE(verify_certificate(wrong_vec));
    auto wrong_f = cert;
    wrong_f.f_generators[0] = wrong_f.f_generators[1];
    EXPECT_FALSE(verify_certificate(wrong_f));
}

TEST(Certificate, SidesRejectBadVectors) {
    PermGroup g = catalog::lookup("5T3");
    auto table = subgroup_classes(g);
    GLattice f = flabby_of(g, table);
    std::vector<PermGroup> classes;
    for (const auto& c : table.classes) classes.push_back(c.group);
    std::vector<std::int64_t> v(classes.size() + 1, 0);
    EXPECT_THROW(detail::build_sides(f, classes, std::vector<std::int64_t>(classes.size(), 0)), InvalidInput);
    EXPECT_THROW(detail::build_sides(f, classes, v), InvalidInput);
    v.back() = -1;
    EXPECT_THROW(detail::build_sides(f, classes, v), InvalidInput);
}

TEST(Pipeline, LogicalClosureAndTrail) {
    auto rep = classify(catalog::lookup("10T6"), quick(), "10T6");
    EXPECT_EQ(rep.retract.value, Truth::no);
    EXPECT_EQ(rep.stably.value, Truth::no);
    EXPECT_FALSE(rep.trail.empty());

    ClassifyConfig only_rules = quick();
    only_rules.skip_direct = true;
    auto partial = classify(catalog::lookup("10T6"), only_rules, "10T6");
    EXPECT_EQ(partial.retract.value, Truth::unknown);
}

TEST(Pipeline, ComputationAgreesWithRules) {
    // groups decided by rules, re-decided from the lattice alone
    for (const char* label : {"5T2", "5T3", "6T2", "10T4"}) {
        SCOPED_TRACE(label);
        PermGroup g = catalog::lookup(label);
        auto rules = theorem_rules(g, g.point_stabilizer(0));
        auto table = subgroup_classes(g);
        GLattice f = flabby_of(g, table);
        auto inv = is_invertible_class(f, table);
        EXPECT_EQ(inv.invertible, rules.retract.value == Truth::yes);
        if (rules.stably.value == Truth::yes) {
            auto sys = possibility_vectors(f, table);
            EXPECT_TRUE(sys.feasible);
        }
    }
}

TEST(Pipeline, Deterministic) {
    auto a = classify(catalog::lookup("6T3"), quick(), "6T3");
    auto b = classify(catalog::lookup("6T3"), quick(), "6T3");
    EXPECT_EQ(a, b);
}
