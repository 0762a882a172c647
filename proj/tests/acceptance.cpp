// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "normtori/catalog.hpp"
#include "normtori/cohom.hpp"
#include "normtori/report_io.hpp"

using namespace normtori;

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

// tolerances
constexpr double certificate_seconds = 60.0;
constexpr double invertibility_seconds_deg10 = 300.0;
constexpr double invertibility_seconds_9t27 = 1800.0;
constexpr double low_degree_seconds = 600.0;
constexpr std::size_t snf_samples = 1000;

struct Check {
    std::ostringstream notes;
    bool ok = true;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void run(int n, const std::string& title, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = clock_type::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.notes << " [exception: " << e.what() << "]";
    }
    if (!c.ok) ++failures;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << since(t0) << " s)" << c.notes.str()
              << std::endl;
}

std::string verdict_pair(const ClassificationReport& r) {
    return std::string("retract ") + to_string(r.retract.value) + ", stably " + to_string(r.stably.value);
}

struct Row {
    const char* label;
    Truth retract;
    Truth stably;
};

void check_rows(Check& c, const std::vector<Row>& rows) {
    for (const auto& row : rows) {
        auto rep = classify(catalog::lookup(row.label), ClassifyConfig{}, row.label);
        const bool match = rep.retract.value == row.retract && rep.stably.value == row.stably;
        c.expect(match, std::string(row.label) + " gave " + verdict_pair(rep));
        c.notes << " " << row.label << "=" << to_string(rep.retract.value) << "/" << to_string(rep.stably.value);
    }
}

GroupDescriptor load_sample(const std::string& file) {
    std::ifstream in(std::string(SAMPLES_DIR) + "/" + file);
    if (!in) throw InvalidInput("cannot open sample " + file);
    return descriptor_from_json(json::parse(in));
}

std::multiset<std::size_t> side_orders(const IsoCertificate& cert, bool lhs) {
    std::multiset<std::size_t> out;
    for (std::size_t k = 0; k + 1 < cert.vector.size(); ++k) {
        std::int64_t m = lhs ? cert.vector[k] : -cert.vector[k];
        for (std::int64_t i = 0; i < m; ++i) out.insert(cert.class_orders[k]);
    }
    return out;
}

// H-orbits on G/K counted by Burnside: gK is fixed by h iff g^-1 h g lies in K
std::size_t burnside_orbits(const PermGroup& g, const PermGroup& h, const PermGroup& k) {
    auto reps = cosets(g, k).representatives();
    std::size_t fixed = 0;
    for (const auto& x : h.elements())
        for (const auto& r : reps)
            if (k.contains(r.inverse() * x * r)) ++fixed;
    return fixed / h.order();
}

}  // namespace

int main() {
    run(1, "10T3 stably rational with a verified rank-15 certificate", [](Check& c) {
        const auto t0 = clock_type::now();
        ReportDocument doc;
        doc.command = "classify";
        doc.input = descriptor_from_label("10T3");
        doc.report = classify(catalog::lookup("10T3"), ClassifyConfig{}, "10T3");
        const double secs = since(t0);
        doc.seconds = secs;
        c.expect(secs < certificate_seconds, "took " + std::to_string(secs) + " s");
        const auto& rep = *doc.report;
        c.expect(rep.stably.value == Truth::yes, "stably is " + std::string(to_string(rep.stably.value)));
        if (!rep.stably.certificate) {
            c.expect(false, "no certificate");
            return;
        }
        const auto& cert = *rep.stably.certificate;
        c.expect(cert.matrix.rows() == 15 && cert.matrix.cols() == 15, "matrix is not 15 x 15");
        c.expect(is_unimodular(cert.matrix), "matrix not unimodular");
        c.expect(verify_certificate(cert), "certificate does not verify");
        auto lhs = side_orders(cert, true), rhs = side_orders(cert, false);
        std::size_t lrank = 0, rrank = cert.f_generators.front().rows();
        for (auto o : lhs) lrank += 20 / o;
        for (auto o : rhs) rrank += 20 / o;
        c.expect(lrank == 15 && rrank == 15, "side ranks " + std::to_string(lrank) + " and " + std::to_string(rrank));
        c.expect(lhs == std::multiset<std::size_t>{2, 5, 20}, "left side is not Z[G/C2] + Z[G/C5] + Z");
        c.expect(rhs == std::multiset<std::size_t>{10}, "right side is not Z[G/D5] + F");
        c.notes << " " << cert.lhs_description() << " ~ " << cert.rhs_description();

        auto back = document_from_json(json::parse(to_json(doc).dump()));
        c.expect(back == doc, "JSON round trip changed the document");
        auto checks = verify_document(back);
        c.expect(checks.size() == 1 && checks[0].second, "reloaded certificate does not verify");
    });

    run(2, "invertibility of the flabby class", [](Check& c) {
        const std::vector<std::pair<const char*, bool>> cases = {{"10T3", true},  {"10T22", true}, {"9T27", true}, {"10T6", false},
                                                                 {"10T7", false}, {"10T8", false}, {"10T10", false}, {"10T18", false}};
        for (auto [label, expected] : cases) {
            const auto t0 = clock_type::now();
            PermGroup g = catalog::lookup(label);
            auto table = subgroup_classes(g);
            auto fc = flabby_class(chevalley_module(g), table);
            auto inv = is_invertible_class(fc.F, table);
            const double secs = since(t0);
            const double limit = g.degree() == 9 ? invertibility_seconds_9t27 : invertibility_seconds_deg10;
            c.expect(inv.invertible == expected, std::string(label) + " gave " + (inv.invertible ? "true" : "false"));
            if (inv.invertible) c.expect(inv.verified, std::string(label) + " section not verified");
            c.expect(secs <= limit, std::string(label) + " took " + std::to_string(secs) + " s");
            c.notes << " " << label << "=" << (inv.invertible ? "true" : "false") << "(" << static_cast<int>(secs + 0.5) << "s)";
        }
    });

    run(3, "degree-10 table", [](Check& c) {
        const auto Y = Truth::yes, N = Truth::no, U = Truth::unknown;
        check_rows(c, {{"10T1", Y, Y},
                       {"10T2", Y, Y},
                       {"10T3", Y, Y},
                       {"10T4", Y, N},
                       {"10T5", Y, N},
                       {"10T12", Y, N},
                       {"10T22", Y, N},
                       {"10T11", Y, U},
                       {"10T6", N, N},
                       {"10T7", N, N},
                       {"10T8", N, N},
                       {"10T10", N, N},
                       {"10T18", N, N}});
    });

    run(4, "degree-9 rows", [](Check& c) {
        const auto Y = Truth::yes, N = Truth::no, U = Truth::unknown;
        check_rows(c, {{"9T1", Y, Y}, {"9T3", Y, Y}, {"9T2", N, N}, {"9T27", Y, U}});
    });

    run(5, "degree-8 rows", [](Check& c) {
        check_rows(c, {{"8T1", Truth::yes, Truth::yes}});
        for (const char* label : {"8T2", "8T3", "8T4", "8T5"}) {
            auto r = classify_galois(catalog::lookup(label));
            c.expect(r.retract.value == Truth::no && r.retract.rule == "galois-sylow-cyclic", std::string(label) + " not excluded by the Galois rule");
            auto rep = classify(catalog::lookup(label), ClassifyConfig{}, label);
            c.expect(rep.retract.value == Truth::no && rep.retract.rule == "galois-sylow-cyclic", std::string(label) + " classify disagrees");
        }
        for (const char* file : {"dihedral_d8_deg8.json", "cube_rotations_s4_deg8.json"}) {
            auto d = load_sample(file);
            PermGroup g = d.resolve();
            c.expect(g.degree() == 8 && g.order() != 8, d.name() + " is not a non-Galois degree-8 action");
            c.expect(sylow_reduction(g).value == Truth::no, d.name() + " not excluded by Sylow reduction");
            auto rep = classify(g, ClassifyConfig{}, d.name());
            c.expect(rep.retract.value == Truth::no, d.name() + " classify gave retract " + to_string(rep.retract.value));
            c.notes << " " << d.name() << "=" << to_string(rep.retract.value) << "(" << rep.retract.rule << ")";
        }
    });

    run(6, "degree 5 and 7 regression", [](Check& c) {
        const auto t0 = clock_type::now();
        const auto Y = Truth::yes, N = Truth::no;
        check_rows(c, {{"5T1", Y, Y},
                       {"5T2", Y, Y},
                       {"5T4", Y, Y},
                       {"5T3", Y, N},
                       {"5T5", Y, N},
                       {"7T1", Y, Y},
                       {"7T2", Y, Y},
                       {"7T3", Y, N},
                       {"7T4", Y, N},
                       {"7T5", Y, N},
                       {"7T6", Y, N},
                       {"7T7", Y, N}});
        for (const char* label : {"7T6", "7T7"}) {
            auto rep = classify(catalog::lookup(label), ClassifyConfig{}, label);
            c.expect(rep.stably.rule.find("-family") != std::string::npos, std::string(label) + " decided by " + rep.stably.rule);
        }
        auto t5 = classify(catalog::lookup("7T5"), ClassifyConfig{}, "7T5");
        c.expect(t5.retract.rule == "invertibility", "7T5 retract decided by " + t5.retract.rule);
        c.expect(t5.stably.rule == "subgroup-reduction", "7T5 stably decided by " + t5.stably.rule);
        const double secs = since(t0);
        c.expect(secs <= low_degree_seconds, "took " + std::to_string(secs) + " s");
    });

    run(7, "family arithmetic", [](Check& c) {
        auto a = psl_family_params(3, 2);
        c.expect(a.p == Integer(7) && a.order_H == Integer(21), "(3,2)");
        auto b = psl_family_params(2, 4);
        c.expect(b.p == Integer(5) && b.order_H == Integer(10), "(2,4)");
        auto reject = [&](std::size_t d, std::size_t q, const std::string& msg) {
            try {
                (void)psl_family_params(d, q);
                c.expect(false, "(" + std::to_string(d) + "," + std::to_string(q) + ") accepted");
            } catch (const InvalidInput& e) {
                c.expect(std::string(e.what()).find(msg) != std::string::npos, std::string("message: ") + e.what());
            }
        };
        reject(5, 3, "p not prime");
        for (std::size_t q : {2, 3, 4, 5, 7, 8, 9}) reject(4, q, "d composite");
    });

    run(8, "property suites", [](Check& c) {
        // (a) resolutions for small groups
        for (const char* label : {"2T1", "3T2", "4T2", "4T3", "4T4", "4T5", "5T2", "5T3", "5T4", "6T3", "6T4", "8T3", "8T5", "8T12",
                                  "8T14", "8T23", "10T3", "10T4", "10T6"}) {
            PermGroup g = catalog::lookup(label);
            if (g.order() > 60) continue;
            auto table = subgroup_classes(g);
            GLattice j = chevalley_module(g);
            auto r = flabby_resolution(j, table);
            c.expect(verify_resolution(r), std::string(label) + " resolution not exact");
            c.expect(r.P.rank() == r.M.rank() + r.F.rank(), std::string(label) + " ranks do not add up");
            c.expect(is_flabby(r.F, table), std::string(label) + " F not flabby");
            auto s = coflabby_surjection(dual(j), table);
            c.expect(is_coflabby(s.C, table), std::string(label) + " C not coflabby");
        }
        c.notes << " (a)";

        // (b) Shapiro vanishing
        for (const char* label : {"4T3", "5T3", "6T4", "8T14", "10T3"}) {
            PermGroup g = catalog::lookup(label);
            auto table = subgroup_classes(g);
            for (const auto& h : table.classes) {
                GLattice p = permutation_lattice(g, h.group);
                for (const auto& k : table.classes) {
                    bool zero = tate_hminus1(p, k.group).is_trivial() && h1(p, k.group).is_trivial();
                    c.expect(zero, std::string(label) + " Z[G/" + h.structure + "] over " + k.structure);
                }
            }
        }
        c.notes << " (b)";

        // (c) Smith normal form reconstruction
        std::mt19937_64 rng(20261016);
        for (std::size_t t = 0; t < snf_samples; ++t) {
            std::uniform_int_distribution<std::size_t> dim(1, 6);
            std::uniform_int_distribution<int> val(-9, 9);
            IntMatrix a(dim(rng), dim(rng));
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = val(rng);
            auto d = snf(a);
            bool ok = d.u * a * d.v == d.s && is_unimodular(d.u) && is_unimodular(d.v);
            for (std::size_t i = 0; i < d.s.rows(); ++i)
                for (std::size_t j = 0; j < d.s.cols(); ++j)
                    if (i != j && !d.s(i, j).is_zero()) ok = false;
            auto divs = d.divisors();
            for (std::size_t i = 0; i + 1 < divs.size(); ++i)
                if (!(divs[i + 1] % divs[i]).is_zero() || divs[i] < Integer(0)) ok = false;
            if (!ok) {
                c.expect(false, "SNF sample " + std::to_string(t));
                break;
            }
        }
        c.notes << " (c)";

        // (d) fixed rank of Z[G/K] under H equals the number of H-orbits on G/K
        std::size_t pairs = 0;
        for (const char* label : {"4T5", "5T3", "5T5", "6T4", "7T5", "8T14", "8T23", "8T37", "10T3", "10T6", "10T11", "10T12", "10T18"}) {
            PermGroup g = catalog::lookup(label);
            if (g.order() > 200) continue;
            auto table = subgroup_classes(g);
            for (const auto& k : table.classes) {
                GLattice p = permutation_lattice(g, k.group);
                for (const auto& h : table.classes) {
                    ++pairs;
                    std::size_t expected = burnside_orbits(g, h.group, k.group);
                    if (fixed_sublattice(p, h.group).size() != expected) c.expect(false, std::string(label) + " H=" + h.structure + " K=" + k.structure);
                }
            }
        }
        c.notes << " (d) " << pairs << " pairs";

        // (e) invertibility does not depend on the permutation base
        PermGroup g = catalog::lookup("10T3");
        auto table = subgroup_classes(g);
        GLattice j = chevalley_module(g);
        FixedPointChecker chk(dual(j), table);
        auto cands = minimize_base(chk);
        std::vector<std::size_t> ranks;
        std::vector<bool> verdicts;
        for (const auto& b : cands) {
            auto r = resolution_from_surjection(j, table, surjection_from_base(chk, b));
            ranks.push_back(b.rank);
            verdicts.push_back(is_invertible_class(r.F, table).invertible);
        }
        c.expect(std::count(ranks.begin(), ranks.end(), 30) > 0, "no rank-30 base");
        c.expect(std::count(ranks.begin(), ranks.end(), 22) > 0, "no rank-22 base");
        c.expect(*std::min_element(ranks.begin(), ranks.end()) <= 22, "smallest base exceeds rank 22");
        c.expect(std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; }), "verdict differs between bases");
        c.notes << " (e) ranks [";
        for (std::size_t i = 0; i < ranks.size(); ++i) c.notes << (i ? ", " : " ") << ranks[i];
        c.notes << " ]";
    });

    return failures == 0 ? 0 : 1;
}
