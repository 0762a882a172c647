#pragma once

// Decision procedures for retract and stable rationality of norm one tori
// attached to a transitive permutation group G with point stabilizer H:
// invertibility of the flabby class, necessary conditions and certificate
// search for a trivial flabby class, theorem-based rules and reductions, and
// the classification pipeline combining them.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "normtori/flabby.hpp"

namespace normtori {

namespace detail {

constexpr std::uint64_t det_prime = 2305843009213693951ULL;  // 2^61 - 1

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mulmod(a, a, p))
        if (e & 1) r = mulmod(r, a, p);
    return r;
}

}  // namespace detail

enum class Truth { yes, no, unknown };

inline const char* to_string(Truth t) {
    switch (t) {
        case Truth::yes: return "yes";
        case Truth::no: return "no";
        default: return "unknown";
    }
}

inline Truth truth_from_string(const std::string& s) {
    if (s == "yes") return Truth::yes;
    if (s == "no") return Truth::no;
    if (s == "unknown") return Truth::unknown;
    throw InvalidInput("unknown verdict value '" + s + "'");
}

/// Self-contained witness of an isomorphism between two sums of lattices:
/// the positive entries of `vector` give the left side, the negative entries and
/// the F slot (last entry, always -1) give the right side, F first.
struct IsoCertificate {
    std::size_t degree = 0;
    std::vector<Perm> group_generators;
    std::vector<std::vector<Perm>> class_generators;  // one entry per subgroup class
    std::vector<std::string> class_labels;
    std::vector<std::size_t> class_orders;
    std::vector<IntMatrix> f_generators;  // action of F on the group generators
    std::vector<std::int64_t> vector;     // class multiplicities, then the F slot
    IntMatrix matrix;                     // left side -> right side
    std::size_t trial = 0;                // search trial that produced the matrix

    [[nodiscard]] std::string lhs_description() const { return describe(true); }
    [[nodiscard]] std::string rhs_description() const { return describe(false); }

    friend bool operator==(const IsoCertificate&, const IsoCertificate&) = default;

private:
    [[nodiscard]] std::string describe(bool lhs) const {
        std::vector<std::string> parts;
        if (!lhs) parts.push_back("F");
        std::size_t group_order = 0;
        for (auto o : class_orders) group_order = std::max(group_order, o);
        for (std::size_t k = 0; k + 1 < vector.size(); ++k) {
            std::int64_t c = lhs ? vector[k] : -vector[k];
            if (c <= 0) continue;
            std::string lab = k < class_labels.size() ? class_labels[k] : "K" + std::to_string(k);
            std::size_t ord = k < class_orders.size() ? class_orders[k] : 0;
            std::string term = ord == 1 ? "Z[G]" : ord == group_order ? "Z" : "Z[G/" + lab + "]";
            parts.push_back(c == 1 ? term : term + "^" + std::to_string(c));
        }
        if (parts.empty()) return "0";
        std::string s = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
        return s;
    }
};

struct Verdict {
    Truth value = Truth::unknown;
    std::string rule;
    std::string detail;
    std::optional<IsoCertificate> certificate;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct TrailEntry {
    std::string stage;
    std::string rule;
    std::string outcome;
    std::string detail;

    friend bool operator==(const TrailEntry&, const TrailEntry&) = default;
};

struct ClassificationReport {
    std::string group;
    std::string stabilizer;
    std::size_t degree = 0;
    std::size_t order = 0;
    Verdict retract;
    Verdict stably;
    std::vector<TrailEntry> trail;

    friend bool operator==(const ClassificationReport&, const ClassificationReport&) = default;
};

// ---------------------------------------------------------------------------
// Invertibility

struct InvertibilityResult {
    bool invertible = false;
    PermutationBase q_base;  // Q = sum of Z[G/H_i] mapping onto F
    IntMatrix pi;            // Q -> F
    IntMatrix section;       // F -> Q with pi * section = I, when invertible
    GLattice Q;
    bool verified = false;
};

namespace detail {

inline PermutationBase surjective_base(FixedPointChecker& chk) {
    const auto& table = chk.table();
    std::vector<std::size_t> classes(table.classes.size());
    std::iota(classes.begin(), classes.end(), 0);
    std::reverse(classes.begin(), classes.end());
    auto grown = grow(chk, classes);
    PermutationBase b{prune(chk, grown, largest_first(grown, table)), 0, "grow-pruned"};
    b.rank = base_rank(b.elements, table);
    return b;
}

}  // namespace detail

/// Decides whether F is a direct summand of a permutation lattice. Takes a
/// surjection Q -> F that is onto fixed points of every subgroup (so its kernel
/// is coflabby) and looks for an equivariant section. Equivariant maps
/// F -> Z[G/H] correspond to H-fixed functionals on F, so the candidate values
/// of pi * s span a lattice of r x r matrices; F splits off Q iff the identity
/// lies in that lattice.
inline InvertibilityResult is_invertible_class(const GLattice& f, const SubgroupClassTable& table) {
    InvertibilityResult res;
    const std::size_t r = f.rank();
    const PermGroup& g = f.group();
    if (r == 0) {
        res.invertible = res.verified = true;
        res.Q = GLattice::trivial(g, 0);
        return res;
    }
    FixedPointChecker chk(f, table);
    res.q_base = detail::surjective_base(chk);
    auto surj = surjection_from_base(chk, res.q_base, false);
    res.pi = surj.pi.matrix;
    res.Q = surj.P;

    GLattice fd = dual(f);
    // pi * s ranges over the span of T_phi = sum_c (g_c w)(g_c phi)^T; the
    // membership of I is decided on a subset of the r^2 coordinates, enlarged
    // by the coordinates the candidate section gets wrong until it is exact
    struct Generator {
        std::size_t summand;
        std::vector<IntVector> v;  // g_c phi over the cosets
    };
    std::vector<Generator> gens;
    for (std::size_t i = 0; i < res.q_base.elements.size(); ++i) {
        const auto& e = res.q_base.elements[i];
        const auto& ct = chk.coset_table(e.class_index);
        for (const auto& phi : fixed_sublattice(fd, table.classes[e.class_index].group)) {
            Generator gen{i, {}};
            for (std::size_t c = 0; c < ct.size(); ++c) gen.v.push_back(fd.apply(ct.rep_indices[c], phi));
            gens.push_back(std::move(gen));
        }
    }
    const std::size_t n = gens.size();
    auto entry = [&](std::size_t k, std::size_t x, std::size_t y) {
        const auto& images = chk.coset_images(res.q_base.elements[gens[k].summand]);
        Integer t;
        for (std::size_t c = 0; c < images.size(); ++c)
            if (!images[c][x].is_zero() && !gens[k].v[c][y].is_zero()) t.add_mul(images[c][x], gens[k].v[c][y]);
        return t;
    };

    // coordinates independent modulo a large prime, diagonal first
    std::vector<std::size_t> order;
    for (std::size_t x = 0; x < r; ++x) order.push_back(x * r + x);
    std::vector<std::size_t> rest;
    for (std::size_t x = 0; x < r; ++x)
        for (std::size_t y = 0; y < r; ++y)
            if (x != y) rest.push_back(x * r + y);
    std::mt19937_64 rng(0x5eed);
    detail::seeded_shuffle(rest, rng);
    order.insert(order.end(), rest.begin(), rest.end());
    constexpr std::uint64_t p = detail::det_prime;
    std::vector<std::vector<std::uint64_t>> echelon;
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> coords;
    std::size_t misses = 0;
    for (std::size_t idx : order) {
        if (echelon.size() == n || misses > 2 * echelon.size() + 64) break;
        std::vector<std::uint64_t> row(n);
        for (std::size_t k = 0; k < n; ++k) {
            row[k] = entry(k, idx / r, idx % r).mod_u64(p);
        }
        for (std::size_t b = 0; b < echelon.size(); ++b) {
            std::uint64_t f = row[pivots[b]];
            if (f == 0) continue;
            for (std::size_t k = 0; k < n; ++k) row[k] = (row[k] + p - detail::mulmod(f, echelon[b][k], p)) % p;
        }
        auto piv = std::find_if(row.begin(), row.end(), [](std::uint64_t x) { return x != 0; });
        if (piv == row.end()) {
            ++misses;
            continue;
        }
        misses = 0;
        std::uint64_t inv = detail::powmod(*piv, p - 2, p);
        for (auto& x : row) x = detail::mulmod(x, inv, p);
        pivots.push_back(static_cast<std::size_t>(piv - row.begin()));
        echelon.push_back(std::move(row));
        coords.push_back(idx);
    }

    std::vector<std::size_t> offset(res.q_base.elements.size() + 1, 0);
    for (std::size_t i = 0; i < res.q_base.elements.size(); ++i)
        offset[i + 1] = offset[i] + chk.coset_table(res.q_base.elements[i].class_index).size();
    IntMatrix s;
    for (;;) {
        LatticeBasis lat(coords.size(), true);
        for (std::size_t k = 0; k < n; ++k) {
            IntVector t(coords.size());
            for (std::size_t j = 0; j < coords.size(); ++j) t[j] = entry(k, coords[j] / r, coords[j] % r);
            lat.insert(std::move(t));
        }
        IntVector target(coords.size());
        for (std::size_t j = 0; j < coords.size(); ++j) target[j] = coords[j] / r == coords[j] % r ? 1 : 0;
        auto red = lat.reduce(target);
        if (!red.in_lattice) return res;
        s = IntMatrix(offset.back(), r);
        for (std::size_t k = 0; k < n; ++k) {
            const Integer& coef = red.coefficients[k];
            if (coef.is_zero()) continue;
            for (std::size_t c = 0; c < gens[k].v.size(); ++c)
                for (std::size_t y = 0; y < r; ++y)
                    if (!gens[k].v[c][y].is_zero()) s(offset[gens[k].summand] + c, y).add_mul(coef, gens[k].v[c][y]);
        }
        IntMatrix err = res.pi * s;
        std::size_t added = 0;
        for (std::size_t x = 0; x < r; ++x)
            for (std::size_t y = 0; y < r; ++y)
                if (err(x, y) != Integer(x == y ? 1 : 0) && added < 64) {
                    coords.push_back(x * r + y);
                    ++added;
                }
        if (added == 0) break;
    }
    res.invertible = true;
    res.section = std::move(s);
    GMap sec{f, res.Q, res.section};
    res.verified = (res.pi * res.section).is_identity() && sec.is_equivariant();
    if (!res.verified) throw InternalError("is_invertible_class: section failed verification");
    return res;
}

// ---------------------------------------------------------------------------
// Necessary conditions for a trivial flabby class

struct InfeasibilityWitness {
    bool rational_feasible = false;
    std::vector<std::pair<std::uint64_t, bool>> modular;  // (prime, feasible mod prime)
    std::optional<std::pair<Integer, Integer>> obstruction;  // (elementary divisor, non-divisible value)
    [[nodiscard]] bool consistent() const {
        if (rational_feasible) return obstruction.has_value();
        return std::any_of(modular.begin(), modular.end(), [](const auto& m) { return !m.second; });
    }
};

struct PossibilitySystem {
    std::vector<std::string> class_labels;
    std::vector<std::size_t> class_orders;
    IntMatrix equations;  // one column per class
    IntVector rhs;
    std::vector<std::string> row_labels;
    bool feasible = false;
    std::optional<IntVector> particular;
    std::vector<IntVector> kernel;
    std::optional<InfeasibilityWitness> witness;
    std::vector<std::vector<std::int64_t>> candidates;  // full vectors, F slot last
};

namespace detail {

inline std::size_t valuation(std::size_t n, std::size_t p) {
    std::size_t v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline std::size_t valuation(Integer n, std::size_t p) {
    std::size_t v = 0;
    const Integer pp(static_cast<std::int64_t>(p));
    while (!n.is_zero() && divides(pp, n)) {
        n = n / pp;
        ++v;
    }
    return v;
}

/// Rank of a matrix reduced modulo a prime.
inline std::size_t rank_mod(const IntMatrix& a, std::uint64_t p) {
    std::vector<std::vector<std::uint64_t>> m(a.rows(), std::vector<std::uint64_t>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j).mod_u64(p);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
        std::size_t piv = rank;
        while (piv < a.rows() && m[piv][col] == 0) ++piv;
        if (piv == a.rows()) continue;
        std::swap(m[piv], m[rank]);
        std::uint64_t inv = powmod(m[rank][col], p - 2, p);
        for (std::size_t i = rank + 1; i < a.rows(); ++i) {
            if (m[i][col] == 0) continue;
            std::uint64_t f = mulmod(m[i][col], inv, p);
            for (std::size_t j = col; j < a.cols(); ++j) m[i][j] = (m[i][j] + p - mulmod(f, m[rank][j], p)) % p;
        }
        ++rank;
    }
    return rank;
}

inline InfeasibilityWitness witness_infeasible(const IntMatrix& a, const IntVector& b) {
    InfeasibilityWitness w;
    IntMatrix aug = IntMatrix::hstack(a, IntMatrix::from_columns(a.rows(), {b}));
    for (std::uint64_t p : {1000000007ULL, 998244353ULL, 2305843009213693951ULL})
        w.modular.emplace_back(p, rank_mod(a, p) == rank_mod(aug, p));
    auto d = snf(a);
    IntVector ub = d.u.apply(b);
    std::size_t rk = 0;
    while (rk < std::min(a.rows(), a.cols()) && !d.s(rk, rk).is_zero()) ++rk;
    w.rational_feasible = true;
    for (std::size_t i = rk; i < ub.size(); ++i)
        if (!ub[i].is_zero()) w.rational_feasible = false;
    if (w.rational_feasible)
        for (std::size_t i = 0; i < rk; ++i)
            if (!divides(d.s(i, i), ub[i])) {
                w.obstruction = std::make_pair(d.s(i, i), ub[i]);
                break;
            }
    return w;
}

inline std::size_t side_rank(const std::vector<std::int64_t>& v, const std::vector<std::size_t>& index) {
    std::size_t s = 0;
    for (std::size_t k = 0; k < index.size(); ++k)
        if (v[k] > 0) s += static_cast<std::size_t>(v[k]) * index[k];
    return s;
}

}  // namespace detail

struct PossibilityOptions {
    std::size_t max_candidates = 6;
    CohomLimits cohom;
    bool check_coflabby = true;  // refuse early when H^1(H, F) != 0 for some H
};

/// Linear conditions on multiplicities c_K with sum_K c_K Z[G/K] ~ F: equal fixed
/// ranks for every subgroup class, and equal p-parts of |Ĥ^0| for every prime p
/// dividing |G|. An infeasible system proves that F is not stably permutation.
inline PossibilitySystem possibility_vectors(const GLattice& f, const SubgroupClassTable& table, PossibilityOptions opt = {}) {
    PossibilitySystem sys;
    const PermGroup& g = f.group();
    const std::size_t k = table.classes.size();
    std::vector<std::size_t> index(k);
    for (std::size_t i = 0; i < k; ++i) {
        sys.class_labels.push_back(table.classes[i].structure);
        sys.class_orders.push_back(table.classes[i].order);
        index[i] = g.order() / table.classes[i].order;
    }
    if (opt.check_coflabby && !is_coflabby(f, table, opt.cohom)) {
        sys.feasible = false;
        sys.witness = InfeasibilityWitness{};
        sys.row_labels.push_back("H^1(H, F) != 0 for some subgroup H");
        return sys;
    }
    std::vector<CosetTable> cts;
    for (const auto& c : table.classes) cts.push_back(cosets(g, c.group));
    std::vector<std::size_t> primes;
    for (auto [p, e] : PermGroup::factorize(g.order())) primes.push_back(p);

    std::vector<IntVector> rows;
    IntVector rhs;
    for (std::size_t h = 0; h < k; ++h) {
        const PermGroup& hg = table.classes[h].group;
        IntVector row(k);
        std::vector<IntVector> vrows(primes.size(), IntVector(k));
        for (std::size_t kk = 0; kk < k; ++kk) {
            auto orbits = detail::coset_orbits(hg, cts[kk]);
            row[kk] = static_cast<std::int64_t>(orbits.size());
            for (std::size_t pi = 0; pi < primes.size(); ++pi) {
                std::size_t v = 0;
                for (const auto& o : orbits) v += detail::valuation(hg.order() / o.size(), primes[pi]);
                vrows[pi][kk] = static_cast<std::int64_t>(v);
            }
        }
        rows.push_back(row);
        rhs.push_back(Integer(static_cast<std::int64_t>(fixed_sublattice(f, hg).size())));
        sys.row_labels.push_back("rank fixed " + table.classes[h].structure + " #" + std::to_string(h));
        Integer h0 = tate_h0(f, hg).torsion_order();
        for (std::size_t pi = 0; pi < primes.size(); ++pi) {
            rows.push_back(vrows[pi]);
            rhs.push_back(Integer(static_cast<std::int64_t>(detail::valuation(h0, primes[pi]))));
            sys.row_labels.push_back("v_" + std::to_string(primes[pi]) + " |H^0| " + table.classes[h].structure + " #" +
                                     std::to_string(h));
        }
    }
    sys.equations = IntMatrix::from_rows(k, rows);
    sys.rhs = rhs;
    auto sol = solve_z(sys.equations, sys.rhs);
    if (!sol.particular) {
        sys.feasible = false;
        sys.witness = detail::witness_infeasible(sys.equations, sys.rhs);
        if (!sys.witness->consistent()) throw InternalError("possibility_vectors: infeasibility could not be witnessed");
        return sys;
    }
    sys.feasible = true;
    sys.particular = sol.particular;
    sys.kernel = sol.kernel_basis;

    // candidates: small vectors in the affine solution lattice, by side rank
    auto to_small = [](const IntVector& v) {
        std::vector<std::int64_t> out;
        for (const auto& x : v) {
            if (!x.fits_int64()) return std::optional<std::vector<std::int64_t>>{};
            out.push_back(x.to_int64());
        }
        return std::optional<std::vector<std::int64_t>>{out};
    };
    std::vector<std::vector<std::int64_t>> kern;
    for (const auto& kv : sys.kernel)
        if (auto s = to_small(kv)) kern.push_back(*s);
    auto start = to_small(*sys.particular);
    if (!start) return sys;
    auto score = [&](const std::vector<std::int64_t>& v) {
        std::int64_t l1 = 0;
        for (auto x : v) l1 += x < 0 ? -x : x;
        return std::make_tuple(detail::side_rank(v, index), l1, v);
    };
    auto add = [](std::vector<std::int64_t> a, const std::vector<std::int64_t>& b, std::int64_t t) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += t * b[i];
        return a;
    };
    // pairwise size reduction of the kernel basis
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < kern.size(); ++i)
            for (std::size_t j = 0; j < kern.size(); ++j) {
                if (i == j) continue;
                for (std::int64_t t : {1, -1}) {
                    auto c = add(kern[i], kern[j], t);
                    auto l1 = [](const std::vector<std::int64_t>& v) {
                        std::int64_t s = 0;
                        for (auto x : v) s += x < 0 ? -x : x;
                        return s;
                    };
                    if (l1(c) < l1(kern[i])) {
                        kern[i] = c;
                        changed = true;
                    }
                }
            }
    }
    // descent on the score from the particular solution
    std::vector<std::int64_t> cur = *start;
    for (bool improved = true; improved;) {
        improved = false;
        for (const auto& kv : kern)
            for (std::int64_t t : {1, -1}) {
                auto c = add(cur, kv, t);
                if (score(c) < score(cur)) {
                    cur = c;
                    improved = true;
                }
            }
    }
    std::set<std::tuple<std::size_t, std::int64_t, std::vector<std::int64_t>>> pool;
    pool.insert(score(cur));
    for (std::size_t i = 0; i < kern.size(); ++i)
        for (std::int64_t t : {1, -1}) {
            auto c1 = add(cur, kern[i], t);
            pool.insert(score(c1));
            for (std::size_t j = i + 1; j < kern.size(); ++j)
                for (std::int64_t u : {1, -1}) pool.insert(score(add(c1, kern[j], u)));
        }
    for (const auto& [rk, l1, v] : pool) {
        if (sys.candidates.size() >= opt.max_candidates) break;
        auto full = v;
        full.push_back(-1);
        sys.candidates.push_back(std::move(full));
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Certificates

namespace detail {

struct Sides {
    GLattice lhs, rhs;
    std::vector<std::size_t> lhs_classes;  // class index of each left summand, in order
};

inline Sides build_sides(const GLattice& f, const std::vector<PermGroup>& classes, const std::vector<std::int64_t>& vec) {
    if (vec.size() != classes.size() + 1) throw InvalidInput("certificate vector has the wrong length");
    if (vec.back() != -1) throw InvalidInput("certificate vector must have -1 in the F slot");
    const PermGroup& g = f.group();
    std::vector<GLattice> l, r{f};
    Sides s;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        std::int64_t c = vec[k];
        for (std::int64_t i = 0; i < (c < 0 ? -c : c); ++i) {
            GLattice p = permutation_lattice(g, classes[k]);
            if (c > 0) {
                l.push_back(std::move(p));
                s.lhs_classes.push_back(k);
            } else {
                r.push_back(std::move(p));
            }
        }
    }
    s.lhs = l.empty() ? GLattice::trivial(g, 0) : direct_sum(l);
    s.rhs = direct_sum(r);
    if (s.lhs.rank() != s.rhs.rank())
        throw InvalidInput("certificate vector is unbalanced: left rank " + std::to_string(s.lhs.rank()) + ", right rank " +
                           std::to_string(s.rhs.rank()));
    return s;
}

inline std::uint64_t det_mod(std::vector<std::int64_t> m, std::size_t n, std::uint64_t p) {
    std::vector<std::uint64_t> a(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        std::int64_t x = m[i] % static_cast<std::int64_t>(p);
        a[i] = x < 0 ? static_cast<std::uint64_t>(x + static_cast<std::int64_t>(p)) : static_cast<std::uint64_t>(x);
    }
    std::uint64_t det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv * n + c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[c * n + j]);
            det = (p - det) % p;
        }
        det = mulmod(det, a[c * n + c], p);
        std::uint64_t inv = powmod(a[c * n + c], p - 2, p);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i * n + c] == 0) continue;
            std::uint64_t f = mulmod(a[i * n + c], inv, p);
            for (std::size_t j = c; j < n; ++j) a[i * n + j] = (a[i * n + j] + p - mulmod(f, a[c * n + j], p)) % p;
        }
    }
    return det;
}

}  // namespace detail

/// Rechecks a certificate from its own data: rebuilds both sides, then checks
/// equivariance on every group generator and unimodularity.
inline bool verify_certificate(const IsoCertificate& cert) {
    try {
        PermGroup g(cert.degree, cert.group_generators);
        if (cert.f_generators.size() != g.generators().size()) return false;
        GLattice f = cert.f_generators.empty() ? GLattice::trivial(g, 0) : GLattice(g, cert.f_generators);
        if (!f.verify()) return false;
        std::vector<PermGroup> classes;
        for (const auto& gens : cert.class_generators) {
            PermGroup k(cert.degree, gens);
            if (!k.is_subgroup_of(g)) return false;
            classes.push_back(std::move(k));
        }
        auto sides = detail::build_sides(f, classes, cert.vector);
        const IntMatrix& m = cert.matrix;
        if (m.rows() != sides.rhs.rank() || m.cols() != sides.lhs.rank()) return false;
        for (std::size_t s = 0; s < g.generators().size(); ++s)
            if (sides.rhs.generator_actions()[s] * m != m * sides.lhs.generator_actions()[s]) return false;
        if (m.rows() == 0) return true;
        return is_unimodular(m);
    } catch (const Error&) {
        return false;
    }
}

struct SearchOptions {
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    double time_budget_seconds = 20.0;
    std::int64_t max_range = 2;  // coefficients in [-1,1], then up to [-max_range, max_range]
};

struct SearchResult {
    std::optional<IsoCertificate> certificate;
    std::size_t trials_run = 0;
    std::size_t hom_rank = 0;
    bool budget_exhausted = false;
};

/// Randomized search for an equivariant unimodular map between the two sides
/// named by `vec`. Failure proves nothing.
inline SearchResult search_stably_permutation(const GLattice& f, const SubgroupClassTable& table, const std::vector<std::int64_t>& vec,
                                              SearchOptions opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const PermGroup& g = f.group();
    std::vector<PermGroup> classes;
    for (const auto& c : table.classes) classes.push_back(c.group);
    auto sides = detail::build_sides(f, classes, vec);
    const std::size_t n = sides.lhs.rank();

    IsoCertificate cert;
    cert.degree = g.degree();
    cert.group_generators = g.generators();
    for (const auto& c : table.classes) {
        cert.class_generators.push_back(c.group.generators());
        cert.class_labels.push_back(c.structure);
        cert.class_orders.push_back(c.order);
    }
    cert.f_generators = f.generator_actions();
    cert.vector = vec;

    SearchResult res;
    if (n == 0) {
        cert.matrix = IntMatrix(0, 0);
        res.certificate = cert;
        return res;
    }
    // basis of Hom_G(lhs, rhs): a left summand Z[G/K] maps by e_K -> v for v in rhs^K
    struct Entry {
        std::size_t row, col;
        std::int64_t val;
    };
    std::vector<std::vector<Entry>> basis;
    std::size_t col0 = 0;
    for (auto k : sides.lhs_classes) {
        auto ct = cosets(g, classes[k]);
        for (const auto& v : fixed_sublattice(sides.rhs, classes[k])) {
            if (std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > opt.time_budget_seconds) {
                res.budget_exhausted = true;
                return res;
            }
            std::vector<Entry> ent;
            for (std::size_t c = 0; c < ct.size(); ++c) {
                IntVector col = sides.rhs.apply(ct.rep_indices[c], v);
                for (std::size_t r = 0; r < n; ++r)
                    if (!col[r].is_zero()) ent.push_back({r, col0 + c, col[r].to_int64()});
            }
            basis.push_back(std::move(ent));
        }
        col0 += ct.size();
    }
    res.hom_rank = basis.size();

    // the identity, when both sides coincide
    auto try_matrix = [&](const std::vector<std::int64_t>& m, std::size_t trial) {
        std::uint64_t d = detail::det_mod(m, n, detail::det_prime);
        if (d != 1 && d != detail::det_prime - 1) return false;
        IntMatrix mm(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mm(i, j) = m[i * n + j];
        if (!is_unimodular(mm)) return false;
        cert.matrix = std::move(mm);
        cert.trial = trial;
        return true;
    };

    std::vector<std::int64_t> m(n * n);
    for (std::size_t t = 0; t < opt.trials; ++t) {
        if ((t & 7) == 0) {
            double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (el > opt.time_budget_seconds) {
                res.budget_exhausted = true;
                break;
            }
        }
        std::int64_t range = t < opt.trials / 2 ? 1 : opt.max_range;
        std::mt19937_64 rng(detail::splitmix64(opt.seed ^ detail::splitmix64(t)));
        std::fill(m.begin(), m.end(), 0);
        for (const auto& b : basis) {
            std::int64_t c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
            if (c == 0) continue;
            for (const auto& e : b) m[e.row * n + e.col] += c * e.val;
        }
        res.trials_run = t + 1;
        if (try_matrix(m, t)) {
            res.certificate = cert;
            break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Theorem-based rules

struct RulePair {
    Verdict retract, stably;
};

/// Regular action (H = 1).
inline RulePair classify_galois(const PermGroup& g) {
    RulePair out;
    if (g.all_sylow_cyclic()) {
        out.retract = {Truth::yes, "galois-sylow-cyclic", "all Sylow subgroups are cyclic", {}};
    } else {
        out.retract = {Truth::no, "galois-sylow-cyclic", "some Sylow subgroup is not cyclic", {}};
    }
    if (auto mf = metacyclic_form(g)) {
        std::ostringstream os;
        os << "G = <s, t>, s^" << mf->m << " = t^" << (std::size_t{1} << mf->d) << " = 1, t s t^-1 = s^" << mf->r;
        out.stably = {Truth::yes, "galois-metacyclic", os.str(), {}};
    } else {
        out.stably = {Truth::no, "galois-metacyclic", "no presentation <s, t> with m odd and r^2 = 1 mod m", {}};
    }
    return out;
}

inline RulePair classify_sylow_cyclic(const PermGroup& g, const PermGroup& h) {
    if (h.order() == 1) throw InvalidInput("classify_sylow_cyclic: stabilizer is trivial");
    if (!g.all_sylow_cyclic()) throw InvalidInput("classify_sylow_cyclic: some Sylow subgroup is not cyclic");
    if (g.normal_core(h).order() != 1) throw InvalidInput("classify_sylow_cyclic: stabilizer has nontrivial core");
    RulePair out;
    out.retract = {Truth::yes, "sylow-cyclic", "all Sylow subgroups are cyclic", {}};
    if (odd_cr_c2_form(g, h))
        out.stably = {Truth::yes, "sylow-cyclic-dihedral", "H = C2 and G = C_r x| H with r odd", {}};
    else
        out.stably = {Truth::no, "sylow-cyclic-dihedral", "G is not C_r x| C2 with H = C2, r odd", {}};
    return out;
}

inline Verdict nilpotent_rule(const PermGroup& g, const PermGroup& h) {
    if (h.order() != 1 && g.is_nilpotent()) return {Truth::no, "nilpotent", "G is nilpotent and H is nontrivial", {}};
    return {};
}

inline Verdict sylow_reduction(const PermGroup& g) {
    for (auto [p, e] : PermGroup::factorize(g.order())) {
        PermGroup s = g.sylow(p);
        if (s.is_transitive() && !s.is_cyclic())
            return {Truth::no, "sylow-reduction",
                    "the Sylow " + std::to_string(p) + "-subgroup (order " + std::to_string(s.order()) + ") is transitive and not cyclic",
                    {}};
    }
    return {};
}

inline std::size_t factorial(std::size_t n) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Natural actions of S_n and A_n, recognized by order.
inline std::optional<RulePair> known_family_rule(const PermGroup& g) {
    const std::size_t n = g.degree();
    if (n < 3 || n > 20 || !g.is_transitive()) return std::nullopt;
    const bool prime = PermGroup::is_prime(n);
    RulePair out;
    if (g.order() == factorial(n)) {
        std::string fam = "S" + std::to_string(n);
        out.retract = {prime ? Truth::yes : Truth::no, "symmetric-family", fam + ": retract iff n is prime", {}};
        out.stably = {n == 3 ? Truth::yes : Truth::no, "symmetric-family", fam + ": stably iff n = 3", {}};
        return out;
    }
    if (n >= 4 && g.order() == factorial(n) / 2) {
        std::string fam = "A" + std::to_string(n);
        out.retract = {prime ? Truth::yes : Truth::no, "alternating-family", fam + ": retract iff n is prime", {}};
        out.stably = {n == 5 ? Truth::yes : Truth::no, "alternating-family", fam + ": stably iff n = 5", {}};
        return out;
    }
    return std::nullopt;
}

/// Rules that need no lattice computation, in pipeline order. Returns the
/// verdicts reached (unknown where none applies) and appends to the trail.
inline RulePair theorem_rules(const PermGroup& g, const PermGroup& h, std::vector<TrailEntry>* trail = nullptr) {
    RulePair out;
    auto log = [&](const char* stage, const Verdict& v, const char* what) {
        if (trail && v.value != Truth::unknown) trail->push_back({stage, v.rule, std::string(what) + " " + to_string(v.value), v.detail});
    };
    auto take = [](Verdict& slot, const Verdict& v) {
        if (slot.value == Truth::unknown && v.value != Truth::unknown) slot = v;
    };
    if (h.order() == 1) {
        auto r = classify_galois(g);
        log("galois", r.retract, "retract");
        log("galois", r.stably, "stably");
        take(out.retract, r.retract);
        take(out.stably, r.stably);
        return out;
    }
    Verdict nil = nilpotent_rule(g, h);
    if (nil.value != Truth::unknown) {
        log("nilpotent", nil, "retract");
        take(out.retract, nil);
        return out;
    }
    if (g.all_sylow_cyclic() && g.normal_core(h).order() == 1) {
        auto r = classify_sylow_cyclic(g, h);
        log("sylow-cyclic", r.retract, "retract");
        log("sylow-cyclic", r.stably, "stably");
        take(out.retract, r.retract);
        take(out.stably, r.stably);
        return out;
    }
    if (h.is_subgroup_of(g) && h.order() * g.degree() == g.order()) {
        if (auto r = known_family_rule(g)) {
            log("known-family", r->retract, "retract");
            log("known-family", r->stably, "stably");
            take(out.retract, r->retract);
            take(out.stably, r->stably);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Family arithmetic

struct FamilyParams {
    std::size_t d = 0;
    std::size_t q = 0;
    std::size_t e = 0;  // q = char^e
    std::size_t characteristic = 0;
    Integer p;        // (q^d - 1) / (q - 1)
    Integer order_G;  // order of PSL_d(F_q)
    Integer order_H;  // p * d
};

/// Arithmetic for a Frobenius subgroup C_p x| C_d of PSL_d(F_q) acting on the
/// p points of projective space: d prime, p prime, gcd(d, q - 1) = 1, and
/// |G| / p = d mod p.
inline FamilyParams psl_family_params(std::size_t d, std::size_t q) {
    if (d < 2) throw InvalidInput("family: d must be at least 2");
    auto fq = PermGroup::factorize(q);
    if (q < 2 || fq.size() != 1) throw InvalidInput("family: q = " + std::to_string(q) + " is not a prime power");
    if (!PermGroup::is_prime(d)) throw InvalidInput("family: d composite (d = " + std::to_string(d) + ")");
    FamilyParams fp;
    fp.d = d;
    fp.q = q;
    fp.characteristic = fq[0].first;
    fp.e = fq[0].second;
    Integer qq(static_cast<std::int64_t>(q));
    Integer qd = pow(qq, static_cast<unsigned>(d));
    fp.p = (qd - Integer(1)) / (qq - Integer(1));
    bool p_prime = fp.p.fits_int64() && PermGroup::is_prime(static_cast<std::size_t>(fp.p.to_int64()));
    if (!p_prime) throw InvalidInput("family: p not prime (p = " + fp.p.to_string() + ")");
    if (std::gcd(d, q - 1) != 1) throw InvalidInput("family: gcd(d, q - 1) != 1");
    Integer rest = 1;
    for (std::size_t i = 1; i < d; ++i) rest *= qd - pow(qq, static_cast<unsigned>(i));
    fp.order_G = fp.p * rest;
    Integer dd(static_cast<std::int64_t>(d));
    Integer rem = rest % fp.p;
    if (rem != dd % fp.p) throw InternalError("family: |G|/p is not congruent to d mod p");
    fp.order_H = fp.p * dd;
    return fp;
}

// ---------------------------------------------------------------------------
// Pipeline

struct ClassifyConfig {
    std::uint64_t seed = 0;
    std::size_t trials = 100000;
    double time_budget_seconds = 20.0;
    GroupLimits limits{};
    CohomLimits cohom{};
    bool skip_direct = false;
    std::size_t stabilizer_point = 0;
    BaseSearchOptions base{};
};

namespace detail {

inline void close_logically(ClassificationReport& rep) {
    if (rep.retract.value == Truth::no && rep.stably.value != Truth::no) {
        rep.stably = {Truth::no, "closure", "not retract rational, hence not stably rational", {}};
        rep.trail.push_back({"closure", "closure", "stably no", "implied by retract no"});
    }
    if (rep.stably.value == Truth::yes && rep.retract.value != Truth::yes) {
        rep.retract = {Truth::yes, "closure", "stably rational, hence retract rational", {}};
        rep.trail.push_back({"closure", "closure", "retract yes", "implied by stably yes"});
    }
}

inline bool decided(const ClassificationReport& r) { return r.retract.value != Truth::unknown && r.stably.value != Truth::unknown; }

}  // namespace detail

inline ClassificationReport classify(const PermGroup& g_in, ClassifyConfig cfg = {}, std::string label = "") {
    PermGroup g = g_in.with_limits(cfg.limits);
    ClassificationReport rep;
    rep.group = label.empty() ? "degree " + std::to_string(g.degree()) : label;
    rep.degree = g.degree();
    if (!g.is_transitive()) throw InvalidInput("classify: group is not transitive");
    rep.order = g.order();
    PermGroup h = g.point_stabilizer(cfg.stabilizer_point);
    rep.stabilizer = "stabilizer of point " + std::to_string(cfg.stabilizer_point + 1) + " (order " + std::to_string(h.order()) + ")";
    auto take = [](Verdict& slot, const Verdict& v) {
        if (slot.value == Truth::unknown && v.value != Truth::unknown) slot = v;
    };

    // rules needing no lattice computation
    auto r = theorem_rules(g, h, &rep.trail);
    take(rep.retract, r.retract);
    take(rep.stably, r.stably);
    detail::close_logically(rep);
    if (detail::decided(rep)) return rep;

    // transitive non-cyclic Sylow subgroup
    Verdict syl = sylow_reduction(g);
    if (syl.value != Truth::unknown) {
        rep.trail.push_back({"sylow-reduction", syl.rule, "retract no", syl.detail});
        take(rep.retract, syl);
        detail::close_logically(rep);
        return rep;
    }
    rep.trail.push_back({"sylow-reduction", "sylow-reduction", "silent", "no transitive non-cyclic Sylow subgroup"});

    std::optional<SubgroupClassTable> table;
    try {
        table = subgroup_classes(g);
    } catch (const CapExceeded& e) {
        rep.trail.push_back({"subgroup-classes", "cap", "skipped", e.what()});
        return rep;
    }

    // transitive proper subgroups decided by the rules above
    for (const auto& c : table->classes) {
        if (c.order == g.order() || !c.group.is_transitive()) continue;
        PermGroup kh = c.group.point_stabilizer(cfg.stabilizer_point);
        auto sub = theorem_rules(c.group, kh);
        std::string name = c.structure + " (order " + std::to_string(c.order) + ")";
        if (rep.retract.value == Truth::unknown && sub.retract.value == Truth::no) {
            rep.retract = {Truth::no, "subgroup-reduction", "transitive subgroup " + name + " is not retract rational (" + sub.retract.rule + ")", {}};
            rep.trail.push_back({"subgroup-reduction", "subgroup-reduction", "retract no", rep.retract.detail});
        }
        if (rep.stably.value == Truth::unknown && sub.stably.value == Truth::no) {
            rep.stably = {Truth::no, "subgroup-reduction", "transitive subgroup " + name + " is not stably rational (" + sub.stably.rule + ")", {}};
            rep.trail.push_back({"subgroup-reduction", "subgroup-reduction", "stably no", rep.stably.detail});
        }
    }
    detail::close_logically(rep);
    if (detail::decided(rep)) return rep;
    if (cfg.skip_direct) {
        rep.trail.push_back({"direct", "skip", "skipped", "direct computation disabled"});
        return rep;
    }

    // direct computation
    try {
        GLattice j = chevalley_module(g);
        auto fc = flabby_class(j, *table, cfg.base);
        const GLattice& f = fc.F;
        rep.trail.push_back({"direct", "flabby-resolution", "rank F = " + std::to_string(f.rank()),
                             "permutation base of rank " + std::to_string(fc.resolution.P.rank())});
        if (f.rank() == 0) {
            take(rep.stably, {Truth::yes, "flabby-class-zero", "the flabby class is represented by the zero lattice", {}});
            detail::close_logically(rep);
            return rep;
        }
        bool invertible = false;
        if (rep.retract.value != Truth::no) {
            auto inv = is_invertible_class(f, *table);
            invertible = inv.invertible;
            Verdict v{inv.invertible ? Truth::yes : Truth::no, "invertibility",
                      inv.invertible ? "F is a direct summand of a permutation lattice (section verified)"
                                     : "F does not split off its fixed-point-surjective cover",
                      {}};
            rep.trail.push_back({"direct", "invertibility", std::string("retract ") + to_string(v.value), v.detail});
            take(rep.retract, v);
            detail::close_logically(rep);
        }
        if (rep.stably.value != Truth::unknown) return rep;

        PossibilityOptions popt;
        popt.cohom = cfg.cohom;
        popt.check_coflabby = !invertible;
        auto sys = possibility_vectors(f, *table, popt);
        if (!sys.feasible) {
            std::string why = sys.witness && sys.witness->obstruction
                                  ? "integral obstruction: " + sys.witness->obstruction->second.to_string() + " not divisible by " +
                                        sys.witness->obstruction->first.to_string()
                                  : "no rational solution";
            if (!sys.row_labels.empty() && sys.equations.rows() == 0) why = sys.row_labels.front();
            rep.trail.push_back({"direct", "possibility-system", "stably no", why});
            take(rep.stably, {Truth::no, "possibility-system", why, {}});
            detail::close_logically(rep);
            return rep;
        }
        rep.trail.push_back({"direct", "possibility-system", "feasible",
                             std::to_string(sys.candidates.size()) + " candidate vectors, kernel rank " + std::to_string(sys.kernel.size())});
        SearchOptions sopt;
        sopt.seed = cfg.seed;
        sopt.time_budget_seconds = cfg.time_budget_seconds;
        const std::size_t nc = std::max<std::size_t>(1, sys.candidates.size());
        sopt.trials = std::max<std::size_t>(1, cfg.trials / nc);
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t ci = 0; ci < sys.candidates.size(); ++ci) {
            double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (spent >= cfg.time_budget_seconds) break;
            sopt.time_budget_seconds = std::max(0.0, cfg.time_budget_seconds - spent) / static_cast<double>(nc - ci);
            sopt.seed = detail::splitmix64(cfg.seed + 0x632be59bd9b4e019ULL * (ci + 1));
            auto res = search_stably_permutation(f, *table, sys.candidates[ci], sopt);
            if (res.certificate) {
                Verdict v{Truth::yes, "certificate-search",
                          res.certificate->lhs_description() + " ~ " + res.certificate->rhs_description(), res.certificate};
                rep.trail.push_back({"direct", "certificate-search", "stably yes", v.detail});
                take(rep.stably, v);
                detail::close_logically(rep);
                return rep;
            }
        }
        rep.trail.push_back({"direct", "certificate-search", "unknown", "no certificate found; the search is one-sided"});
        if (rep.stably.value == Truth::unknown)
            rep.stably = {Truth::unknown, "certificate-search", "no certificate found within the trial and time budget", {}};
    } catch (const CapExceeded& e) {
        rep.trail.push_back({"direct", "cap", "skipped", e.what()});
    }
    detail::close_logically(rep);
    return rep;
}

}  // namespace normtori
