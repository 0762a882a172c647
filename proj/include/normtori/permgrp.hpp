#pragma once

// Finite permutation groups by explicit element enumeration.
//
// Points are 0-based internally; parsing and printing use 1-based points.
// Products compose right to left: (a * b)(x) = a(b(x)).

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "normtori/errors.hpp"

namespace normtori {

class Perm {
public:
    Perm() = default;
    explicit Perm(std::vector<std::uint32_t> images) : img_(std::move(images)) {
        std::vector<bool> seen(img_.size());
        for (auto v : img_) {
            if (v >= img_.size() || seen[v]) throw InvalidInput("Perm: images do not form a bijection");
            seen[v] = true;
        }
    }
    static Perm identity(std::size_t degree) {
        std::vector<std::uint32_t> v(degree);
        std::iota(v.begin(), v.end(), 0u);
        return Perm(std::move(v), Unchecked{});
    }
    static Perm from_images_1based(const std::vector<std::int64_t>& images) {
        std::vector<std::uint32_t> v;
        v.reserve(images.size());
        for (auto x : images) {
            if (x < 1 || x > static_cast<std::int64_t>(images.size()))
                throw InvalidInput("Perm: image " + std::to_string(x) + " out of range 1.." +
                                   std::to_string(images.size()));
            v.push_back(static_cast<std::uint32_t>(x - 1));
        }
        return Perm(std::move(v));
    }
    /// Parses cycle notation such as "(1 2 3)(4 5)" or "(1,2,3)"; "()" is the identity.
    static Perm from_cycles(std::size_t degree, const std::string& text) {
        std::vector<std::uint32_t> v(degree);
        std::iota(v.begin(), v.end(), 0u);
        std::vector<bool> used(degree);
        std::size_t i = 0;
        auto skip_ws = [&] {
            while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) ++i;
        };
        skip_ws();
        while (i < text.size()) {
            if (text[i] != '(') throw InvalidInput("Perm: expected '(' in \"" + text + "\"");
            ++i;
            std::vector<std::uint32_t> cyc;
            for (;;) {
                skip_ws();
                if (i >= text.size()) throw InvalidInput("Perm: unterminated cycle in \"" + text + "\"");
                if (text[i] == ')') {
                    ++i;
                    break;
                }
                std::size_t j = i;
                while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
                if (j == i) throw InvalidInput("Perm: unexpected character in \"" + text + "\"");
                unsigned long pt = std::stoul(text.substr(i, j - i));
                if (pt < 1 || pt > degree)
                    throw InvalidInput("Perm: point " + std::to_string(pt) + " outside 1.." + std::to_string(degree));
                if (used[pt - 1]) throw InvalidInput("Perm: point " + std::to_string(pt) + " repeated");
                used[pt - 1] = true;
                cyc.push_back(static_cast<std::uint32_t>(pt - 1));
                i = j;
            }
            for (std::size_t k = 0; k < cyc.size(); ++k) v[cyc[k]] = cyc[(k + 1) % cyc.size()];
            skip_ws();
        }
        return Perm(std::move(v), Unchecked{});
    }

    [[nodiscard]] std::size_t degree() const noexcept { return img_.size(); }
    [[nodiscard]] std::uint32_t operator()(std::size_t x) const { return img_[x]; }
    [[nodiscard]] const std::vector<std::uint32_t>& images() const noexcept { return img_; }
    [[nodiscard]] std::vector<std::int64_t> images_1based() const {
        std::vector<std::int64_t> v;
        for (auto x : img_) v.push_back(static_cast<std::int64_t>(x) + 1);
        return v;
    }

    friend Perm operator*(const Perm& a, const Perm& b) {
        if (a.degree() != b.degree()) throw DimensionMismatch("Perm product: degrees differ");
        std::vector<std::uint32_t> v(a.degree());
        for (std::size_t x = 0; x < v.size(); ++x) v[x] = a.img_[b.img_[x]];
        return Perm(std::move(v), Unchecked{});
    }
    [[nodiscard]] Perm inverse() const {
        std::vector<std::uint32_t> v(degree());
        for (std::size_t x = 0; x < v.size(); ++x) v[img_[x]] = static_cast<std::uint32_t>(x);
        return Perm(std::move(v), Unchecked{});
    }
    [[nodiscard]] bool is_identity() const {
        for (std::size_t x = 0; x < img_.size(); ++x)
            if (img_[x] != x) return false;
        return true;
    }
    [[nodiscard]] std::size_t order() const {
        std::size_t o = 1;
        std::vector<bool> seen(degree());
        for (std::size_t x = 0; x < degree(); ++x) {
            if (seen[x]) continue;
            std::size_t len = 0;
            for (std::size_t y = x; !seen[y]; y = img_[y]) {
                seen[y] = true;
                ++len;
            }
            o = std::lcm(o, len);
        }
        return o;
    }
    [[nodiscard]] std::string to_cycles() const {
        std::ostringstream os;
        std::vector<bool> seen(degree());
        for (std::size_t x = 0; x < degree(); ++x) {
            if (seen[x] || img_[x] == x) continue;
            os << '(';
            for (std::size_t y = x; !seen[y]; y = img_[y]) {
                seen[y] = true;
                os << (y == x ? "" : " ") << y + 1;
            }
            os << ')';
        }
        std::string s = os.str();
        return s.empty() ? "()" : s;
    }

    friend bool operator==(const Perm&, const Perm&) = default;
    friend auto operator<=>(const Perm&, const Perm&) = default;

    [[nodiscard]] std::size_t hash() const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : img_) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }

private:
    struct Unchecked {};
    Perm(std::vector<std::uint32_t> images, Unchecked) : img_(std::move(images)) {}
    std::vector<std::uint32_t> img_;
};

struct PermHash {
    std::size_t operator()(const Perm& p) const noexcept { return p.hash(); }
};

/// Set of element indices of an enumerated group.
class ElementSet {
public:
    ElementSet() = default;
    explicit ElementSet(std::size_t n) : n_(n), w_((n + 63) / 64) {}
    void set(std::size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
    [[nodiscard]] bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    [[nodiscard]] bool subset_of(const ElementSet& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    [[nodiscard]] ElementSet intersect(const ElementSet& o) const {
        ElementSet r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
        return r;
    }
    [[nodiscard]] std::vector<std::size_t> indices() const {
        std::vector<std::size_t> v;
        for (std::size_t k = 0; k < w_.size(); ++k)
            for (std::uint64_t x = w_[k]; x; x &= x - 1) v.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        return v;
    }
    [[nodiscard]] std::size_t universe() const noexcept { return n_; }
    friend bool operator==(const ElementSet&, const ElementSet&) = default;
    friend bool operator<(const ElementSet& a, const ElementSet& b) {
        // lexicographic on sorted index lists
        for (std::size_t k = 0; k < a.w_.size(); ++k) {
            if (a.w_[k] == b.w_[k]) continue;
            std::uint64_t d = a.w_[k] ^ b.w_[k];
            std::uint64_t low = d & (~d + 1);
            return (a.w_[k] & low) != 0;
        }
        return false;
    }
    [[nodiscard]] std::size_t hash() const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto x : w_) h = (h ^ x) * 0xff51afd7ed558ccdull;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct ElementSetHash {
    std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

struct GroupLimits {
    std::size_t order_cap = 1000;          // subgroup tables and direct lattice computations
    std::size_t enumeration_cap = 50000;   // element enumeration for order and predicates
    static constexpr std::size_t hard_order_cap = 5040;
};

class PermGroup {
public:
    PermGroup() : PermGroup(0, {}) {}
    PermGroup(std::size_t degree, std::vector<Perm> gens, GroupLimits limits = {})
        : st_(std::make_shared<State>()) {
        st_->degree = degree;
        st_->limits = limits;
        for (auto& g : gens) {
            if (g.degree() != degree)
                throw InvalidInput("PermGroup: generator of degree " + std::to_string(g.degree()) +
                                   " in a group of degree " + std::to_string(degree));
            if (!g.is_identity()) st_->gens.push_back(std::move(g));
        }
    }

    [[nodiscard]] std::size_t degree() const noexcept { return st_->degree; }
    [[nodiscard]] const std::vector<Perm>& generators() const noexcept { return st_->gens; }
    [[nodiscard]] const GroupLimits& limits() const noexcept { return st_->limits; }
    [[nodiscard]] PermGroup with_limits(GroupLimits l) const { return PermGroup(degree(), generators(), l); }
    /// Same degree and generator list (hence the same element enumeration).
    [[nodiscard]] bool same_as(const PermGroup& o) const {
        return st_ == o.st_ || (degree() == o.degree() && generators() == o.generators());
    }

    /// Subgroup generated by `gens`, sharing degree and limits.
    [[nodiscard]] PermGroup subgroup(std::vector<Perm> gens) const { return PermGroup(degree(), std::move(gens), limits()); }

    // ---- enumeration ----

    /// All elements, identity first, in breadth-first order of left multiplication by generators.
    [[nodiscard]] const std::vector<Perm>& elements() const { return enumeration().elements; }
    [[nodiscard]] std::size_t order() const { return enumeration().elements.size(); }
    [[nodiscard]] std::optional<std::size_t> index_of(const Perm& p) const {
        const auto& e = enumeration();
        auto it = e.index.find(p);
        if (it == e.index.end()) return std::nullopt;
        return it->second;
    }
    [[nodiscard]] bool contains(const Perm& p) const { return p.degree() == degree() && index_of(p).has_value(); }
    /// Element i equals generators()[factor_gen(i)] * element(factor_parent(i)) for i > 0.
    [[nodiscard]] std::size_t factor_gen(std::size_t i) const { return enumeration().gen[i]; }
    [[nodiscard]] std::size_t factor_parent(std::size_t i) const { return enumeration().parent[i]; }
    /// Index of generators()[g] * element(i).
    [[nodiscard]] std::size_t left_mul_gen(std::size_t g, std::size_t i) const { return enumeration().gen_table[g][i]; }
    [[nodiscard]] std::size_t inverse_index(std::size_t i) const { return enumeration().inverse[i]; }
    [[nodiscard]] std::size_t element_order(std::size_t i) const { return enumeration().orders[i]; }

    /// Throws CapExceeded unless |G| <= order_cap.
    void require_order_cap(const std::string& what) const {
        if (order() > limits().order_cap) throw CapExceeded(what + " order", limits().order_cap, order());
    }

    /// Full multiplication table (index of element(i) * element(j)); requires |G| <= order_cap.
    [[nodiscard]] std::size_t mul(std::size_t i, std::size_t j) const {
        const auto& t = mult_table();
        return t[i * order() + j];
    }

    /// Element indices of a subgroup of this group; throws NotASubgroup if some generator is outside.
    [[nodiscard]] ElementSet element_set(const PermGroup& h) const {
        if (h.degree() != degree()) throw NotASubgroup("subgroup has different degree");
        for (const auto& g : h.generators())
            if (!contains(g)) throw NotASubgroup("generator " + g.to_cycles() + " is not in the group");
        ElementSet s(order());
        for (const auto& p : h.elements()) s.set(*index_of(p));
        return s;
    }
    [[nodiscard]] bool is_subgroup_of(const PermGroup& g) const {
        if (g.degree() != degree()) return false;
        return std::all_of(generators().begin(), generators().end(), [&](const Perm& p) { return g.contains(p); });
    }

    // ---- predicates ----

    [[nodiscard]] std::vector<std::size_t> orbit(std::size_t pt) const {
        std::vector<bool> seen(degree());
        std::vector<std::size_t> out{pt};
        seen[pt] = true;
        for (std::size_t k = 0; k < out.size(); ++k)
            for (const auto& g : generators()) {
                std::size_t y = g(out[k]);
                if (!seen[y]) {
                    seen[y] = true;
                    out.push_back(y);
                }
            }
        return out;
    }
    [[nodiscard]] bool is_transitive() const { return degree() == 0 || orbit(0).size() == degree(); }

    [[nodiscard]] bool is_cyclic() const {
        const auto n = order();
        for (std::size_t i = 0; i < n; ++i)
            if (element_order(i) == n) return true;
        return false;
    }
    [[nodiscard]] bool is_abelian() const {
        const auto& g = generators();
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j)
                if (g[i] * g[j] != g[j] * g[i]) return false;
        return true;
    }
    /// Nilpotent iff every Sylow subgroup is normal iff the p-elements number exactly |G|_p.
    [[nodiscard]] bool is_nilpotent() const {
        const auto n = order();
        for (auto [p, e] : factorize(n)) {
            std::size_t pp = ipow(p, e), count = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (is_power_of(element_order(i), p)) ++count;
            if (count != pp) return false;
        }
        return true;
    }
    /// Sylow p-subgroups are cyclic iff some element has order |G|_p.
    [[nodiscard]] bool all_sylow_cyclic() const {
        const auto n = order();
        for (auto [p, e] : factorize(n)) {
            std::size_t pp = ipow(p, e);
            bool found = false;
            for (std::size_t i = 0; i < n && !found; ++i) found = element_order(i) == pp;
            if (!found) return false;
        }
        return true;
    }

    [[nodiscard]] PermGroup sylow(std::size_t p) const {
        if (!is_prime(p)) throw InvalidInput("sylow: " + std::to_string(p) + " is not prime");
        const auto n = order();
        std::size_t target = 1;
        for (std::size_t m = n; m % p == 0; m /= p) target *= p;
        std::vector<Perm> gens;
        PermGroup cur = subgroup({});
        while (cur.order() < target) {
            bool grown = false;
            for (std::size_t i = 1; i < n && !grown; ++i) {
                if (!is_power_of(element_order(i), p)) continue;
                const Perm& x = elements()[i];
                if (cur.contains(x)) continue;
                Perm xi = x.inverse();
                bool normalizes = std::all_of(cur.generators().begin(), cur.generators().end(),
                                              [&](const Perm& h) { return cur.contains(x * h * xi); });
                if (!normalizes) continue;
                gens.push_back(x);
                cur = subgroup(gens);
                grown = true;
            }
            if (!grown) throw InternalError("sylow: could not extend p-subgroup");
        }
        return cur;
    }

    [[nodiscard]] PermGroup point_stabilizer(std::size_t pt) const {
        if (pt >= degree()) throw InvalidInput("point_stabilizer: point out of range");
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < order(); ++i)
            if (elements()[i](pt) == pt) idx.push_back(i);
        return subgroup_from_indices(idx);
    }

    /// Subgroup generated greedily from the listed element indices.
    [[nodiscard]] PermGroup subgroup_from_indices(const std::vector<std::size_t>& idx) const {
        std::vector<Perm> gens;
        PermGroup cur = subgroup({});
        for (auto i : idx) {
            if (cur.contains(elements()[i])) continue;
            gens.push_back(elements()[i]);
            cur = subgroup(gens);
            if (cur.order() == idx.size()) break;
        }
        return cur;
    }

    [[nodiscard]] PermGroup normal_core(const PermGroup& h) const {
        ElementSet core = element_set(h);
        for (std::size_t x = 0; x < order(); ++x) {
            const Perm& g = elements()[x];
            Perm gi = g.inverse();
            ElementSet conj(order());
            for (const auto& p : h.elements()) conj.set(*index_of(g * p * gi));
            core = core.intersect(conj);
        }
        return subgroup_from_indices(core.indices());
    }

    [[nodiscard]] bool is_normal(const PermGroup& h) const {
        for (const auto& g : generators()) {
            Perm gi = g.inverse();
            for (const auto& x : h.generators())
                if (!h.contains(g * x * gi)) return false;
        }
        return true;
    }

    // ---- arithmetic helpers ----

    static bool is_prime(std::size_t n) {
        if (n < 2) return false;
        for (std::size_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
    static std::vector<std::pair<std::size_t, std::size_t>> factorize(std::size_t n) {
        std::vector<std::pair<std::size_t, std::size_t>> f;
        for (std::size_t d = 2; d * d <= n; ++d) {
            std::size_t e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            if (e) f.emplace_back(d, e);
        }
        if (n > 1) f.emplace_back(n, 1);
        return f;
    }
    static std::size_t ipow(std::size_t b, std::size_t e) {
        std::size_t r = 1;
        while (e--) r *= b;
        return r;
    }
    static bool is_power_of(std::size_t n, std::size_t p) {
        while (n % p == 0) n /= p;
        return n == 1;
    }

private:
    struct Enumeration {
        std::vector<Perm> elements;
        std::unordered_map<Perm, std::size_t, PermHash> index;
        std::vector<std::size_t> parent, gen, inverse, orders;
        std::vector<std::vector<std::size_t>> gen_table;
    };
    struct State {
        std::size_t degree = 0;
        std::vector<Perm> gens;
        GroupLimits limits;
        std::once_flag enum_once, mult_once;
        Enumeration en;
        std::vector<std::uint32_t> mult;
    };

    const Enumeration& enumeration() const {
        std::call_once(st_->enum_once, [this] { enumerate(); });
        return st_->en;
    }

    void enumerate() const {
        Enumeration& e = st_->en;
        const auto& gens = st_->gens;
        const std::size_t cap = st_->limits.enumeration_cap;
        e.elements.push_back(Perm::identity(degree()));
        e.index.emplace(e.elements[0], 0);
        e.parent.push_back(0);
        e.gen.push_back(0);
        for (std::size_t k = 0; k < e.elements.size(); ++k) {
            for (std::size_t g = 0; g < gens.size(); ++g) {
                Perm q = gens[g] * e.elements[k];
                if (e.index.contains(q)) continue;
                if (e.elements.size() >= cap) {
                    e = Enumeration{};
                    throw CapExceeded("group enumeration", cap, cap + 1);
                }
                e.index.emplace(q, e.elements.size());
                e.elements.push_back(std::move(q));
                e.parent.push_back(k);
                e.gen.push_back(g);
            }
        }
        const std::size_t n = e.elements.size();
        e.gen_table.assign(gens.size(), std::vector<std::size_t>(n));
        for (std::size_t g = 0; g < gens.size(); ++g)
            for (std::size_t i = 0; i < n; ++i) e.gen_table[g][i] = e.index.at(gens[g] * e.elements[i]);
        e.inverse.resize(n);
        e.orders.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            e.inverse[i] = e.index.at(e.elements[i].inverse());
            e.orders[i] = e.elements[i].order();
        }
    }

    const std::vector<std::uint32_t>& mult_table() const {
        std::call_once(st_->mult_once, [this] {
            const std::size_t n = order();
            if (n > std::max(limits().order_cap, GroupLimits::hard_order_cap))
                throw CapExceeded("multiplication table order", limits().order_cap, n);
            const auto& e = enumeration();
            auto& t = st_->mult;
            t.resize(n * n);
            for (std::size_t j = 0; j < n; ++j) t[j] = static_cast<std::uint32_t>(j);
            for (std::size_t i = 1; i < n; ++i) {
                const auto& gt = e.gen_table[e.gen[i]];
                const std::uint32_t* prow = &t[e.parent[i] * n];
                std::uint32_t* row = &t[i * n];
                for (std::size_t j = 0; j < n; ++j) row[j] = static_cast<std::uint32_t>(gt[prow[j]]);
            }
        });
        return st_->mult;
    }

    std::shared_ptr<State> st_;
};

// ---------------------------------------------------------------------------
// Cosets

/// Left cosets gH, representatives in enumeration order with the identity coset first.
struct CosetTable {
    PermGroup group;
    PermGroup subgroup;
    std::vector<std::size_t> rep_indices;      // element indices of representatives
    std::vector<std::size_t> coset_of;         // element index -> coset index
    std::vector<Perm> generator_action;        // action of each generator of `group` on coset indices

    [[nodiscard]] std::size_t size() const noexcept { return rep_indices.size(); }
    [[nodiscard]] std::vector<Perm> representatives() const {
        std::vector<Perm> r;
        for (auto i : rep_indices) r.push_back(group.elements()[i]);
        return r;
    }
    /// Coset index of element(g) * rep(c).
    [[nodiscard]] std::size_t act(std::size_t g, std::size_t c) const { return coset_of[group.mul(g, rep_indices[c])]; }
    /// Coset index of p * rep(c) for an arbitrary element p of the group.
    [[nodiscard]] std::size_t act(const Perm& p, std::size_t c) const {
        return coset_of[*group.index_of(p * group.elements()[rep_indices[c]])];
    }
};

inline CosetTable cosets(const PermGroup& g, const PermGroup& h) {
    ElementSet hs = g.element_set(h);
    const std::size_t n = g.order();
    CosetTable t{g, h, {}, std::vector<std::size_t>(n, SIZE_MAX), {}};
    auto hidx = hs.indices();
    for (std::size_t x = 0; x < n; ++x) {
        if (t.coset_of[x] != SIZE_MAX) continue;
        std::size_t c = t.rep_indices.size();
        t.rep_indices.push_back(x);
        const Perm& gx = g.elements()[x];
        for (auto hi : hidx) t.coset_of[*g.index_of(gx * g.elements()[hi])] = c;
    }
    const std::size_t m = t.rep_indices.size();
    for (std::size_t k = 0; k < g.generators().size(); ++k) {
        std::vector<std::uint32_t> img(m);
        for (std::size_t c = 0; c < m; ++c) img[c] = static_cast<std::uint32_t>(t.coset_of[g.left_mul_gen(k, t.rep_indices[c])]);
        t.generator_action.push_back(Perm(std::move(img)));
    }
    return t;
}

/// Number of orbits of the subgroup `h` (of table.group) on the cosets of the table.
inline std::size_t orbit_count(const PermGroup& h, const CosetTable& table) {
    std::vector<std::size_t> comp(table.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    std::size_t orbits = table.size();
    for (const auto& s : h.generators()) {
        if (!table.group.contains(s)) throw NotASubgroup("orbit_count: generator outside the group");
        for (std::size_t c = 0; c < table.size(); ++c) {
            std::size_t a = find(c), b = find(table.act(s, c));
            if (a != b) {
                comp[a] = b;
                --orbits;
            }
        }
    }
    return orbits;
}

// ---------------------------------------------------------------------------
// Conjugacy classes of subgroups

struct SubgroupClass {
    PermGroup group;
    ElementSet elements;   // element indices in the ambient group
    std::size_t order = 0;
    std::size_t class_size = 0;
    std::string structure;  // coarse structure label such as "C2 x C2" or "D10"
};

struct SubgroupClassTable {
    PermGroup group;
    std::vector<SubgroupClass> classes;       // sorted by order, then by canonical element set
    std::vector<std::vector<std::size_t>> contained_in;  // i -> classes j with a conjugate of rep i inside rep j
    std::unordered_map<ElementSet, std::size_t, ElementSetHash> class_of;  // every subgroup -> class
    std::optional<std::string> warning;

    [[nodiscard]] std::size_t size() const noexcept { return classes.size(); }
    [[nodiscard]] std::size_t subgroup_count() const {
        std::size_t s = 0;
        for (const auto& c : classes) s += c.class_size;
        return s;
    }
    [[nodiscard]] std::size_t class_index(const PermGroup& h) const { return class_of.at(group.element_set(h)); }
};

namespace detail {

inline ElementSet closure(const PermGroup& g, ElementSet set, const std::vector<std::size_t>& gens) {
    std::vector<std::size_t> queue = set.indices();
    if (queue.empty()) {
        set.set(0);
        queue.push_back(0);
    }
    for (std::size_t k = 0; k < queue.size(); ++k)
        for (auto s : gens) {
            std::size_t y = g.mul(queue[k], s);
            if (!set.test(y)) {
                set.set(y);
                queue.push_back(y);
            }
        }
    return set;
}

inline ElementSet conjugate(const PermGroup& g, const ElementSet& s, std::size_t x) {
    ElementSet r(g.order());
    std::size_t xi = g.inverse_index(x);
    for (auto i : s.indices()) r.set(g.mul(g.mul(x, i), xi));
    return r;
}

inline std::vector<std::size_t> greedy_generators(const PermGroup& g, const ElementSet& s) {
    std::vector<std::size_t> gens;
    ElementSet cur(g.order());
    cur.set(0);
    const std::size_t target = s.count();
    // prefer high-order elements so that few generators suffice
    auto idx = s.indices();
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return g.element_order(a) > g.element_order(b); });
    for (auto i : idx) {
        if (cur.count() == target) break;
        if (cur.test(i)) continue;
        gens.push_back(i);
        cur = closure(g, cur, gens);
    }
    return gens;
}

inline std::string structure_label(const PermGroup& g, const ElementSet& s) {
    const std::size_t n = s.count();
    if (n == 1) return "1";
    auto idx = s.indices();
    std::size_t maxo = 0;
    for (auto i : idx) maxo = std::max(maxo, g.element_order(i));
    if (maxo == n) return "C" + std::to_string(n);
    bool abelian = true;
    for (std::size_t a = 0; a < idx.size() && abelian; ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            if (g.mul(idx[a], idx[b]) != g.mul(idx[b], idx[a])) {
                abelian = false;
                break;
            }
    std::map<std::size_t, std::size_t> order_count;
    for (auto i : idx) ++order_count[g.element_order(i)];
    if (abelian) {
        // invariant factors from the counts of elements of each order
        std::vector<std::size_t> factors;
        std::size_t rest = n;
        for (std::size_t p = 2; rest > 1; ++p) {
            if (rest % p) continue;
            std::size_t e = 0;
            while (rest % p == 0) rest /= p, ++e;
            // cnt[k] = number of elements killed by p^k = p^(sum_i min(k, e_i))
            std::vector<std::size_t> logs{0};
            for (std::size_t k = 1, pk = p; logs.back() < e; ++k, pk *= p) {
                std::size_t c = 0;
                for (const auto& [o, m] : order_count)
                    if (pk % o == 0) c += m;
                std::size_t l = 0;
                while (c > 1) c /= p, ++l;
                logs.push_back(l);
            }
            // number of cyclic factors of order >= p^k is logs[k] - logs[k-1]
            std::vector<std::size_t> parts;
            for (std::size_t k = 1; k < logs.size(); ++k) parts.push_back(logs[k] - logs[k - 1]);
            std::vector<std::size_t> ppow;
            for (std::size_t k = 0; k < parts.size(); ++k) {
                std::size_t exact = parts[k] - (k + 1 < parts.size() ? parts[k + 1] : 0);
                std::size_t q = 1;
                for (std::size_t t = 0; t <= k; ++t) q *= p;
                for (std::size_t t = 0; t < exact; ++t) ppow.push_back(q);
            }
            std::sort(ppow.rbegin(), ppow.rend());
            if (factors.size() < ppow.size()) factors.resize(ppow.size(), 1);
            for (std::size_t t = 0; t < ppow.size(); ++t) factors[t] *= ppow[t];
        }
        std::string r;
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) r += (r.empty() ? "C" : " x C") + std::to_string(*it);
        return r;
    }
    if (!abelian && n % 2 == 0 && maxo == n / 2) {
        // dihedral iff every element outside the index-2 cyclic subgroup is an involution
        std::size_t r = 0;
        for (auto i : idx)
            if (g.element_order(i) == n / 2) {
                r = i;
                break;
            }
        ElementSet rot = closure(g, ElementSet(g.order()), {r});
        bool dihedral = true;
        for (auto i : idx)
            if (!rot.test(i) && g.element_order(i) != 2) dihedral = false;
        if (dihedral) return "D" + std::to_string(n / 2);
    }
    auto count = [&](std::size_t o) { return order_count.count(o) ? order_count[o] : std::size_t{0}; };
    if (n == 8 && count(4) == 6) return "Q8";
    if (n == 12 && maxo == 3) return "A4";
    if (n == 24 && maxo == 4 && count(3) == 8 && count(4) == 6) return "S4";
    if (n == 60 && maxo == 5) return "A5";
    if (n == 120 && maxo == 6 && count(5) == 24) return "S5";
    if (n == 168 && maxo == 7 && count(7) == 48) return "PSL(2,7)";
    if (n == 504 && maxo == 9 && count(7) == 144) return "PSL(2,8)";
    // C_p x| C_m acting faithfully: normal Sylow p-subgroup of prime order, self-centralizing
    for (std::size_t p = 3; p <= n; ++p) {
        if (n % p || (n / p) % p == 0) continue;
        bool prime = true;
        for (std::size_t d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        std::size_t m = n / p;
        if ((p - 1) % m || count(p) != p - 1 || count(m) == 0) continue;
        bool faithful = true;
        for (const auto& [o, c] : order_count)
            if (o % p == 0 && o != p) faithful = false;
        if (faithful) return "F" + std::to_string(n);
    }
    return "group of order " + std::to_string(n);
}

}  // namespace detail

/// Complete list of conjugacy classes of subgroups, by joins of class
/// representatives with cyclic subgroups.
inline SubgroupClassTable subgroup_classes(const PermGroup& g) {
    const std::size_t n = g.order();
    const auto& lim = g.limits();
    if (lim.order_cap > GroupLimits::hard_order_cap)
        throw InvalidInput("order_cap above " + std::to_string(GroupLimits::hard_order_cap) + " is not supported");
    g.require_order_cap("subgroup_classes");
    SubgroupClassTable table{g, {}, {}, {}, std::nullopt};
    if (lim.order_cap > 1000)
        table.warning = "order_cap raised to " + std::to_string(lim.order_cap) + "; subgroup enumeration may be slow";

    std::vector<std::size_t> gen_idx;
    for (const auto& p : g.generators()) gen_idx.push_back(*g.index_of(p));

    // cyclic subgroups, deduplicated
    std::vector<ElementSet> cyclic;
    std::vector<std::size_t> cyclic_gen;
    {
        std::unordered_map<ElementSet, std::size_t, ElementSetHash> seen;
        for (std::size_t x = 0; x < n; ++x) {
            ElementSet c = detail::closure(g, ElementSet(n), {x});
            if (seen.emplace(c, cyclic.size()).second) {
                cyclic.push_back(std::move(c));
                cyclic_gen.push_back(x);
            }
        }
    }

    struct Work {
        ElementSet rep;
        std::vector<std::size_t> gens;
        std::vector<ElementSet> conjugates;
    };
    std::vector<Work> found;
    auto add_class = [&](const ElementSet& s, std::vector<std::size_t> gens) {
        if (table.class_of.contains(s)) return;
        // orbit under conjugation by the group generators
        std::vector<ElementSet> orbit{s};
        std::size_t cid = found.size();
        table.class_of.emplace(s, cid);
        for (std::size_t k = 0; k < orbit.size(); ++k)
            for (auto x : gen_idx) {
                ElementSet c = detail::conjugate(g, orbit[k], x);
                if (table.class_of.emplace(c, cid).second) orbit.push_back(std::move(c));
            }
        found.push_back({s, std::move(gens), std::move(orbit)});
    };

    add_class(detail::closure(g, ElementSet(n), {}), {});
    for (std::size_t k = 0; k < found.size(); ++k) {
        for (std::size_t c = 0; c < cyclic.size(); ++c) {
            if (cyclic[c].subset_of(found[k].rep)) continue;
            auto gens = found[k].gens;
            gens.push_back(cyclic_gen[c]);
            ElementSet j = detail::closure(g, found[k].rep, gens);
            if (table.class_of.contains(j)) continue;
            add_class(j, detail::greedy_generators(g, j));
        }
    }

    // canonical representative: least element set within the class
    std::vector<std::size_t> order(found.size());
    for (auto& w : found) w.rep = *std::min_element(w.conjugates.begin(), w.conjugates.end());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        std::size_t oa = found[a].rep.count(), ob = found[b].rep.count();
        if (oa != ob) return oa < ob;
        return found[a].rep < found[b].rep;
    });
    std::vector<std::size_t> renumber(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) renumber[order[i]] = i;
    for (auto& [set, cid] : table.class_of) cid = renumber[cid];

    for (auto k : order) {
        const Work& w = found[k];
        std::vector<Perm> gens;
        for (auto i : detail::greedy_generators(g, w.rep)) gens.push_back(g.elements()[i]);
        SubgroupClass sc{g.subgroup(std::move(gens)), w.rep, w.rep.count(), w.conjugates.size(),
                         detail::structure_label(g, w.rep)};
        table.classes.push_back(std::move(sc));
    }

    table.contained_in.resize(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const ElementSet& small = found[order[i]].rep;
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (found[order[j]].rep.count() % small.count() != 0) continue;
            for (const auto& conj : found[order[j]].conjugates)
                if (small.subset_of(conj)) {
                    table.contained_in[i].push_back(j);
                    break;
                }
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Presentation-shaped predicates

struct MetacyclicForm {
    std::size_t m = 1;  // odd order of the normal cyclic subgroup <s>
    std::size_t d = 0;  // <t> has order 2^d
    std::size_t r = 1;  // t s t^-1 = s^r, r^2 = 1 mod m
    Perm s, t;
};

/// G = <s, t> with s^m = t^(2^d) = 1, t s t^-1 = s^r, m odd, r^2 = 1 (mod m).
inline std::optional<MetacyclicForm> metacyclic_form(const PermGroup& g) {
    const std::size_t n = g.order();
    std::size_t m = n, d = 0;
    while (m % 2 == 0) {
        m /= 2;
        ++d;
    }
    const std::size_t two = n / m;
    std::optional<std::size_t> s_idx, t_idx;
    for (std::size_t i = 0; i < n && !s_idx; ++i) {
        if (g.element_order(i) != m) continue;
        PermGroup sg = g.subgroup({g.elements()[i]});
        if (g.is_normal(sg)) s_idx = i;
    }
    for (std::size_t i = 0; i < n && !t_idx; ++i)
        if (g.element_order(i) == two) t_idx = i;
    if (!s_idx || !t_idx) return std::nullopt;
    const Perm& s = g.elements()[*s_idx];
    const Perm& t = g.elements()[*t_idx];
    Perm conj = t * s * t.inverse();
    std::size_t r = 0;
    Perm pw = Perm::identity(g.degree());
    for (std::size_t k = 0; k < m; ++k) {
        if (pw == conj) {
            r = k;
            break;
        }
        pw = pw * s;
    }
    if (m == 1) r = 1;
    if ((r * r) % m != 1 % m) return std::nullopt;
    return MetacyclicForm{m, d, r, s, t};
}

/// |H| = 2 and G = N x| H with N normal cyclic of odd order r >= 3 and H acting nontrivially.
inline bool odd_cr_c2_form(const PermGroup& g, const PermGroup& h) {
    if (!h.is_subgroup_of(g)) throw NotASubgroup("odd_cr_c2_form: H is not a subgroup of G");
    if (h.order() != 2) return false;
    const std::size_t n = g.order();
    if (n % 2 != 0 || (n / 2) % 2 == 0 || n / 2 < 3) return false;
    const std::size_t r = n / 2;
    const Perm& hx = h.generators().front();
    for (std::size_t i = 0; i < n; ++i) {
        if (g.element_order(i) != r) continue;
        const Perm& s = g.elements()[i];
        if (!g.is_normal(g.subgroup({s}))) continue;
        return hx * s * hx.inverse() != s;
    }
    return false;
}

}  // namespace normtori
