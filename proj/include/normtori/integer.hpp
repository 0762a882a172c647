#pragma once

// Arbitrary-precision signed integer with an inline 64-bit fast path.
//
// Values that fit in int64 are stored inline; anything larger lives in a
// heap-allocated GMP integer. Results are demoted back to the inline form
// whenever they fit, so the common case of small matrix entries never
// touches the allocator.

#include <gmp.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace normtori {

class Integer {
public:
    Integer() noexcept = default;

    template <std::signed_integral T>
    Integer(T v) noexcept : small_(static_cast<std::int64_t>(v)) {}

    template <std::unsigned_integral T>
        requires(!std::same_as<T, bool>)
    Integer(T v) {
        if (static_cast<std::uint64_t>(v) <= static_cast<std::uint64_t>(kMax)) {
            small_ = static_cast<std::int64_t>(v);
        } else {
            big_ = new_mpz();
            mpz_set_ui(big_, static_cast<unsigned long>(v));
        }
    }

    explicit Integer(std::string_view text) {
        std::string s(text);
        mpz_t tmp;
        if (mpz_init_set_str(tmp, s.c_str(), 10) != 0) {
            mpz_clear(tmp);
            throw std::invalid_argument("Integer: malformed decimal literal '" + s + "'");
        }
        assign_from(tmp);
        mpz_clear(tmp);
    }

    Integer(const Integer& o) : small_(o.small_) {
        if (o.big_) {
            big_ = new_mpz();
            mpz_set(big_, o.big_);
        }
    }
    Integer(Integer&& o) noexcept : small_(o.small_), big_(o.big_) {
        o.big_ = nullptr;
        o.small_ = 0;
    }
    Integer& operator=(const Integer& o) {
        if (this == &o) return *this;
        if (o.big_) {
            if (!big_) big_ = new_mpz();
            mpz_set(big_, o.big_);
        } else {
            release();
            small_ = o.small_;
        }
        return *this;
    }
    Integer& operator=(Integer&& o) noexcept {
        if (this == &o) return *this;
        release();
        small_ = o.small_;
        big_ = o.big_;
        o.big_ = nullptr;
        o.small_ = 0;
        return *this;
    }
    ~Integer() { release(); }

    [[nodiscard]] bool is_small() const noexcept { return big_ == nullptr; }
    [[nodiscard]] bool is_zero() const noexcept { return !big_ && small_ == 0; }
    [[nodiscard]] bool is_one() const noexcept { return !big_ && small_ == 1; }
    [[nodiscard]] int sign() const noexcept {
        if (big_) return mpz_sgn(big_);
        return (small_ > 0) - (small_ < 0);
    }
    [[nodiscard]] bool fits_int64() const noexcept { return !big_; }
    [[nodiscard]] std::int64_t to_int64() const {
        if (big_) throw std::overflow_error("Integer: value does not fit in int64");
        return small_;
    }

    [[nodiscard]] std::string to_string() const {
        if (!big_) return std::to_string(small_);
        std::string out(mpz_sizeinbase(big_, 10) + 2, '\0');
        mpz_get_str(out.data(), 10, big_);
        out.resize(std::char_traits<char>::length(out.c_str()));
        return out;
    }

    /// Residue in [0, m) for a positive machine modulus.
    [[nodiscard]] std::uint64_t mod_u64(std::uint64_t m) const {
        if (!big_) {
            auto r = static_cast<std::int64_t>(small_ % static_cast<std::int64_t>(m));
            return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
        }
        return mpz_fdiv_ui(big_, static_cast<unsigned long>(m));
    }

    [[nodiscard]] std::size_t hash() const noexcept {
        if (!big_) return std::hash<std::int64_t>{}(small_);
        std::size_t h = static_cast<std::size_t>(mpz_sgn(big_));
        for (std::size_t i = 0; i < mpz_size(big_); ++i)
            h = h * 1099511628211ULL ^ static_cast<std::size_t>(mpz_getlimbn(big_, static_cast<mp_size_t>(i)));
        return h;
    }

    // ---- arithmetic -------------------------------------------------------

    Integer& operator+=(const Integer& o) {
        if (!big_ && !o.big_) {
            std::int64_t r;
            if (!__builtin_add_overflow(small_, o.small_, &r)) {
                small_ = r;
                return *this;
            }
        }
        return big_op(o, mpz_add);
    }
    Integer& operator-=(const Integer& o) {
        if (!big_ && !o.big_) {
            std::int64_t r;
            if (!__builtin_sub_overflow(small_, o.small_, &r)) {
                small_ = r;
                return *this;
            }
        }
        return big_op(o, mpz_sub);
    }
    Integer& operator*=(const Integer& o) {
        if (!big_ && !o.big_) {
            std::int64_t r;
            if (!__builtin_mul_overflow(small_, o.small_, &r)) {
                small_ = r;
                return *this;
            }
        }
        return big_op(o, mpz_mul);
    }
    /// Truncating division (C++ semantics).
    Integer& operator/=(const Integer& o) {
        if (o.is_zero()) throw std::domain_error("Integer: division by zero");
        if (!big_ && !o.big_ && !(small_ == kMin && o.small_ == -1)) {
            small_ /= o.small_;
            return *this;
        }
        return big_op(o, mpz_tdiv_q);
    }
    /// Remainder with the sign of the dividend (C++ semantics).
    Integer& operator%=(const Integer& o) {
        if (o.is_zero()) throw std::domain_error("Integer: division by zero");
        if (!big_ && !o.big_) {
            small_ = (o.small_ == -1) ? 0 : small_ % o.small_;
            return *this;
        }
        return big_op(o, mpz_tdiv_r);
    }

    /// this += a * b
    void add_mul(const Integer& a, const Integer& b) {
        if (!big_ && !a.big_ && !b.big_) {
            std::int64_t p, r;
            if (!__builtin_mul_overflow(a.small_, b.small_, &p) && !__builtin_add_overflow(small_, p, &r)) {
                small_ = r;
                return;
            }
        }
        *this += a * b;
    }
    /// this -= a * b
    void sub_mul(const Integer& a, const Integer& b) {
        if (!big_ && !a.big_ && !b.big_) {
            std::int64_t p, r;
            if (!__builtin_mul_overflow(a.small_, b.small_, &p) && !__builtin_sub_overflow(small_, p, &r)) {
                small_ = r;
                return;
            }
        }
        *this -= a * b;
    }

    friend Integer operator+(Integer a, const Integer& b) { return a += b; }
    friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
    friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
    friend Integer operator/(Integer a, const Integer& b) { return a /= b; }
    friend Integer operator%(Integer a, const Integer& b) { return a %= b; }
    Integer operator-() const {
        if (!big_ && small_ != kMin) return Integer(-small_);
        Integer r(*this);
        r.ensure_big();
        mpz_neg(r.big_, r.big_);
        r.normalize();
        return r;
    }

    friend bool operator==(const Integer& a, const Integer& b) noexcept {
        if (!a.big_ && !b.big_) return a.small_ == b.small_;
        return cmp(a, b) == 0;
    }
    friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept {
        int c = (!a.big_ && !b.big_) ? ((a.small_ > b.small_) - (a.small_ < b.small_)) : cmp(a, b);
        return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

    /// Floor division and the matching non-negative remainder for b > 0.
    friend Integer floor_div(const Integer& a, const Integer& b) {
        if (b.is_zero()) throw std::domain_error("Integer: division by zero");
        if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) {
            std::int64_t q = a.small_ / b.small_;
            if ((a.small_ % b.small_ != 0) && ((a.small_ < 0) != (b.small_ < 0))) --q;
            return Integer(q);
        }
        Integer r(a);
        return r.big_op(b, mpz_fdiv_q);
    }

    friend bool divides(const Integer& d, const Integer& a) {
        if (d.is_zero()) return a.is_zero();
        if (!d.big_ && !a.big_) return d.small_ == -1 || a.small_ % d.small_ == 0;
        return (a % d).is_zero();
    }

    friend Integer gcd(const Integer& a, const Integer& b) {
        if (!a.big_ && !b.big_ && a.small_ != kMin && b.small_ != kMin) {
            std::int64_t x = a.small_ < 0 ? -a.small_ : a.small_;
            std::int64_t y = b.small_ < 0 ? -b.small_ : b.small_;
            while (y != 0) {
                std::int64_t t = x % y;
                x = y;
                y = t;
            }
            return Integer(x);
        }
        Integer r(a);
        return r.big_op(b, mpz_gcd);
    }

    friend std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.to_string(); }

private:
    static constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
    static constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

    std::int64_t small_ = 0;
    mpz_ptr big_ = nullptr;

    static mpz_ptr new_mpz() {
        auto* p = new __mpz_struct;
        mpz_init(p);
        return p;
    }
    void release() noexcept {
        if (big_) {
            mpz_clear(big_);
            delete big_;
            big_ = nullptr;
        }
    }
    void ensure_big() {
        if (!big_) {
            big_ = new_mpz();
            mpz_set_si(big_, static_cast<long>(small_));
        }
    }
    void normalize() {
        if (big_ && mpz_fits_slong_p(big_)) {
            small_ = mpz_get_si(big_);
            release();
        }
    }
    void assign_from(mpz_srcptr v) {
        if (mpz_fits_slong_p(v)) {
            release();
            small_ = mpz_get_si(v);
        } else {
            if (!big_) big_ = new_mpz();
            mpz_set(big_, v);
        }
    }
    static int cmp(const Integer& a, const Integer& b) noexcept {
        if (a.big_ && b.big_) return mpz_cmp(a.big_, b.big_);
        if (a.big_) return mpz_cmp_si(a.big_, static_cast<long>(b.small_));
        return -mpz_cmp_si(b.big_, static_cast<long>(a.small_));
    }
    template <class Op>
    Integer& big_op(const Integer& o, Op op) {
        ensure_big();
        if (o.big_) {
            op(big_, big_, o.big_);
        } else {
            mpz_t tmp;
            mpz_init_set_si(tmp, static_cast<long>(o.small_));
            op(big_, big_, tmp);
            mpz_clear(tmp);
        }
        normalize();
        return *this;
    }
};

/// Extended gcd: returns (g, x, y) with g = a*x + b*y, g >= 0.
struct Xgcd {
    Integer g, x, y;
};

inline Xgcd xgcd(const Integer& a, const Integer& b) {
    // Small operands keep Bezout coefficients bounded by max(|a|,|b|).
    if (a.fits_int64() && b.fits_int64()) {
        std::int64_t av = a.to_int64(), bv = b.to_int64();
        constexpr std::int64_t lim = std::numeric_limits<std::int64_t>::max() / 2;
        if (av > -lim && av < lim && bv > -lim && bv < lim) {
            std::int64_t r0 = av, r1 = bv, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            while (r1 != 0) {
                std::int64_t q = r0 / r1;
                std::int64_t tmp = r0 - q * r1;
                r0 = r1;
                r1 = tmp;
                tmp = s0 - q * s1;
                s0 = s1;
                s1 = tmp;
                tmp = t0 - q * t1;
                t0 = t1;
                t1 = tmp;
            }
            if (r0 < 0) {
                r0 = -r0;
                s0 = -s0;
                t0 = -t0;
            }
            return {Integer(r0), Integer(s0), Integer(t0)};
        }
    }
    Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (!r1.is_zero()) {
        Integer q = r0 / r1;
        Integer tmp = r0 - q * r1;
        r0 = std::move(r1);
        r1 = std::move(tmp);
        tmp = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(tmp);
        tmp = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(tmp);
    }
    if (r0.sign() < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    return {r0, s0, t0};
}

inline Integer pow(Integer base, unsigned exp) {
    Integer r = 1;
    while (exp) {
        if (exp & 1u) r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

}  // namespace normtori

template <>
struct std::hash<normtori::Integer> {
    std::size_t operator()(const normtori::Integer& v) const noexcept { return v.hash(); }
};
