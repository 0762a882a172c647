#pragma once

// Exact integer linear algebra: dense matrices over Z, echelon and Smith
// normal forms, Z-linear solving and saturated kernels.
//
// Elimination uses Euclidean pivoting: at every step the nonzero entry of
// least absolute value becomes the pivot, ties broken by lowest (row, col).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "normtori/errors.hpp"
#include "normtori/integer.hpp"

namespace normtori {

using IntVector = std::vector<Integer>;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw DimensionMismatch("IntMatrix: " + std::to_string(data_.size()) + " entries for " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionMismatch("IntMatrix: ragged initializer");
            for (auto v : r) data_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& columns) {
        IntMatrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows) throw DimensionMismatch("IntMatrix::from_columns: column length");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
        }
        return m;
    }
    static IntMatrix from_rows(std::size_t cols, const std::vector<IntVector>& rows) {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw DimensionMismatch("IntMatrix::from_rows: row length");
            std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * cols));
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] const std::vector<Integer>& entries() const noexcept { return data_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] IntVector row(std::size_t i) const {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    [[nodiscard]] IntVector col(std::size_t j) const {
        IntVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    [[nodiscard]] bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x.is_zero(); });
    }
    [[nodiscard]] bool is_identity() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != Integer(i == j ? 1 : 0)) return false;
        return true;
    }

    [[nodiscard]] IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    [[nodiscard]] IntVector apply(const IntVector& x) const {
        if (x.size() != cols_) throw DimensionMismatch("IntMatrix::apply: vector length");
        IntVector y(rows_);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (x[j].is_zero()) continue;
            for (std::size_t i = 0; i < rows_; ++i) {
                const Integer& a = (*this)(i, j);
                if (!a.is_zero()) y[i].add_mul(a, x[j]);
            }
        }
        return y;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("IntMatrix product: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                                    " * " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik.is_zero()) continue;
                const Integer* brow = &b.data_[k * b.cols_];
                Integer* crow = &c.data_[i * c.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!brow[j].is_zero()) crow[j].add_mul(aik, brow[j]);
            }
        }
        return c;
    }
    friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) {
        a.check_same_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) {
        a.check_same_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    IntMatrix& operator+=(const IntMatrix& b) {
        check_same_shape(b);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += b.data_[i];
        return *this;
    }
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row[dst] -= q * row[src], starting at column `from`.
    void row_submul(std::size_t dst, std::size_t src, const Integer& q, std::size_t from = 0) {
        Integer* d = &data_[dst * cols_];
        const Integer* s = &data_[src * cols_];
        for (std::size_t j = from; j < cols_; ++j)
            if (!s[j].is_zero()) d[j].sub_mul(q, s[j]);
    }
    /// col[dst] -= q * col[src]
    void col_submul(std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t i = 0; i < rows_; ++i)
            if (!(*this)(i, src).is_zero()) (*this)(i, dst).sub_mul(q, (*this)(i, src));
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }

    /// Rows [r0, r1) as a new matrix.
    [[nodiscard]] IntMatrix row_block(std::size_t r0, std::size_t r1) const {
        IntMatrix m(r1 - r0, cols_);
        std::copy(data_.begin() + static_cast<std::ptrdiff_t>(r0 * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>(r1 * cols_), m.data_.begin());
        return m;
    }
    [[nodiscard]] IntMatrix col_block(std::size_t c0, std::size_t c1) const {
        IntMatrix m(rows_, c1 - c0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = c0; j < c1; ++j) m(i, j - c0) = (*this)(i, j);
        return m;
    }

    [[nodiscard]] static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_) throw DimensionMismatch("IntMatrix::hstack: row counts differ");
        IntMatrix m(a.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
        }
        return m;
    }
    [[nodiscard]] static IntMatrix vstack(const std::vector<IntMatrix>& blocks) {
        std::size_t cols = blocks.empty() ? 0 : blocks.front().cols_;
        std::size_t rows = 0;
        for (const auto& b : blocks) {
            if (b.cols_ != cols) throw DimensionMismatch("IntMatrix::vstack: column counts differ");
            rows += b.rows_;
        }
        IntMatrix m(rows, cols);
        std::size_t at = 0;
        for (const auto& b : blocks) {
            std::copy(b.data_.begin(), b.data_.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(at));
            at += b.data_.size();
        }
        return m;
    }
    [[nodiscard]] static IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
        std::size_t r = 0, c = 0;
        for (const auto& b : blocks) {
            r += b.rows_;
            c += b.cols_;
        }
        IntMatrix m(r, c);
        std::size_t r0 = 0, c0 = 0;
        for (const auto& b : blocks) {
            for (std::size_t i = 0; i < b.rows_; ++i)
                for (std::size_t j = 0; j < b.cols_; ++j) m(r0 + i, c0 + j) = b(i, j);
            r0 += b.rows_;
            c0 += b.cols_;
        }
        return m;
    }

    [[nodiscard]] std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    void check_same_shape(const IntMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionMismatch("IntMatrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

// ---------------------------------------------------------------------------
// Echelon form

struct EchelonForm {
    IntMatrix reduced;                   // U * A
    std::optional<IntMatrix> transform;  // U, unimodular, when requested
    std::vector<std::size_t> pivot_cols;
    [[nodiscard]] std::size_t rank() const noexcept { return pivot_cols.size(); }
};

namespace detail {

inline std::size_t min_abs_row(const IntMatrix& a, std::size_t col, std::size_t from) {
    std::size_t best = a.rows();
    Integer best_abs;
    for (std::size_t i = from; i < a.rows(); ++i) {
        const Integer& v = a(i, col);
        if (v.is_zero()) continue;
        Integer av = abs(v);
        if (best == a.rows() || av < best_abs) {
            best = i;
            best_abs = std::move(av);
            if (best_abs.is_one()) break;
        }
    }
    return best;
}

}  // namespace detail

/// Row echelon form by unimodular row operations. Only the first
/// `pivot_limit` columns are used as pivots (the rest ride along, e.g. a
/// right-hand side). With `reduce_above`, entries above each pivot are
/// reduced into [0, pivot), giving the Hermite normal form.
inline EchelonForm row_echelon(IntMatrix a, bool with_transform, std::size_t pivot_limit = SIZE_MAX,
                               bool reduce_above = false) {
    const std::size_t m = a.rows(), n = a.cols();
    pivot_limit = std::min(pivot_limit, n);
    EchelonForm out;
    std::optional<IntMatrix> u;
    if (with_transform) u = IntMatrix::identity(m);
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_limit && r < m; ++c) {
        bool have_pivot = false;
        for (;;) {
            std::size_t p = detail::min_abs_row(a, c, r);
            if (p == m) break;
            have_pivot = true;
            a.swap_rows(p, r);
            if (u) u->swap_rows(p, r);
            bool clean = true;
            const Integer piv = a(r, c);
            for (std::size_t i = r + 1; i < m; ++i) {
                if (a(i, c).is_zero()) continue;
                Integer q = a(i, c) / piv;
                if (!q.is_zero()) {
                    a.row_submul(i, r, q, c);
                    if (u) u->row_submul(i, r, q);
                }
                if (!a(i, c).is_zero()) clean = false;
            }
            if (clean) break;
        }
        if (!have_pivot) continue;
        if (a(r, c).sign() < 0) {
            a.negate_row(r);
            if (u) u->negate_row(r);
        }
        if (reduce_above) {
            for (std::size_t i = 0; i < r; ++i) {
                if (a(i, c).is_zero()) continue;
                Integer q = floor_div(a(i, c), a(r, c));
                if (q.is_zero()) continue;
                a.row_submul(i, r, q, c);
                if (u) u->row_submul(i, r, q);
            }
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.reduced = std::move(a);
    out.transform = std::move(u);
    return out;
}

struct HermiteForm {
    IntMatrix h;  // U * A, row-style Hermite normal form
    IntMatrix u;  // unimodular
};

inline HermiteForm hermite(const IntMatrix& a) {
    auto e = row_echelon(a, true, SIZE_MAX, true);
    return {std::move(e.reduced), std::move(*e.transform)};
}

inline std::size_t rank(const IntMatrix& a) { return row_echelon(a, false).rank(); }

/// The nonzero rows of an echelon form of `a` (same row lattice).
inline IntMatrix row_basis(const IntMatrix& a) {
    auto e = row_echelon(a, false);
    return e.reduced.row_block(0, e.rank());
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithDecomposition {
    IntMatrix u;  // rows x rows, unimodular
    IntMatrix s;  // diagonal, d1 | d2 | ... , zeros last
    IntMatrix v;  // cols x cols, unimodular
    /// Nonzero diagonal entries, in order.
    [[nodiscard]] std::vector<Integer> divisors() const {
        std::vector<Integer> d;
        for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i)
            if (!s(i, i).is_zero()) d.push_back(s(i, i));
        return d;
    }
};

namespace detail {

inline void smith_in_place(IntMatrix& s, IntMatrix* u, IntMatrix* v) {
    const std::size_t m = s.rows(), n = s.cols();
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            // least |entry| in the trailing block, ties by lowest (row, col)
            std::size_t bi = m, bj = n;
            Integer best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    const Integer& x = s(i, j);
                    if (x.is_zero()) continue;
                    Integer ax = abs(x);
                    if (bi == m || ax < best) {
                        bi = i;
                        bj = j;
                        best = std::move(ax);
                    }
                }
            if (bi == m) return;
            s.swap_rows(t, bi);
            if (u) u->swap_rows(t, bi);
            s.swap_cols(t, bj);
            if (v) v->swap_cols(t, bj);
            bool dirty = false;
            const Integer piv = s(t, t);
            for (std::size_t i = t + 1; i < m; ++i) {
                if (s(i, t).is_zero()) continue;
                Integer q = s(i, t) / piv;
                s.row_submul(i, t, q, t);
                if (u) u->row_submul(i, t, q);
                if (!s(i, t).is_zero()) dirty = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (s(t, j).is_zero()) continue;
                Integer q = s(t, j) / piv;
                s.col_submul(j, t, q);
                if (v) v->col_submul(j, t, q);
                if (!s(t, j).is_zero()) dirty = true;
            }
            if (dirty) continue;
            // divisibility of the remaining block
            std::size_t fi = m;
            for (std::size_t i = t + 1; i < m && fi == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!divides(piv, s(i, j))) {
                        fi = i;
                        break;
                    }
            if (fi == m) break;
            // row_t += row_fi
            s.row_submul(t, fi, Integer(-1));
            if (u) u->row_submul(t, fi, Integer(-1));
        }
        if (s(t, t).sign() < 0) {
            s.negate_row(t);
            if (u) u->negate_row(t);
        }
    }
}

}  // namespace detail

/// U * A * V = S with S in Smith normal form.
inline SmithDecomposition snf(const IntMatrix& a) {
    SmithDecomposition d{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols())};
    detail::smith_in_place(d.s, &d.u, &d.v);
    return d;
}

/// Nonzero elementary divisors of `a` (no transforms kept).
inline std::vector<Integer> elementary_divisors(const IntMatrix& a) {
    IntMatrix s = row_basis(a);
    detail::smith_in_place(s, nullptr, nullptr);
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i)
        if (!s(i, i).is_zero()) d.push_back(s(i, i));
    return d;
}

// ---------------------------------------------------------------------------
// Kernels and linear systems

/// Saturated Z-basis of { x : A x = 0 }.
inline std::vector<IntVector> kernel_z(const IntMatrix& a) {
    const std::size_t n = a.cols();
    std::vector<IntVector> basis;
    IntMatrix r = row_basis(a);
    if (r.rows() == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            IntVector e(n);
            e[i] = 1;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    auto e = row_echelon(r.transpose(), true);
    const IntMatrix& u = *e.transform;
    for (std::size_t i = e.rank(); i < n; ++i) basis.push_back(u.row(i));
    return basis;
}

struct LinearSolution {
    std::optional<IntVector> particular;
    std::vector<IntVector> kernel_basis;
};

/// All integer solutions of A x = b: a particular solution (when one exists)
/// and a Z-basis of the kernel.
inline LinearSolution solve_z(const IntMatrix& a, const IntVector& b) {
    if (b.size() != a.rows())
        throw DimensionMismatch("solve_z: rhs has " + std::to_string(b.size()) + " entries, matrix has " +
                                std::to_string(a.rows()) + " rows");
    const std::size_t n = a.cols();
    IntMatrix aug = IntMatrix::hstack(a, IntMatrix::from_columns(a.rows(), {b}));
    auto e = row_echelon(std::move(aug), false, n);
    const std::size_t r = e.rank();
    bool consistent = true;
    for (std::size_t i = r; i < a.rows(); ++i)
        if (!e.reduced(i, n).is_zero()) consistent = false;

    LinearSolution sol;
    IntMatrix top = e.reduced.row_block(0, r).col_block(0, n);
    if (r == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            IntVector v(n);
            v[i] = 1;
            sol.kernel_basis.push_back(std::move(v));
        }
        if (consistent) sol.particular = IntVector(n);
        return sol;
    }
    auto ce = row_echelon(top.transpose(), true);
    const IntMatrix& u = *ce.transform;
    for (std::size_t i = r; i < n; ++i) sol.kernel_basis.push_back(u.row(i));
    if (!consistent) return sol;
    // top * U^T = [L | 0] with L lower triangular (L = leading r x r block of reduced^T)
    IntVector y(r);
    for (std::size_t i = 0; i < r; ++i) {
        Integer s = e.reduced(i, n);
        for (std::size_t j = 0; j < i; ++j) s.sub_mul(ce.reduced(j, i), y[j]);
        const Integer& d = ce.reduced(i, i);
        if (!divides(d, s)) return sol;
        y[i] = s / d;
    }
    IntVector x(n);
    for (std::size_t i = 0; i < r; ++i) {
        if (y[i].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) x[j].add_mul(y[i], u(i, j));
    }
    sol.particular = std::move(x);
    return sol;
}

/// X with K X = B, for K of full column rank; nullopt if some column of B is
/// outside the Z-span of K's columns.
inline std::optional<IntMatrix> solve_columns(const IntMatrix& k, const IntMatrix& b) {
    if (k.rows() != b.rows()) throw DimensionMismatch("solve_columns: row counts differ");
    const std::size_t n = k.cols();
    auto e = row_echelon(IntMatrix::hstack(k, b), false, n, true);
    if (e.rank() != n) throw InvalidInput("solve_columns: basis matrix is not of full column rank");
    for (std::size_t i = n; i < k.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (!e.reduced(i, n + j).is_zero()) return std::nullopt;
    IntMatrix x(n, b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t ii = n; ii-- > 0;) {
            Integer s = e.reduced(ii, n + j);
            for (std::size_t t = ii + 1; t < n; ++t) s.sub_mul(e.reduced(ii, t), x(t, j));
            if (!divides(e.reduced(ii, ii), s)) return std::nullopt;
            x(ii, j) = s / e.reduced(ii, ii);
        }
    }
    return x;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(const IntMatrix& a) {
    if (!a.is_square()) throw DimensionMismatch("determinant: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            std::size_t p = k + 1;
            while (p < n && m(p, k).is_zero()) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = m(i, j) * m(k, k);
                v.sub_mul(m(i, k), m(k, j));
                m(i, j) = v / prev;
            }
        prev = m(k, k);
    }
    Integer d = m(n - 1, n - 1);
    return sign < 0 ? -d : d;
}

inline bool is_unimodular(const IntMatrix& a) {
    if (!a.is_square()) throw DimensionMismatch("is_unimodular: matrix is not square");
    return abs(determinant(a)).is_one();
}

/// Inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
    if (!a.is_square()) throw DimensionMismatch("unimodular_inverse: matrix is not square");
    auto x = solve_columns(a, IntMatrix::identity(a.rows()));
    if (!x) throw InvalidInput("unimodular_inverse: matrix is not invertible over Z");
    return *x;
}

// ---------------------------------------------------------------------------
// Incremental lattice basis

/// Echelon basis of the Z-span of vectors inserted so far, optionally tracking
/// each basis row as a combination of the inserted vectors. Used to decide
/// membership of a target vector without forming the full system matrix.
class LatticeBasis {
public:
    explicit LatticeBasis(std::size_t dim, bool track = false) : dim_(dim), track_(track) {}

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
    [[nodiscard]] std::size_t inserted() const noexcept { return inserted_; }

    /// Adds v to the generating set; returns true if the lattice grew.
    bool insert(IntVector v) {
        if (v.size() != dim_) throw DimensionMismatch("LatticeBasis::insert: vector length");
        IntVector coef;
        if (track_) {
            coef.assign(inserted_ + 1, Integer(0));
            coef[inserted_] = 1;
        }
        ++inserted_;
        bool grew = false;
        std::vector<std::size_t> touched;  // pivots of rows that changed
        std::size_t lead = leading(v, 0);
        std::size_t idx = 0;
        while (lead < dim_) {
            while (idx < rows_.size() && rows_[idx].pivot < lead) ++idx;
            if (idx == rows_.size() || rows_[idx].pivot != lead) {
                if (v[lead].sign() < 0) negate(v, coef);
                rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), Row{lead, std::move(v), std::move(coef)});
                touched.push_back(lead);
                grew = true;
                break;
            }
            Row& b = rows_[idx];
            Integer before = b.vec[lead];
            IntVector orig = b.vec;
            // Euclid on the pivot column between b and v
            while (!v[lead].is_zero()) {
                Integer q = b.vec[lead] / v[lead];
                submul(b.vec, b.coef, v, coef, q, lead);
                std::swap(b.vec, v);
                std::swap(b.coef, coef);
            }
            if (b.vec[lead].sign() < 0) negate(b.vec, b.coef);
            if (b.vec[lead] != before) grew = true;
            if (b.vec != orig) touched.push_back(lead);
            lead = leading(v, lead + 1);
        }
        for (auto p : touched) size_reduce(p);
        return grew;
    }

    struct Reduction {
        bool in_lattice = false;
        bool in_rational_span = false;
        IntVector coefficients;  // over inserted vectors, when tracked and in_lattice
        // first pivot where divisibility failed (only when !in_lattice && in_rational_span)
        std::size_t obstruction_col = SIZE_MAX;
        Integer obstruction_divisor;
        Integer obstruction_value;
    };

    [[nodiscard]] Reduction reduce(IntVector t) const {
        if (t.size() != dim_) throw DimensionMismatch("LatticeBasis::reduce: vector length");
        Reduction out;
        IntVector coef(track_ ? inserted_ : 0);
        bool integral = true;
        // Rational membership: eliminate with fractions cleared by scaling t.
        for (const Row& b : rows_) {
            const Integer& tv = t[b.pivot];
            if (tv.is_zero()) continue;
            if (!divides(b.vec[b.pivot], tv)) {
                if (integral) {
                    out.obstruction_col = b.pivot;
                    out.obstruction_divisor = b.vec[b.pivot];
                    out.obstruction_value = tv;
                }
                integral = false;
                // scale t so the rational test can continue
                Integer g = gcd(b.vec[b.pivot], tv);
                Integer mult = b.vec[b.pivot] / g;
                for (auto& x : t) x *= mult;
            }
            Integer q = t[b.pivot] / b.vec[b.pivot];
            for (std::size_t j = b.pivot; j < dim_; ++j)
                if (!b.vec[j].is_zero()) t[j].sub_mul(q, b.vec[j]);
            if (integral && track_)
                for (std::size_t j = 0; j < b.coef.size(); ++j)
                    if (!b.coef[j].is_zero()) coef[j].add_mul(q, b.coef[j]);
        }
        out.in_rational_span = std::all_of(t.begin(), t.end(), [](const Integer& x) { return x.is_zero(); });
        out.in_lattice = out.in_rational_span && integral;
        if (out.in_lattice) out.coefficients = std::move(coef);
        if (!out.in_rational_span) out.obstruction_col = SIZE_MAX;
        return out;
    }

    [[nodiscard]] bool contains(const IntVector& t) const { return reduce(t).in_lattice; }

    /// True iff the inserted vectors generate all of Z^dim.
    [[nodiscard]] bool is_full() const {
        if (rows_.size() != dim_) return false;
        return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.vec[r.pivot].is_one(); });
    }

    [[nodiscard]] std::vector<IntVector> basis() const {
        std::vector<IntVector> out;
        for (const auto& r : rows_) out.push_back(r.vec);
        return out;
    }

private:
    struct Row {
        std::size_t pivot;
        IntVector vec;
        IntVector coef;
    };

    std::size_t leading(const IntVector& v, std::size_t from) const {
        for (std::size_t j = from; j < dim_; ++j)
            if (!v[j].is_zero()) return j;
        return dim_;
    }
    void negate(IntVector& v, IntVector& c) const {
        for (auto& x : v) x = -x;
        for (auto& x : c) x = -x;
    }
    // Reduces the row with the given pivot modulo the pivots of the rows below it.
    void size_reduce(std::size_t pivot) {
        std::size_t i = 0;
        while (i < rows_.size() && rows_[i].pivot != pivot) ++i;
        if (i == rows_.size()) return;
        Row& a = rows_[i];
        for (std::size_t j = i + 1; j < rows_.size(); ++j) {
            const Row& b = rows_[j];
            const Integer& x = a.vec[b.pivot];
            if (x.is_zero()) continue;
            Integer q = floor_div(x, b.vec[b.pivot]);
            submul(a.vec, a.coef, b.vec, b.coef, q, b.pivot);
        }
    }
    // a -= q * b (vectors from column `from`, coefficient vectors fully)
    void submul(IntVector& a, IntVector& ac, const IntVector& b, const IntVector& bc, const Integer& q,
                std::size_t from) const {
        if (q.is_zero()) return;
        for (std::size_t j = from; j < dim_; ++j)
            if (!b[j].is_zero()) a[j].sub_mul(q, b[j]);
        if (track_) {
            if (ac.size() < bc.size()) ac.resize(bc.size());
            for (std::size_t j = 0; j < bc.size(); ++j)
                if (!bc[j].is_zero()) ac[j].sub_mul(q, bc[j]);
        }
    }

    std::size_t dim_;
    bool track_;
    std::size_t inserted_ = 0;
    std::vector<Row> rows_;
};

}  // namespace normtori
