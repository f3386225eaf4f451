#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace spidercalc {

// Dense tensor with integer entries sharing a single exact scale.
// Legs are ordered (U1..Ul, L1..Lk); the linear index is big-endian over that
// list, so the last lower index varies fastest.  As a linear map the matrix
// element at row (upper multi-index) and column (lower multi-index) is
// entries[row * dim^k + col] * scale.
class Tensor {
public:
    Tensor() : n_lower_(0), n_upper_(0), dim_(1), entries_(1, BigInt(0)), scale_(ExactScalar::one()) {}

    Tensor(int n_lower, int n_upper, int dim, ExactScalar scale = ExactScalar::one())
        : n_lower_(n_lower), n_upper_(n_upper), dim_(dim), scale_(std::move(scale)) {
        if (dim < 1 || n_lower < 0 || n_upper < 0) throw std::invalid_argument("Tensor: bad shape");
        std::size_t sz = 1;
        for (int i = 0; i < n_lower + n_upper; ++i) sz *= static_cast<std::size_t>(dim);
        entries_.assign(sz, BigInt(0));
    }

    static Tensor scalar(int dim, const ExactScalar& value) {
        Tensor t(0, 0, dim, value);
        t.entries_[0] = 1;
        return t;
    }

    static Tensor identity(int n, int dim) {
        Tensor t(n, n, dim);
        std::size_t block = t.block_size(n);
        for (std::size_t i = 0; i < block; ++i) t.entries_[i * block + i] = 1;
        return t;
    }

    int n_lower() const { return n_lower_; }
    int n_upper() const { return n_upper_; }
    int legs() const { return n_lower_ + n_upper_; }
    int dim() const { return dim_; }
    const ExactScalar& scale() const { return scale_; }
    ExactScalar& scale() { return scale_; }
    const std::vector<BigInt>& entries() const { return entries_; }
    std::vector<BigInt>& entries() { return entries_; }

    std::size_t size() const { return entries_.size(); }

    std::size_t index(const std::vector<int>& uppers, const std::vector<int>& lowers) const {
        if (static_cast<int>(uppers.size()) != n_upper_ || static_cast<int>(lowers.size()) != n_lower_)
            throw std::invalid_argument("Tensor: index arity mismatch");
        std::size_t idx = 0;
        for (int u : uppers) idx = idx * dim_ + check_ix(u);
        for (int l : lowers) idx = idx * dim_ + check_ix(l);
        return idx;
    }

    BigInt& at(const std::vector<int>& uppers, const std::vector<int>& lowers) {
        return entries_[index(uppers, lowers)];
    }
    const BigInt& at(const std::vector<int>& uppers, const std::vector<int>& lowers) const {
        return entries_[index(uppers, lowers)];
    }

    // Exact value of one entry, scale included.
    ExactScalar value_at(const std::vector<int>& uppers, const std::vector<int>& lowers) const {
        return scale_ * ExactScalar::rational(BigRat(at(uppers, lowers)));
    }

    bool entries_all_zero() const {
        for (const auto& e : entries_)
            if (e != 0) return false;
        return true;
    }

    // Content/sign-normalized form: entry gcd is 1 and the first nonzero
    // entry is positive; the stripped factor moves into the scale.
    Tensor canonical() const {
        Tensor t = *this;
        BigInt g = 0;
        for (const auto& e : t.entries_) {
            g = boost::multiprecision::gcd(g, e);
            if (g == 1) break;
        }
        if (g == 0) {
            t.scale_ = ExactScalar::one();
            return t;
        }
        if (g > 1)
            for (auto& e : t.entries_) e /= g;
        t.scale_ = t.scale_ * ExactScalar::rational(BigRat(g));
        for (const auto& e : t.entries_) {
            if (e == 0) continue;
            if (e < 0) {
                for (auto& x : t.entries_) x = -x;
                t.scale_ = -t.scale_;
            }
            break;
        }
        if (t.scale_.is_zero()) {
            for (auto& x : t.entries_) x = 0;
            t.scale_ = ExactScalar::one();
        }
        return t;
    }

    bool operator==(const Tensor& o) const {
        if (n_lower_ != o.n_lower_ || n_upper_ != o.n_upper_ || dim_ != o.dim_) return false;
        Tensor a = canonical(), b = o.canonical();
        return a.scale_ == b.scale_ && a.entries_ == b.entries_;
    }
    bool operator!=(const Tensor& o) const { return !(*this == o); }

    bool is_zero() const { return entries_all_zero() || scale_.is_zero(); }

    Tensor operator*(const ExactScalar& s) const {
        Tensor t = *this;
        t.scale_ = t.scale_ * s;
        return t;
    }

    Tensor operator-() const { return *this * ExactScalar::integer(-1); }

    Tensor operator+(const Tensor& o) const {
        if (n_lower_ != o.n_lower_ || n_upper_ != o.n_upper_ || dim_ != o.dim_)
            throw std::invalid_argument("Tensor: shape mismatch in sum");
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        if (scale_.half_exp() != o.scale_.half_exp() ||
            (scale_.half_exp() != 0 && scale_.base() != o.scale_.base()))
            throw std::invalid_argument("Tensor: inhomogeneous sum");
        // common scale g = gcd of the two rational coefficients
        BigRat c1 = scale_.coeff(), c2 = o.scale_.coeff();
        BigInt gn = boost::multiprecision::gcd(numerator(c1), numerator(c2));
        BigInt gl = boost::multiprecision::lcm(denominator(c1), denominator(c2));
        BigRat g(gn, gl);
        BigRat m1r = c1 / g, m2r = c2 / g;
        BigInt m1 = numerator(m1r), m2 = numerator(m2r);
        if (denominator(m1r) != 1 || denominator(m2r) != 1)
            throw std::logic_error("Tensor: scale gcd failed");
        Tensor t(n_lower_, n_upper_, dim_, ExactScalar::half_power(scale_.base() == 1 ? o.scale_.base() : scale_.base(), scale_.half_exp(), g));
        for (std::size_t i = 0; i < entries_.size(); ++i)
            t.entries_[i] = m1 * entries_[i] + m2 * o.entries_[i];
        return t;
    }

    Tensor operator-(const Tensor& o) const { return *this + (-o); }

    std::size_t block_size(int nlegs) const {
        std::size_t b = 1;
        for (int i = 0; i < nlegs; ++i) b *= static_cast<std::size_t>(dim_);
        return b;
    }

private:
    int check_ix(int i) const {
        if (i < 0 || i >= dim_) throw std::out_of_range("Tensor: index out of range");
        return i;
    }

    int n_lower_, n_upper_;
    int dim_;
    std::vector<BigInt> entries_;
    ExactScalar scale_;
};

// f after g (g's upper boundary glued to f's lower boundary).
inline Tensor compose(const Tensor& f, const Tensor& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("compose: dimension mismatch");
    if (f.n_lower() != g.n_upper()) throw std::invalid_argument("compose: arity mismatch");
    Tensor r(g.n_lower(), f.n_upper(), f.dim(), f.scale() * g.scale());
    std::size_t rows = f.block_size(f.n_upper());
    std::size_t mid = f.block_size(f.n_lower());
    std::size_t cols = g.block_size(g.n_lower());
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t m = 0; m < mid; ++m) {
            const BigInt& fv = f.entries()[i * mid + m];
            if (fv == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) {
                const BigInt& gv = g.entries()[m * cols + j];
                if (gv != 0) r.entries()[i * cols + j] += fv * gv;
            }
        }
    return r;
}

inline Tensor tensor_product(const Tensor& f, const Tensor& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("tensor_product: dimension mismatch");
    Tensor r(f.n_lower() + g.n_lower(), f.n_upper() + g.n_upper(), f.dim(), f.scale() * g.scale());
    std::size_t fu = f.block_size(f.n_upper()), fl = f.block_size(f.n_lower());
    std::size_t gu = g.block_size(g.n_upper()), gl = g.block_size(g.n_lower());
    for (std::size_t iu = 0; iu < fu; ++iu)
        for (std::size_t il = 0; il < fl; ++il) {
            const BigInt& fv = f.entries()[iu * fl + il];
            if (fv == 0) continue;
            for (std::size_t ju = 0; ju < gu; ++ju)
                for (std::size_t jl = 0; jl < gl; ++jl) {
                    const BigInt& gv = g.entries()[ju * gl + jl];
                    if (gv == 0) continue;
                    std::size_t idx = ((iu * gu + ju) * fl + il) * gl + jl;
                    r.entries()[idx] = fv * gv;
                }
        }
    return r;
}

inline Tensor dagger(const Tensor& t) {
    Tensor r(t.n_upper(), t.n_lower(), t.dim(), t.scale());
    std::size_t rows = t.block_size(t.n_upper());
    std::size_t cols = t.block_size(t.n_lower());
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) r.entries()[j * rows + i] = t.entries()[i * cols + j];
    return r;
}

// Full pairwise contraction <f, g> = sum of entrywise products of dagger(f)
// applied to g; with real entries this is the entrywise dot product.
inline ExactScalar inner_product(const Tensor& f, const Tensor& g) {
    if (f.dim() != g.dim() || f.n_lower() != g.n_lower() || f.n_upper() != g.n_upper())
        throw std::invalid_argument("inner_product: shape mismatch");
    BigInt acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.entries()[i] * g.entries()[i];
    return f.scale() * g.scale() * ExactScalar::rational(BigRat(acc));
}

// Incremental exact rank over Q of integer vectors.  Scales are irrelevant
// for rank: homogeneous scales are units, so Q-rank of the entry vectors
// equals the rank of the scaled tensors over the scalar field.
class IntEchelon {
public:
    // Returns true when v was independent of the current span (and added).
    bool insert(std::vector<BigInt> v) {
        normalize(v);
        for (const auto& row : rows_) {
            if (v.empty() || is_zero(v)) break;
            std::size_t p = pivot(v);
            if (p != row.pivot) continue;
            // eliminate: v <- row.v[p]*v - v[p]*row.v
            BigInt a = row.v[p], b = v[p];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * v[i] - b * row.v[i];
            normalize(v);
        }
        if (is_zero(v)) return false;
        Row r{pivot(v), std::move(v)};
        auto it = std::lower_bound(rows_.begin(), rows_.end(), r,
                                   [](const Row& x, const Row& y) { return x.pivot < y.pivot; });
        rows_.insert(it, std::move(r));
        return true;
    }

    std::size_t rank() const { return rows_.size(); }

private:
    struct Row {
        std::size_t pivot;
        std::vector<BigInt> v;
    };

    static bool is_zero(const std::vector<BigInt>& v) {
        for (const auto& e : v)
            if (e != 0) return false;
        return true;
    }
    static std::size_t pivot(const std::vector<BigInt>& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) return i;
        return v.size();
    }
    static void normalize(std::vector<BigInt>& v) {
        BigInt g = 0;
        for (const auto& e : v) {
            g = boost::multiprecision::gcd(g, e);
            if (g == 1) break;
        }
        if (g > 1)
            for (auto& e : v) e /= g;
        for (const auto& e : v) {
            if (e == 0) continue;
            if (e < 0)
                for (auto& x : v) x = -x;
            break;
        }
    }

    std::vector<Row> rows_;
};

// Exact determinant of a square matrix of scalars sharing one base.
inline ExactScalar determinant(std::vector<std::vector<ExactScalar>> m) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("determinant: not square");
    if (n == 0) return ExactScalar::one();
    std::int64_t base = 1;
    for (const auto& row : m)
        for (const auto& e : row)
            if (e.half_exp() != 0) {
                if (base != 1 && base != e.base()) throw std::invalid_argument("determinant: base mismatch");
                base = e.base();
            }
    std::vector<std::vector<QuadExt>> a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i].push_back(QuadExt::from_scalar(m[i][j], base));
    QuadExt det{BigRat(1), BigRat(0), base};
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c].is_zero()) ++piv;
        if (piv == n) return ExactScalar::zero();
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = QuadExt{BigRat(-1), BigRat(0), base} * det;
        }
        det = det * a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c].is_zero()) continue;
            QuadExt f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] = a[r][j] - f * a[c][j];
        }
    }
    return det.to_scalar();
}

}  // namespace spidercalc
