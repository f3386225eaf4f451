#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spidercalc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline std::string rat_to_string(const BigRat& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

inline BigRat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRat(BigInt(s));
    return BigRat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

inline std::int64_t isqrt_floor(std::int64_t v) {
    if (v < 0) throw std::invalid_argument("isqrt of negative");
    std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Exact scalar of the form coeff * base^(half_exp/2) with rational coeff.
// Canonical form: half_exp is 0 or 1; when half_exp == 0 the base is 1;
// a perfect-square base is folded into coeff. coeff == 0 forces half_exp = 0.
class ExactScalar {
public:
    ExactScalar() : coeff_(0), base_(1), half_exp_(0) {}

    ExactScalar(BigRat coeff, std::int64_t base, std::int64_t half_exp)
        : coeff_(std::move(coeff)), base_(base), half_exp_(half_exp) {
        if (base_ < 1) throw std::invalid_argument("ExactScalar: base must be positive");
        canonicalize();
    }

    static ExactScalar rational(BigRat r) { return ExactScalar(std::move(r), 1, 0); }
    static ExactScalar integer(long long v) { return rational(BigRat(v)); }
    static ExactScalar zero() { return rational(BigRat(0)); }
    static ExactScalar one() { return rational(BigRat(1)); }

    // coeff * base^(half_exp/2), arbitrary integer half_exp accepted.
    static ExactScalar half_power(std::int64_t base, std::int64_t half_exp, BigRat coeff = BigRat(1)) {
        return ExactScalar(std::move(coeff), base, half_exp);
    }

    const BigRat& coeff() const { return coeff_; }
    std::int64_t base() const { return base_; }
    std::int64_t half_exp() const { return half_exp_; }

    bool is_zero() const { return coeff_ == 0; }
    bool is_rational() const { return half_exp_ == 0; }

    // The rational value; throws when the value is irrational.
    BigRat rational_value() const {
        if (!is_rational()) throw std::logic_error("ExactScalar: irrational value");
        return coeff_;
    }

    ExactScalar operator*(const ExactScalar& o) const {
        if (is_zero() || o.is_zero()) return zero();
        std::int64_t b = 1, e = half_exp_ + o.half_exp_;
        if (half_exp_ != 0 && o.half_exp_ != 0) {
            if (base_ != o.base_) throw std::invalid_argument("ExactScalar: base mismatch in product");
            b = base_;
        } else if (half_exp_ != 0) {
            b = base_;
        } else if (o.half_exp_ != 0) {
            b = o.base_;
        }
        return ExactScalar(coeff_ * o.coeff_, b, e);
    }

    ExactScalar inverse() const {
        if (is_zero()) throw std::invalid_argument("ExactScalar: division by zero");
        if (half_exp_ == 0) return rational(BigRat(1) / coeff_);
        // 1/(c*sqrt(b)) = (1/(c*b)) * sqrt(b)
        return ExactScalar(BigRat(1) / (coeff_ * BigRat(base_)), base_, 1);
    }

    ExactScalar operator/(const ExactScalar& o) const { return *this * o.inverse(); }

    ExactScalar operator+(const ExactScalar& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        if (half_exp_ != o.half_exp_ || (half_exp_ != 0 && base_ != o.base_))
            throw std::invalid_argument("ExactScalar: inhomogeneous sum");
        return ExactScalar(coeff_ + o.coeff_, base_, half_exp_);
    }

    ExactScalar operator-() const { return ExactScalar(-coeff_, base_, half_exp_); }
    ExactScalar operator-(const ExactScalar& o) const { return *this + (-o); }

    bool operator==(const ExactScalar& o) const {
        return coeff_ == o.coeff_ && half_exp_ == o.half_exp_ && (half_exp_ == 0 || base_ == o.base_);
    }
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    std::string to_string() const {
        std::ostringstream os;
        os << rat_to_string(coeff_);
        if (half_exp_ != 0) os << " * sqrt" << base_ << "^" << half_exp_;
        return os.str();
    }

private:
    void canonicalize() {
        if (coeff_ == 0) {
            base_ = 1;
            half_exp_ = 0;
            return;
        }
        if (base_ == 1) {
            half_exp_ = 0;
            return;
        }
        std::int64_t s = isqrt_floor(base_);
        if (s * s == base_) {
            // fold sqrt(base) = s into the coefficient
            apply_power(BigRat(s), half_exp_);
            base_ = 1;
            half_exp_ = 0;
            return;
        }
        std::int64_t even = (half_exp_ >= 0) ? half_exp_ / 2 : -((-half_exp_ + 1) / 2);
        apply_power(BigRat(base_), even);
        half_exp_ -= 2 * even;
        if (half_exp_ == 0) base_ = 1;
    }

    void apply_power(const BigRat& b, std::int64_t p) {
        for (std::int64_t i = 0; i < p; ++i) coeff_ *= b;
        for (std::int64_t i = 0; i > p; --i) coeff_ /= b;
    }

    BigRat coeff_;
    std::int64_t base_;
    std::int64_t half_exp_;
};

// Element of Q(sqrt(m)); used for exact linear algebra over scalar values.
struct QuadExt {
    BigRat a, b;      // a + b*sqrt(m)
    std::int64_t m;   // m == 1 means plain rational

    static QuadExt from_scalar(const ExactScalar& s, std::int64_t m_hint) {
        QuadExt q{BigRat(0), BigRat(0), m_hint};
        if (s.half_exp() == 0) {
            q.a = s.coeff();
        } else {
            if (m_hint != s.base()) throw std::invalid_argument("QuadExt: base mismatch");
            q.b = s.coeff();
        }
        return q;
    }

    bool is_zero() const { return a == 0 && b == 0; }

    QuadExt operator+(const QuadExt& o) const { return {a + o.a, b + o.b, m}; }
    QuadExt operator-(const QuadExt& o) const { return {a - o.a, b - o.b, m}; }
    QuadExt operator*(const QuadExt& o) const {
        return {a * o.a + b * o.b * BigRat(m), a * o.b + b * o.a, m};
    }
    QuadExt operator/(const QuadExt& o) const {
        BigRat nrm = o.a * o.a - o.b * o.b * BigRat(m);
        if (nrm == 0) throw std::invalid_argument("QuadExt: division by zero");
        QuadExt conj{o.a, -o.b, m};
        QuadExt num = *this * conj;
        return {num.a / nrm, num.b / nrm, m};
    }

    ExactScalar to_scalar() const {
        if (b == 0) return ExactScalar::rational(a);
        if (a == 0) return ExactScalar::half_power(m, 1, b);
        throw std::logic_error("QuadExt: mixed value has no homogeneous scalar form");
    }
};

}  // namespace spidercalc
