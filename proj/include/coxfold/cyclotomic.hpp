#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <mpfr.h>

#include "coxfold/coxeter_matrix.hpp"
#include "coxfold/error.hpp"
#include "coxfold/rational.hpp"

namespace coxfold {

inline constexpr std::size_t kDefaultDegreeCap = 64;
inline constexpr long kDefaultPrecisionCap = 1L << 16;

namespace detail {

using IntPoly = std::vector<std::int64_t>; // low degree first

inline void trim(IntPoly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact division by a monic polynomial; throws if the remainder is nonzero.
inline IntPoly divide_exact(IntPoly num, const IntPoly& monic) {
    trim(num);
    const std::size_t dd = monic.size() - 1;
    if (num.size() - 1 < dd) throw ArithmeticError("cyclotomic division: degree too small");
    IntPoly q(num.size() - dd, 0);
    for (std::size_t k = num.size(); k-- > dd;) {
        std::int64_t c = num[k];
        q[k - dd] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= c * monic[j];
    }
    for (std::size_t k = 0; k < dd; ++k)
        if (num[k] != 0) throw ArithmeticError("cyclotomic division left a remainder");
    return q;
}

/// n-th cyclotomic polynomial: x^n - 1 divided by Phi_d for every proper divisor d.
inline IntPoly cyclotomic_polynomial(std::uint64_t n, std::map<std::uint64_t, IntPoly>& memo) {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    IntPoly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (std::uint64_t d = 1; d < n; ++d)
        if (n % d == 0) p = divide_exact(p, cyclotomic_polynomial(d, memo));
    memo[n] = p;
    return p;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

// RAII wrapper over an mpfr_t.
class Mpfr {
public:
    explicit Mpfr(long prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

} // namespace detail

/// Exact scalar field for the geometric representation: the real subfield of
/// the cyclotomic field of order 2N, in the power basis of zeta = exp(i pi/N).
class ArithContext {
public:
    static std::shared_ptr<const ArithContext> create(std::uint64_t order, std::size_t degree_cap = kDefaultDegreeCap) {
        return std::shared_ptr<const ArithContext>(new ArithContext(order, degree_cap));
    }

    /// N: zeta = exp(i pi / N).
    std::uint64_t order() const noexcept { return order_; }
    std::size_t degree() const noexcept { return degree_; }
    const std::vector<std::int64_t>& modulus() const noexcept { return modulus_; }

    /// zeta^k reduced into the power basis, for 0 <= k < 2N.
    std::span<const std::int64_t> power(std::uint64_t k) const { return powers_.at(k % (2 * order_)); }

    /// cos(k pi / N) as the nearest double; `cos_error` bounds its distance to the true value.
    double cos_value(std::size_t k) const { return cos_mid_.at(k); }
    double cos_error() const noexcept { return cos_err_; }

    /// dst += a * b, all of length degree().
    void mul_add(std::span<Rational> dst, std::span<const Rational> a, std::span<const Rational> b) const {
        std::vector<Rational> prod(2 * degree_ - 1);
        for (std::size_t i = 0; i < degree_; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < degree_; ++j)
                if (!b[j].is_zero()) prod[i + j] += a[i] * b[j];
        }
        for (std::size_t k = 0; k < prod.size(); ++k) {
            if (prod[k].is_zero()) continue;
            if (k < degree_) {
                dst[k] += prod[k];
            } else {
                auto pw = power(k);
                for (std::size_t j = 0; j < degree_; ++j)
                    if (pw[j] != 0) dst[j] += prod[k] * Rational(pw[j]);
            }
        }
    }

    /// Sign of sum c_k zeta^k for a conjugation-invariant (real) coefficient
    /// vector. Certified: a double-precision interval first, then MPFR
    /// intervals at doubling precision until zero is excluded.
    int sign(std::span<const Rational> c) const {
        bool zero = true;
        double mag = 0.0, value = 0.0;
        for (std::size_t k = 0; k < degree_; ++k) {
            if (c[k].is_zero()) continue;
            zero = false;
            double ck = c[k].to_double();
            value += ck * cos_mid_[k];
            mag += std::fabs(ck);
        }
        if (zero) return 0;
        // |cos| <= 1; rounding of c_k, of the products and of the sum is
        // bounded by (degree + 3) units of roundoff on the magnitude.
        const double bound = mag * (cos_err_ + (static_cast<double>(degree_) + 3.0) * 1.2e-16) * 1.01 + 1e-300;
        if (value > bound) return 1;
        if (value < -bound) return -1;
        for (long prec = 106; prec <= precision_cap_; prec *= 2) {
            int s = interval_sign(c, prec);
            if (s != 0) return s;
        }
        std::ostringstream os;
        os << "sign undecided at precision cap " << precision_cap_ << " bits for coefficients [";
        for (std::size_t k = 0; k < degree_; ++k) os << (k ? ", " : "") << c[k];
        os << "] with N = " << order_;
        throw ArithmeticError(os.str());
    }

    double to_double(std::span<const Rational> c) const {
        double v = 0.0;
        for (std::size_t k = 0; k < degree_; ++k) v += c[k].to_double() * cos_mid_[k];
        return v;
    }

private:
    ArithContext(std::uint64_t order, std::size_t degree_cap) : order_(order) {
        if (order_ == 0) throw InputError("arithmetic context order must be positive");
        const std::uint64_t two_n = 2 * order_;
        if (detail::euler_phi(two_n) > degree_cap)
            throw InputError("rank/label combination too large: field degree " + std::to_string(detail::euler_phi(two_n)) +
                             " exceeds cap " + std::to_string(degree_cap));
        std::map<std::uint64_t, detail::IntPoly> memo;
        modulus_ = detail::cyclotomic_polynomial(two_n, memo);
        degree_ = modulus_.size() - 1;

        // powers of x modulo the cyclotomic polynomial
        std::vector<std::int64_t> cur(degree_, 0);
        cur[0] = 1;
        for (std::uint64_t k = 0; k < two_n; ++k) {
            powers_.push_back(cur);
            // cur *= x
            std::int64_t top = cur[degree_ - 1];
            for (std::size_t j = degree_ - 1; j > 0; --j) cur[j] = cur[j - 1];
            cur[0] = 0;
            for (std::size_t j = 0; j < degree_; ++j) cur[j] -= top * modulus_[j];
        }

        detail::Mpfr x(128), pi(128);
        mpfr_const_pi(pi.get(), MPFR_RNDN);
        for (std::size_t k = 0; k < degree_; ++k) {
            mpfr_mul_ui(x.get(), pi.get(), k, MPFR_RNDN);
            mpfr_div_ui(x.get(), x.get(), order_, MPFR_RNDN);
            mpfr_cos(x.get(), x.get(), MPFR_RNDN);
            cos_mid_.push_back(mpfr_get_d(x.get(), MPFR_RNDN));
        }
        // a 128-bit value rounded to double: half an ulp of 1, plus slack
        cos_err_ = 2.3e-16;
    }

    int interval_sign(std::span<const Rational> c, long prec) const {
        detail::Mpfr pi_lo(prec), pi_hi(prec), a_lo(prec), a_hi(prec), cos_lo(prec), cos_hi(prec);
        detail::Mpfr t_lo(prec), t_hi(prec), sum_lo(prec), sum_hi(prec);
        mpfr_const_pi(pi_lo.get(), MPFR_RNDD);
        mpfr_const_pi(pi_hi.get(), MPFR_RNDU);
        mpfr_set_zero(sum_lo.get(), 1);
        mpfr_set_zero(sum_hi.get(), 1);
        for (std::size_t k = 0; k < degree_; ++k) {
            if (c[k].is_zero()) continue;
            // angle k pi / N lies in [0, pi): cos is decreasing there
            mpfr_mul_ui(a_lo.get(), pi_lo.get(), k, MPFR_RNDD);
            mpfr_div_ui(a_lo.get(), a_lo.get(), order_, MPFR_RNDD);
            mpfr_mul_ui(a_hi.get(), pi_hi.get(), k, MPFR_RNDU);
            mpfr_div_ui(a_hi.get(), a_hi.get(), order_, MPFR_RNDU);
            mpfr_cos(cos_lo.get(), a_hi.get(), MPFR_RNDD);
            mpfr_cos(cos_hi.get(), a_lo.get(), MPFR_RNDU);
            const long p = c[k].num(), q = c[k].den();
            if (p >= 0) {
                mpfr_mul_si(t_lo.get(), cos_lo.get(), p, MPFR_RNDD);
                mpfr_mul_si(t_hi.get(), cos_hi.get(), p, MPFR_RNDU);
            } else {
                mpfr_mul_si(t_lo.get(), cos_hi.get(), p, MPFR_RNDD);
                mpfr_mul_si(t_hi.get(), cos_lo.get(), p, MPFR_RNDU);
            }
            mpfr_div_si(t_lo.get(), t_lo.get(), q, MPFR_RNDD);
            mpfr_div_si(t_hi.get(), t_hi.get(), q, MPFR_RNDU);
            mpfr_add(sum_lo.get(), sum_lo.get(), t_lo.get(), MPFR_RNDD);
            mpfr_add(sum_hi.get(), sum_hi.get(), t_hi.get(), MPFR_RNDU);
        }
        if (mpfr_sgn(sum_lo.get()) > 0) return 1;
        if (mpfr_sgn(sum_hi.get()) < 0) return -1;
        return 0;
    }

    std::uint64_t order_;
    std::size_t degree_ = 0;
    std::vector<std::int64_t> modulus_;
    std::vector<std::vector<std::int64_t>> powers_;
    std::vector<double> cos_mid_;
    double cos_err_ = 0.0;
    long precision_cap_ = kDefaultPrecisionCap;
};

using ContextPtr = std::shared_ptr<const ArithContext>;

/// lcm of 2 and the finite off-diagonal labels.
inline std::uint64_t field_order(const CoxeterMatrix& matrix) {
    std::uint64_t n = 2;
    for (std::size_t i = 0; i < matrix.rank(); ++i)
        for (std::size_t j = i + 1; j < matrix.rank(); ++j)
            if (Label m = matrix(i, j); m != kInfinity) n = std::lcm(n, static_cast<std::uint64_t>(m));
    return n;
}

inline ContextPtr make_context(const CoxeterMatrix& matrix, std::size_t degree_cap = kDefaultDegreeCap) {
    return ArithContext::create(field_order(matrix), degree_cap);
}

/// Exact real number in the context's field.
class CycloReal {
public:
    CycloReal(ContextPtr ctx) : ctx_(std::move(ctx)), coeffs_(ctx_->degree()) {} // NOLINT
    CycloReal(ContextPtr ctx, Rational r) : CycloReal(std::move(ctx)) { coeffs_[0] = r; }
    CycloReal(ContextPtr ctx, std::vector<Rational> coeffs) : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != ctx_->degree()) throw InputError("coefficient vector does not match field degree");
    }

    const ContextPtr& context() const noexcept { return ctx_; }
    std::span<const Rational> coeffs() const noexcept { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }
    int sign() const { return ctx_->sign(coeffs_); }
    double to_double() const { return ctx_->to_double(coeffs_); }

    /// Image under zeta -> zeta^{-1}; equal to *this for every real value.
    CycloReal conjugate() const {
        CycloReal r(ctx_);
        const std::uint64_t two_n = 2 * ctx_->order();
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k].is_zero()) continue;
            auto pw = ctx_->power((two_n - k) % two_n);
            for (std::size_t j = 0; j < r.coeffs_.size(); ++j)
                if (pw[j] != 0) r.coeffs_[j] += coeffs_[k] * Rational(pw[j]);
        }
        return r;
    }

    friend CycloReal operator+(const CycloReal& a, const CycloReal& b) {
        check_same(a, b);
        CycloReal r = a;
        for (std::size_t k = 0; k < r.coeffs_.size(); ++k) r.coeffs_[k] += b.coeffs_[k];
        return r;
    }
    friend CycloReal operator-(const CycloReal& a, const CycloReal& b) { return a + (-b); }
    CycloReal operator-() const {
        CycloReal r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend CycloReal operator*(const CycloReal& a, const CycloReal& b) {
        check_same(a, b);
        CycloReal r(a.ctx_);
        a.ctx_->mul_add(r.coeffs_, a.coeffs_, b.coeffs_);
        return r;
    }
    friend CycloReal operator*(const Rational& q, const CycloReal& a) {
        CycloReal r = a;
        for (auto& c : r.coeffs_) c *= q;
        return r;
    }

    friend bool operator==(const CycloReal& a, const CycloReal& b) {
        return a.ctx_->order() == b.ctx_->order() && a.coeffs_ == b.coeffs_;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + coeffs_[k].to_string() + ")";
            if (k > 0) s += "z^" + std::to_string(k);
        }
        return s.empty() ? "0" : s;
    }

private:
    static void check_same(const CycloReal& a, const CycloReal& b) {
        if (a.ctx_->order() != b.ctx_->order()) throw PreconditionError("context mismatch");
    }

    ContextPtr ctx_;
    std::vector<Rational> coeffs_;
};

/// Exact 2cos(pi/m); m = inf gives 2.
inline CycloReal two_cos_pi_over(Label m, const ContextPtr& ctx) {
    if (m == kInfinity) return CycloReal(ctx, Rational(2));
    if (m < 2 || ctx->order() % m != 0)
        throw PreconditionError("label " + std::to_string(m) + " does not divide field order " + std::to_string(ctx->order()));
    const std::uint64_t k = ctx->order() / m;
    const std::uint64_t two_n = 2 * ctx->order();
    std::vector<Rational> c(ctx->degree());
    auto a = ctx->power(k), b = ctx->power(two_n - k);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = Rational(a[j] + b[j]);
    return CycloReal(ctx, std::move(c));
}

} // namespace coxfold
