#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>
#include <cmath>

namespace pshlab {

using Complex = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// A complex number carried as (log-magnitude, phase).  This is the scale-aware
// form used everywhere a polynomial is evaluated near a deep zero: magnitudes
// like |z|^25 at |z| = 1e-30 live far outside double range but their logs do not.
struct LogComplex {
    double log_abs;  // -inf encodes an exact zero
    double phase;    // meaningless when log_abs == -inf

    bool is_zero() const { return log_abs == kNegInf; }
};

// Sparse multivariate polynomial over C with exponent-map storage.
// Invariants: dim >= 1, every multi-index has length dim, no zero coefficients.
class ComplexPoly {
public:
    using Exponent = std::vector<int>;
    using TermMap = std::map<Exponent, Complex>;

    ComplexPoly() : dim_(1) {}
    explicit ComplexPoly(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("ComplexPoly: dim must be >= 1");
    }

    static ComplexPoly constant(int dim, Complex c) {
        ComplexPoly p(dim);
        p.add_term(Exponent(dim, 0), c);
        return p;
    }

    // monomial c * z_var^k
    static ComplexPoly monomial(int dim, int var, int k, Complex c = 1.0) {
        ComplexPoly p(dim);
        Exponent e(dim, 0);
        e.at(var) = k;
        p.add_term(e, c);
        return p;
    }

    static ComplexPoly from_terms(int dim, const std::vector<std::pair<Exponent, Complex>>& terms) {
        ComplexPoly p(dim);
        for (const auto& [e, c] : terms) p.add_term(e, c);
        return p;
    }

    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponent& e, Complex c) {
        if (static_cast<int>(e.size()) != dim_)
            throw std::invalid_argument("ComplexPoly: exponent length != dim");
        for (int k : e)
            if (k < 0) throw std::invalid_argument("ComplexPoly: negative exponent");
        if (c == Complex(0.0, 0.0)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
        }
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int k : e) s += k;
            if (s > d) d = s;
        }
        return d;
    }

    int min_total_degree() const {
        if (terms_.empty()) return -1;
        int d = std::numeric_limits<int>::max();
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int k : e) s += k;
            if (s < d) d = s;
        }
        return d;
    }

    ComplexPoly operator+(const ComplexPoly& o) const {
        check_same_dim(o);
        ComplexPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    ComplexPoly operator-(const ComplexPoly& o) const {
        check_same_dim(o);
        ComplexPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }

    ComplexPoly operator*(const ComplexPoly& o) const {
        check_same_dim(o);
        ComplexPoly r(dim_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_) {
                Exponent e(dim_);
                for (int i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    ComplexPoly scaled(Complex c) const {
        ComplexPoly r(dim_);
        if (c == Complex(0.0, 0.0)) return r;
        for (const auto& [e, co] : terms_) r.add_term(e, c * co);
        return r;
    }

    // Plain evaluation; overflows for extreme points, use eval_log there.
    Complex eval(std::span<const Complex> x) const {
        check_point(x);
        Complex s = 0.0;
        for (const auto& [e, c] : terms_) {
            Complex t = c;
            for (int i = 0; i < dim_; ++i)
                for (int k = 0; k < e[i]; ++k) t *= x[i];
            s += t;
        }
        return s;
    }

    // Scale-aware evaluation: factor out the largest term magnitude before
    // summing.  Returns an exact zero only when the reduced sum cancels to
    // floating zero.
    LogComplex eval_log(std::span<const Complex> x) const {
        check_point(x);
        if (terms_.empty()) return {kNegInf, 0.0};

        thread_local std::vector<double> mags, phis;
        mags.clear(); phis.clear();
        double max_mag = kNegInf;
        for (const auto& [e, c] : terms_) {
            double m = std::log(std::abs(c));
            double ph = std::arg(c);
            bool dead = false;
            for (int i = 0; i < dim_; ++i) {
                if (e[i] == 0) continue;
                double ax = std::abs(x[i]);
                if (ax == 0.0) { dead = true; break; }
                m += e[i] * std::log(ax);
                ph += e[i] * std::arg(x[i]);
            }
            if (dead) continue;
            mags.push_back(m);
            phis.push_back(ph);
            if (m > max_mag) max_mag = m;
        }
        if (mags.empty() || max_mag == kNegInf) return {kNegInf, 0.0};

        Complex s = 0.0;
        for (std::size_t i = 0; i < mags.size(); ++i)
            s += std::polar(std::exp(mags[i] - max_mag), phis[i]);
        double as = std::abs(s);
        if (as == 0.0) return {kNegInf, 0.0};
        return {max_mag + std::log(as), std::arg(s)};
    }

    double log_abs(std::span<const Complex> x) const { return eval_log(x).log_abs; }

    // Taylor shift: returns g with g(y) = f(y + center).  Binomial weights are
    // exact in double up to degree ~55; coefficients that cancel are dropped
    // with a relative threshold against their gross accumulation so that the
    // vanishing order at the recenter point comes out exactly for the
    // catalog's small-coefficient polynomials.
    ComplexPoly shifted(std::span<const Complex> center) const {
        check_point(center);
        struct Acc { Complex sum{0.0, 0.0}; double gross = 0.0; };
        std::map<Exponent, Acc> acc;
        for (const auto& [e, c] : terms_) acc[e] = Acc{c, std::abs(c)};

        for (int v = 0; v < dim_; ++v) {
            Complex cv = center[v];
            if (cv == Complex(0.0, 0.0)) continue;
            std::map<Exponent, Acc> next;
            for (const auto& [e, a] : acc) {
                int n = e[v];
                // (y + cv)^n = sum_b C(n,b) cv^(n-b) y^b
                double binom = 1.0;
                Complex pw = 1.0;
                std::vector<Complex> cpow(n + 1);
                for (int k = 0; k <= n; ++k) { cpow[k] = pw; pw *= cv; }
                for (int b = n; b >= 0; --b) {
                    Complex coef = a.sum * binom * cpow[n - b];
                    double gross = a.gross * binom * std::abs(cpow[n - b]);
                    Exponent e2 = e;
                    e2[v] = b;
                    auto& slot = next[e2];
                    slot.sum += coef;
                    slot.gross += gross;
                    // next binomial C(n, b-1) = C(n,b) * b / (n-b+1)
                    if (b > 0) binom = binom * b / double(n - b + 1);
                }
            }
            acc = std::move(next);
        }

        ComplexPoly r(dim_);
        for (const auto& [e, a] : acc) {
            if (std::abs(a.sum) <= 1e-13 * a.gross) continue;  // cancelled
            r.add_term(e, a.sum);
        }
        return r;
    }

    // Freeze the trailing (dim - keep) variables at the given values,
    // producing a polynomial in the first `keep` variables.
    ComplexPoly substitute_tail(int keep, std::span<const Complex> tail) const {
        if (keep < 1 || keep > dim_) throw std::invalid_argument("substitute_tail: bad keep");
        if (static_cast<int>(tail.size()) != dim_ - keep)
            throw std::invalid_argument("substitute_tail: tail size mismatch");
        ComplexPoly r(keep);
        for (const auto& [e, c] : terms_) {
            Complex coef = c;
            bool dead = false;
            for (int i = keep; i < dim_; ++i) {
                for (int k = 0; k < e[i]; ++k) coef *= tail[i - keep];
                if (e[i] > 0 && tail[i - keep] == Complex(0.0, 0.0)) { dead = true; break; }
            }
            if (dead) continue;
            Exponent e2(e.begin(), e.begin() + keep);
            r.add_term(e2, coef);
        }
        return r;
    }

    // Least total degree of a nonzero term of the recentering at x.
    // Throws on the zero polynomial.
    int vanishing_order(std::span<const Complex> x) const {
        if (terms_.empty()) throw std::domain_error("vanishing_order: zero polynomial");
        ComplexPoly g = shifted(x);
        int d = g.min_total_degree();
        if (d < 0)
            throw std::domain_error("vanishing_order: polynomial vanished identically after shift");
        return d;
    }

private:
    int dim_;
    TermMap terms_;

    void check_same_dim(const ComplexPoly& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("ComplexPoly: dim mismatch");
    }
    void check_point(std::span<const Complex> x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw std::invalid_argument("ComplexPoly: point dim mismatch");
    }
};

// log(sum of exponentials), tolerant of -inf entries
inline double log_sum_exp(std::span<const double> vals) {
    double m = kNegInf;
    for (double v : vals)
        if (v > m) m = v;
    if (m == kNegInf) return kNegInf;
    if (m == kPosInf) return kPosInf;
    double s = 0.0;
    for (double v : vals) s += std::exp(v - m);
    return m + std::log(s);
}

inline double log_sum_exp2(double a, double b) {
    double v[2] = {a, b};
    return log_sum_exp(std::span<const double>(v, 2));
}

} // namespace pshlab
