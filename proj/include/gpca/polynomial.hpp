#pragma once

#include "gpca/rational.hpp"

#include <Eigen/Dense>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpca {

// Univariate polynomial, coefficients in ascending degree.
template <class Scalar>
class Polynomial {
public:
    using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Polynomial() : c_(Coeffs::Zero(1)) {}
    explicit Polynomial(Coeffs c) : c_(std::move(c)) { trim(); }
    Polynomial(std::initializer_list<Scalar> ascending) : c_(static_cast<Eigen::Index>(ascending.size())) {
        Eigen::Index i = 0;
        for (const auto& x : ascending) c_(i++) = x;
        trim();
    }
    static Polynomial constant(const Scalar& a) { return Polynomial({a}); }
    static Polynomial x() { return Polynomial({Scalar(0), Scalar(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Scalar& operator[](int i) const { return c_(i); }
    const Coeffs& coeffs() const { return c_; }

    Scalar operator()(const Scalar& x) const {
        Scalar acc = c_(c_.size() - 1);
        for (Eigen::Index i = c_.size() - 1; i-- > 0;) acc = acc * x + c_(i);
        return acc;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Coeffs c = Coeffs::Zero(std::max(a.c_.size(), b.c_.size()));
        c.head(a.c_.size()) += a.c_;
        c.head(b.c_.size()) += b.c_;
        return Polynomial(c);
    }
    friend Polynomial operator-(const Polynomial& a) { return Polynomial(Coeffs(-a.c_)); }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Coeffs c = Coeffs::Zero(a.c_.size() + b.c_.size() - 1);
        for (Eigen::Index i = 0; i < a.c_.size(); ++i) c.segment(i, b.c_.size()) += a.c_(i) * b.c_;
        return Polynomial(c);
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.c_.size() == b.c_.size() && a.c_ == b.c_;
    }

    std::string str(const std::string& var = "p") const {
        std::string s;
        for (Eigen::Index i = c_.size(); i-- > 0;) {
            if (c_(i) == Scalar(0) && c_.size() > 1) continue;
            Scalar a = c_(i);
            bool neg = a < Scalar(0);
            if (neg) a = -a;
            s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            std::string mag = to_text(a);
            if (i == 0) s += mag;
            else {
                if (a != Scalar(1)) s += mag + "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    static std::string to_text(const Scalar& a) {
        if constexpr (std::is_same_v<Scalar, Rational>) return a.str();
        else return std::to_string(a);
    }
    void trim() {
        Eigen::Index n = c_.size();
        while (n > 1 && c_(n - 1) == Scalar(0)) --n;
        if (n == 0) c_ = Coeffs::Zero(1);
        else c_.conservativeResize(n);
    }

    Coeffs c_;
};

template <class Scalar>
Polynomial<Scalar> pow(const Polynomial<Scalar>& a, unsigned n) {
    Polynomial<Scalar> r = Polynomial<Scalar>::constant(Scalar(1));
    while (n--) r = r * a;
    return r;
}

template <class Scalar>
int sign(const Scalar& x) {
    return (x > Scalar(0)) - (x < Scalar(0));
}

struct RootBracket {
    Rational lo, hi;
    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
};

// Bisection on exact signs. If a midpoint is an exact root the bracket collapses onto it.
inline RootBracket isolate_root(const Polynomial<Rational>& f, Rational lo, Rational hi, const Rational& tol,
                                std::vector<RootBracket>* trace = nullptr) {
    if (lo > hi) std::swap(lo, hi);
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
    int slo = sign(f(lo)), shi = sign(f(hi));
    if (slo == 0) return {lo, lo};
    if (shi == 0) return {hi, hi};
    if (slo == shi)
        throw std::invalid_argument("no sign change on [" + lo.str() + ", " + hi.str() + "]");
    RootBracket b{lo, hi};
    if (trace) trace->push_back(b);
    while (b.width() > tol) {
        Rational m = b.midpoint();
        int sm = sign(f(m));
        if (sm == 0) return {m, m};
        if (sm == slo) b.lo = m;
        else b.hi = m;
        if (trace) trace->push_back(b);
    }
    return b;
}

// Polynomial in p and q with rational coefficients; keys are (deg p, deg q).
class BiPoly {
public:
    BiPoly() = default;
    BiPoly(long c) { if (c) terms_[{0, 0}] = Rational(c); }
    BiPoly(const Rational& c) { if (c != 0) terms_[{0, 0}] = c; }

    static BiPoly p() { return monomial(1, 0); }
    static BiPoly q() { return monomial(0, 1); }
    static BiPoly r() { return BiPoly(1) - p() - q(); }
    static BiPoly monomial(int i, int j, const Rational& c = 1) {
        BiPoly b;
        if (c != 0) b.terms_[{i, j}] = c;
        return b;
    }

    Rational operator()(const Rational& p, const Rational& q) const {
        Rational acc = 0;
        for (const auto& [k, c] : terms_) acc += c * power(p, k.first) * power(q, k.second);
        return acc;
    }

    bool is_zero() const { return terms_.empty(); }
    bool depends_on_q() const {
        for (const auto& [k, c] : terms_)
            if (k.second > 0) return true;
        return false;
    }
    // Restriction to q = 0.
    Polynomial<Rational> at_q_zero() const {
        int deg = 0;
        for (const auto& [k, c] : terms_) deg = std::max(deg, k.first);
        Polynomial<Rational>::Coeffs v = Polynomial<Rational>::Coeffs::Zero(deg + 1);
        for (const auto& [k, c] : terms_)
            if (k.second == 0) v(k.first) += c;
        return Polynomial<Rational>(v);
    }

    friend BiPoly operator+(BiPoly a, const BiPoly& b) {
        for (const auto& [k, c] : b.terms_) a.add(k, c);
        return a;
    }
    friend BiPoly operator-(const BiPoly& a) {
        BiPoly r;
        for (const auto& [k, c] : a.terms_) r.terms_[k] = -c;
        return r;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        BiPoly r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
        return r;
    }
    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            auto [k, c] = *it;
            bool neg = c < 0;
            Rational a = neg ? Rational(-c) : c;
            s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            std::string mono;
            auto var = [&](const char* v, int d) {
                if (d == 0) return;
                if (!mono.empty()) mono += "*";
                mono += v;
                if (d > 1) mono += "^" + std::to_string(d);
            };
            var("p", k.first);
            var("q", k.second);
            if (mono.empty()) s += a.str();
            else s += (a == 1 ? "" : a.str() + "*") + mono;
        }
        return s;
    }

private:
    void add(std::pair<int, int> k, const Rational& c) {
        auto& slot = terms_[k];
        slot += c;
        if (slot == 0) terms_.erase(k);
    }

    std::map<std::pair<int, int>, Rational> terms_;
};

inline BiPoly pow(const BiPoly& a, unsigned n) {
    BiPoly r(1);
    while (n--) r = r * a;
    return r;
}

}  // namespace gpca
