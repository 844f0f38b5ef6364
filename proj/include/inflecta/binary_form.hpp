#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "inflecta/errors.hpp"
#include "inflecta/poly.hpp"
#include "inflecta/scalar.hpp"

namespace inflecta {

// Point of the projective line, canonicalized: t != 0 forces t = 1, so
// infinity is exactly [1:0]. Scalar may be rational, double, or complex.
template <class K>
struct ProjPoint1 {
    K s{0}, t{1};

    ProjPoint1() = default;
    ProjPoint1(K s_, K t_) : s(std::move(s_)), t(std::move(t_)) { canonicalize(); }
    static ProjPoint1 affine(const K& x) { return ProjPoint1(x, K(1)); }
    static ProjPoint1 infinity() { return ProjPoint1(K(1), K(0)); }

    bool is_infinity() const { return t == K(0); }

    void canonicalize() {
        if (t != K(0)) {
            s = s / t;
            t = K(1);
        } else {
            if (s == K(0)) throw BadInput("ProjPoint1: [0:0] is not a point");
            s = K(1);
        }
    }

    bool operator==(const ProjPoint1& o) const { return s == o.s && t == o.t; }
};

using QPoint = ProjPoint1<Rational>;
using CPoint = ProjPoint1<Complex>;

inline CPoint to_complex_point(const QPoint& p) {
    return p.is_infinity() ? CPoint::infinity()
                           : CPoint::affine(Complex(to_double(p.s), 0.0));
}

// Homogeneous binary form of a declared degree d in (s, t); coeffs[k] is the
// coefficient of s^(d-k) t^k. The zero form is the sentinel with empty
// coefficients and degree -1; curve-level operations reject it.
template <class K>
class BinaryForm {
public:
    using Scalar = K;

    BinaryForm() = default; // zero sentinel
    BinaryForm(int degree, std::vector<K> coeffs) : d_(degree), c_(std::move(coeffs)) {
        if (d_ < 0 || (int)c_.size() != d_ + 1)
            throw BadInput("BinaryForm: coefficient count must be degree+1");
        if (all_zero()) *this = BinaryForm();
    }

    static BinaryForm zero() { return BinaryForm(); }

    // Homogenization t^d p(s/t) of a univariate polynomial in the chart t=1;
    // requires deg p <= d.
    static BinaryForm from_poly(const Poly<K>& p, int d) {
        if (p.is_zero()) return BinaryForm();
        if (p.degree() > d) throw BadInput("BinaryForm: degree too small for poly");
        std::vector<K> c(d + 1, K(0));
        for (int j = 0; j <= p.degree(); ++j) c[d - j] = p[j];
        return BinaryForm(d, std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return d_; }
    const std::vector<K>& coeffs() const { return c_; }
    const K& operator[](int k) const { return c_[k]; }

    // Restriction to the chart t=1: a univariate polynomial in s.
    Poly<K> dehomogenize() const {
        std::vector<K> p(d_ + 1, K(0));
        for (int k = 0; k <= d_; ++k) p[d_ - k] = c_[k];
        return Poly<K>(std::move(p));
    }
    // Restriction to the chart s=1: a univariate polynomial in t.
    Poly<K> dehomogenize_at_infinity() const { return Poly<K>(c_); }

    // Multiplicity of the root at [1:0], i.e. the power of t dividing the form.
    int infinity_multiplicity() const {
        if (is_zero()) return 0;
        int m = 0;
        while (m <= d_ && c_[m] == K(0)) ++m;
        return m;
    }

    template <class V>
    auto operator()(const V& s, const V& t) const {
        using R = decltype(std::declval<K>() * s + s);
        R acc(0), tp(1);
        // Horner in s; coeffs[k] belongs to s^(d-k) t^k.
        for (int k = 0; k <= d_; ++k) {
            acc = acc * s + R(c_[k]) * tp;
            tp = tp * t;
        }
        return acc;
    }

    template <class V>
    auto operator()(const ProjPoint1<V>& p) const {
        return (*this)(p.s, p.t);
    }

    BinaryForm derivative_s() const {
        if (is_zero() || d_ == 0) return BinaryForm();
        std::vector<K> c(d_);
        for (int k = 0; k < d_; ++k) c[k] = c_[k] * K(d_ - k);
        return make_checked(d_ - 1, std::move(c));
    }

    BinaryForm derivative_t() const {
        if (is_zero() || d_ == 0) return BinaryForm();
        std::vector<K> c(d_);
        for (int k = 0; k < d_; ++k) c[k] = c_[k + 1] * K(k + 1);
        return make_checked(d_ - 1, std::move(c));
    }

    BinaryForm derivative(char variable, int order) const {
        if (order < 0) throw BadInput("derivative: negative order");
        BinaryForm f = *this;
        for (int i = 0; i < order && !f.is_zero(); ++i)
            f = (variable == 's') ? f.derivative_s() : f.derivative_t();
        return f;
    }

    friend BinaryForm operator*(const BinaryForm& f, const BinaryForm& g) {
        if (f.is_zero() || g.is_zero()) return BinaryForm();
        std::vector<K> c(f.d_ + g.d_ + 1, K(0));
        for (int i = 0; i <= f.d_; ++i)
            for (int j = 0; j <= g.d_; ++j) c[i + j] += f.c_[i] * g.c_[j];
        return BinaryForm(f.d_ + g.d_, std::move(c));
    }
    friend BinaryForm operator*(const K& a, const BinaryForm& f) {
        if (f.is_zero() || a == K(0)) return BinaryForm();
        std::vector<K> c(f.c_);
        for (auto& t : c) t = a * t;
        return BinaryForm(f.d_, std::move(c));
    }
    friend BinaryForm operator+(const BinaryForm& f, const BinaryForm& g) {
        if (f.is_zero()) return g;
        if (g.is_zero()) return f;
        if (f.d_ != g.d_) throw BadInput("BinaryForm addition: degree mismatch");
        std::vector<K> c(f.c_);
        for (int k = 0; k <= f.d_; ++k) c[k] += g.c_[k];
        return make_checked(f.d_, std::move(c));
    }
    friend BinaryForm operator-(const BinaryForm& f, const BinaryForm& g) {
        return f + (K(-1) * g);
    }

    bool operator==(const BinaryForm& g) const { return d_ == g.d_ && c_ == g.c_; }

    // Scale so the first nonzero coefficient is 1.
    BinaryForm normalized() const {
        if (is_zero()) return *this;
        int k = 0;
        while (c_[k] == K(0)) ++k;
        K lead = c_[k];
        std::vector<K> c(c_);
        for (auto& t : c) t = t / lead;
        return BinaryForm(d_, std::move(c));
    }

    bool has_real_coefficients() const {
        if constexpr (is_complex_scalar<K>) {
            for (const auto& a : c_)
                if (std::abs(a.imag()) != 0) return false;
        }
        return true;
    }

private:
    static BinaryForm make_checked(int d, std::vector<K> c) {
        BinaryForm f;
        f.d_ = d;
        f.c_ = std::move(c);
        if (f.all_zero()) return BinaryForm();
        return f;
    }
    bool all_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const K& a) { return a == K(0); });
    }
    int d_ = -1;
    std::vector<K> c_;
};

using QForm = BinaryForm<Rational>;
using CForm = BinaryForm<Complex>;
using DForm = BinaryForm<double>;

inline CForm to_complex_form(const QForm& f) {
    if (f.is_zero()) return CForm();
    std::vector<Complex> c(f.degree() + 1);
    for (int k = 0; k <= f.degree(); ++k) c[k] = Complex(to_double(f[k]), 0.0);
    return CForm(f.degree(), std::move(c));
}

template <class K>
BinaryForm<Rational> to_rational_form(const BinaryForm<K>& f) {
    if (f.is_zero()) return QForm();
    std::vector<Rational> c(f.degree() + 1);
    for (int k = 0; k <= f.degree(); ++k) {
        if constexpr (is_exact_scalar<K>) c[k] = f[k];
        else if constexpr (is_complex_scalar<K>) c[k] = rationalize(f[k].real());
        else c[k] = rationalize(f[k]);
    }
    return QForm(f.degree(), std::move(c));
}

// Monic common divisor of a family of exact forms, with the cofactors that
// reproduce each input. Handles the root at infinity through the shared
// power of t, and the rest through univariate gcd in the chart t=1.
inline std::pair<QForm, std::vector<QForm>> gcd_and_content(const std::vector<QForm>& forms) {
    std::vector<const QForm*> nz;
    for (const auto& f : forms)
        if (!f.is_zero()) nz.push_back(&f);
    if (nz.empty()) throw BadInput("gcd_and_content: all forms zero");

    int t_power = nz[0]->infinity_multiplicity();
    Poly<Rational> g = nz[0]->dehomogenize();
    for (size_t i = 1; i < nz.size(); ++i) {
        t_power = std::min(t_power, nz[i]->infinity_multiplicity());
        g = gcd(g, nz[i]->dehomogenize());
    }
    QForm gform = QForm::from_poly(g, g.degree() + t_power);

    std::vector<QForm> cofactors;
    cofactors.reserve(forms.size());
    for (const auto& f : forms) {
        if (f.is_zero()) {
            cofactors.push_back(QForm());
            continue;
        }
        auto [q, rem] = divmod(f.dehomogenize(), g);
        if (!rem.is_zero()) throw BadInput("gcd_and_content: non-exact division");
        cofactors.push_back(QForm::from_poly(q, f.degree() - gform.degree()));
    }
    return {gform, cofactors};
}

} // namespace inflecta
