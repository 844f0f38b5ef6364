#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "inflecta/errors.hpp"
#include "inflecta/scalar.hpp"

namespace inflecta {

// Dense univariate polynomial, coefficients stored in ascending degree order.
// The zero polynomial is the empty coefficient vector; degree() then returns -1.
template <class K>
class Poly {
public:
    using Scalar = K;

    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<K> coeffs) : c_(coeffs) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(const K& a) { return Poly(std::vector<K>{a}); }
    static Poly x() { return Poly(std::vector<K>{K(0), K(1)}); }
    // a * x^k
    static Poly monomial(const K& a, int k) {
        std::vector<K> c(k + 1, K(0));
        c[k] = a;
        return Poly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    const K& operator[](int i) const { return c_[i]; }
    K coeff(int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : K(0); }
    const std::vector<K>& coeffs() const { return c_; }
    const K& leading() const { return c_.back(); }

    template <class V>
    auto operator()(const V& x) const {
        using R = decltype(std::declval<K>() * x + x);
        if (c_.empty()) return R(0);
        R acc(c_.back());
        for (int i = (int)c_.size() - 2; i >= 0; --i) acc = acc * x + R(c_[i]);
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<K> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * K((long)i);
        return Poly(std::move(d));
    }

    Poly operator-() const {
        std::vector<K> d(c_);
        for (auto& a : d) a = -a;
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& f, const Poly& g) {
        std::vector<K> d(std::max(f.c_.size(), g.c_.size()), K(0));
        for (size_t i = 0; i < f.c_.size(); ++i) d[i] += f.c_[i];
        for (size_t i = 0; i < g.c_.size(); ++i) d[i] += g.c_[i];
        return Poly(std::move(d));
    }
    friend Poly operator-(const Poly& f, const Poly& g) { return f + (-g); }
    friend Poly operator*(const Poly& f, const Poly& g) {
        if (f.is_zero() || g.is_zero()) return Poly();
        std::vector<K> d(f.c_.size() + g.c_.size() - 1, K(0));
        for (size_t i = 0; i < f.c_.size(); ++i)
            for (size_t j = 0; j < g.c_.size(); ++j) d[i + j] += f.c_[i] * g.c_[j];
        return Poly(std::move(d));
    }
    friend Poly operator*(const K& a, const Poly& f) {
        std::vector<K> d(f.c_);
        for (auto& t : d) t = a * t;
        return Poly(std::move(d));
    }
    friend Poly operator*(const Poly& f, const K& a) { return a * f; }
    friend Poly operator/(const Poly& f, const K& a) {
        std::vector<K> d(f.c_);
        for (auto& t : d) t = t / a;
        return Poly(std::move(d));
    }

    Poly& operator+=(const Poly& g) { return *this = *this + g; }
    Poly& operator-=(const Poly& g) { return *this = *this - g; }
    Poly& operator*=(const Poly& g) { return *this = *this * g; }

    bool operator==(const Poly& g) const { return c_ == g.c_; }

    // Euclidean division. Exact over a field; with inexact scalars the caller
    // owns the conditioning.
    friend std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
        if (g.is_zero()) throw BadInput("divmod: division by zero polynomial");
        if (f.degree() < g.degree()) return {Poly(), f};
        std::vector<K> rem(f.c_), quot(f.degree() - g.degree() + 1, K(0));
        const K& lg = g.leading();
        for (int k = f.degree() - g.degree(); k >= 0; --k) {
            K q = rem[k + g.degree()] / lg;
            quot[k] = q;
            for (int i = 0; i <= g.degree(); ++i) rem[k + i] -= q * g.c_[i];
        }
        rem.resize(g.degree() > 0 ? g.degree() : 0);
        return {Poly(std::move(quot)), Poly(std::move(rem))};
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return *this / leading();
    }

    // f(g(x))
    Poly compose(const Poly& g) const {
        Poly acc;
        for (int i = degree(); i >= 0; --i) acc = acc * g + constant(c_[i]);
        return acc;
    }

    // x^n f(1/x) with n = degree(); reverses the coefficient vector.
    Poly reversed() const {
        std::vector<K> d(c_.rbegin(), c_.rend());
        return Poly(std::move(d));
    }

    // f(a x)
    Poly scale_arg(const K& a) const {
        std::vector<K> d(c_);
        K p(1);
        for (size_t i = 1; i < d.size(); ++i) {
            p *= a;
            d[i] *= p;
        }
        return Poly(std::move(d));
    }

    // f(x + a)
    Poly shift_arg(const K& a) const { return compose(Poly({a, K(1)})); }

private:
    void trim() {
        while (!c_.empty() && c_.back() == K(0)) c_.pop_back();
    }
    std::vector<K> c_;
};

template <class K>
Poly<K> gcd(const Poly<K>& f, const Poly<K>& g) {
    if constexpr (!is_exact_scalar<K>) {
        static_assert(is_exact_scalar<K>, "see runtime guard");
    }
    Poly<K> a = f, b = g;
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Runtime guard used by callers that are generic over the scalar: exact gcd
// over floats is meaningless, so it is refused rather than approximated.
template <class K>
Poly<K> gcd_checked(const Poly<K>& f, const Poly<K>& g) {
    if constexpr (is_exact_scalar<K>) {
        return gcd(f, g);
    } else {
        throw FloatGcdUnsupported("polynomial gcd requires exact coefficients");
    }
}

// Yun's algorithm: f = prod_i out[i]^(i+1) with out[i] squarefree, pairwise
// coprime. Exact scalars only.
template <class K>
std::vector<Poly<K>> squarefree_decomposition(const Poly<K>& f) {
    static_assert(is_exact_scalar<K>);
    std::vector<Poly<K>> out;
    if (f.degree() <= 0) return out;
    Poly<K> fp = f.derivative();
    Poly<K> a = gcd(f, fp);
    Poly<K> b = divmod(f, a).first;
    Poly<K> c = divmod(fp, a).first;
    Poly<K> d = c - b.derivative();
    while (b.degree() > 0) {
        Poly<K> s = gcd(b, d);
        out.push_back(s);
        b = divmod(b, s).first;
        c = divmod(d, s).first;
        d = c - b.derivative();
    }
    return out;
}

template <class K>
Poly<K> squarefree_part(const Poly<K>& f) {
    static_assert(is_exact_scalar<K>);
    if (f.degree() <= 0) return f;
    return divmod(f, gcd(f, f.derivative())).first.monic();
}

// Sylvester-matrix resultant. Exact over Rational via fraction-free-safe LU.
template <class K>
K resultant(const Poly<K>& f, const Poly<K>& g) {
    int m = f.degree(), n = g.degree();
    if (m < 0 || n < 0) return K(0);
    if (m == 0 && n == 0) return K(1);
    if (m == 0) {
        K r(1);
        for (int i = 0; i < n; ++i) r *= f[0];
        return r;
    }
    if (n == 0) {
        K r(1);
        for (int i = 0; i < m; ++i) r *= g[0];
        return r;
    }
    using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
    Mat S = Mat::Zero(m + n, m + n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) S(i, i + j) = f[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) S(n + i, i + j) = g[n - j];
    if constexpr (is_exact_scalar<K>) {
        // Bareiss-style exact elimination keeps entries as honest rationals.
        return Eigen::FullPivLU<Mat>(S).determinant();
    } else {
        return S.determinant();
    }
}

// Number of sign changes in the Sturm sequence evaluated at x; the difference
// count(a) - count(b) is the number of distinct real roots in (a, b].
template <class K>
class SturmSequence {
    static_assert(is_exact_scalar<K>);
public:
    explicit SturmSequence(const Poly<K>& f) {
        Poly<K> p0 = squarefree_part(f);
        seq_.push_back(p0);
        if (p0.degree() > 0) {
            seq_.push_back(p0.derivative());
            while (seq_.back().degree() > 0) {
                auto r = divmod(seq_[seq_.size() - 2], seq_.back()).second;
                if (r.is_zero()) break;
                seq_.push_back(-r);
            }
        }
    }

    int sign_changes_at(const K& x) const {
        int changes = 0, last = 0;
        for (const auto& p : seq_) {
            K v = p(x);
            int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
            if (s != 0) {
                if (last != 0 && s != last) ++changes;
                last = s;
            }
        }
        return changes;
    }

    int sign_changes_at_plus_inf() const { return changes_at_inf(+1); }
    int sign_changes_at_minus_inf() const { return changes_at_inf(-1); }

    // Distinct real roots in the half-open interval (a, b].
    int count_in(const K& a, const K& b) const {
        return sign_changes_at(a) - sign_changes_at(b);
    }
    int count_real() const {
        return sign_changes_at_minus_inf() - sign_changes_at_plus_inf();
    }

private:
    int changes_at_inf(int dir) const {
        int changes = 0, last = 0;
        for (const auto& p : seq_) {
            if (p.is_zero()) continue;
            int s = p.leading() > 0 ? 1 : -1;
            if (dir < 0 && p.degree() % 2 == 1) s = -s;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes;
    }
    std::vector<Poly<K>> seq_;
};

// Cauchy bound: all real roots lie in [-B, B].
template <class K>
K root_bound(const Poly<K>& f) {
    K bound(0);
    const K& lead = f.leading();
    for (int i = 0; i < f.degree(); ++i) {
        K t = f[i] / lead;
        if (t < 0) t = -t;
        if (t > bound) bound = t;
    }
    return bound + K(1);
}

// Disjoint rational intervals, one per distinct real root. Intervals are
// half-open (lo, hi] and shrunk below the requested width.
template <class K>
std::vector<std::pair<K, K>> isolate_real_roots(const Poly<K>& f, const K& width) {
    static_assert(is_exact_scalar<K>);
    std::vector<std::pair<K, K>> out;
    Poly<K> sf = squarefree_part(f);
    if (sf.degree() <= 0) return out;
    SturmSequence<K> sturm(sf);
    K bound = root_bound(sf);
    struct Item { K a, b; int n; };
    std::vector<Item> stack;
    {
        int total = sturm.count_in(-bound, bound);
        if (total > 0) stack.push_back({-bound, bound, total});
    }
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (it.n == 1 && (it.b - it.a) <= width) {
            out.emplace_back(it.a, it.b);
            continue;
        }
        K mid = (it.a + it.b) / K(2);
        // Nudge off an exact root so interval endpoints stay regular.
        if (sf(mid) == 0) {
            out.emplace_back(mid - width / K(2), mid);
            int left = sturm.count_in(it.a, mid - width / K(2));
            int right = sturm.count_in(mid, it.b);
            if (left > 0) stack.push_back({it.a, mid - width / K(2), left});
            if (right > 0) stack.push_back({mid, it.b, right});
            continue;
        }
        int left = sturm.count_in(it.a, mid);
        int right = it.n - left;
        if (left > 0) stack.push_back({it.a, mid, left});
        if (right > 0) stack.push_back({mid, it.b, right});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });
    return out;
}

// Unique interpolating polynomial of degree < nodes.size().
template <class K>
Poly<K> interpolate(const std::vector<K>& nodes, const std::vector<K>& values) {
    if (nodes.size() != values.size() || nodes.empty())
        throw BadInput("interpolate: node/value mismatch");
    // Newton's divided differences, then expand.
    size_t n = nodes.size();
    std::vector<K> dd(values);
    for (size_t level = 1; level < n; ++level)
        for (size_t i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
    Poly<K> result = Poly<K>::constant(dd[n - 1]);
    for (size_t i = n - 1; i-- > 0;) {
        Poly<K> lin({-nodes[i], K(1)});
        result = result * lin + Poly<K>::constant(dd[i]);
    }
    return result;
}

// Chebyshev polynomial of the first kind, T_k(cos u) = cos(k u).
template <class K>
Poly<K> chebyshev(int k) {
    if (k < 0) throw BadInput("chebyshev: negative index");
    Poly<K> t0 = Poly<K>::constant(K(1));
    if (k == 0) return t0;
    Poly<K> t1 = Poly<K>::x();
    Poly<K> two_x = Poly<K>({K(0), K(2)});
    for (int i = 2; i <= k; ++i) {
        Poly<K> t2 = two_x * t1 - t0;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    return t1;
}

template <class K>
Poly<Rational> to_rational_poly(const Poly<K>& f) {
    std::vector<Rational> c(f.degree() + 1);
    for (int i = 0; i <= f.degree(); ++i) {
        if constexpr (is_exact_scalar<K>) c[i] = f[i];
        else c[i] = rationalize(f[i]);
    }
    return Poly<Rational>(std::move(c));
}

inline Poly<double> to_double_poly(const Poly<Rational>& f) {
    std::vector<double> c(f.degree() + 1);
    for (int i = 0; i <= f.degree(); ++i) c[i] = to_double(f[i]);
    return Poly<double>(std::move(c));
}

inline Poly<Complex> to_complex_poly(const Poly<Rational>& f) {
    std::vector<Complex> c(f.degree() + 1);
    for (int i = 0; i <= f.degree(); ++i) c[i] = Complex(to_double(f[i]), 0.0);
    return Poly<Complex>(std::move(c));
}

} // namespace inflecta
