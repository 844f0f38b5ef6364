#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "inflecta/binary_form.hpp"
#include "inflecta/errors.hpp"
#include "inflecta/poly.hpp"
#include "inflecta/scalar.hpp"

namespace inflecta {

struct RootEntry {
    CPoint point;
    int multiplicity;
};

// All projective roots of a binary form, multiplicities summing to its degree.
struct RootMultiset {
    std::vector<RootEntry> entries;

    int total_multiplicity() const {
        int n = 0;
        for (const auto& e : entries) n += e.multiplicity;
        return n;
    }

    bool all_real(double tol) const {
        for (const auto& e : entries)
            if (!e.point.is_infinity() && std::abs(e.point.s.imag()) > tol) return false;
        return true;
    }
};

namespace detail {

// Initial guesses from the Newton polygon: one circle per upper convex hull
// edge of (i, log|a_i|), with the edge slope as the radius. Roots of wildly
// different magnitude then start near their own scale instead of sharing
// one Cauchy-bound circle.
inline std::vector<Complex> aberth_start(const Poly<Complex>& f) {
    int n = f.degree();
    std::vector<std::pair<int, double>> pts;
    for (int i = 0; i <= n; ++i) {
        double a = std::abs(f[i]);
        if (a > 0) pts.emplace_back(i, std::log(a));
    }
    std::vector<std::pair<int, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            double cross = (b.first - a.first) * (p.second - a.second) -
                           (p.first - a.first) * (b.second - a.second);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<Complex> z;
    z.reserve(n);
    // Exact zero roots below the first hull vertex start on a tiny circle.
    int low = hull.front().first;
    double first_edge = hull.size() >= 2
                            ? std::exp((hull[0].second - hull[1].second) /
                                       (hull[1].first - hull[0].first))
                            : 1.0;
    for (int k = 0; k < low; ++k) {
        double theta = 2.0 * M_PI * k / std::max(1, low) + 0.2;
        z.push_back(1e-3 * first_edge * Complex(std::cos(theta), std::sin(theta)));
    }
    for (size_t e = 0; e + 1 < hull.size(); ++e) {
        int count = hull[e + 1].first - hull[e].first;
        double r = std::exp((hull[e].second - hull[e + 1].second) / count);
        for (int k = 0; k < count; ++k) {
            double theta = 2.0 * M_PI * k / count + 0.4 + 0.3 * e; // offsets break symmetry
            z.push_back(r * Complex(std::cos(theta), std::sin(theta)));
        }
    }
    return z;
}

// Ehrlich-Aberth simultaneous iteration. Expects a squarefree-ish input;
// multiple roots converge linearly but the caller clusters them anyway.
inline std::vector<Complex> aberth(const Poly<Complex>& f, int max_iter = 400) {
    int n = f.degree();
    if (n <= 0) return {};
    if (n == 1) return {-f[0] / f[1]};
    Poly<Complex> fp = f.derivative();
    std::vector<Complex> z = aberth_start(f);

    for (int iter = 0; iter < max_iter; ++iter) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            Complex fv = f(z[i]);
            if (std::abs(fv) == 0) continue;
            Complex ratio = fv / fp(z[i]);
            Complex sum(0);
            for (int j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            Complex delta = ratio / (1.0 - ratio * sum);
            z[i] -= delta;
            // Relative movement: the roots may live on very different scales.
            moved = std::max(moved, std::abs(delta) / (1.0 + std::abs(z[i])));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

inline Complex newton_polish(const Poly<Complex>& f, const Poly<Complex>& fp, Complex z,
                             int iters = 8) {
    for (int i = 0; i < iters; ++i) {
        Complex d = fp(z);
        if (std::abs(d) == 0) break;
        z -= f(z) / d;
    }
    return z;
}

// Extra correction pass in extended precision, used when INFLECTA_PRECISION
// asks for more than double.
inline Complex newton_polish_ld(const Poly<Complex>& f, Complex z, int iters = 4) {
    std::vector<std::complex<long double>> c(f.degree() + 1);
    for (int i = 0; i <= f.degree(); ++i)
        c[i] = std::complex<long double>(f[i].real(), f[i].imag());
    auto eval = [&](std::complex<long double> x, std::complex<long double>& d) {
        std::complex<long double> v = 0, dv = 0;
        for (int i = (int)c.size() - 1; i >= 0; --i) {
            dv = dv * x + v;
            v = v * x + c[i];
        }
        d = dv;
        return v;
    };
    std::complex<long double> x(z.real(), z.imag());
    for (int i = 0; i < iters; ++i) {
        std::complex<long double> d;
        auto v = eval(x, d);
        if (std::abs(d) == 0.0L) break;
        x -= v / d;
    }
    return Complex((double)x.real(), (double)x.imag());
}

} // namespace detail

// Roots of a complex univariate polynomial with cluster-based multiplicities.
inline std::vector<std::pair<Complex, int>> roots_clustered(const Poly<Complex>& f,
                                                            double tol) {
    int n = f.degree();
    if (n < 0) throw BadInput("roots: zero polynomial");
    std::vector<std::pair<Complex, int>> out;
    if (n == 0) return out;

    auto z = detail::aberth(f);
    Poly<Complex> fp = f.derivative();
    for (auto& zi : z) zi = detail::newton_polish(f, fp, zi);

    double scale = 0;
    for (int i = 0; i <= n; ++i) scale = std::max(scale, std::abs(f[i]));
    double radius = tol * std::max(1.0, scale);

    std::vector<bool> used(z.size(), false);
    for (size_t i = 0; i < z.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> cluster{i};
        used[i] = true;
        for (size_t j = i + 1; j < z.size(); ++j)
            if (!used[j] && std::abs(z[j] - z[i]) < radius) {
                used[j] = true;
                cluster.push_back(j);
            }
        Complex center(0);
        for (auto j : cluster) center += z[j];
        center /= (double)cluster.size();
        // Certify: the cluster must be isolated from the others.
        for (size_t j = 0; j < z.size(); ++j)
            if (!used[j] && std::abs(z[j] - center) < 3 * radius)
                throw NonConvergence("roots: ambiguous root cluster");
        out.emplace_back(center, (int)cluster.size());
    }
    return out;
}

// Roots of an exact polynomial: Yun decomposition gives exact multiplicities,
// and each squarefree factor is solved numerically then Newton-polished.
inline std::vector<std::pair<Complex, int>> roots_exact(const Poly<Rational>& f) {
    if (f.is_zero()) throw BadInput("roots: zero polynomial");
    std::vector<std::pair<Complex, int>> out;
    auto factors = squarefree_decomposition(f);
    for (size_t m = 0; m < factors.size(); ++m) {
        if (factors[m].degree() <= 0) continue;
        Poly<Complex> fc = to_complex_poly(factors[m].monic());
        auto z = detail::aberth(fc);
        Poly<Complex> fp = fc.derivative();
        for (auto& zi : z) {
            zi = detail::newton_polish(fc, fp, zi, 12);
            if (extended_precision_enabled()) zi = detail::newton_polish_ld(fc, zi);
            out.emplace_back(zi, (int)(m + 1));
        }
    }
    return out;
}

// Snap conjugate pairs together and zero out drifting imaginary parts so the
// multiset is exactly conjugation-closed for real input.
inline void symmetrize_conjugates(std::vector<std::pair<Complex, int>>& rs, double tol) {
    std::vector<bool> used(rs.size(), false);
    for (size_t i = 0; i < rs.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(rs[i].first.imag()) < tol) {
            rs[i].first = Complex(rs[i].first.real(), 0.0);
            used[i] = true;
            continue;
        }
        // Find the conjugate partner.
        size_t best = i;
        double bestDist = 1e300;
        for (size_t j = 0; j < rs.size(); ++j) {
            if (j == i || used[j]) continue;
            double dist = std::abs(rs[j].first - std::conj(rs[i].first));
            if (dist < bestDist) {
                bestDist = dist;
                best = j;
            }
        }
        if (best != i && bestDist < tol * 100) {
            Complex avg = (rs[i].first + std::conj(rs[best].first)) / 2.0;
            rs[i].first = avg;
            rs[best].first = std::conj(avg);
            used[i] = used[best] = true;
        } else {
            used[i] = true;
        }
    }
}

// All projective roots of a binary form with multiplicities. Exact input uses
// squarefree decomposition; floating input clusters with radius tol.
template <class K>
RootMultiset roots(const BinaryForm<K>& f, double tol = 1e-9) {
    if (f.is_zero()) throw BadInput("roots: zero form");
    RootMultiset rm;
    int inf_mult = f.infinity_multiplicity();
    if (inf_mult > 0) rm.entries.push_back({CPoint::infinity(), inf_mult});

    std::vector<std::pair<Complex, int>> finite;
    if constexpr (is_exact_scalar<K>) {
        finite = roots_exact(f.dehomogenize());
    } else {
        Poly<Complex> p;
        if constexpr (is_complex_scalar<K>) {
            p = f.dehomogenize();
        } else {
            std::vector<Complex> c;
            auto dp = f.dehomogenize();
            for (int i = 0; i <= dp.degree(); ++i) c.emplace_back(dp[i], 0.0);
            p = Poly<Complex>(std::move(c));
        }
        finite = roots_clustered(p, tol);
    }
    if (f.has_real_coefficients()) symmetrize_conjugates(finite, tol);
    for (auto& [z, m] : finite) rm.entries.push_back({CPoint::affine(z), m});
    return rm;
}

} // namespace inflecta
