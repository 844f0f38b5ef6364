#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "inflecta/binary_form.hpp"
#include "inflecta/errors.hpp"
#include "inflecta/poly.hpp"
#include "inflecta/roots.hpp"
#include "inflecta/scalar.hpp"

namespace inflecta {

// Vanishing-order sequence (0, a_1, ..., a_r) of a curve's components at a
// point; strictly increasing with a_i >= i. The weight sum(a_i - i) is the
// vanishing order of the Wronskian there.
struct RamificationSequence {
    std::vector<int> alpha;

    RamificationSequence() = default;
    explicit RamificationSequence(std::vector<int> a) : alpha(std::move(a)) {}
    RamificationSequence(std::initializer_list<int> a) : alpha(a) {}

    int r() const { return (int)alpha.size() - 1; }
    int weight() const {
        int w = 0;
        for (int i = 0; i < (int)alpha.size(); ++i) w += alpha[i] - i;
        return w;
    }
    // Strictly increasing within [0, d]. Sequences of honest curves also
    // start at 0 (base_point_free); complements of sequences containing d
    // do not, and mark a base point of the dual span.
    bool valid(int d) const {
        if (alpha.empty() || alpha[0] < 0) return false;
        for (int i = 1; i < (int)alpha.size(); ++i)
            if (alpha[i] <= alpha[i - 1]) return false;
        return alpha.back() <= d;
    }
    bool base_point_free() const { return !alpha.empty() && alpha[0] == 0; }
    int operator[](int i) const { return alpha[i]; }

    bool operator==(const RamificationSequence& o) const { return alpha == o.alpha; }
    bool operator<(const RamificationSequence& o) const { return alpha < o.alpha; }

    static RamificationSequence unramified(int r) {
        std::vector<int> a(r + 1);
        std::iota(a.begin(), a.end(), 0);
        return RamificationSequence(std::move(a));
    }
    // Plane-curve special cases.
    static RamificationSequence flex() { return {0, 1, 3}; }
    static RamificationSequence cusp() { return {0, 2, 3}; }
    static RamificationSequence planar() { return {0, 1, 4}; }
};

// Parameterized rational curve of degree d in P^r: r+1 binary forms of
// degree d, coprime and linearly independent.
template <class K>
struct Curve {
    int d = 0, r = 0;
    std::vector<BinaryForm<K>> components;

    Curve() = default;
    Curve(int d_, int r_, std::vector<BinaryForm<K>> comps)
        : d(d_), r(r_), components(std::move(comps)) {
        if (d <= r || r < 1) throw BadInput("Curve: need d > r >= 1");
        if ((int)components.size() != r + 1)
            throw BadInput("Curve: need r+1 components");
        for (const auto& f : components)
            if (f.is_zero() || f.degree() != d)
                throw BadInput("Curve: components must be nonzero of degree d");
    }
};

using QCurve = Curve<Rational>;
using CCurve = Curve<Complex>;

inline CCurve to_complex_curve(const QCurve& c) {
    std::vector<CForm> comps;
    for (const auto& f : c.components) comps.push_back(to_complex_form(f));
    return CCurve(c.d, c.r, std::move(comps));
}

namespace detail {

template <class K>
Poly<K> poly_matrix_det(const std::vector<std::vector<Poly<K>>>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    Poly<K> acc;
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Poly<K>>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<Poly<K>> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        Poly<K> term = m[0][j] * poly_matrix_det(minor);
        if (j % 2 == 0) acc += term;
        else acc -= term;
    }
    return acc;
}

template <class K>
K scalar_matrix_det(const std::vector<std::vector<K>>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    K acc(0);
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<K>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<K> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        K term = m[0][j] * scalar_matrix_det(minor);
        if (j % 2 == 0) acc += term;
        else acc -= term;
    }
    return acc;
}

// Pivot column indices of the row span of a (r+1) x (cols) matrix, found by
// elimination in column order. Entries below tol (relative to the row scale)
// count as zero; tol <= 0 means exact zero tests.
template <class T>
std::vector<int> pivot_orders(std::vector<std::vector<T>> rows, double tol) {
    int nrows = (int)rows.size(), ncols = rows.empty() ? 0 : (int)rows[0].size();
    auto entry_zero = [&](const T& x) {
        if constexpr (std::is_same_v<T, Rational>) {
            (void)tol;
            return x == 0;
        } else {
            return std::abs(x) <= tol;
        }
    };
    if constexpr (!std::is_same_v<T, Rational>) {
        for (auto& row : rows) {
            double scale = 0;
            for (auto& x : row) scale = std::max(scale, (double)std::abs(x));
            if (scale > 0)
                for (auto& x : row) x = x * (1.0 / scale);
        }
    }
    std::vector<int> pivots;
    std::vector<bool> used(nrows, false);
    for (int col = 0; col < ncols && (int)pivots.size() < nrows; ++col) {
        int best = -1;
        double best_mag = 0;
        for (int i = 0; i < nrows; ++i) {
            if (used[i] || entry_zero(rows[i][col])) continue;
            double mag = (double)abs_value(rows[i][col]);
            if (best < 0 || mag > best_mag) {
                best = i;
                best_mag = mag;
            }
        }
        if (best < 0) continue;
        used[best] = true;
        pivots.push_back(col);
        for (int i = 0; i < nrows; ++i) {
            if (used[i] || entry_zero(rows[i][col])) continue;
            T factor = rows[i][col] / rows[best][col];
            for (int k = col; k < ncols; ++k) rows[i][k] -= factor * rows[best][k];
        }
    }
    return pivots;
}

} // namespace detail

// Wronskian of the components in the chart t=1, homogenized to its invariant
// degree (r+1)(d-r) and scaled so the first nonzero coefficient is 1.
template <class K>
BinaryForm<K> wronskian(const Curve<K>& c) {
    std::vector<std::vector<Poly<K>>> m(c.r + 1);
    for (int i = 0; i <= c.r; ++i) m[0].push_back(c.components[i].dehomogenize());
    for (int j = 1; j <= c.r; ++j)
        for (int i = 0; i <= c.r; ++i) m[j].push_back(m[j - 1][i].derivative());
    Poly<K> w = detail::poly_matrix_det(m);
    if (w.is_zero()) throw DegenerateCurve("wronskian vanishes identically");
    return BinaryForm<K>::from_poly(w, (c.r + 1) * (c.d - c.r)).normalized();
}

// Taylor coefficient rows of the components at p; row i column j is the j-th
// local Taylor coefficient of component i. Points outside the unit disk are
// expanded in the reciprocal chart (local coordinate t/s around 1/p), which
// keeps the rows well scaled; vanishing orders are chart independent.
template <class K, class P>
std::vector<std::vector<decltype(std::declval<K>() * std::declval<P>())>>
taylor_rows(const Curve<K>& c, const ProjPoint1<P>& p) {
    using T = decltype(std::declval<K>() * std::declval<P>());
    bool reciprocal = p.is_infinity() || (double)abs_value(p.s) > 1.0;
    std::vector<std::vector<T>> rows;
    for (const auto& f : c.components) {
        Poly<K> chart = reciprocal ? f.dehomogenize_at_infinity() : f.dehomogenize();
        std::vector<T> coef;
        for (const auto& a : chart.coeffs()) coef.push_back(T(a));
        Poly<T> local(std::move(coef));
        if (!p.is_infinity()) {
            T center = reciprocal ? T(1) / T(p.s) : T(p.s);
            local = local.shift_arg(center);
        }
        std::vector<T> row(c.d + 1, T(0));
        for (int j = 0; j <= std::min(local.degree(), c.d); ++j) row[j] = local[j];
        rows.push_back(std::move(row));
    }
    return rows;
}

// Ramification sequence at a point: pivot orders of the span of the Taylor
// expansions. Unramified points give (0, 1, ..., r).
template <class K, class P>
RamificationSequence ramification_at(const Curve<K>& c, const ProjPoint1<P>& p,
                                     double tol = 1e-7) {
    auto rows = taylor_rows(c, p);
    auto pivots = detail::pivot_orders(std::move(rows), is_exact_scalar<K> ? 0.0 : tol);
    if ((int)pivots.size() != c.r + 1)
        throw DegenerateCurve("ramification_at: components dependent at point");
    return RamificationSequence(std::move(pivots));
}

// Exact-curve overload evaluated at a numeric point.
inline RamificationSequence ramification_at(const QCurve& c, const CPoint& p,
                                            double tol = 1e-7) {
    return ramification_at(to_complex_curve(c), p, tol);
}

struct ProfileEntry {
    CPoint point;
    RamificationSequence sequence;
};

struct RamificationProfile {
    int d = 0, r = 0;
    std::vector<ProfileEntry> entries;
    bool maximally_inflected = false;

    int total_weight() const {
        int w = 0;
        for (const auto& e : entries) w += e.sequence.weight();
        return w;
    }

    // Entries at real points in circular order along RP^1 (finite ascending,
    // then infinity).
    std::vector<ProfileEntry> real_entries() const {
        std::vector<ProfileEntry> out;
        for (const auto& e : entries)
            if (e.point.is_infinity() || e.point.s.imag() == 0) out.push_back(e);
        std::sort(out.begin(), out.end(), [](const ProfileEntry& a, const ProfileEntry& b) {
            if (a.point.is_infinity()) return false;
            if (b.point.is_infinity()) return true;
            return a.point.s.real() < b.point.s.real();
        });
        return out;
    }
};

// Roots of the Wronskian classified by their ramification sequences. The
// weight sum must reproduce the Wronskian degree or the detection is deemed
// inconsistent.
template <class K>
RamificationProfile ramification_profile(const Curve<K>& c, double tol = 1e-9) {
    RamificationProfile profile;
    profile.d = c.d;
    profile.r = c.r;
    BinaryForm<K> w = wronskian(c);
    RootMultiset rm = roots(w, tol);
    double class_tol = std::max(tol, 1e-7);
    for (const auto& e : rm.entries) {
        RamificationSequence seq;
        if constexpr (is_exact_scalar<K>) {
            if (e.point.is_infinity())
                seq = ramification_at(c, QPoint::infinity());
            else
                seq = ramification_at(c, e.point, class_tol);
        } else {
            seq = ramification_at(c, e.point, class_tol);
        }
        if (seq.weight() != e.multiplicity)
            throw ProfileInconsistent("ramification weight disagrees with root multiplicity");
        profile.entries.push_back({e.point, seq});
    }
    if (profile.total_weight() != (c.r + 1) * (c.d - c.r))
        throw ProfileInconsistent("ramification weights do not sum to (r+1)(d-r)");
    profile.maximally_inflected = rm.all_real(std::max(tol, 1e-8));
    return profile;
}

// Complement sequence on {0,...,d}: the beta with
// {alpha_i} union {d - beta_j} = {0,...,d}.
inline RamificationSequence grassmann_dual_sequence(const RamificationSequence& a, int d,
                                                    int r) {
    if ((int)a.alpha.size() != r + 1 || !a.valid(d))
        throw BadInput("grassmann_dual_sequence: invalid sequence");
    std::vector<bool> taken(d + 1, false);
    for (int x : a.alpha) taken[x] = true;
    std::vector<int> beta;
    for (int x = d; x >= 0; --x)
        if (!taken[x]) beta.push_back(d - x);
    return RamificationSequence(std::move(beta));
}

// Ramification of the projective dual at the same point:
// (0, a_r - a_{r-1}, ..., a_r - a_1, a_r).
inline RamificationSequence dual_ramification(const RamificationSequence& a) {
    int r = a.r();
    std::vector<int> out;
    out.push_back(0);
    for (int i = r - 1; i >= 1; --i) out.push_back(a.alpha[r] - a.alpha[i]);
    out.push_back(a.alpha[r]);
    return RamificationSequence(std::move(out));
}

// Degree of the plane dual: m = 4 - d + sum(alpha_2 - 2).
inline int plane_dual_degree(int d, const RamificationProfile& profile) {
    if (profile.r != 2) throw BadInput("plane_dual_degree: requires r = 2");
    int m = 4 - d;
    for (const auto& e : profile.entries) m += e.sequence[2] - 2;
    return m;
}

inline int plane_dual_degree(int d, const std::vector<RamificationSequence>& data) {
    int m = 4 - d;
    for (const auto& a : data) m += a[2] - 2;
    return m;
}

// Projective dual of a plane curve: the cross product of the two partial
// derivative vectors, with its base divisor removed. Exact arithmetic; the
// result degree is checked against the dual-degree law.
inline QCurve projective_dual(const QCurve& c) {
    if (c.r != 2) throw BadInput("projective_dual: requires r = 2");
    std::vector<QForm> ds, dt;
    for (const auto& f : c.components) {
        ds.push_back(f.derivative_s());
        dt.push_back(f.derivative_t());
    }
    auto minor = [&](int i, int j) { return ds[i] * dt[j] - ds[j] * dt[i]; };
    std::vector<QForm> psi{minor(1, 2), minor(2, 0), minor(0, 1)};
    for (const auto& f : psi)
        if (f.is_zero()) throw DegenerateCurve("projective_dual: minor vanishes");

    auto [g, cof] = gcd_and_content(psi);
    int m = 2 * (c.d - 1) - g.degree();

    RamificationProfile profile = ramification_profile(c);
    if (m != plane_dual_degree(c.d, profile))
        throw DegreeMismatch("projective_dual: degree disagrees with ramification");
    // One global scale only: per-component scaling would change the map.
    Rational lead(0);
    for (const auto& f : cof)
        if (!f.is_zero()) {
            for (int k = 0; k <= f.degree() && lead == 0; ++k) lead = f[k];
            break;
        }
    for (auto& f : cof) f = (Rational(1) / lead) * f;
    return QCurve(m, 2, std::move(cof));
}

// Plucker coordinates of the span of the component forms: maximal minors of
// the (r+1) x (d+1) coefficient matrix in lexicographic column order,
// normalized so the first nonzero coordinate is 1.
template <class K>
std::vector<K> plucker_coordinates(const Curve<K>& c) {
    int n = c.d + 1, k = c.r + 1;
    std::vector<K> out;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<std::vector<K>> m(k, std::vector<K>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m[i][j] = c.components[i][idx[j]];
        out.push_back(detail::scalar_matrix_det(m));
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
    // Normalize to first significant coordinate 1.
    if constexpr (is_exact_scalar<K>) {
        for (const auto& x : out)
            if (x != 0) {
                K lead = x;
                for (auto& y : out) y = y / lead;
                break;
            }
    } else {
        double scale = 0;
        size_t lead = 0;
        for (size_t i = 0; i < out.size(); ++i)
            if (std::abs(out[i]) > scale) {
                scale = std::abs(out[i]);
                lead = i;
            }
        if (scale > 0) {
            K pivot = out[lead];
            for (auto& y : out) y = y / pivot;
        }
    }
    return out;
}

// Projective distance between Plucker vectors (sine of the angle between the
// lines they span); scale and phase invariant.
template <class K>
double plucker_distance(const Curve<K>& a, const Curve<K>& b) {
    auto pa = plucker_coordinates(a), pb = plucker_coordinates(b);
    if (pa.size() != pb.size()) return 1e300;
    Complex dot(0);
    double na = 0, nb = 0;
    for (size_t i = 0; i < pa.size(); ++i) {
        Complex x, y;
        if constexpr (is_exact_scalar<K>) {
            x = Complex(to_double(pa[i]));
            y = Complex(to_double(pb[i]));
        } else {
            x = Complex(pa[i]);
            y = Complex(pb[i]);
        }
        dot += x * std::conj(y);
        na += std::norm(x);
        nb += std::norm(y);
    }
    if (na == 0 || nb == 0) return 1e300;
    double cos2 = std::norm(dot) / (na * nb);
    return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, cos2)));
}

template <class K>
bool equivalent(const Curve<K>& a, const Curve<K>& b, double tol = 1e-6) {
    if (a.d != b.d || a.r != b.r) return false;
    if constexpr (is_exact_scalar<K>) {
        return plucker_coordinates(a) == plucker_coordinates(b);
    } else {
        return plucker_distance(a, b) < tol;
    }
}

} // namespace inflecta
