#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "inflecta/curve.hpp"
#include "inflecta/errors.hpp"
#include "inflecta/poly.hpp"
#include "inflecta/roots.hpp"

namespace inflecta {

// A point of the target plane (or of the dual plane), normalized so the
// largest entry has modulus one.
using PlanePoint = std::array<Complex, 3>;

enum class DoublePointKind { solitary, real_node, complex_pair };

struct DoublePointRecord {
    PlanePoint image{};
    CPoint u, v; // preimage pair
    DoublePointKind kind = DoublePointKind::real_node;
};

struct BranchPoint {
    PlanePoint image{};
    int mu = 0;            // local multiplicity of the image point
    int real_branches = 0;
};

struct TopologyReport {
    int delta = 0; // solitary points
    int eta = 0;   // real nodes
    int c = 0;     // conjugate pairs of complex nodes
    std::vector<DoublePointRecord> locations;
    std::vector<BranchPoint> branch_data; // real singular points only
    int total_double_points() const { return delta + eta + 2 * c; }
};

namespace detail {

inline int binom2(int n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// Chordal distance on the complex projective line; handles infinity uniformly.
inline double chordal(const CPoint& a, const CPoint& b) {
    Complex cross = a.s * b.t - a.t * b.s;
    double na = std::sqrt(std::norm(a.s) + std::norm(a.t));
    double nb = std::sqrt(std::norm(b.s) + std::norm(b.t));
    return std::abs(cross) / (na * nb);
}

inline CPoint conj_point(const CPoint& p) {
    return p.is_infinity() ? CPoint::infinity() : CPoint::affine(std::conj(p.s));
}

inline bool point_is_real(const CPoint& p, double tol) {
    return p.is_infinity() || std::abs(p.s.imag()) <= tol * (1.0 + std::abs(p.s.real()));
}

inline double plane_distance(const PlanePoint& a, const PlanePoint& b) {
    Complex c0 = a[1] * b[2] - a[2] * b[1];
    Complex c1 = a[2] * b[0] - a[0] * b[2];
    Complex c2 = a[0] * b[1] - a[1] * b[0];
    double num = std::sqrt(std::norm(c0) + std::norm(c1) + std::norm(c2));
    double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
    double nb = std::sqrt(std::norm(b[0]) + std::norm(b[1]) + std::norm(b[2]));
    return num / (na * nb);
}

// f(a s + b t, c s + e t): linear substitution of the parameter line.
template <class F>
BinaryForm<F> mobius_form(const BinaryForm<F>& f, const F& a, const F& b, const F& c,
                          const F& e) {
    int d = f.degree();
    BinaryForm<F> one(0, {F(1)});
    BinaryForm<F> l1(1, {a, b}), l2(1, {c, e});
    std::vector<BinaryForm<F>> p1(d + 1, one), p2(d + 1, one);
    for (int i = 1; i <= d; ++i) {
        p1[i] = p1[i - 1] * l1;
        p2[i] = p2[i - 1] * l2;
    }
    std::vector<F> acc(d + 1, F(0));
    for (int k = 0; k <= d; ++k) {
        if (f[k] == F(0)) continue;
        BinaryForm<F> term = p1[d - k] * p2[k];
        for (int j = 0; j <= d; ++j) acc[j] += f[k] * term[j];
    }
    return BinaryForm<F>(d, std::move(acc));
}

// Bivariate polynomial as a fixed-length list of u-polynomials, index = power
// of v. The fixed length keeps Sylvester matrices formal under specialization,
// so no common zero is lost to coefficient degree drop.
template <class F>
struct PairSystem {
    std::vector<Poly<F>> c01, c02, c12; // each of v-length d (degree d-1)
};

// (pa(u) pb(v) - pb(u) pa(v)) / (u - v), as a v-coefficient list of length d.
template <class F>
std::vector<Poly<F>> pair_quotient(const Poly<F>& pa, const Poly<F>& pb, int d) {
    std::vector<Poly<F>> b(d + 1);
    for (int j = 0; j <= d; ++j) b[j] = pa * pb.coeff(j) - pb * pa.coeff(j);
    Poly<F> x = Poly<F>::x();
    std::vector<Poly<F>> q(d);
    q[d - 1] = b[d];
    for (int k = d - 2; k >= 0; --k) q[k] = b[k + 1] + x * q[k + 1];
    if constexpr (is_exact_scalar<F>) {
        Poly<F> rem = b[0] + x * q[0];
        if (!rem.is_zero()) throw DegenerateCurve("double points: inexact pair division");
    }
    for (auto& entry : q) entry = -entry;
    return q;
}

template <class F>
PairSystem<F> pair_system(const Poly<F>& p0, const Poly<F>& p1, const Poly<F>& p2, int d) {
    return {pair_quotient(p0, p1, d), pair_quotient(p0, p2, d), pair_quotient(p1, p2, d)};
}

// Determinant of the formal Sylvester matrix of A and B, coefficients
// specialized at u = u0.
template <class F>
F sylvester_value(const std::vector<Poly<F>>& A, const std::vector<Poly<F>>& B,
                  const F& u0) {
    int m = (int)A.size() - 1, n = (int)B.size() - 1;
    Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic> S(m + n, m + n);
    S.setZero();
    std::vector<F> a(m + 1), b(n + 1);
    for (int j = 0; j <= m; ++j) a[j] = A[j](u0);
    for (int j = 0; j <= n; ++j) b[j] = B[j](u0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) S(i, i + j) = a[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) S(n + i, i + j) = b[n - j];
    return Eigen::FullPivLU<Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic>>(S)
        .determinant();
}

// Resultant in v of the first two pair equations, recovered from point values.
inline Poly<Rational> eliminate_v(const PairSystem<Rational>& sys, int d) {
    int bound = 2 * (d - 1) * (d - 1);
    std::vector<Rational> nodes, values;
    for (int k = 0; (int)nodes.size() <= bound; ++k) {
        Rational u0 = (k % 2 == 0) ? Rational(k / 2) : Rational(-(k / 2 + 1));
        nodes.push_back(u0);
        values.push_back(sylvester_value(sys.c01, sys.c02, u0));
    }
    return interpolate(nodes, values);
}

inline Poly<Complex> eliminate_v(const PairSystem<Complex>& sys, int d) {
    int bound = 2 * (d - 1) * (d - 1);
    int n = bound + 1;
    std::vector<Complex> nodes, values;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * std::acos(-1.0) * k / n;
        Complex u0(std::cos(th), std::sin(th));
        nodes.push_back(u0);
        values.push_back(sylvester_value(sys.c01, sys.c02, u0));
    }
    return interpolate(nodes, values);
}

// Drop numerically-zero leading coefficients and rescale to unit max.
inline Poly<Complex> strip_leading(const Poly<Complex>& p, double rel = 1e-10) {
    double big = 0;
    for (int i = 0; i <= p.degree(); ++i) big = std::max(big, std::abs(p[i]));
    if (big == 0) return Poly<Complex>();
    int d = p.degree();
    while (d > 0 && std::abs(p[d]) < rel * big) --d;
    std::vector<Complex> c;
    for (int i = 0; i <= d; ++i) c.push_back(p[i] / big);
    return Poly<Complex>(std::move(c));
}

template <class F>
std::vector<Poly<Complex>> to_complex_coeffs(const std::vector<Poly<F>>& v) {
    std::vector<Poly<Complex>> out;
    for (const auto& p : v) {
        if constexpr (is_exact_scalar<F>)
            out.push_back(to_complex_poly(p));
        else
            out.push_back(p);
    }
    return out;
}

struct BivariateC {
    std::vector<Poly<Complex>> cv;
    Complex operator()(Complex u, Complex v) const {
        Complex acc = 0, vp = 1;
        for (const auto& p : cv) {
            acc += p(u) * vp;
            vp *= v;
        }
        return acc;
    }
    // Scale for residual tests: sum of |coefficient| |u|^j |v|^k.
    double magnitude(Complex u, Complex v) const {
        double au = std::abs(u), av = std::abs(v), acc = 0, vp = 1;
        for (const auto& p : cv) {
            double up = 1, s = 0;
            for (int j = 0; j <= p.degree(); ++j) {
                s += std::abs(p[j]) * up;
                up *= au;
            }
            acc += s * vp;
            vp *= av;
        }
        return acc;
    }
    BivariateC du() const {
        BivariateC out;
        for (const auto& p : cv) out.cv.push_back(p.derivative());
        return out;
    }
    BivariateC dv() const {
        BivariateC out;
        for (size_t k = 1; k < cv.size(); ++k) out.cv.push_back((double)k * cv[k]);
        return out;
    }
    Poly<Complex> specialize_u(Complex u0) const {
        std::vector<Complex> c;
        for (const auto& p : cv) c.push_back(p(u0));
        return Poly<Complex>(std::move(c));
    }
};

// One Newton step on the full three-equation system. Any fixed pair of the
// three equations can have a singular Jacobian at a perfectly regular zero,
// so each step works with the best-conditioned pair at the current point.
// Returns false when every pair is near singular; reports the step size so
// the caller can require genuine convergence.
struct TripleSystem {
    std::array<BivariateC, 3> c, cu, cv;

    explicit TripleSystem(std::array<BivariateC, 3> eqs) : c(std::move(eqs)) {
        for (int i = 0; i < 3; ++i) {
            cu[i] = c[i].du();
            cv[i] = c[i].dv();
        }
    }

    // Sum of relative residuals; the convergence floor of the iteration.
    double rho(Complex u, Complex v) const {
        double acc = 0;
        for (int i = 0; i < 3; ++i)
            acc += std::abs(c[i](u, v)) / (1.0 + c[i].magnitude(u, v));
        return acc;
    }

    bool newton_step(Complex& u, Complex& v, double& step) const {
        Complex r[3], ju[3], jv[3];
        double rel[3];
        for (int i = 0; i < 3; ++i) {
            r[i] = c[i](u, v);
            ju[i] = cu[i](u, v);
            jv[i] = cv[i](u, v);
            // A gradient at rounding-noise size carries no direction; weight
            // each row by its size relative to the evaluation scale so a
            // noise row never outranks a healthy one.
            double scale = 1.0 + cu[i].magnitude(u, v) + cv[i].magnitude(u, v);
            rel[i] = std::min(1.0, (std::abs(ju[i]) + std::abs(jv[i])) / (1e-11 * scale));
        }
        int bi = -1, bj = -1;
        double best = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Complex det = ju[i] * jv[j] - jv[i] * ju[j];
                double scale = std::abs(ju[i]) * std::abs(jv[j]) +
                               std::abs(jv[i]) * std::abs(ju[j]) + 1e-300;
                double quality = rel[i] * rel[j] * std::abs(det) / scale;
                if (quality > best) {
                    best = quality;
                    bi = i;
                    bj = j;
                }
            }
        if (best < 1e-10) return false;
        Complex a = ju[bi], b = jv[bi], cc = ju[bj], dd = jv[bj];
        Complex det = a * dd - b * cc;
        Complex du = (dd * r[bi] - b * r[bj]) / det;
        Complex dv = (a * r[bj] - cc * r[bi]) / det;
        u -= du;
        v -= dv;
        step = std::abs(du) + std::abs(dv);
        return true;
    }
};

struct RawPair {
    Complex u, v;
};

// Common zeros (u, v), u != v, of a pair system: roots of the eliminant,
// fiber roots above each, Newton polish on the full system, residual filter.
template <class F>
std::vector<RawPair> system_zeros(const PairSystem<F>& sys, int d, double tol) {
    Poly<F> R = eliminate_v(sys, d);
    if (R.is_zero()) throw DegenerateCurve("double points: identically zero eliminant");

    BivariateC C01{to_complex_coeffs(sys.c01)};
    BivariateC C02{to_complex_coeffs(sys.c02)};
    BivariateC C12{to_complex_coeffs(sys.c12)};
    TripleSystem triple({C01, C02, C12});

    Poly<Complex> Rc;
    if constexpr (is_exact_scalar<F>) {
        // Normalize exactly before conversion: resultant coefficients can
        // overflow a double even when the roots are tame. The conversion can
        // still underflow relatively tiny top coefficients, so strip those
        // as well; the roots they carry are far outside any chart anyway.
        Rational big(0);
        for (int i = 0; i <= R.degree(); ++i) {
            Rational a = R[i] < 0 ? Rational(-R[i]) : R[i];
            if (a > big) big = a;
        }
        Rc = strip_leading(to_complex_poly(R / big));
    } else {
        Rc = strip_leading(R);
    }
    if (Rc.degree() < 1) return {};

    std::vector<std::pair<Complex, int>> uroots = roots_clustered(Rc, std::max(tol, 1e-8));

    double diag_tol = std::max(1e-6, 10 * tol);
    // Residual certificate. A converged zero of all three equations sits at
    // the rounding floor, relative 1e-16 or so; a pair killing two of the
    // three (one component vanishing at both parameters) leaves the third
    // orders above the floor, so the threshold must stay well under any
    // fixed analytic tolerance.
    double rtol = std::max(1e-2 * tol, 1e-11);
    std::vector<RawPair> found;
    for (const auto& [u0, umult] : uroots) {
        Poly<Complex> s1 = strip_leading(C01.specialize_u(u0));
        Poly<Complex> s2 = strip_leading(C02.specialize_u(u0));
        const Poly<Complex>& src = s1.degree() >= s2.degree() ? s1 : s2;
        if (src.degree() < 1) continue;
        std::vector<std::pair<Complex, int>> vcands;
        try {
            vcands = roots_clustered(src, std::max(tol, 1e-8));
        } catch (const NonConvergence&) {
            continue; // spurious eliminant root with an ill-posed fiber
        }
        for (const auto& [v0, vmult] : vcands) {
            Complex u = u0, v = v0;
            if (std::abs(u - v) < diag_tol * (1.0 + std::abs(u))) continue;
            // Polish, keeping only residual-decreasing steps: at the
            // attainable floor a Newton step is built from rounding noise
            // and can jump into the basin of a different zero.
            double step = 1e300;
            double cur = triple.rho(u, v);
            for (int it = 0; it < 16; ++it) {
                Complex pu = u, pv = v;
                double s = 0;
                if (!triple.newton_step(u, v, s)) break;
                double nxt = triple.rho(u, v);
                if (!(nxt < cur)) {
                    u = pu;
                    v = pv;
                    if (cur < 1e-12) step = 0; // seed was already at the floor
                    break;
                }
                cur = nxt;
                step = s;
                if (step < 1e-14 * (1.0 + std::abs(u) + std::abs(v))) break;
            }
            // Accept only points Newton actually converged to. The seed may
            // have drifted far from its eliminant root; that is fine, the
            // residual filters below certify the limit on their own.
            if (step > 1e-6 * (1.0 + std::abs(u) + std::abs(v))) continue;
            if (std::abs(u - v) < diag_tol * (1.0 + std::abs(u))) continue;
            if (std::abs(C01(u, v)) > rtol * (1.0 + C01.magnitude(u, v))) continue;
            if (std::abs(C02(u, v)) > rtol * (1.0 + C02.magnitude(u, v))) continue;
            if (std::abs(C12(u, v)) > rtol * (1.0 + C12.magnitude(u, v))) continue;
            found.push_back({u, v});
        }
    }
    return found;
}

struct MobiusQ {
    long a, b, c, e;
};

// Charts tried in order; all have nonzero determinant and distinct images of
// infinity, so a double point invisible in one chart is finite in another.
inline const std::vector<MobiusQ>& mobius_candidates() {
    static const std::vector<MobiusQ> list = {
        {1, 0, 0, 1},  {0, 1, 1, 0},  {1, -1, 1, 1}, {2, 1, 1, 1},
        {-1, 1, 1, 1}, {3, -1, 2, 1}, {1, 2, 3, 1},  {5, 1, 3, 2}};
    return list;
}

} // namespace detail

// Twice the genus defect dictated by the profile, so callers can detect the
// half-integral case (profiles with non-generic local contributions).
inline int genus_defect_twice(int d, const std::vector<RamificationSequence>& data) {
    int twice = (d - 1) * (d - 2);
    for (const auto& a : data) {
        if (a.r() != 2) throw BadInput("genus defect: plane curves only");
        twice -= (a.alpha[1] - 1) * (a.alpha[2] - 1);
    }
    return twice;
}

namespace detail {

template <class F>
TopologyReport double_points_impl(const Curve<F>& c, double tol) {
    if (c.r != 2) throw BadInput("double points: plane curves only");
    const int d = c.d;

    RamificationProfile prof = ramification_profile(c);
    std::vector<RamificationSequence> seqs;
    for (const auto& e : prof.entries) seqs.push_back(e.sequence);
    int twice = genus_defect_twice(d, seqs);
    int expected = (twice >= 0 && twice % 2 == 0) ? twice / 2 : -1;

    CCurve cc = [&] {
        if constexpr (is_exact_scalar<F>)
            return to_complex_curve(c);
        else
            return c;
    }();

    double cluster_tol = std::max(1e-5, 100 * tol);

    std::vector<std::pair<CPoint, CPoint>> pairs;
    bool counted = false;
    for (const auto& M : mobius_candidates()) {
        std::vector<Poly<F>> charts;
        for (const auto& f : c.components)
            charts.push_back(
                mobius_form(f, F(M.a), F(M.b), F(M.c), F(M.e)).dehomogenize());
        PairSystem<F> sys = pair_system(charts[0], charts[1], charts[2], d);

        std::vector<RawPair> raw;
        try {
            raw = system_zeros(sys, d, tol);
        } catch (const NonConvergence&) {
            continue;
        }

        // Back to the original parameter; cluster the unordered pairs (each
        // double point is seen once per ordering of its preimages).
        auto back = [&](Complex x) {
            Complex s = (double)M.a * x + (double)M.b;
            Complex t = (double)M.c * x + (double)M.e;
            double n = std::abs(s) + std::abs(t);
            if (std::abs(t) < 1e-12 * n) return CPoint::infinity();
            return CPoint::affine(s / t);
        };
        auto key = [](const CPoint& p) {
            return p.is_infinity() ? std::make_pair(1e300, 0.0)
                                   : std::make_pair(p.s.real(), p.s.imag());
        };
        std::vector<std::pair<CPoint, CPoint>> cand;
        for (const auto& rp : raw) {
            CPoint pu = back(rp.u), pv = back(rp.v);
            if (key(pv) < key(pu)) std::swap(pu, pv);
            // At a cusp-like point the parameterization drops rank, so the
            // pair system vanishes on the diagonal there and root finding
            // sprays near-diagonal pairs around the parameter. A pair whose
            // preimages BOTH hug one such parameter is that artifact, not a
            // double point.
            bool at_cusp = false;
            for (const auto& e : prof.entries) {
                if (e.sequence.alpha[1] < 2) continue;
                if (chordal(pu, e.point) < 10 * cluster_tol &&
                    chordal(pv, e.point) < 10 * cluster_tol) {
                    at_cusp = true;
                    break;
                }
            }
            if (at_cusp) continue;
            bool seen = false;
            for (const auto& [qu, qv] : cand) {
                // Unordered match: noise can flip the key ordering of nearly
                // conjugate preimages, so test both assignments.
                bool straight = chordal(pu, qu) < cluster_tol && chordal(pv, qv) < cluster_tol;
                bool crossed = chordal(pu, qv) < cluster_tol && chordal(pv, qu) < cluster_tol;
                if (straight || crossed) {
                    seen = true;
                    break;
                }
            }
            if (!seen) cand.emplace_back(pu, pv);
        }

        if (expected < 0 || (int)cand.size() == expected) {
            pairs = std::move(cand);
            counted = true;
            break;
        }
    }
    if (!counted)
        throw GenusMismatch("double points: found count disagrees with the profile genus");

    // A double point may sit at a flex or planar point (the branch through it
    // is still smooth), but not at a cusp-like point, where the local branch
    // itself is singular and the bookkeeping below would be wrong.
    for (const auto& e : prof.entries) {
        if (e.sequence.alpha[1] < 2) continue;
        for (const auto& [pu, pv] : pairs)
            if (chordal(pu, e.point) < cluster_tol || chordal(pv, e.point) < cluster_tol)
                throw DegenerateDoublePoint("double point at a singular branch point");
    }

    auto eval_image = [&](const CPoint& p) {
        PlanePoint img{cc.components[0](p.s, p.t), cc.components[1](p.s, p.t),
                       cc.components[2](p.s, p.t)};
        // Normalize and rotate the phase so the largest component is real
        // positive; a real projective point then gets a real representative.
        size_t k = 0;
        for (size_t i = 1; i < img.size(); ++i)
            if (std::abs(img[i]) > std::abs(img[k])) k = i;
        Complex lead = img[k];
        for (auto& z : img) z /= lead;
        return img;
    };

    TopologyReport rep;
    double class_tol = std::max(1e-6, 100 * tol);
    for (const auto& [pu, pv] : pairs) {
        DoublePointRecord rec;
        rec.u = pu;
        rec.v = pv;
        rec.image = eval_image(pu);
        bool ru = point_is_real(pu, class_tol), rv = point_is_real(pv, class_tol);
        if (ru && rv) {
            rec.kind = DoublePointKind::real_node;
            rep.eta += 1;
        } else if (chordal(pv, conj_point(pu)) < class_tol) {
            rec.kind = DoublePointKind::solitary;
            rep.delta += 1;
        } else {
            rec.kind = DoublePointKind::complex_pair;
        }
        if (rec.kind != DoublePointKind::complex_pair) {
            // Real image point: average the two evaluations to scrub noise.
            PlanePoint other = eval_image(pv);
            for (int i = 0; i < 3; ++i) rec.image[i] = (rec.image[i] + other[i]) / 2.0;
        }
        rep.locations.push_back(std::move(rec));
    }

    // Ordinary double points have pairwise distinct images.
    for (size_t i = 0; i < rep.locations.size(); ++i)
        for (size_t j = i + 1; j < rep.locations.size(); ++j)
            if (plane_distance(rep.locations[i].image, rep.locations[j].image) < 1e-6)
                throw DegenerateDoublePoint("coincident double point images");

    int complex_count = 0;
    for (const auto& rec : rep.locations)
        if (rec.kind == DoublePointKind::complex_pair) ++complex_count;
    if (complex_count % 2 != 0)
        throw GenusMismatch("double points: complex nodes not conjugation-stable");
    rep.c = complex_count / 2;

    std::sort(rep.locations.begin(), rep.locations.end(),
              [](const DoublePointRecord& a, const DoublePointRecord& b) {
                  auto key = [](const DoublePointRecord& r) {
                      return std::make_tuple(r.u.is_infinity() ? 1e300 : r.u.s.real(),
                                             r.u.is_infinity() ? 0.0 : r.u.s.imag(),
                                             r.v.is_infinity() ? 1e300 : r.v.s.real(),
                                             r.v.is_infinity() ? 0.0 : r.v.s.imag());
                  };
                  return key(a) < key(b);
              });

    // Real singular points, for degree-duality bookkeeping.
    for (const auto& rec : rep.locations) {
        if (rec.kind == DoublePointKind::solitary)
            rep.branch_data.push_back({rec.image, 2, 0});
        else if (rec.kind == DoublePointKind::real_node)
            rep.branch_data.push_back({rec.image, 2, 2});
    }
    for (const auto& e : prof.entries)
        if (e.sequence.alpha[1] >= 2 && point_is_real(e.point, class_tol))
            rep.branch_data.push_back({eval_image(e.point), e.sequence.alpha[1], 1});

    if (expected >= 0 && rep.total_double_points() != expected)
        throw GenusMismatch("double points: classification does not close the count");
    return rep;
}

} // namespace detail

// All double points of the parameterized image curve, certified against the
// genus defect of the ramification profile.
template <class K>
TopologyReport double_points(const Curve<K>& c, double tol = 1e-8) {
    if constexpr (is_exact_scalar<K> || std::is_same_v<K, Complex>) {
        return detail::double_points_impl(c, tol);
    } else {
        std::vector<CForm> comps;
        for (const auto& f : c.components) {
            std::vector<Complex> cs;
            for (const auto& a : f.coeffs()) cs.emplace_back((double)a, 0.0);
            comps.emplace_back(f.degree(), std::move(cs));
        }
        return detail::double_points_impl(CCurve(c.d, c.r, std::move(comps)), tol);
    }
}

/* ------------------------------------------------------------------ */
/* necklaces and chord diagrams                                        */
/* ------------------------------------------------------------------ */

struct Necklace {
    std::string word; // lexicographically minimal dihedral representative

    static std::string canonical_word(const std::string& w) {
        if (w.empty()) return w;
        std::string best;
        std::string rev(w.rbegin(), w.rend());
        for (const std::string* base : {&w, static_cast<const std::string*>(&rev)})
            for (size_t k = 0; k < w.size(); ++k) {
                std::string rot = base->substr(k) + base->substr(0, k);
                if (best.empty() || rot < best) best = rot;
            }
        return best;
    }
    static Necklace of(const std::string& w) { return Necklace{canonical_word(w)}; }
    bool operator==(const Necklace& o) const { return word == o.word; }
    bool operator<(const Necklace& o) const { return word < o.word; }
};

// Bead labels: flex 'i', cusp 'k', planar point 'p'; other sequences get
// letters by sorted order, so the labeling is independent of circular position.
inline std::string bead_labels(const std::vector<RamificationSequence>& seqs) {
    const RamificationSequence flex = RamificationSequence::flex();
    const RamificationSequence cusp = RamificationSequence::cusp();
    const RamificationSequence planar = RamificationSequence::planar();
    std::vector<RamificationSequence> unknown;
    for (const auto& s : seqs)
        if (!(s == flex) && !(s == cusp) && !(s == planar)) unknown.push_back(s);
    std::sort(unknown.begin(), unknown.end());
    unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());
    std::string out;
    for (const auto& s : seqs) {
        if (s == flex)
            out += 'i';
        else if (s == cusp)
            out += 'k';
        else if (s == planar)
            out += 'p';
        else
            out += (char)('a' + (std::find(unknown.begin(), unknown.end(), s) -
                                 unknown.begin()));
    }
    return out;
}

// Circular order of the ramification points along the real parameter line.
inline Necklace necklace_of(const RamificationProfile& p) {
    for (const auto& e : p.entries)
        if (!detail::point_is_real(e.point, 1e-7))
            throw NonRealRamification("necklace: ramification point off the real line");
    auto ordered = p.real_entries();
    std::vector<RamificationSequence> seqs;
    for (const auto& e : ordered) seqs.push_back(e.sequence);
    return Necklace::of(bead_labels(seqs));
}

inline std::vector<Necklace> enumerate_necklaces(std::string labels) {
    std::sort(labels.begin(), labels.end());
    std::set<std::string> canon;
    do {
        canon.insert(Necklace::canonical_word(labels));
    } while (std::next_permutation(labels.begin(), labels.end()));
    std::vector<Necklace> out;
    for (const auto& w : canon) out.push_back(Necklace{w});
    return out;
}

// Marks around the circle: ramification beads keep their labels, chord
// endpoints are '.'; chords pair endpoint positions (node preimages).
struct ChordDiagram {
    std::string marks;
    std::vector<std::pair<int, int>> chords;

    int n_marks() const { return (int)marks.size(); }

    ChordDiagram canonical() const {
        int n = n_marks();
        if (n == 0) return *this;
        ChordDiagram best;
        bool first = true;
        for (int orient = 0; orient < 2; ++orient)
            for (int shift = 0; shift < n; ++shift) {
                std::vector<int> to(n);
                for (int i = 0; i < n; ++i) {
                    int r = orient ? (n - 1 - i) : i;
                    to[i] = (r + n - shift) % n;
                }
                std::string w(n, '?');
                for (int i = 0; i < n; ++i) w[to[i]] = marks[i];
                std::vector<std::pair<int, int>> ch;
                for (auto [a, b] : chords) {
                    int x = to[a], y = to[b];
                    ch.emplace_back(std::min(x, y), std::max(x, y));
                }
                std::sort(ch.begin(), ch.end());
                if (first ||
                    std::make_pair(w, ch) < std::make_pair(best.marks, best.chords)) {
                    best = ChordDiagram{std::move(w), std::move(ch)};
                    first = false;
                }
            }
        return best;
    }

    bool operator==(const ChordDiagram& o) const {
        return marks == o.marks && chords == o.chords;
    }
};

inline ChordDiagram chord_diagram_of(const RamificationProfile& p,
                                     const TopologyReport& rep) {
    struct Mark {
        bool at_inf;
        double x;
        char label;
        std::vector<int> owners; // indices of nodes with an endpoint here
    };
    std::vector<Mark> marks;
    auto ordered = p.real_entries();
    std::vector<RamificationSequence> seqs;
    for (const auto& e : ordered) seqs.push_back(e.sequence);
    std::string labels = bead_labels(seqs);
    for (size_t i = 0; i < ordered.size(); ++i) {
        if (!detail::point_is_real(ordered[i].point, 1e-7))
            throw NonRealRamification("chord diagram: ramification off the real line");
        marks.push_back({ordered[i].point.is_infinity(),
                         ordered[i].point.is_infinity() ? 0.0 : ordered[i].point.s.real(),
                         labels[i],
                         {}});
    }
    // A node branch may pass through a ramification point (two of the flexes
    // of a 6-flex nodal quartic sit at its node); such an endpoint attaches
    // its chord to the existing bead instead of adding a mark.
    auto attach = [&](bool at_inf, double x, int node) {
        for (auto& m : marks) {
            bool same = m.at_inf == at_inf &&
                        (at_inf || std::abs(m.x - x) < 1e-6 * (1.0 + std::abs(x)));
            if (same) {
                m.owners.push_back(node);
                return;
            }
        }
        marks.push_back({at_inf, x, '.', {node}});
    };
    int node_index = 0;
    for (const auto& rec : rep.locations) {
        if (rec.kind != DoublePointKind::real_node) continue;
        for (const CPoint* q : {&rec.u, &rec.v})
            attach(q->is_infinity(), q->is_infinity() ? 0.0 : q->s.real(), node_index);
        ++node_index;
    }
    std::sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) {
        return std::make_pair(a.at_inf ? 1 : 0, a.x) <
               std::make_pair(b.at_inf ? 1 : 0, b.x);
    });
    ChordDiagram dia;
    std::map<int, std::vector<int>> ends;
    for (size_t i = 0; i < marks.size(); ++i) {
        dia.marks += marks[i].label;
        for (int node : marks[i].owners) ends[node].push_back((int)i);
    }
    for (auto& [node, pos] : ends) dia.chords.emplace_back(pos[0], pos[1]);
    std::sort(dia.chords.begin(), dia.chords.end());
    return dia.canonical();
}

enum class ChordClass {
    empty_diagram,
    one_chord,
    two_disjoint,
    three_pairwise_crossing,
    hexagon_sides,
    three_parallel
};

// Classification of quintic chord diagrams; the beads play no role, only the
// circular order of the chord endpoints among themselves.
inline ChordClass classify_quintic_chords(const ChordDiagram& d) {
    int n = (int)d.chords.size();
    if (n > 3) throw BadInput("quintic chords: more than three chords");
    if (n == 0) return ChordClass::empty_diagram;
    if (n == 1) return ChordClass::one_chord;

    std::vector<int> endpoint_positions;
    for (auto [a, b] : d.chords) {
        endpoint_positions.push_back(a);
        endpoint_positions.push_back(b);
    }
    std::sort(endpoint_positions.begin(), endpoint_positions.end());
    auto rank = [&](int markpos) {
        return (int)(std::lower_bound(endpoint_positions.begin(),
                                      endpoint_positions.end(), markpos) -
                     endpoint_positions.begin());
    };
    int m = (int)endpoint_positions.size();
    std::vector<std::pair<int, int>> ch;
    for (auto [a, b] : d.chords) ch.emplace_back(rank(a), rank(b));

    auto crosses = [](std::pair<int, int> p, std::pair<int, int> q) {
        auto [a, b] = p;
        auto [c, e] = q;
        return (a < c && c < b && b < e) || (c < a && a < e && e < b);
    };
    int crossings = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (crosses(ch[i], ch[j])) ++crossings;

    if (n == 2) {
        if (crossings > 0)
            throw ForbiddenDiagram("two chords of a maximally inflected quintic cross");
        return ChordClass::two_disjoint;
    }
    if (crossings == 3) return ChordClass::three_pairwise_crossing;
    if (crossings != 0)
        throw ForbiddenDiagram("a chord crosses exactly one other chord");
    // Non-crossing triples: all endpoints adjacent = hexagon sides; otherwise
    // the three chords are parallel.
    bool all_adjacent = true;
    for (auto [a, b] : ch)
        if ((b - a) % m != 1 && (a - b + m) % m != 1) all_adjacent = false;
    return all_adjacent ? ChordClass::hexagon_sides : ChordClass::three_parallel;
}

/* ------------------------------------------------------------------ */
/* bitangents                                                          */
/* ------------------------------------------------------------------ */

struct BitangentReport {
    QCurve dual;
    TopologyReport dual_report;
    std::vector<DoublePointRecord> records; // double points of the dual curve
    std::vector<PlanePoint> lines;          // [A:B:C]: the line A x + B y + C = 0
    std::vector<std::pair<CPoint, CPoint>> tangencies;
    int tau = 0; // solitary bitangents
    std::optional<int> t_plus, t_minus;
};

// Bitangent lines of a plane curve, as double points of its dual. The
// sidedness counters are filled for cusp-free quartics whose affine image
// (x, y) = (p0/p2, p1/p2) is compact.
inline BitangentReport bitangents(const QCurve& c) {
    BitangentReport out;
    out.dual = projective_dual(c);
    out.dual_report = double_points(out.dual);
    out.tau = out.dual_report.delta;
    out.records = out.dual_report.locations;
    for (const auto& rec : out.records) {
        out.lines.push_back(rec.image);
        out.tangencies.emplace_back(rec.u, rec.v);
    }

    bool cusp_free = true;
    for (const auto& e : ramification_profile(c).entries)
        if (e.sequence.alpha[1] >= 2) cusp_free = false;
    bool compact_chart = c.components[2].infinity_multiplicity() == 0;
    if (compact_chart) {
        auto denom = c.components[2].dehomogenize();
        if (denom.degree() >= 1 &&
            !isolate_real_roots(denom, Rational(1) / 1024).empty())
            compact_chart = false;
    }
    if (c.d == 4 && cusp_free && compact_chart) {
        CCurve cc = to_complex_curve(c);
        int plus = 0, minus = 0;
        for (const auto& rec : out.records) {
            if (rec.kind != DoublePointKind::real_node) continue;
            const PlanePoint& L = rec.image;
            // Near a tangency the line-evaluation keeps one sign; compare the
            // signs at the two tangency parameters.
            auto side = [&](const CPoint& p) {
                double eps = 1e-4;
                Complex s, t;
                if (p.is_infinity()) {
                    s = 1.0;
                    t = eps;
                } else {
                    s = p.s + eps * (1.0 + std::abs(p.s));
                    t = 1.0;
                }
                Complex val = 0;
                for (int j = 0; j < 3; ++j) val += L[j] * cc.components[j](s, t);
                double v = (val / cc.components[2](s, t)).real();
                return v >= 0 ? 1 : -1;
            };
            (side(rec.u) == side(rec.v)) ? ++plus : ++minus;
        }
        out.t_plus = plus;
        out.t_minus = minus;
    }
    return out;
}

/* ------------------------------------------------------------------ */
/* identities and bounds                                               */
/* ------------------------------------------------------------------ */

// Solitary points against solitary bitangents:
// delta = tau + d - 2 - sum (alpha_1 - 1).
inline bool check_theorem31(const TopologyReport& rep, const BitangentReport& bits, int d,
                            const std::vector<RamificationSequence>& data) {
    int s1 = 0;
    for (const auto& a : data) {
        if (a.r() != 2) throw BadInput("singularity count check: plane curves only");
        s1 += a.alpha[1] - 1;
    }
    return rep.delta == bits.tau + d - 2 - s1;
}

inline bool check_theorem31(const TopologyReport& rep, const BitangentReport& bits, int d,
                            const RamificationProfile& p) {
    std::vector<RamificationSequence> data;
    for (const auto& e : p.entries) data.push_back(e.sequence);
    return check_theorem31(rep, bits, d, data);
}

// Degree duality over the real points:
// m + sum_C (mu - r) = d + sum_dual (mu - r).
inline bool check_klein_schuh(const QCurve& c, const QCurve& dual,
                              const TopologyReport& rep_c,
                              const TopologyReport& rep_dual) {
    auto branch_sum = [](const TopologyReport& r) {
        int s = 0;
        for (const auto& b : r.branch_data) s += b.mu - b.real_branches;
        return s;
    };
    return dual.d + branch_sum(rep_c) == c.d + branch_sum(rep_dual);
}

struct BoundRecord {
    int delta_min = 0, delta_max = 0;
    int eta2c_min = 0, eta2c_max = 0;
    bool admits(int delta, int eta2c) const {
        return delta_min <= delta && delta <= delta_max && eta2c_min <= eta2c &&
               eta2c <= eta2c_max;
    }
};

// Bounds on the singularity counts for a general profile.
inline BoundRecord bounds(int d, const std::vector<RamificationSequence>& data) {
    int s1 = 0, s2 = 0;
    for (const auto& a : data) {
        if (a.r() != 2) throw BadInput("bounds: plane curves only");
        s1 += a.alpha[1] - 1;
        s2 += (a.alpha[1] - 1) * (a.alpha[2] - 1);
    }
    BoundRecord out;
    out.delta_min = std::max(0, d - 2 - s1);
    out.delta_max = detail::binom2(d - 1) - s2 / 2;
    out.eta2c_min = 0;
    out.eta2c_max = detail::binom2(d - 2) - s2 / 2 + s1;
    return out;
}

// Sharper bounds when the ramification consists of kappa cusps and flexes.
inline BoundRecord bounds(int d, int kappa) {
    int iota = 3 * (d - 2) - 2 * kappa;
    if (kappa < 0 || iota < 0) throw BadInput("bounds: impossible cusp count");
    int g = detail::binom2(d - 1) - kappa;
    BoundRecord out;
    out.delta_min = 0;
    out.delta_max = g;
    out.eta2c_min = 0;
    out.eta2c_max = g;
    if (kappa <= d - 2) {
        out.delta_min = std::max(out.delta_min, d - 2 - kappa);
        out.eta2c_max = std::min(out.eta2c_max, detail::binom2(d - 2));
    }
    if (kappa >= d - 2) {
        int cap = detail::binom2(2 * d - 4 - kappa);
        out.delta_max = std::min(out.delta_max, cap);
        out.eta2c_min = std::max(out.eta2c_min, g - cap);
    }
    return out;
}

// delta + eta + 2c closes the genus count of the profile.
inline bool check_genus(const TopologyReport& rep,
                        const std::vector<RamificationSequence>& data, int d) {
    return 2 * rep.total_double_points() == genus_defect_twice(d, data);
}

inline bool check_genus(const TopologyReport& rep, const RamificationProfile& p, int d) {
    std::vector<RamificationSequence> data;
    for (const auto& e : p.entries) data.push_back(e.sequence);
    return check_genus(rep, data, d);
}

// iota + 2 eta + 2 kappa = 2 (t_plus - t_minus) for generic curves whose
// affine image is compact.
inline bool check_fabricius_bjerre(int iota, int eta, int kappa, int t_plus,
                                   int t_minus) {
    return iota + 2 * eta + 2 * kappa == 2 * (t_plus - t_minus);
}

} // namespace inflecta
