#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "inflecta/binary_form.hpp"
#include "inflecta/curve.hpp"
#include "inflecta/errors.hpp"
#include "inflecta/poly.hpp"
#include "inflecta/scalar.hpp"
#include "inflecta/schubert.hpp"
#include "inflecta/topology.hpp"

// Numerical search for rational curves with prescribed ramification at
// prescribed points: seeded multi-start Newton with an exact-count stopping
// certificate, reality filtering, deformation tracking, and monodromy
// permutations as a ramification point loops around RP^1.

namespace inflecta {

// A Schubert problem together with a placement of its conditions: one point
// per ramification sequence, pairwise distinct. Real placements are the
// standard mode; complex placements are allowed for experiments (conjugate
// pairs, monodromy detours).
struct SchubertInstance {
    SchubertProblem problem;
    std::vector<CPoint> points; // points[k] carries problem.data[k]

    bool real_placement() const {
        for (const auto& p : points)
            if (!p.is_infinity() && std::abs(p.s.imag()) > 1e-12) return false;
        return true;
    }
};

inline void validate_instance(const SchubertInstance& inst) {
    const auto& pr = inst.problem;
    if (pr.data.empty()) throw BadInput("instance: no ramification data");
    if (inst.points.size() != pr.data.size())
        throw BadInput("instance: one point per ramification sequence required");
    for (const auto& a : pr.data) {
        if ((int)a.alpha.size() != pr.r + 1 || !a.valid(pr.d))
            throw BadInput("instance: invalid ramification sequence");
        if (!a.base_point_free())
            throw BadInput("instance: base-point sequences are not solvable here");
    }
    for (size_t i = 0; i < inst.points.size(); ++i)
        for (size_t j = i + 1; j < inst.points.size(); ++j)
            if (detail::chordal(inst.points[i], inst.points[j]) < 1e-10)
                throw BadInput("instance: ramification points must be distinct");
}

// Osculating flag of the rational normal curve at a point: basis[j] is a
// degree-d form vanishing to order exactly d-j at the point, so part
// F_i = span(basis[0..i]) is the (i+1)-dimensional space of forms vanishing
// to order at least d-i there.
struct OsculatingFlag {
    CPoint point;
    int d = 0;
    std::vector<CForm> basis;

    int dimension(int i) const { return i + 1; }
};

inline OsculatingFlag osculating_flag(const CPoint& p, int d) {
    if (d < 1) throw BadInput("osculating_flag: degree must be positive");
    OsculatingFlag out;
    out.point = p;
    out.d = d;
    for (int j = 0; j <= d; ++j) {
        if (p.is_infinity()) {
            // Vanishing order at [1:0] is the order in t, so basis[j] needs
            // t^(d-j): in s-descending coefficients that is slot d-j.
            std::vector<Complex> c(d + 1, Complex(0));
            c[d - j] = Complex(1); // s^j t^(d-j)
            out.basis.emplace_back(d, std::move(c));
        } else {
            CForm lin(1, {Complex(1), -p.s}); // s - p t
            CForm t(1, {Complex(0), Complex(1)});
            CForm f(0, {Complex(1)});
            for (int k = 0; k < d - j; ++k) f = f * lin;
            for (int k = 0; k < j; ++k) f = f * t;
            out.basis.push_back(std::move(f));
        }
    }
    return out;
}

namespace detail {

// Parameter chart y = (a x + b) / (c x + e). The curve chart [I | X] built on
// top of it forbids ramification at y = 0, so chart selection keeps every
// prescribed point away from the chart origin.
struct ParamChart {
    double a = 1, b = 0, c = 0, e = 1;

    CPoint map(const CPoint& p) const {
        Complex num, den;
        if (p.is_infinity()) {
            num = Complex(a);
            den = Complex(c);
        } else {
            num = a * p.s + b;
            den = c * p.s + e;
        }
        if (std::abs(den) < 1e-13 * (1.0 + std::abs(num))) return CPoint::infinity();
        return CPoint::affine(num / den);
    }

    // Curve components written in the chart parameter, pulled back to the
    // original one: F(s, t) = G(a s + b t, c s + e t).
    CForm to_original(const CForm& g) const {
        return mobius_form(g, Complex(a), Complex(b), Complex(c), Complex(e));
    }
    // Original-parameter component expressed in the chart parameter.
    CForm to_chart(const CForm& f) const {
        return mobius_form(f, Complex(e), Complex(-b), Complex(-c), Complex(a));
    }
};

// Shift charts scored by how well they separate the mapped points from the
// chart origin while keeping them moderate; inversion charts cover points
// near infinity. Deterministic order.
inline std::vector<ParamChart> chart_candidates(const std::vector<CPoint>& points) {
    std::vector<double> finite;
    bool huge = false;
    for (const auto& p : points) {
        if (p.is_infinity()) continue;
        if (std::abs(p.s) > 30)
            huge = true;
        else
            finite.push_back(p.s.real());
    }
    std::vector<double> ladder;
    double lo = -2, hi = 2;
    if (!finite.empty()) {
        lo = *std::min_element(finite.begin(), finite.end()) - 2;
        hi = *std::max_element(finite.begin(), finite.end()) + 2;
    }
    for (double v = lo; v <= hi + 1e-9; v += 0.5) ladder.push_back(v);

    auto score_mapped = [&](const ParamChart& ch) {
        double worst = 1e300, biggest = 0;
        for (const auto& p : points) {
            CPoint y = ch.map(p);
            if (y.is_infinity()) continue;
            worst = std::min(worst, std::abs(y.s));
            biggest = std::max(biggest, std::abs(y.s));
        }
        if (worst < 0.25 || biggest > 40) return -1.0;
        return worst - 0.01 * biggest;
    };

    std::vector<std::pair<double, ParamChart>> scored;
    for (double c0 : ladder) {
        ParamChart ch{1, -c0, 0, 1};
        double s = score_mapped(ch);
        if (s > 0) scored.emplace_back(s, ch);
    }
    // Inversion charts (x - p)/(x - q): used when points escape every shift.
    if (scored.size() < 3 || huge) {
        for (size_t i = 0; i < ladder.size(); ++i)
            for (size_t j = 0; j < ladder.size(); ++j) {
                if (i == j) continue;
                ParamChart ch{1, -ladder[i], 1, -ladder[j]};
                double s = score_mapped(ch);
                if (s > 0) scored.emplace_back(s - 0.5, ch);
            }
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& u, const auto& v) { return u.first > v.first; });
    std::vector<ParamChart> out;
    for (auto& [s, ch] : scored) out.push_back(ch);
    if (out.empty()) throw UnsupportedChart("no parameter chart separates the points");
    return out;
}

// Local Taylor row of the monomial y^m at a chart point, in the coordinate
// taylor_rows uses: direct chart inside the unit disk, reciprocal chart
// (local coordinate around 1/y0, with infinity at 0) outside. Vanishing
// orders, hence the rank conditions, are chart independent.
inline std::vector<Complex> monomial_taylor_row(int d, int m, const CPoint& y0, int cols) {
    std::vector<Complex> row(cols, Complex(0));
    auto binom_d = [](int nn, int kk) {
        double acc = 1;
        for (int i = 1; i <= kk; ++i) acc = acc * (nn - kk + i) / i;
        return acc;
    };
    if (y0.is_infinity() || std::abs(y0.s) > 1.0) {
        Complex w0 = y0.is_infinity() ? Complex(0) : Complex(1) / y0.s;
        int mm = d - m; // y^m homogenized is w^(d-m) in the reciprocal chart
        for (int j = 0; j < cols && j <= mm; ++j)
            row[j] = binom_d(mm, j) * std::pow(w0, Complex(mm - j));
    } else {
        for (int j = 0; j < cols && j <= m; ++j)
            row[j] = binom_d(m, j) * std::pow(y0.s, Complex(m - j));
    }
    return row;
}

} // namespace detail

// Square polynomial system cutting out the curves with the prescribed
// ramification, in an echelon chart [I | X] for the component span: unknowns
// are the (r+1)(d-r) entries of X. All-weight-one data is expressed by
// equating Wronskian coefficients to the prescribed root polynomial;
// otherwise each condition contributes rank minors of the local Taylor
// matrix at its point.
struct SchubertSystem {
    int d = 0, r = 0, n = 0;
    bool wronskian_path = false;
    detail::ParamChart chart;
    std::vector<CPoint> chart_points;

    // Wronskian path: monic target, one coefficient equation per degree
    // except the matched leading one.
    Poly<Complex> target;
    int target_degree = 0;

    // Minor path: per-point data. The local matrix is A = P + X Q; minors
    // are 1x1/2x2/3x3 determinants of selected rows and columns.
    struct MinorSpec {
        int size = 0;
        std::array<int, 3> cols{};
        std::array<int, 3> rows{};
    };
    struct Block {
        Eigen::MatrixXcd pivot_rows; // (r+1) x cols
        Eigen::MatrixXcd free_rows;  // (d-r) x cols
        std::vector<MinorSpec> minors;
    };
    std::vector<Block> blocks;

    int unknowns() const { return n; }
    int equations() const { return n; }

    // Residual, and optionally the Jacobian, at X (row-major flattened).
    // Returns the magnitude scale of the equations for relative tests.
    double evaluate(const Eigen::VectorXcd& x, Eigen::VectorXcd& f,
                    Eigen::MatrixXcd* jac) const {
        return wronskian_path ? eval_wronskian(x, f, jac) : eval_minors(x, f, jac);
    }

private:
    double eval_wronskian(const Eigen::VectorXcd& x, Eigen::VectorXcd& f,
                          Eigen::MatrixXcd* jac) const {
        int k = r + 1, free = d - r;
        // Derivative table of the chart monomials, then of the components.
        std::vector<std::vector<Poly<Complex>>> dm(d + 1);
        for (int m = 0; m <= d; ++m) {
            dm[m].resize(k + 1);
            dm[m][0] = Poly<Complex>::monomial(Complex(1), m);
            for (int j = 1; j <= r; ++j) dm[m][j] = dm[m][j - 1].derivative();
        }
        auto component = [&](int i, int der) {
            Poly<Complex> p = dm[i][der];
            for (int kk = 0; kk < free; ++kk) p += x[i * free + kk] * dm[k + kk][der];
            return p;
        };
        std::vector<std::vector<Poly<Complex>>> m(k, std::vector<Poly<Complex>>(k));
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i) m[j][i] = component(i, j);
        Poly<Complex> w = detail::poly_matrix_det(m);

        Complex sigma = w.coeff(target_degree);
        std::vector<int> eq_coeff;
        for (int j = 0; j <= n; ++j)
            if (j != target_degree) eq_coeff.push_back(j);
        f.resize(n);
        double scale = 1.0;
        for (int j = 0; j <= n; ++j) scale = std::max(scale, std::abs(w.coeff(j)));
        for (int j = 0; j <= target_degree; ++j)
            scale = std::max(scale, std::abs(sigma) * std::abs(target.coeff(j)));
        for (int q = 0; q < n; ++q) {
            int j = eq_coeff[q];
            f[q] = w.coeff(j) - sigma * target.coeff(j);
        }
        if (jac) {
            jac->resize(n, n);
            for (int i = 0; i < k; ++i)
                for (int kk = 0; kk < free; ++kk) {
                    // d/dX_ik replaces component i by the free monomial.
                    auto mm = m;
                    for (int j = 0; j < k; ++j) mm[j][i] = dm[k + kk][j];
                    Poly<Complex> wik = detail::poly_matrix_det(mm);
                    Complex dsigma = wik.coeff(target_degree);
                    for (int q = 0; q < n; ++q) {
                        int j = eq_coeff[q];
                        (*jac)(q, i * free + kk) = wik.coeff(j) - dsigma * target.coeff(j);
                    }
                }
        }
        return scale;
    }

    double eval_minors(const Eigen::VectorXcd& x, Eigen::VectorXcd& f,
                       Eigen::MatrixXcd* jac) const {
        int k = r + 1, free = d - r;
        Eigen::MatrixXcd xm(k, free);
        for (int i = 0; i < k; ++i)
            for (int kk = 0; kk < free; ++kk) xm(i, kk) = x[i * free + kk];
        f.resize(n);
        if (jac) {
            jac->resize(n, n);
            jac->setZero();
        }
        double scale = 1.0;
        int eq = 0;
        for (const auto& blk : blocks) {
            Eigen::MatrixXcd a = blk.pivot_rows + xm * blk.free_rows;
            for (const auto& ms : blk.minors) {
                if (ms.size == 2) {
                    int p = ms.rows[0], q = ms.rows[1], u = ms.cols[0], v = ms.cols[1];
                    f[eq] = a(p, u) * a(q, v) - a(p, v) * a(q, u);
                    scale = std::max(scale, std::abs(a(p, u) * a(q, v)) +
                                                std::abs(a(p, v) * a(q, u)));
                    if (jac)
                        for (int kk = 0; kk < free; ++kk) {
                            const auto& rowk = blk.free_rows;
                            (*jac)(eq, p * free + kk) =
                                rowk(kk, u) * a(q, v) - rowk(kk, v) * a(q, u);
                            (*jac)(eq, q * free + kk) +=
                                a(p, u) * rowk(kk, v) - a(p, v) * rowk(kk, u);
                        }
                } else {
                    auto det3 = [&](int ri, const Eigen::MatrixXcd& rep,
                                    bool replace) {
                        std::array<std::array<Complex, 3>, 3> t{};
                        for (int ii = 0; ii < 3; ++ii)
                            for (int jj = 0; jj < 3; ++jj)
                                t[ii][jj] = (replace && ii == ri)
                                                ? rep(0, ms.cols[jj])
                                                : a(ii, ms.cols[jj]);
                        return t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
                               t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
                               t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
                    };
                    f[eq] = det3(0, Eigen::MatrixXcd(), false);
                    double mag = 0;
                    for (int ii = 0; ii < 3; ++ii) {
                        double prod = 1;
                        for (int jj = 0; jj < 3; ++jj)
                            prod *= std::abs(a(jj, ms.cols[(ii + jj) % 3]));
                        mag += prod;
                    }
                    scale = std::max(scale, mag);
                    if (jac)
                        for (int i = 0; i < k; ++i)
                            for (int kk = 0; kk < free; ++kk)
                                (*jac)(eq, i * free + kk) =
                                    det3(i, blk.free_rows.row(kk), true);
                }
                ++eq;
            }
        }
        return scale;
    }
};

namespace detail {

inline bool all_weight_one(const std::vector<RamificationSequence>& data) {
    for (const auto& a : data)
        if (a.weight() != 1) return false;
    return true;
}

// Build the square system for the instance in a given chart. Throws
// UnsupportedChart when a prescribed point lands at the chart origin, where
// the echelon chart cannot ramify.
inline SchubertSystem build_system_in_chart(const SchubertProblem& pr,
                                            const std::vector<CPoint>& points,
                                            const ParamChart& chart) {
    SchubertSystem sys;
    sys.d = pr.d;
    sys.r = pr.r;
    sys.n = (pr.r + 1) * (pr.d - pr.r);
    sys.chart = chart;
    for (const auto& p : points) {
        CPoint y = chart.map(p);
        if (!y.is_infinity() && std::abs(y.s) < 1e-9)
            throw UnsupportedChart("prescribed point at the chart origin");
        sys.chart_points.push_back(y);
    }
    for (size_t i = 0; i < sys.chart_points.size(); ++i)
        for (size_t j = i + 1; j < sys.chart_points.size(); ++j)
            if (chordal(sys.chart_points[i], sys.chart_points[j]) < 1e-12)
                throw UnsupportedChart("chart collapses two prescribed points");

    sys.wronskian_path = all_weight_one(pr.data);
    if (sys.wronskian_path) {
        Poly<Complex> t{Complex(1)};
        int inf_weight = 0;
        for (size_t i = 0; i < points.size(); ++i) {
            int w = pr.data[i].weight();
            const CPoint& y = sys.chart_points[i];
            if (y.is_infinity())
                inf_weight += w;
            else
                for (int j = 0; j < w; ++j) t *= Poly<Complex>{-y.s, Complex(1)};
        }
        sys.target = t;
        sys.target_degree = sys.n - inf_weight;
        return sys;
    }

    if (pr.r > 2) throw BadInput("rank conditions implemented for r <= 2");
    for (size_t i = 0; i < points.size(); ++i) {
        const auto& alpha = pr.data[i].alpha;
        if (pr.data[i].weight() == 0) continue;
        SchubertSystem::Block blk;
        int cols = alpha.back(); // Taylor orders 0 .. top-1 are enough
        blk.pivot_rows.resize(pr.r + 1, cols);
        blk.free_rows.resize(pr.d - pr.r, cols);
        for (int m = 0; m <= pr.d; ++m) {
            auto row = monomial_taylor_row(pr.d, m, sys.chart_points[i], cols);
            for (int j = 0; j < cols; ++j) {
                if (m <= pr.r)
                    blk.pivot_rows(m, j) = row[j];
                else
                    blk.free_rows(m - pr.r - 1, j) = row[j];
            }
        }
        if (pr.r == 1) {
            // alpha = (0, a): the span meets order >= a, i.e. the 2 x a
            // leading Taylor matrix drops rank.
            for (int j = 1; j < alpha[1]; ++j)
                blk.minors.push_back({2, {0, j, 0}, {0, 1, 0}});
        } else {
            int a = alpha[1], b = alpha[2];
            // Level 1: some element vanishes to order >= a and the pencil
            // below it to order >= 1: the 3 x (a-?) leading columns have
            // rank one. Two independent minors per extra column.
            for (int j = 1; j < a; ++j) {
                blk.minors.push_back({2, {0, j, 0}, {0, 1, 0}});
                blk.minors.push_back({2, {0, j, 0}, {0, 2, 0}});
            }
            // Level 2: an element vanishing to order >= b: determinants of
            // columns {0, a, j}; column choices skip the level-1-dependent
            // range so the equations stay independent.
            for (int j = a + 1; j < b; ++j)
                blk.minors.push_back({3, {0, a, j}, {0, 1, 2}});
        }
        sys.blocks.push_back(std::move(blk));
    }
    int eq = 0;
    for (const auto& blk : sys.blocks) eq += (int)blk.minors.size();
    if (eq != sys.n) throw BadInput("rank conditions do not form a square system");
    return sys;
}

} // namespace detail

// Default-chart system. Solving retries other charts internally when the
// default is degenerate for the instance.
inline SchubertSystem build_system(const SchubertInstance& inst) {
    validate_instance(inst);
    auto charts = detail::chart_candidates(inst.points);
    for (const auto& ch : charts) {
        try {
            return detail::build_system_in_chart(inst.problem, inst.points, ch);
        } catch (const UnsupportedChart&) {
            continue;
        }
    }
    throw UnsupportedChart("no supported chart for the instance");
}

namespace detail {

// Plain Newton iteration on a square system. Success means the step
// contracted to rounding level and the residual certifies a zero.
inline bool newton_solve(const SchubertSystem& sys, Eigen::VectorXcd& x,
                         double& rel_residual, int maxit = 70) {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd j;
    for (int it = 0; it < maxit; ++it) {
        double scale = sys.evaluate(x, f, &j);
        if (!f.allFinite() || !j.allFinite()) return false;
        Eigen::VectorXcd dx = j.partialPivLu().solve(f);
        if (!dx.allFinite()) return false;
        x -= dx;
        if (x.norm() > 1e7) return false;
        if (dx.norm() < 1e-13 * (1.0 + x.norm())) {
            scale = sys.evaluate(x, f, nullptr);
            rel_residual = f.lpNorm<Eigen::Infinity>() / scale;
            return rel_residual < 1e-9;
        }
        (void)scale;
    }
    return false;
}

// Echelon coordinates of a curve in a chart: rows of [I | X] spanning the
// same space as the components. Empty when the curve is not transverse to
// the chart.
inline std::optional<Eigen::VectorXcd> chart_coordinates(const CCurve& c,
                                                         const ParamChart& chart) {
    int k = c.r + 1, free = c.d - c.r;
    Eigen::MatrixXcd m(k, c.d + 1);
    for (int i = 0; i < k; ++i) {
        CForm g = chart.to_chart(c.components[i]);
        if (g.is_zero()) return std::nullopt;
        for (int col = 0; col <= c.d; ++col) m(i, col) = g[c.d - col];
    }
    Eigen::MatrixXcd p = m.leftCols(k);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(p);
    if (lu.rank() < k) return std::nullopt;
    Eigen::MatrixXcd xm = lu.solve(m.rightCols(free));
    double worst = xm.cwiseAbs().maxCoeff();
    if (!xm.allFinite() || worst > 1e8) return std::nullopt;
    Eigen::VectorXcd x(k * free);
    for (int i = 0; i < k; ++i)
        for (int kk = 0; kk < free; ++kk) x[i * free + kk] = xm(i, kk);
    return x;
}

// Curve in the original parameter from chart coordinates.
inline CCurve curve_from_chart(const Eigen::VectorXcd& x, int d, int r,
                               const ParamChart& chart) {
    int free = d - r;
    std::vector<CForm> comps;
    for (int i = 0; i <= r; ++i) {
        std::vector<Complex> c(d + 1, Complex(0));
        c[i] = Complex(1);
        for (int kk = 0; kk < free; ++kk) c[r + 1 + kk] = x[i * free + kk];
        CForm g = CForm::from_poly(Poly<Complex>(std::move(c)), d);
        comps.push_back(chart.to_original(g));
    }
    return CCurve(d, r, std::move(comps));
}

// A solution verifies when the ramification sequence at every prescribed
// point matches exactly; weight saturation then forbids ramification
// anywhere else.
inline bool verify_profile(const CCurve& c, const SchubertInstance& inst,
                           bool* excess = nullptr) {
    for (size_t i = 0; i < inst.points.size(); ++i) {
        RamificationSequence got = ramification_at(c, inst.points[i], 1e-6);
        if (!(got == inst.problem.data[i])) {
            if (excess && got.weight() > inst.problem.data[i].weight()) *excess = true;
            return false;
        }
    }
    return true;
}

// Deterministic order: lexicographic on phase-normalized Plucker vectors.
inline std::vector<double> sort_key(const CCurve& c) {
    auto pl = plucker_coordinates(c);
    size_t lead = 0;
    double best = 0;
    for (size_t i = 0; i < pl.size(); ++i)
        if (std::abs(pl[i]) > best) {
            best = std::abs(pl[i]);
            lead = i;
        }
    std::vector<double> key;
    for (auto& v : pl) {
        Complex w = best > 0 ? v / pl[lead] : v;
        key.push_back(std::round(w.real() * 1e6) / 1e6);
        key.push_back(std::round(w.imag() * 1e6) / 1e6);
    }
    return key;
}

} // namespace detail

struct SolutionRecord {
    CCurve curve;
    double residual = 0;    // relative residual in the solving chart
    int multiplicity = 1;   // > 1 only when a singular cluster was confirmed
    bool singular = false;  // Jacobian numerically singular at the solution
    bool real = false;      // set by filter_real
};

struct SolutionSet {
    SchubertInstance instance;
    std::vector<SolutionRecord> solutions;
    bool complete = false; // counted with multiplicity against the Schubert number
    long expected = 0;

    int count_with_multiplicity() const {
        int n = 0;
        for (const auto& s : solutions) n += s.multiplicity;
        return n;
    }
    int real_count() const {
        int n = 0;
        for (const auto& s : solutions)
            if (s.real) n += s.multiplicity;
        return n;
    }
    std::vector<double> residuals() const {
        std::vector<double> out;
        for (const auto& s : solutions) out.push_back(s.residual);
        return out;
    }
};

namespace detail {

// Local re-solve of a perturbed instance around a singular solution: the
// number of distinct nearby zeros of a generic nearby system is the
// multiplicity, and perturbation never hides it.
inline int probe_multiplicity(const SchubertProblem& pr, const SchubertSystem& base,
                              const Eigen::VectorXcd& center, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<CPoint> moved;
    for (const auto& y : base.chart_points) {
        if (y.is_infinity()) {
            moved.push_back(y);
            continue;
        }
        double ang = 2 * M_PI * unif(rng);
        moved.push_back(CPoint::affine(
            y.s + 1e-4 * (1.0 + std::abs(y.s)) * std::polar(1.0, ang)));
    }
    // The identity chart uses the moved chart points as they are; only the
    // equations matter here, never the mapping back to curves.
    SchubertSystem sys;
    try {
        sys = build_system_in_chart(pr, moved, ParamChart{});
    } catch (const UnsupportedChart&) {
        return 1;
    }
    double ball = 0.15 * (1.0 + center.norm());
    std::vector<Eigen::VectorXcd> hits;
    for (int s = 0; s < 80; ++s) {
        Eigen::VectorXcd x = center;
        for (int i = 0; i < x.size(); ++i) {
            double ang = 2 * M_PI * unif(rng);
            x[i] += 0.03 * (1.0 + std::abs(x[i])) * std::polar(1.0, ang);
        }
        double res = 0;
        if (!newton_solve(sys, x, res)) continue;
        if ((x - center).norm() > ball) continue;
        bool dup = false;
        for (const auto& h : hits)
            if ((x - h).lpNorm<Eigen::Infinity>() < 1e-6 * (1.0 + h.norm())) dup = true;
        if (!dup) hits.push_back(std::move(x));
    }
    return std::max<int>(1, (int)hits.size());
}

} // namespace detail

// Multi-start Newton search, stopped by the exact-count certificate: the set
// is complete when the verified solutions, counted with multiplicity, reach
// the Schubert intersection number. Budget is the total number of starts
// (0 picks a default); determinism up to ordering under a fixed seed.
inline SolutionSet solve(const SchubertInstance& inst, std::uint64_t seed,
                         int budget = 0) {
    validate_instance(inst);
    long expected = to_long(intersection_number(inst.problem));
    SolutionSet out;
    out.instance = inst;
    out.expected = expected;
    if (expected == 0) {
        out.complete = true;
        return out;
    }
    if (budget <= 0) budget = std::max<long>(800, 300 * expected);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto charts = detail::chart_candidates(inst.points);
    int nch = std::min<int>(4, (int)charts.size());

    std::vector<SolutionRecord> records;
    int spent = 0, excess_hits = 0, running = 0;

    for (int ci = 0; ci < nch && running < expected; ++ci) {
        SchubertSystem sys;
        try {
            sys = detail::build_system_in_chart(inst.problem, inst.points, charts[ci]);
        } catch (const UnsupportedChart&) {
            continue;
        }
        int share = ci == 0 ? budget * 6 / 10 : (budget - spent) / (nch - ci);
        std::vector<Eigen::VectorXcd> chart_hits;
        for (const auto& r : records) {
            if (auto xc = detail::chart_coordinates(r.curve, charts[ci]))
                chart_hits.push_back(*xc);
        }
        for (int s = 0; s < share && running < expected; ++s) {
            ++spent;
            Eigen::VectorXcd x(sys.n);
            for (int i = 0; i < sys.n; ++i) {
                double radius =
                    std::exp(std::log(0.15) + unif(rng) * (std::log(20.0) - std::log(0.15)));
                x[i] = radius * std::polar(1.0, 2 * M_PI * unif(rng));
            }
            double res = 0;
            if (!detail::newton_solve(sys, x, res)) continue;
            bool dup = false;
            for (const auto& h : chart_hits)
                if ((x - h).lpNorm<Eigen::Infinity>() < 1e-6 * (1.0 + h.norm())) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            chart_hits.push_back(x);
            CCurve cand = detail::curve_from_chart(x, inst.problem.d, inst.problem.r,
                                                   charts[ci]);
            bool excess = false;
            if (!detail::verify_profile(cand, inst, &excess)) {
                if (excess) ++excess_hits;
                continue;
            }
            bool known = false;
            for (const auto& r : records)
                if (plucker_distance(r.curve, cand) < 1e-6) {
                    known = true;
                    break;
                }
            if (known) continue;

            SolutionRecord rec;
            rec.residual = res;
            Eigen::VectorXcd f;
            Eigen::MatrixXcd j;
            sys.evaluate(x, f, &j);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(j);
            double smin = svd.singularValues()(svd.singularValues().size() - 1);
            double smax = svd.singularValues()(0);
            rec.singular = smin < 1e-8 * std::max(1.0, smax);
            if (rec.singular)
                rec.multiplicity = detail::probe_multiplicity(inst.problem, sys, x, rng);
            rec.curve = std::move(cand);
            running += rec.multiplicity;
            records.push_back(std::move(rec));
        }
    }

    out.solutions = std::move(records);
    out.complete = (running == expected);
    if (!out.complete && excess_hits > 25)
        throw DegenerateInstance(
            "conditions persistently met with excess ramification; "
            "the instance looks degenerate");

    std::stable_sort(out.solutions.begin(), out.solutions.end(),
                     [](const SolutionRecord& a, const SolutionRecord& b) {
                         return detail::sort_key(a.curve) < detail::sort_key(b.curve);
                     });
    return out;
}

// Exact-rational copy of a numerically real curve; the dyadic coefficients
// make the exact topology pipeline available for solved curves.
inline QCurve rationalize_real_curve(const CCurve& c, double tol = 1e-8) {
    std::vector<QForm> comps;
    for (const auto& f : c.components) {
        double scale = 0;
        for (int k = 0; k <= f.degree(); ++k) scale = std::max(scale, std::abs(f[k]));
        std::vector<Rational> coef;
        for (int k = 0; k <= f.degree(); ++k) {
            if (std::abs(f[k].imag()) > tol * scale)
                throw BadInput("rationalize_real_curve: curve is not real");
            double re = f[k].real();
            coef.push_back(std::abs(re) < 1e-13 * scale ? Rational(0) : rationalize(re));
        }
        comps.emplace_back(f.degree(), std::move(coef));
    }
    return QCurve(c.d, c.r, std::move(comps));
}

// Keep the solutions that land on a real curve after a real Newton polish:
// the real slice of the chart is invariant under the iteration for real
// placements, so polishing from the real part either returns to the same
// solution (then it was real) or escapes to a different one.
inline SolutionSet filter_real(const SolutionSet& s, double tol = 1e-8) {
    SolutionSet out;
    out.instance = s.instance;
    out.expected = s.expected;
    if (s.solutions.empty()) {
        out.complete = s.complete && s.expected == 0;
        return out;
    }
    auto charts = detail::chart_candidates(s.instance.points);
    for (const auto& rec : s.solutions) {
        bool kept = false;
        for (const auto& ch : charts) {
            auto xc = detail::chart_coordinates(rec.curve, ch);
            if (!xc) continue;
            SchubertSystem sys;
            try {
                sys = detail::build_system_in_chart(s.instance.problem,
                                                    s.instance.points, ch);
            } catch (const UnsupportedChart&) {
                continue;
            }
            Eigen::VectorXcd xr = xc->real().cast<Complex>();
            double res = 0;
            if (!detail::newton_solve(sys, xr, res)) break;
            if ((xr - *xc).lpNorm<Eigen::Infinity>() <= tol * (1.0 + xc->norm())) {
                SolutionRecord polished = rec;
                polished.curve = detail::curve_from_chart(
                    xr, s.instance.problem.d, s.instance.problem.r, ch);
                polished.residual = res;
                polished.real = true;
                if (detail::verify_profile(polished.curve, s.instance))
                    out.solutions.push_back(std::move(polished));
                kept = true;
            }
            break;
        }
        (void)kept;
    }
    out.complete = out.count_with_multiplicity() == out.expected;
    return out;
}

// Piecewise-linear motion of the prescribed points on [0,1]: a shared time
// grid and one value per point per breakpoint. Segments with an endpoint at
// infinity (or with both ends far out) interpolate in the reciprocal
// coordinate, so paths may pass through infinity.
struct IsotopyPath {
    SchubertProblem problem;
    std::vector<double> times;
    std::vector<std::vector<CPoint>> trajectories; // [point][breakpoint]

    std::vector<CPoint> at(double t) const {
        size_t seg = 0;
        while (seg + 2 < times.size() && times[seg + 1] < t) ++seg;
        double span = times[seg + 1] - times[seg];
        double lam = span > 0 ? (t - times[seg]) / span : 0.0;
        lam = std::clamp(lam, 0.0, 1.0);
        std::vector<CPoint> out;
        for (const auto& traj : trajectories)
            out.push_back(interpolate(traj[seg], traj[seg + 1], lam));
        return out;
    }

    static CPoint interpolate(const CPoint& a, const CPoint& b, double lam) {
        if (lam <= 0) return a;
        if (lam >= 1) return b;
        bool reciprocal = a.is_infinity() || b.is_infinity() ||
                          (std::abs(a.s) > 3 && std::abs(b.s) > 3);
        if (reciprocal) {
            Complex wa = a.is_infinity() ? Complex(0) : Complex(1) / a.s;
            Complex wb = b.is_infinity() ? Complex(0) : Complex(1) / b.s;
            Complex w = (1 - lam) * wa + lam * wb;
            if (std::abs(w) < 1e-14) return CPoint::infinity();
            return CPoint::affine(Complex(1) / w);
        }
        return CPoint::affine((1 - lam) * a.s + lam * b.s);
    }

    // Structural checks plus a collision scan at breakpoints and segment
    // midpoints (the midpoint probe is the sampling refinement).
    void validate() const {
        if (times.size() < 2 || trajectories.empty())
            throw BadInput("isotopy path: need a time grid and trajectories");
        if (trajectories.size() != problem.data.size())
            throw BadInput("isotopy path: one trajectory per ramification sequence");
        for (const auto& traj : trajectories)
            if (traj.size() != times.size())
                throw BadInput("isotopy path: trajectory length mismatch");
        for (size_t k = 0; k + 1 < times.size(); ++k)
            if (!(times[k] < times[k + 1]))
                throw BadInput("isotopy path: times must increase");
        if (std::abs(times.front()) > 1e-12 || std::abs(times.back() - 1) > 1e-12)
            throw BadInput("isotopy path: time range must be [0,1]");
        std::vector<double> probe;
        for (size_t k = 0; k < times.size(); ++k) {
            probe.push_back(times[k]);
            if (k + 1 < times.size())
                probe.push_back(0.5 * (times[k] + times[k + 1]));
        }
        for (double t : probe) {
            auto pts = at(t);
            for (size_t i = 0; i < pts.size(); ++i)
                for (size_t j = i + 1; j < pts.size(); ++j)
                    if (detail::chordal(pts[i], pts[j]) < 1e-8)
                        throw BadInput("isotopy path: trajectories collide");
        }
    }

    // Straight-line path between two placements of the same problem.
    static IsotopyPath line(const SchubertInstance& from,
                            const std::vector<CPoint>& to, int breakpoints = 9) {
        if (to.size() != from.points.size())
            throw BadInput("IsotopyPath: endpoint count mismatch");
        IsotopyPath p;
        p.problem = from.problem;
        for (int k = 0; k < breakpoints; ++k)
            p.times.push_back((double)k / (breakpoints - 1));
        for (size_t i = 0; i < from.points.size(); ++i) {
            std::vector<CPoint> traj;
            for (double t : p.times)
                traj.push_back(interpolate(from.points[i], to[i], t));
            p.trajectories.push_back(std::move(traj));
        }
        p.validate();
        return p;
    }
};

namespace detail {

// One tracked solution: chart, chart coordinates, and the machinery to
// advance through a moving instance.
struct TrackedSolution {
    SchubertProblem problem;
    ParamChart chart;
    Eigen::VectorXcd x;

    CCurve curve() const { return curve_from_chart(x, problem.d, problem.r, chart); }

    bool chart_ok(const std::vector<CPoint>& pts) const {
        for (const auto& p : pts) {
            CPoint y = chart.map(p);
            if (!y.is_infinity() && (std::abs(y.s) < 0.2 || std::abs(y.s) > 45))
                return false;
        }
        return true;
    }

    bool rechart(const std::vector<CPoint>& pts) {
        CCurve cur = curve();
        for (const auto& ch : chart_candidates(pts)) {
            auto xc = chart_coordinates(cur, ch);
            if (!xc) continue;
            SchubertSystem sys;
            try {
                sys = build_system_in_chart(problem, pts, ch);
            } catch (const UnsupportedChart&) {
                continue;
            }
            double res = 0;
            Eigen::VectorXcd x2 = *xc;
            if (!newton_solve(sys, x2, res, 25)) continue;
            chart = ch;
            x = x2;
            return true;
        }
        return false;
    }

    bool correct(const std::vector<CPoint>& pts, int maxit = 14) {
        SchubertSystem sys;
        try {
            sys = build_system_in_chart(problem, pts, chart);
        } catch (const UnsupportedChart&) {
            return false;
        }
        Eigen::VectorXcd x2 = x;
        double res = 0;
        if (!newton_solve(sys, x2, res, maxit)) return false;
        // A corrector jump of order one means the step left the basin.
        if ((x2 - x).norm() > 0.5 * (1.0 + x.norm())) return false;
        x = x2;
        return true;
    }

    // Advance from t0 to t1 along the path, adaptive in step size.
    double advance(const IsotopyPath& path, double t0, double t1) {
        double t = t0, h = (t1 - t0);
        int shrink_guard = 0;
        while (t < t1 - 1e-15) {
            h = std::min(h, t1 - t);
            auto pts = path.at(t + h);
            if (!chart_ok(pts)) {
                if (!rechart(pts) && !rechart(path.at(t))) return t;
            }
            Eigen::VectorXcd save = x;
            if (correct(pts)) {
                t += h;
                h *= 1.7;
                shrink_guard = 0;
            } else {
                x = save;
                h *= 0.35;
                if (++shrink_guard > 60 || h < 1e-10) return t;
            }
        }
        return t1;
    }
};

} // namespace detail

// Continuation of one solution along a motion of its ramification points.
// The returned family is sampled at the path breakpoints; every accepted
// sample is re-verified against the instance at that time.
inline std::vector<CCurve> track_deformation(const CCurve& start,
                                             const IsotopyPath& path) {
    path.validate();
    SchubertInstance inst0{path.problem, path.at(0)};
    validate_instance(inst0);
    if (!detail::verify_profile(start, inst0))
        throw BadInput("track_deformation: start does not solve the time-0 instance");

    detail::TrackedSolution ts;
    ts.problem = path.problem;
    bool seated = false;
    for (const auto& ch : detail::chart_candidates(inst0.points)) {
        auto xc = detail::chart_coordinates(start, ch);
        if (!xc) continue;
        SchubertSystem sys;
        try {
            sys = detail::build_system_in_chart(path.problem, inst0.points, ch);
        } catch (const UnsupportedChart&) {
            continue;
        }
        Eigen::VectorXcd x = *xc;
        double res = 0;
        if (!detail::newton_solve(sys, x, res, 30)) continue;
        ts.chart = ch;
        ts.x = x;
        seated = true;
        break;
    }
    if (!seated) throw PathFailure("track_deformation: start not representable at t=0");

    std::vector<CCurve> family;
    family.push_back(ts.curve());
    for (size_t k = 0; k + 1 < path.times.size(); ++k) {
        double reached = ts.advance(path, path.times[k], path.times[k + 1]);
        if (reached < path.times[k + 1] - 1e-12)
            throw PathFailure("path tracking stalled at t=" + std::to_string(reached));
        CCurve cur = ts.curve();
        SchubertInstance inst_t{path.problem, path.at(path.times[k + 1])};
        if (!detail::verify_profile(cur, inst_t))
            throw PathFailure("tracked curve failed verification at t=" +
                              std::to_string(path.times[k + 1]));
        family.push_back(std::move(cur));
    }
    return family;
}

namespace detail {

// Loop of the moving point once around RP^1: straight real segments, a small
// upper-half-plane semicircle over every other prescribed value, and a pass
// through infinity (detouring around it in the reciprocal chart when
// infinity itself is prescribed).
inline std::vector<CPoint> monodromy_loop(double x0, std::vector<double> obstacles,
                                          bool infinity_prescribed, int arc_samples) {
    std::sort(obstacles.begin(), obstacles.end());
    double span = 1.0;
    for (double v : obstacles) span = std::max(span, std::abs(v));
    span = std::max(span, std::abs(x0));
    double big = 2 * span + 3;
    double rho = big;
    {
        std::vector<double> all = obstacles;
        all.push_back(x0);
        std::sort(all.begin(), all.end());
        for (size_t i = 0; i + 1 < all.size(); ++i)
            rho = std::min(rho, (all[i + 1] - all[i]) / 4);
        rho = std::min(rho, 0.5);
    }
    int k = std::max(6, arc_samples);
    std::vector<CPoint> loop;
    loop.push_back(CPoint::affine(Complex(x0)));
    auto arc_over = [&](double center) {
        loop.push_back(CPoint::affine(Complex(center - rho)));
        for (int j = 1; j < k; ++j) {
            double th = M_PI - M_PI * j / k;
            loop.push_back(CPoint::affine(center + rho * std::polar(1.0, th)));
        }
        loop.push_back(CPoint::affine(Complex(center + rho)));
    };
    for (double v : obstacles)
        if (v > x0) arc_over(v);
    loop.push_back(CPoint::affine(Complex(big)));
    if (infinity_prescribed) {
        // Semicircle around w = 0 in the reciprocal chart, staying on the
        // side that is the upper half plane of the original coordinate.
        double rw = 1.0 / (2 * big);
        for (int j = 0; j <= k; ++j) {
            double th = -M_PI * j / k;
            Complex w = rw * std::polar(1.0, th);
            loop.push_back(CPoint::affine(Complex(1) / w));
        }
    } else {
        loop.push_back(CPoint::affine(Complex(2 * big)));
        loop.push_back(CPoint::infinity());
        loop.push_back(CPoint::affine(Complex(-2 * big)));
    }
    loop.push_back(CPoint::affine(Complex(-big)));
    for (double v : obstacles)
        if (v < x0) arc_over(v);
    loop.push_back(CPoint::affine(Complex(x0)));
    return loop;
}

} // namespace detail

// Permutation of the basepoint solution set induced by carrying the chosen
// ramification point once around RP^1 (upper-half-plane detours at every
// collision). perm[i] = index of the solution that solution i becomes.
inline std::vector<int> monodromy(const SchubertInstance& inst, int moving_index,
                                  int loop_samples = 10, std::uint64_t seed = 1,
                                  int budget = 0) {
    validate_instance(inst);
    if (moving_index < 0 || moving_index >= (int)inst.points.size())
        throw BadInput("monodromy: moving index out of range");
    if (!inst.real_placement())
        throw BadInput("monodromy: requires a real placement");
    if (inst.points[moving_index].is_infinity())
        throw BadInput("monodromy: move a finite point");

    SolutionSet base = solve(inst, seed, budget);
    if (!base.complete)
        throw BudgetExhausted("monodromy: basepoint solve incomplete");

    double x0 = inst.points[moving_index].s.real();
    std::vector<double> obstacles;
    bool inf_prescribed = false;
    for (size_t i = 0; i < inst.points.size(); ++i) {
        if ((int)i == moving_index) continue;
        if (inst.points[i].is_infinity())
            inf_prescribed = true;
        else
            obstacles.push_back(inst.points[i].s.real());
    }
    auto loop = detail::monodromy_loop(x0, obstacles, inf_prescribed, loop_samples);

    IsotopyPath path;
    path.problem = inst.problem;
    for (size_t kk = 0; kk < loop.size(); ++kk)
        path.times.push_back((double)kk / (loop.size() - 1));
    for (size_t i = 0; i < inst.points.size(); ++i) {
        std::vector<CPoint> traj(loop.size(), inst.points[i]);
        if ((int)i == moving_index) traj = loop;
        path.trajectories.push_back(std::move(traj));
    }

    std::vector<int> perm(base.solutions.size(), -1);
    for (size_t i = 0; i < base.solutions.size(); ++i) {
        auto family = track_deformation(base.solutions[i].curve, path);
        const CCurve& end = family.back();
        int bi = -1;
        double bd = 1e300, second = 1e300;
        for (size_t j = 0; j < base.solutions.size(); ++j) {
            double dist = plucker_distance(end, base.solutions[j].curve);
            if (dist < bd) {
                second = bd;
                bd = dist;
                bi = (int)j;
            } else {
                second = std::min(second, dist);
            }
        }
        if (bi < 0 || bd > 1e-4 || second < 10 * bd)
            throw PathFailure("monodromy: endpoint matching ambiguous");
        perm[i] = bi;
    }
    std::vector<bool> hit(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || hit[p]) throw PathFailure("monodromy: matching not a bijection");
        hit[p] = true;
    }
    return perm;
}

} // namespace inflecta
