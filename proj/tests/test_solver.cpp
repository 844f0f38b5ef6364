#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "inflecta/solver.hpp"
#include "inflecta/topology.hpp"

using namespace inflecta;

namespace {

SchubertInstance flex_instance(int d, const std::vector<CPoint>& pts) {
    SchubertProblem pr{d, 2, std::vector<RamificationSequence>(
                                 pts.size(), RamificationSequence::flex())};
    return SchubertInstance{std::move(pr), pts};
}

std::vector<CPoint> affine_points(const std::vector<double>& xs, bool with_inf = false) {
    std::vector<CPoint> out;
    for (double x : xs) out.push_back(CPoint::affine(Complex(x)));
    if (with_inf) out.push_back(CPoint::infinity());
    return out;
}

SchubertInstance quartic_six_flexes() {
    return flex_instance(4, affine_points({-3, -1, 0, 1, 3}, true));
}

SchubertInstance quintic_mixed() {
    std::vector<RamificationSequence> data(3, RamificationSequence::cusp());
    for (int i = 0; i < 3; ++i) data.push_back(RamificationSequence::flex());
    std::vector<CPoint> pts = affine_points({-3, 3}, true);
    for (double x : {-1.0, 0.0, 1.0}) pts.push_back(CPoint::affine(Complex(x)));
    return SchubertInstance{SchubertProblem{5, 2, std::move(data)}, std::move(pts)};
}

SchubertInstance cubic_critical(const std::vector<CPoint>& pts) {
    SchubertProblem pr{3, 1, std::vector<RamificationSequence>(
                                 pts.size(), RamificationSequence({0, 2}))};
    return SchubertInstance{std::move(pr), pts};
}

int matrix_rank(const std::vector<CForm>& forms, int d) {
    Eigen::MatrixXcd m(forms.size(), d + 1);
    for (size_t i = 0; i < forms.size(); ++i)
        for (int k = 0; k <= d; ++k) m(i, k) = forms[i].is_zero() ? Complex(0) : forms[i][k];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(1e-9);
    return (int)lu.rank();
}

// Solitary/node counts through the exact pipeline; solved curves are real to
// rounding, so the dyadic copy is faithful.
std::pair<int, int> classify(const CCurve& c) {
    QCurve q = rationalize_real_curve(c, 1e-7);
    TopologyReport rep = double_points(q);
    return {rep.delta, rep.eta};
}

} // namespace

/* ---- instance validation ---- */

TEST_CASE("instance validation rejects malformed placements") {
    auto inst = quartic_six_flexes();
    CHECK_NOTHROW(validate_instance(inst));

    auto dup = inst;
    dup.points[1] = dup.points[0];
    CHECK_THROWS_AS(validate_instance(dup), BadInput);

    auto short_points = inst;
    short_points.points.pop_back();
    CHECK_THROWS_AS(validate_instance(short_points), BadInput);

    auto base_point = inst;
    base_point.problem.data[0] = RamificationSequence({1, 2, 3});
    CHECK_THROWS_AS(validate_instance(base_point), BadInput);
}

TEST_CASE("real placement flag") {
    CHECK(quartic_six_flexes().real_placement());
    auto inst = quartic_six_flexes();
    inst.points[2] = CPoint::affine(Complex(0, 0.5));
    CHECK_FALSE(inst.real_placement());
}

/* ---- osculating flags ---- */

TEST_CASE("osculating flag dimensions and nesting") {
    for (const CPoint& p : {CPoint::affine(Complex(0.5)), CPoint::infinity(),
                            CPoint::affine(Complex(-2, 1))}) {
        OsculatingFlag fl = osculating_flag(p, 4);
        REQUIRE((int)fl.basis.size() == 5);
        for (int i = 0; i <= 4; ++i) {
            std::vector<CForm> part(fl.basis.begin(), fl.basis.begin() + i + 1);
            CHECK(matrix_rank(part, 4) == fl.dimension(i));
        }
        // basis[j] vanishes to order exactly 4-j at the point.
        for (int j = 0; j <= 4; ++j) {
            auto rows = taylor_rows(CCurve(4, 1, {fl.basis[j], fl.basis[(j + 1) % 5]}), p);
            int order = 0;
            while (order <= 4 && std::abs(rows[0][order]) < 1e-9) ++order;
            CHECK(order == 4 - j);
        }
    }
}

TEST_CASE("flex membership meets the osculating flag") {
    // Components (1, x, x^3 + x^4): a flex at 0, so the span meets the
    // 2-dimensional part of forms vanishing to order >= 3 there.
    CForm f0 = CForm::from_poly(Poly<Complex>{Complex(1)}, 4);
    CForm f1 = CForm::from_poly(Poly<Complex>{Complex(0), Complex(1)}, 4);
    CForm f2 = CForm::from_poly(Poly<Complex>{Complex(0), Complex(0), Complex(0),
                                              Complex(1), Complex(1)},
                                4);
    OsculatingFlag fl = osculating_flag(CPoint::affine(Complex(0)), 4);
    std::vector<CForm> joint{f0, f1, f2, fl.basis[0], fl.basis[1]};
    CHECK(matrix_rank(joint, 4) == 4); // 3 + 2 - 1: one-dimensional meet
}

/* ---- system shapes ---- */

TEST_CASE("all-flex instances emit the square Wronskian system") {
    auto sys4 = build_system(quartic_six_flexes());
    CHECK(sys4.unknowns() == 6);
    CHECK(sys4.equations() == 6);
    CHECK(sys4.wronskian_path);

    auto sys5 = build_system(
        flex_instance(5, affine_points({-4, -3, -2, -1, 0, 1, 2, 3, 4})));
    CHECK(sys5.unknowns() == 9);
    CHECK(sys5.equations() == 9);
    CHECK(sys5.wronskian_path);

    auto sys3 = build_system(cubic_critical(affine_points({-2, -1, 1, 2})));
    CHECK(sys3.unknowns() == 4);
    CHECK(sys3.equations() == 4);
    CHECK(sys3.wronskian_path);
}

TEST_CASE("mixed cusp and flex data emits square rank conditions") {
    auto sys = build_system(quintic_mixed());
    CHECK(sys.unknowns() == 9);
    CHECK(sys.equations() == 9);
    CHECK_FALSE(sys.wronskian_path);
    CHECK(sys.blocks.size() == 6);
}

TEST_CASE("chart with a prescribed point at its origin is refused") {
    auto inst = quartic_six_flexes();
    detail::ParamChart bad{1, 0, 0, 1}; // identity: the flex at 0 sits at y=0
    CHECK_THROWS_AS(detail::build_system_in_chart(inst.problem, inst.points, bad),
                    UnsupportedChart);
    CHECK_NOTHROW(build_system(inst)); // the public builder avoids it
}

/* ---- quartic with six real flexes ---- */

TEST_CASE("quartic six-flex instance: five solutions, all real") {
    auto inst = quartic_six_flexes();
    CHECK(to_long(intersection_number(inst.problem)) == 5);

    SolutionSet sols = solve(inst, 20240817);
    REQUIRE(sols.complete);
    REQUIRE((int)sols.solutions.size() == 5);
    for (const auto& rec : sols.solutions) {
        CHECK(rec.residual < 1e-10);
        CHECK(rec.multiplicity == 1);
        CHECK_FALSE(rec.singular);
    }

    SolutionSet real = filter_real(sols);
    CHECK((int)real.solutions.size() == 5);
    CHECK(real.real_count() == 5);
    CHECK(real.complete);

    // Every solution is maximally inflected: full real profile.
    for (const auto& rec : real.solutions) {
        auto prof = ramification_profile(rec.curve);
        CHECK(prof.maximally_inflected);
        CHECK(prof.total_weight() == 6);
    }

    // Three curves carry a real node, two are anodal: (delta, eta) splits
    // 3 x (2,1) + 2 x (3,0).
    std::map<std::pair<int, int>, int> census;
    for (const auto& rec : real.solutions) ++census[classify(rec.curve)];
    CHECK(census[{2, 1}] == 3);
    CHECK(census[{3, 0}] == 2);
}

TEST_CASE("solution set is deterministic up to the seed") {
    auto inst = quartic_six_flexes();
    SolutionSet a = solve(inst, 7);
    SolutionSet b = solve(inst, 991);
    REQUIRE(a.complete);
    REQUIRE(b.complete);
    REQUIRE(a.solutions.size() == b.solutions.size());
    for (size_t i = 0; i < a.solutions.size(); ++i)
        CHECK(plucker_distance(a.solutions[i].curve, b.solutions[i].curve) < 1e-7);
}

/* ---- cubic self-maps of the line ---- */

TEST_CASE("cubic with four real critical points: two real solutions") {
    auto inst = cubic_critical(affine_points({-2, -1, 1, 2}));
    CHECK(to_long(intersection_number(inst.problem)) == 2);
    SolutionSet sols = solve(inst, 5);
    REQUIRE(sols.complete);
    CHECK((int)sols.solutions.size() == 2);
    SolutionSet real = filter_real(sols);
    CHECK(real.real_count() == 2);
}

TEST_CASE("cubic with critical points at the fourth roots of a cube: double solution") {
    // Placement {0, 1, w, w^2} with w a primitive cube root of unity: the
    // two solutions collide into one double solution.
    Complex w = std::polar(1.0, 2 * M_PI / 3);
    auto inst = cubic_critical({CPoint::affine(Complex(0)), CPoint::affine(Complex(1)),
                                CPoint::affine(w), CPoint::affine(w * w)});
    SolutionSet sols = solve(inst, 11);
    REQUIRE((int)sols.solutions.size() == 1);
    CHECK(sols.solutions[0].singular);
    CHECK(sols.solutions[0].multiplicity == 2);
    CHECK(sols.complete);
}

TEST_CASE("conjugation-stable placement keeps the solution set conjugation-stable") {
    auto inst = cubic_critical({CPoint::affine(Complex(0, 1)), CPoint::affine(Complex(0, -1)),
                                CPoint::affine(Complex(1)), CPoint::affine(Complex(-1))});
    SolutionSet sols = solve(inst, 3);
    REQUIRE(sols.complete);
    // Conjugating every component must permute the set.
    for (const auto& rec : sols.solutions) {
        std::vector<CForm> conj;
        for (const auto& f : rec.curve.components) {
            std::vector<Complex> c;
            for (int k = 0; k <= f.degree(); ++k) c.push_back(std::conj(f[k]));
            conj.emplace_back(f.degree(), std::move(c));
        }
        CCurve cc(rec.curve.d, rec.curve.r, std::move(conj));
        double best = 1e300;
        for (const auto& other : sols.solutions)
            best = std::min(best, plucker_distance(cc, other.curve));
        CHECK(best < 1e-7);
    }
}

/* ---- quintic with three cusps and three flexes ---- */

TEST_CASE("quintic cusps at {-3,3,inf} and flexes at {-1,0,1}: six real curves") {
    auto inst = quintic_mixed();
    long expected = to_long(intersection_number(inst.problem));
    CHECK(expected == 6);

    SolutionSet sols = solve(inst, 424242);
    REQUIRE(sols.complete);
    REQUIRE((int)sols.solutions.size() == 6);
    for (const auto& rec : sols.solutions) CHECK(rec.residual < 1e-9);

    SolutionSet real = filter_real(sols);
    CHECK(real.real_count() == 6);
    for (const auto& rec : real.solutions) {
        auto prof = ramification_profile(rec.curve);
        CHECK(prof.maximally_inflected);
    }
}

/* ---- reality filter edge cases ---- */

TEST_CASE("filter_real on the empty set") {
    SolutionSet empty;
    empty.instance = quartic_six_flexes();
    empty.expected = 5;
    SolutionSet out = filter_real(empty);
    CHECK(out.solutions.empty());
    CHECK_FALSE(out.complete);
}

/* ---- deformation tracking ---- */

TEST_CASE("constant path returns a constant family") {
    auto inst = quartic_six_flexes();
    SolutionSet sols = solve(inst, 99);
    REQUIRE(sols.complete);
    IsotopyPath path = IsotopyPath::line(inst, inst.points, 5);
    auto family = track_deformation(sols.solutions[0].curve, path);
    REQUIRE(family.size() == 5);
    for (const auto& c : family)
        CHECK(plucker_distance(c, sols.solutions[0].curve) < 1e-6);
}

TEST_CASE("wiggling one flex preserves the double-point split") {
    auto inst = quartic_six_flexes();
    SolutionSet sols = filter_real(solve(inst, 4711));
    REQUIRE((int)sols.solutions.size() == 5);

    auto target = inst.points;
    target[3] = CPoint::affine(Complex(1.15)); // flex at 1 drifts to 1.15
    IsotopyPath path = IsotopyPath::line(inst, target, 7);

    std::vector<CCurve> endpoints;
    for (const auto& rec : sols.solutions) {
        auto before = classify(rec.curve);
        auto family = track_deformation(rec.curve, path);
        const CCurve& end = family.back();
        SchubertInstance inst1{inst.problem, target};
        CHECK(detail::verify_profile(end, inst1));
        SolutionSet polished;
        polished.instance = inst1;
        polished.expected = 5;
        polished.solutions.push_back({end, 0.0, 1, false, false});
        auto real_end = filter_real(polished);
        REQUIRE((int)real_end.solutions.size() == 1);
        auto after = classify(real_end.solutions[0].curve);
        CHECK(before == after);
        endpoints.push_back(end);
    }
    // The tracked family stays injective: distinct solutions stay distinct.
    for (size_t i = 0; i < endpoints.size(); ++i)
        for (size_t j = i + 1; j < endpoints.size(); ++j)
            CHECK(plucker_distance(endpoints[i], endpoints[j]) > 1e-4);
}

TEST_CASE("colliding trajectories are rejected") {
    auto inst = quartic_six_flexes();
    auto target = inst.points;
    target[3] = inst.points[4]; // flex at 1 runs into the flex at 3
    CHECK_THROWS_AS(IsotopyPath::line(inst, target, 9), BadInput);
    auto path = IsotopyPath::line(inst, inst.points, 3);
    path.trajectories[3][2] = path.trajectories[4][2];
    SolutionSet sols = solve(inst, 99);
    REQUIRE(sols.complete);
    CHECK_THROWS_AS(track_deformation(sols.solutions[0].curve, path), BadInput);
}

TEST_CASE("start must solve the time-zero instance") {
    auto inst = quartic_six_flexes();
    SolutionSet sols = solve(inst, 99);
    REQUIRE(sols.complete);
    auto wiggled = inst.points;
    wiggled[0] = CPoint::affine(Complex(-2.9));
    SchubertInstance other{inst.problem, wiggled};
    IsotopyPath path = IsotopyPath::line(other, wiggled, 5);
    CHECK_THROWS_AS(track_deformation(sols.solutions[0].curve, path), BadInput);
}

/* ---- monodromy ---- */

TEST_CASE("trivial loop acts as the identity") {
    auto inst = quartic_six_flexes();
    SolutionSet sols = filter_real(solve(inst, 31337));
    REQUIRE((int)sols.solutions.size() == 5);
    // Out to 1.2 and straight back: no winding.
    auto out_points = inst.points;
    out_points[3] = CPoint::affine(Complex(1.2));
    IsotopyPath out_path = IsotopyPath::line(inst, out_points, 5);
    SchubertInstance moved{inst.problem, out_points};
    IsotopyPath back_path = IsotopyPath::line(moved, inst.points, 5);
    for (const auto& rec : sols.solutions) {
        auto fwd = track_deformation(rec.curve, out_path);
        auto ret = track_deformation(fwd.back(), back_path);
        CHECK(plucker_distance(ret.back(), rec.curve) < 1e-7);
    }
}

TEST_CASE("full loop of one flex: three-cycle on nodal, two-cycle on anodal") {
    auto inst = quartic_six_flexes();
    SolutionSet base = solve(inst, 31337);
    REQUIRE(base.complete);

    std::vector<int> perm = monodromy(inst, 3, 10, 31337);
    REQUIRE((int)perm.size() == 5);

    std::vector<int> nodal, anodal;
    for (int i = 0; i < 5; ++i) {
        auto [delta, eta] = classify(base.solutions[i].curve);
        (eta == 1 ? nodal : anodal).push_back(i);
    }
    REQUIRE((int)nodal.size() == 3);
    REQUIRE((int)anodal.size() == 2);

    // Class preservation: delta and eta are deformation invariants.
    for (int i : nodal) CHECK(std::count(nodal.begin(), nodal.end(), perm[i]) == 1);
    for (int i : anodal) CHECK(std::count(anodal.begin(), anodal.end(), perm[i]) == 1);

    // Cycle structure: a 3-cycle on the nodal curves...
    for (int i : nodal) CHECK(perm[i] != i);
    int a = nodal[0];
    CHECK(perm[perm[perm[a]]] == a);
    // ...and a transposition on the anodal pair, whose square is trivial.
    CHECK(perm[anodal[0]] == anodal[1]);
    CHECK(perm[anodal[1]] == anodal[0]);
}

TEST_CASE("monodromy input checks") {
    auto inst = quartic_six_flexes();
    CHECK_THROWS_AS(monodromy(inst, 17), BadInput);
    CHECK_THROWS_AS(monodromy(inst, 5), BadInput); // the point at infinity
    auto complex_inst = inst;
    complex_inst.points[2] = CPoint::affine(Complex(0, 0.3));
    CHECK_THROWS_AS(monodromy(complex_inst, 0), BadInput);
}
