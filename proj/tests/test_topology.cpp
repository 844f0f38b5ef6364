#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "inflecta/topology.hpp"

using namespace inflecta;

namespace {

Rational q(long num, long den = 1) { return Rational(num) / den; }

QForm qform(int d, std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    for (long a : coeffs) c.emplace_back(a);
    return QForm(d, std::move(c));
}

// Cusp at [1:0], flex at [0:1].
QCurve cuspidal_cubic() {
    return QCurve(3, 2,
                  {qform(3, {0, 0, 0, 1}),   // t^3
                   qform(3, {0, 0, 1, 0}),   // s t^2
                   qform(3, {1, 0, 0, 0})}); // s^3
}

// Maximally inflected quartic with a node; flexes at -3, -1, 0, 1, 3, inf.
QCurve nodal_quartic() {
    return QCurve(4, 2,
                  {QForm(4, {q(1), q(0), q(-6), q(0), q(9)}),
                   QForm(4, {q(3, 4), q(1), q(-3, 2), q(0), q(9, 4)}),
                   QForm(4, {q(1), q(1), q(-3), q(-2), q(15, 2)})});
}

// Maximally inflected quartic with three solitary points and no real node;
// flexes at 0, inf, and +-sqrt(6), +-3 sqrt(6).
QCurve anodal_quartic() {
    return QCurve(4, 2,
                  {qform(4, {0, 1, -6, 0, -54}),
                   qform(4, {0, 0, 0, 1, 3}),
                   qform(4, {1, 0, 36, 0, 324})});
}

// Quartic whose real node joins the parameters 0 and infinity, so the node is
// invisible in the standard chart and in the swapped chart.
QCurve node_at_infinity_quartic() {
    return QCurve(4, 2,
                  {qform(4, {0, 1, 0, 1, 0}),
                   qform(4, {0, 1, 1, 2, 0}),
                   qform(4, {1, 0, 1, 0, 1})});
}

double affine_x(const PlanePoint& p) { return (p[0] / p[2]).real(); }
double affine_y(const PlanePoint& p) { return (p[1] / p[2]).real(); }

// Proportionality of a dual-plane point with the line A x + B y + C = 0.
bool line_matches(const PlanePoint& L, double A, double B, double C, double tol = 1e-6) {
    Complex a = L[0], b = L[1], c = L[2];
    double num = std::abs(b * C - c * B) + std::abs(c * A - a * C) +
                 std::abs(a * B - b * A);
    double scale = (std::abs(a) + std::abs(b) + std::abs(c)) *
                   (std::abs(A) + std::abs(B) + std::abs(C));
    return num < tol * scale;
}

bool point_near(const CPoint& p, Complex z, double tol = 1e-6) {
    return !p.is_infinity() && std::abs(p.s - z) < tol;
}

// All perfect matchings of {0, ..., 2k-1}.
void collect_matchings(std::vector<int> free_pts, std::vector<std::pair<int, int>> cur,
                       std::vector<std::vector<std::pair<int, int>>>& out) {
    if (free_pts.empty()) {
        out.push_back(cur);
        return;
    }
    int a = free_pts.front();
    for (size_t i = 1; i < free_pts.size(); ++i) {
        std::vector<int> rest;
        for (size_t j = 1; j < free_pts.size(); ++j)
            if (j != i) rest.push_back(free_pts[j]);
        auto next = cur;
        next.emplace_back(a, free_pts[i]);
        collect_matchings(std::move(rest), std::move(next), out);
    }
}

} // namespace

/* ------------------------------------------------------------------ */
/* bivariate pair machinery                                            */
/* ------------------------------------------------------------------ */

TEST_CASE("pair quotients satisfy the defining identity") {
    std::mt19937 rng(0x70b1);
    std::uniform_int_distribution<long> coef(-6, 6);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Rational> ca(5), cb(5);
        for (auto& x : ca) x = Rational(coef(rng));
        for (auto& x : cb) x = Rational(coef(rng));
        Poly<Rational> pa(ca), pb(cb);
        if (pa.is_zero() || pb.is_zero()) continue;
        auto quot = detail::pair_quotient(pa, pb, 4);
        REQUIRE(quot.size() == 4);
        for (auto [un, vn] : {std::pair<long, long>{2, 5}, {-1, 3}, {7, -2}}) {
            Rational u(un), v(vn);
            Rational lhs(0), vp(1);
            for (const auto& cj : quot) {
                lhs += cj(u) * vp;
                vp *= v;
            }
            CHECK(lhs * (u - v) == pa(u) * pb(v) - pb(u) * pa(v));
        }
    }
}

TEST_CASE("parameter substitution matches direct evaluation") {
    std::mt19937 rng(0x70b2);
    std::uniform_int_distribution<long> coef(-9, 9);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Rational> c(5);
        for (auto& x : c) x = Rational(coef(rng));
        c[0] += 1; // keep the form nonzero
        QForm f(4, std::move(c));
        QForm g = detail::mobius_form(f, q(2), q(1), q(1), q(1));
        for (auto [s0, t0] : {std::pair<long, long>{3, 2}, {-1, 5}, {0, 1}}) {
            Rational s(s0), t(t0);
            CHECK(g(s, t) == f(2 * s + t, s + t));
        }
    }
}

TEST_CASE("elimination agrees with the resultant of specialized pairs") {
    auto c = nodal_quartic();
    std::vector<Poly<Rational>> charts;
    for (const auto& f : c.components) charts.push_back(f.dehomogenize());
    auto sys = detail::pair_system(charts[0], charts[1], charts[2], 4);
    auto R = detail::eliminate_v(sys, 4);
    CHECK(R.degree() >= 1);
    CHECK(R.degree() <= 18);
    for (long u0 : {7L, 11L}) {
        Rational u(u0);
        std::vector<Rational> f01, f02;
        for (const auto& p : sys.c01) f01.push_back(p(u));
        for (const auto& p : sys.c02) f02.push_back(p(u));
        Poly<Rational> a(f01), b(f02);
        REQUIRE(a.degree() == 3); // formal and actual degree agree here
        REQUIRE(b.degree() == 3);
        CHECK(R(u) == resultant(a, b));
    }
}

/* ------------------------------------------------------------------ */
/* double points                                                       */
/* ------------------------------------------------------------------ */

TEST_CASE("double points of the nodal quartic match the printed census") {
    auto c = nodal_quartic();
    auto rep = double_points(c);
    CHECK(rep.delta == 2);
    CHECK(rep.eta == 1);
    CHECK(rep.c == 0);
    CHECK(rep.total_double_points() == 3);

    std::vector<std::pair<double, double>> expect = {{1.514769, 0.854076},
                                                     {2.088892, 0.040735}};
    for (const auto& rec : rep.locations) {
        if (rec.kind == DoublePointKind::solitary) {
            bool hit = false;
            for (auto [ex, ey] : expect)
                if (std::abs(affine_x(rec.image) - ex) < 1e-5 &&
                    std::abs(affine_y(rec.image) - ey) < 1e-5)
                    hit = true;
            CHECK(hit);
            // Solitary points have conjugate preimages off the real line.
            CHECK(std::abs(rec.u.s.imag()) > 1e-3);
        } else {
            CHECK(rec.kind == DoublePointKind::real_node);
            CHECK(std::abs(rec.u.s.imag()) < 1e-9);
            CHECK(std::abs(rec.v.s.imag()) < 1e-9);
        }
    }

    auto prof = ramification_profile(c);
    CHECK(check_genus(rep, prof, 4));
    // Two solitary points on the real line y = 3 - (17/12) x.
    for (const auto& rec : rep.locations)
        if (rec.kind == DoublePointKind::solitary)
            CHECK(std::abs(affine_y(rec.image) -
                           (3.0 - 17.0 / 12.0 * affine_x(rec.image))) < 1e-5);
}

TEST_CASE("double point reports are deterministic") {
    auto c = nodal_quartic();
    auto r1 = double_points(c);
    auto r2 = double_points(c);
    REQUIRE(r1.locations.size() == r2.locations.size());
    for (size_t i = 0; i < r1.locations.size(); ++i) {
        CHECK(detail::chordal(r1.locations[i].u, r2.locations[i].u) < 1e-9);
        CHECK(detail::chordal(r1.locations[i].v, r2.locations[i].v) < 1e-9);
        CHECK(r1.locations[i].kind == r2.locations[i].kind);
    }
}

TEST_CASE("the anodal quartic has three solitary points") {
    auto c = anodal_quartic();
    auto prof = ramification_profile(c);
    CHECK(prof.maximally_inflected);
    REQUIRE(prof.entries.size() == 6);
    for (const auto& e : prof.entries) CHECK(e.sequence == RamificationSequence::flex());

    auto rep = double_points(c);
    CHECK(rep.delta == 3);
    CHECK(rep.eta == 0);
    CHECK(rep.c == 0);
    CHECK(check_genus(rep, prof, 4));

    double r6 = std::sqrt(6.0);
    std::vector<std::pair<double, double>> expect = {
        {(7.0 / 16 - r6 / 32) / r6, (-7.0 / 48 + 13 * r6 / 288) / (6 * r6)},
        {(-7.0 / 16 - r6 / 32) / r6, (7.0 / 48 + 13 * r6 / 288) / (6 * r6)},
        {-0.25, -1.0 / 216}};
    for (auto [ex, ey] : expect) {
        bool hit = false;
        for (const auto& rec : rep.locations)
            if (std::abs(affine_x(rec.image) - ex) < 1e-7 &&
                std::abs(affine_y(rec.image) - ey) < 1e-7)
                hit = true;
        CHECK(hit);
    }
}

TEST_CASE("the cuspidal cubic is immersed with no double points") {
    auto c = cuspidal_cubic();
    auto rep = double_points(c);
    CHECK(rep.delta == 0);
    CHECK(rep.eta == 0);
    CHECK(rep.c == 0);
    CHECK(rep.locations.empty());
    REQUIRE(rep.branch_data.size() == 1); // the cusp
    CHECK(rep.branch_data[0].mu == 2);
    CHECK(rep.branch_data[0].real_branches == 1);
    CHECK(check_genus(rep, ramification_profile(c), 3));
}

TEST_CASE("a node with a branch through the infinite parameter is found") {
    auto c = node_at_infinity_quartic();
    auto prof = ramification_profile(c);
    CHECK_FALSE(prof.maximally_inflected); // four of the six flexes are complex
    CHECK(prof.real_entries().size() == 2);

    auto rep = double_points(c);
    CHECK(rep.total_double_points() == 3);
    CHECK(rep.delta == 0);
    CHECK(rep.eta == 1);
    CHECK(rep.c == 1);
    CHECK(check_genus(rep, prof, 4));
    bool infinite_branch = false;
    for (const auto& rec : rep.locations)
        if (rec.u.is_infinity() || rec.v.is_infinity()) {
            infinite_branch = true;
            CHECK(rec.kind == DoublePointKind::real_node);
            // The image is the common value [0:0:1].
            CHECK(std::abs(rec.image[0]) < 1e-8);
            CHECK(std::abs(rec.image[1]) < 1e-8);
        }
    CHECK(infinite_branch);
}

/* ------------------------------------------------------------------ */
/* bitangents                                                          */
/* ------------------------------------------------------------------ */

TEST_CASE("the nodal quartic bitangent lines match the printed list") {
    auto c = nodal_quartic();
    auto bits = bitangents(c);
    CHECK(bits.dual.d == 6);
    CHECK(bits.tau == 0);
    REQUIRE(bits.records.size() == 4);
    for (const auto& rec : bits.records) CHECK(rec.kind == DoublePointKind::real_node);

    std::vector<std::array<double, 3>> printed = {
        {1, 0, 0},                          // x = 0
        {25.0 / 12, 1, -3},                 // y = 3 - (25/12) x
        {0.31889744, 1, -1.07221014},       // y = 1.07221014 - 0.31889744 x
        {-0.39336553, 1, 0.17859312}};      // y = -0.17859312 + 0.39336553 x
    for (const auto& target : printed) {
        int hits = 0;
        for (const auto& L : bits.lines)
            if (line_matches(L, target[0], target[1], target[2])) ++hits;
        CHECK(hits == 1);
    }

    // x = 0 is tangent at parameters +-sqrt(3).
    for (size_t i = 0; i < bits.lines.size(); ++i)
        if (line_matches(bits.lines[i], 1, 0, 0)) {
            auto [u, v] = bits.tangencies[i];
            double r3 = std::sqrt(3.0);
            CHECK(((point_near(u, -r3) && point_near(v, r3)) ||
                   (point_near(u, r3) && point_near(v, -r3))));
        }

    REQUIRE(bits.t_plus.has_value());
    REQUIRE(bits.t_minus.has_value());
    CHECK(*bits.t_plus == 4);
    CHECK(*bits.t_minus == 0);

    auto rep = double_points(c);
    auto prof = ramification_profile(c);
    CHECK(check_theorem31(rep, bits, 4, prof));
    CHECK(check_klein_schuh(c, bits.dual, rep, bits.dual_report));
    CHECK(check_fabricius_bjerre(6, rep.eta, 0, *bits.t_plus, *bits.t_minus));
}

TEST_CASE("the anodal quartic has one solitary bitangent, the line at infinity") {
    auto c = anodal_quartic();
    auto bits = bitangents(c);
    CHECK(bits.dual.d == 6);
    CHECK(bits.tau == 1);
    REQUIRE(bits.records.size() == 4);

    int solitary = 0;
    for (const auto& rec : bits.records)
        if (rec.kind == DoublePointKind::solitary) {
            ++solitary;
            CHECK(line_matches(rec.image, 0, 0, 1));
            // Tangent to the curve at the conjugate parameters +-3 sqrt(2) i.
            double r18 = 3 * std::sqrt(2.0);
            CHECK(((point_near(rec.u, Complex(0, r18)) &&
                    point_near(rec.v, Complex(0, -r18))) ||
                   (point_near(rec.u, Complex(0, -r18)) &&
                    point_near(rec.v, Complex(0, r18)))));
        }
    CHECK(solitary == 1);

    auto rep = double_points(c);
    auto prof = ramification_profile(c);
    CHECK(check_theorem31(rep, bits, 4, prof));
    CHECK(check_klein_schuh(c, bits.dual, rep, bits.dual_report));
    REQUIRE(bits.t_plus.has_value());
    CHECK(*bits.t_plus == 3);
    CHECK(*bits.t_minus == 0);
    CHECK(check_fabricius_bjerre(6, 0, 0, *bits.t_plus, *bits.t_minus));
}

TEST_CASE("the cuspidal cubic has no bitangents") {
    auto c = cuspidal_cubic();
    auto bits = bitangents(c);
    CHECK(bits.dual.d == 3);
    CHECK(bits.tau == 0);
    CHECK(bits.records.empty());
    CHECK_FALSE(bits.t_plus.has_value()); // sidedness is only defined for quartics

    auto rep = double_points(c);
    CHECK(check_theorem31(rep, bits, 3, ramification_profile(c)));
    CHECK(check_klein_schuh(c, bits.dual, rep, bits.dual_report));
}

/* ------------------------------------------------------------------ */
/* necklaces                                                           */
/* ------------------------------------------------------------------ */

TEST_CASE("necklace canonicalization is dihedral-invariant and idempotent") {
    for (int len = 1; len <= 9; ++len)
        for (int mask = 0; mask < (1 << len); ++mask) {
            std::string w;
            for (int i = 0; i < len; ++i) w += (mask >> i & 1) ? 'k' : 'i';
            std::string canon = Necklace::canonical_word(w);
            CHECK(Necklace::canonical_word(canon) == canon);
            for (int s = 0; s < len; ++s)
                CHECK(Necklace::canonical_word(w.substr(s) + w.substr(0, s)) == canon);
            std::string rev(w.rbegin(), w.rend());
            CHECK(Necklace::canonical_word(rev) == canon);
            // The canonical word uses the same multiset of beads.
            std::string a = w, b = canon;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
        }
}

TEST_CASE("necklace counts for small cusp and flex multisets") {
    auto two_two = enumerate_necklaces("kkii");
    REQUIRE(two_two.size() == 2);
    CHECK(two_two[0].word == "iikk");
    CHECK(two_two[1].word == "ikik");

    CHECK(enumerate_necklaces("kkkiii").size() == 3);

    auto quintic = enumerate_necklaces("kkiiiii");
    REQUIRE(quintic.size() == 3);
    CHECK(quintic[0].word == "iiiiikk");
    CHECK(quintic[1].word == "iiiikik");
    CHECK(quintic[2].word == "iiikiik");

    CHECK(enumerate_necklaces("ii").size() == 1);
    CHECK(enumerate_necklaces("ik").size() == 1);
}

TEST_CASE("necklace of a quintic profile with three cusps") {
    RamificationProfile prof;
    prof.d = 5;
    prof.r = 2;
    auto cusp = RamificationSequence::cusp();
    auto flex = RamificationSequence::flex();
    prof.entries = {{CPoint::affine(-3.0), cusp}, {CPoint::affine(-1.0), flex},
                    {CPoint::affine(0.0), flex},  {CPoint::affine(1.0), flex},
                    {CPoint::affine(3.0), cusp},  {CPoint::infinity(), cusp}};
    CHECK(necklace_of(prof).word == "iiikkk");

    prof.entries.push_back({CPoint::affine(Complex(0.0, 1.0)), flex});
    CHECK_THROWS_AS(necklace_of(prof), NonRealRamification);
}

TEST_CASE("bead labels separate known and unknown sequences") {
    auto flex = RamificationSequence::flex();
    auto cusp = RamificationSequence::cusp();
    auto planar = RamificationSequence::planar();
    RamificationSequence other{0, 2, 4};
    CHECK(bead_labels({flex, planar, cusp, other}) == "ipka");
    // Letter assignment follows sorted order, not first appearance.
    RamificationSequence late{0, 1, 5};
    CHECK(bead_labels({other, late}) == "ba");
    CHECK(bead_labels({late, other}) == "ab");
}

TEST_CASE("necklace of the nodal quartic is six flexes") {
    auto prof = ramification_profile(nodal_quartic());
    CHECK(necklace_of(prof).word == "iiiiii");
}

/* ------------------------------------------------------------------ */
/* chord diagrams                                                      */
/* ------------------------------------------------------------------ */

TEST_CASE("chord diagram of the nodal quartic joins two of its six flexes") {
    auto c = nodal_quartic();
    auto rep = double_points(c);
    auto dia = chord_diagram_of(ramification_profile(c), rep);
    // The node branches pass through the flexes at -3 and 1, so the chord
    // attaches to beads and no extra marks appear.
    CHECK(dia.marks == "iiiiii");
    REQUIRE(dia.chords.size() == 1);
    // Beads -3 and 1 are three steps apart in the circular order
    // -3, -1, 0, 1, 3, inf.
    auto [a, b] = dia.chords[0];
    CHECK((b - a == 3 || a + 6 - b == 3));
    CHECK(dia.canonical() == dia);
    CHECK(classify_quintic_chords(dia) == ChordClass::one_chord);
}

TEST_CASE("one-node quartic diagrams fall into four dihedral classes") {
    // Two chord endpoints among six beads: splits (0,6), (1,5), (2,4), (3,3).
    std::vector<ChordDiagram> reps;
    for (int gap = 0; gap <= 3; ++gap) {
        std::string marks = "........";
        for (int i = 0; i < 8; ++i) marks[i] = 'i';
        marks[0] = '.';
        marks[1 + gap] = '.';
        reps.push_back(ChordDiagram{marks, {{0, 1 + gap}}}.canonical());
    }
    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = i + 1; j < reps.size(); ++j) CHECK_FALSE(reps[i] == reps[j]);
    // A split of (5,1) is the mirror of (1,5).
    std::string mirror = "iiiii.i.";
    CHECK(ChordDiagram{mirror, {{5, 7}}}.canonical() == reps[1]);
}

TEST_CASE("chord diagram canonicalization is rotation-invariant") {
    ChordDiagram base{"i..ik.i.", {{1, 5}, {2, 7}}};
    auto canon = base.canonical();
    CHECK(canon.canonical() == canon);
    int n = base.n_marks();
    for (int s = 1; s < n; ++s) {
        std::string marks = base.marks.substr(s) + base.marks.substr(0, s);
        std::vector<std::pair<int, int>> chords;
        for (auto [a, b] : base.chords) {
            int x = (a - s + n) % n, y = (b - s + n) % n;
            chords.emplace_back(std::min(x, y), std::max(x, y));
        }
        std::sort(chords.begin(), chords.end());
        CHECK(ChordDiagram{marks, chords}.canonical() == canon);
    }
}

TEST_CASE("chord classification accepts exactly six classes") {
    std::set<ChordClass> seen;
    seen.insert(classify_quintic_chords(ChordDiagram{"", {}}));
    seen.insert(classify_quintic_chords(ChordDiagram{"..", {{0, 1}}}));

    for (int k = 2; k <= 3; ++k) {
        std::vector<int> pts(2 * k);
        for (int i = 0; i < 2 * k; ++i) pts[i] = i;
        std::vector<std::vector<std::pair<int, int>>> matchings;
        collect_matchings(pts, {}, matchings);
        REQUIRE((int)matchings.size() == (k == 2 ? 3 : 15));

        int forbidden = 0;
        std::map<ChordClass, int> counts;
        for (const auto& m : matchings) {
            ChordDiagram dia{std::string(2 * k, '.'), m};
            try {
                ChordClass cls = classify_quintic_chords(dia);
                seen.insert(cls);
                counts[cls] += 1;
                // Canonicalization does not change the class.
                CHECK(classify_quintic_chords(dia.canonical()) == cls);
            } catch (const ForbiddenDiagram&) {
                ++forbidden;
            }
        }
        if (k == 2) {
            CHECK(counts[ChordClass::two_disjoint] == 2);
            CHECK(forbidden == 1);
        } else {
            CHECK(counts[ChordClass::hexagon_sides] == 2);
            CHECK(counts[ChordClass::three_parallel] == 3);
            CHECK(counts[ChordClass::three_pairwise_crossing] == 1);
            CHECK(forbidden == 9);
        }
    }
    CHECK(seen.size() == 6);

    CHECK_THROWS_AS(classify_quintic_chords(ChordDiagram{
                        "........", {{0, 1}, {2, 3}, {4, 5}, {6, 7}}}),
                    BadInput);
}

/* ------------------------------------------------------------------ */
/* identities and bounds                                               */
/* ------------------------------------------------------------------ */

TEST_CASE("cusp and flex bounds match the worked examples") {
    auto b40 = bounds(4, 0);
    CHECK(b40.delta_min == 2);
    CHECK(b40.delta_max == 3);
    CHECK(b40.eta2c_min == 0);
    CHECK(b40.eta2c_max == 1);
    CHECK(b40.admits(2, 1));
    CHECK(b40.admits(3, 0));
    CHECK_FALSE(b40.admits(1, 1));
    CHECK_FALSE(b40.admits(2, 2));

    auto b54 = bounds(5, 4);
    CHECK(b54.delta_min == 0);
    CHECK(b54.delta_max == 1);
    CHECK(b54.eta2c_min == 1);
    CHECK(b54.eta2c_max == 2);

    auto b50 = bounds(5, 0);
    CHECK(b50.delta_min == 3);
    CHECK(b50.delta_max == 6);
    CHECK(b50.eta2c_min == 0);
    CHECK(b50.eta2c_max == 3);

    CHECK_THROWS_AS(bounds(5, 6), BadInput); // would need negative flexes
    CHECK_THROWS_AS(bounds(4, -1), BadInput);
}

TEST_CASE("profile bounds agree with cusp counts where both apply") {
    auto flex = RamificationSequence::flex();
    auto cusp = RamificationSequence::cusp();
    for (int d = 3; d <= 7; ++d)
        for (int kappa = 0; 2 * kappa <= 3 * (d - 2); ++kappa) {
            std::vector<RamificationSequence> data(kappa, cusp);
            data.insert(data.end(), 3 * (d - 2) - 2 * kappa, flex);
            auto coarse = bounds(d, data);
            auto fine = bounds(d, kappa);
            CHECK(fine.delta_min >= coarse.delta_min);
            CHECK(fine.delta_max <= coarse.delta_max);
            CHECK(fine.eta2c_min >= coarse.eta2c_min);
            CHECK(fine.eta2c_max <= coarse.eta2c_max);
            CHECK(fine.delta_min <= fine.delta_max);
            CHECK(fine.eta2c_min <= fine.eta2c_max);
        }
}

TEST_CASE("bounds admit the planar-point profile") {
    auto data = std::vector<RamificationSequence>{RamificationSequence::planar()};
    auto flex = RamificationSequence::flex();
    data.insert(data.end(), 4, flex); // quartic: planar point plus four flexes
    auto b = bounds(4, data);
    CHECK(b.delta_min == 2);
    // The planar sequence (0,1,4) has alpha_1 = 1, so neither correction term
    // bites: delta is capped by the full genus.
    CHECK(b.delta_max == 3);
    CHECK(b.eta2c_max == 1);
}

TEST_CASE("genus bookkeeping on the census curves") {
    std::vector<RamificationSequence> flexes(6, RamificationSequence::flex());
    CHECK(genus_defect_twice(4, flexes) == 6);
    std::vector<RamificationSequence> mixed = {RamificationSequence::cusp(),
                                               RamificationSequence::flex()};
    CHECK(genus_defect_twice(3, mixed) == 0);
    std::vector<RamificationSequence> quintic(9, RamificationSequence::flex());
    CHECK(genus_defect_twice(5, quintic) == 12);
}

TEST_CASE("crossing formula checker") {
    CHECK(check_fabricius_bjerre(6, 1, 0, 4, 0));
    CHECK(check_fabricius_bjerre(6, 0, 0, 3, 0));
    CHECK(check_fabricius_bjerre(2, 0, 2, 3, 0));
    // An odd flex count can never balance the even right-hand side.
    CHECK_FALSE(check_fabricius_bjerre(3, 0, 1, 2, 0));
    CHECK_FALSE(check_fabricius_bjerre(6, 1, 0, 3, 0));
}

TEST_CASE("degenerate input is reported, not classified") {
    // Components share the double point with a ramification point: the curve
    // (t^3, s t^2, s^3) reparameterized to put a flex on a node is replaced
    // here by a direct collision witness: a quartic traced twice is rejected
    // before any double point search.
    auto conic_twice = QCurve(
        4, 2,
        {qform(4, {1, 0, 2, 0, 1}),   // (s^2 + t^2)^2
         qform(4, {0, 1, 0, 1, 0}),   // s t (s^2 + t^2)
         qform(4, {0, 0, 1, 0, 0})}); // s^2 t^2
    CHECK_THROWS_AS(double_points(conic_twice), DegenerateCurve);
}
