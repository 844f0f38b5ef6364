#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "inflecta/curve.hpp"
#include "inflecta/errors.hpp"
#include "inflecta/scalar.hpp"

namespace inflecta {

// Weakly decreasing non-negative parts, trailing zeros trimmed.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    Partition(std::initializer_list<int> p) : parts(p) { trim(); }
    explicit Partition(std::vector<int> p) : parts(std::move(p)) { trim(); }

    void trim() {
        while (!parts.empty() && parts.back() == 0) parts.pop_back();
        for (size_t i = 1; i < parts.size(); ++i)
            if (parts[i] > parts[i - 1]) throw BadInput("Partition: parts must decrease");
        if (!parts.empty() && parts.front() < 0) throw BadInput("Partition: negative part");
    }
    int weight() const {
        int w = 0;
        for (int p : parts) w += p;
        return w;
    }
    int length() const { return (int)parts.size(); }
    int part(int i) const { return i < length() ? parts[i] : 0; }
    bool fits_in(int rows, int cols) const {
        return length() <= rows && (parts.empty() || parts[0] <= cols);
    }
    Partition conjugate() const {
        std::vector<int> c(parts.empty() ? 0 : parts[0], 0);
        for (int p : parts)
            for (int j = 0; j < p; ++j) ++c[j];
        return Partition(std::move(c));
    }
    bool contains(const Partition& inner) const {
        for (int i = 0; i < inner.length(); ++i)
            if (part(i) < inner.parts[i]) return false;
        return true;
    }
    bool operator==(const Partition& o) const { return parts == o.parts; }
    bool operator<(const Partition& o) const { return parts < o.parts; }
};

struct SchubertProblem {
    int d = 0, r = 0;
    std::vector<RamificationSequence> data; // order immaterial
};

// Codimension dictionary: lambda = (a_r - r, ..., a_1 - 1, a_0), |lambda| = |a|.
// A nonzero a_0 (base point) contributes an honest last part.
inline Partition partition_of(const RamificationSequence& a, int d, int r) {
    if ((int)a.alpha.size() != r + 1 || !a.valid(d))
        throw BadInput("partition_of: invalid ramification sequence");
    std::vector<int> parts;
    for (int i = r; i >= 0; --i) parts.push_back(a.alpha[i] - i);
    return Partition(std::move(parts));
}

// Littlewood-Richardson coefficient c^{outer}_{inner, content}: skew tableaux
// of shape outer/inner with the given content, filled in reading order
// (rows top to bottom, right to left) so the lattice condition can be
// enforced prefix by prefix.
inline Integer lr_coefficient(const Partition& outer, const Partition& inner,
                              const Partition& content) {
    if (!outer.contains(inner)) return 0;
    if (outer.weight() != inner.weight() + content.weight()) return 0;
    int nlabels = content.length();
    if (nlabels == 0) return outer == inner ? 1 : 0;

    struct Cell {
        int row, col;
    };
    std::vector<Cell> cells; // reading order
    for (int i = 0; i < outer.length(); ++i)
        for (int c = outer.parts[i] - 1; c >= inner.part(i); --c) cells.push_back({i, c});

    std::vector<std::vector<int>> label(outer.length());
    for (int i = 0; i < outer.length(); ++i) label[i].assign(outer.parts[i], 0);
    std::vector<int> used(nlabels + 1, 0);

    Integer count = 0;
    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == cells.size()) {
            ++count;
            return;
        }
        auto [row, col] = cells[k];
        int right = col + 1 < outer.part(row) && col + 1 >= inner.part(row)
                        ? label[row][col + 1]
                        : nlabels;
        int above = row > 0 && col < outer.part(row - 1) && col >= inner.part(row - 1)
                        ? label[row - 1][col]
                        : 0;
        for (int l = above + 1; l <= right; ++l) {
            if (used[l] >= content.parts[l - 1]) continue;
            if (l > 1 && used[l] >= used[l - 1]) continue; // lattice prefix
            ++used[l];
            label[row][col] = l;
            rec(k + 1);
            --used[l];
        }
        label[row][col] = 0;
    };
    rec(0);
    return count;
}

namespace detail {

inline void enumerate_super_partitions(const Partition& base, int extra, int rows, int cols,
                                       std::vector<Partition>& out) {
    std::vector<int> cur(rows, 0);
    std::function<void(int, int)> rec = [&](int row, int left) {
        if (row == rows) {
            if (left == 0) out.push_back(Partition(std::vector<int>(cur)));
            return;
        }
        int lo = base.part(row);
        int hi = std::min(cols, row == 0 ? cols : cur[row - 1]);
        for (int v = lo; v <= hi; ++v) {
            int add = v - lo;
            if (add > left) break;
            cur[row] = v;
            rec(row + 1, left - add);
        }
    };
    rec(0, extra);
}

} // namespace detail

// Product of Schur classes in the cohomology of a Grassmannian whose
// Schubert classes are partitions inside a rows x cols box.
inline std::map<Partition, Integer> schur_product(const std::map<Partition, Integer>& state,
                                                  const Partition& mu, int rows, int cols) {
    std::map<Partition, Integer> next;
    for (const auto& [nu, coeff] : state) {
        std::vector<Partition> candidates;
        detail::enumerate_super_partitions(nu, mu.weight(), rows, cols, candidates);
        for (const auto& rho : candidates) {
            Integer c = lr_coefficient(rho, nu, mu);
            if (c != 0) next[rho] += coeff * c;
        }
    }
    return next;
}

inline bool validate_ramification_data(const std::vector<RamificationSequence>& data, int d,
                                       int r) {
    int total = 0;
    for (const auto& a : data) {
        if ((int)a.alpha.size() != r + 1 || !a.valid(d)) return false;
        total += a.weight();
    }
    return total == (r + 1) * (d - r);
}

// Number of degree-d rational curves in P^r with the given ramification data
// at general points: the rectangle coefficient of the product of the
// condition classes, computed in the Grassmannian of (d-r)-subspaces of
// (d+1)-space. Incompatible data counts zero curves.
inline Integer intersection_number(const SchubertProblem& p) {
    if (!validate_ramification_data(p.data, p.d, p.r)) return 0;
    int rows = p.d - p.r, cols = p.r + 1;
    std::map<Partition, Integer> state{{Partition{}, Integer(1)}};
    for (const auto& a : p.data) {
        Partition lam = partition_of(a, p.d, p.r).conjugate();
        if (!lam.fits_in(rows, cols)) return 0;
        state = schur_product(state, lam, rows, cols);
        if (state.empty()) return 0;
    }
    std::vector<int> box(rows, cols);
    auto it = state.find(Partition(std::move(box)));
    return it == state.end() ? Integer(0) : it->second;
}

// Number of standard tableaux of the p x m rectangle; the count of complex
// solutions to the corresponding simple-condition problem.
inline Integer schubert_number(long m, long p) {
    if (m < p || p < 1) throw BadInput("schubert_number: need m >= p >= 1");
    Integer num = factorial(m * p), den = 1;
    for (long i = 1; i < p; ++i) num *= factorial(i);
    for (long i = 0; i < p; ++i) den *= factorial(m + i);
    Integer q = num / den;
    if (q * den != num) throw BadInput("schubert_number: non-integral quotient");
    return q;
}

// Lower bound for the number of real solutions when all conditions are
// simple and all points real; defined for even d only (half-integer
// factorial arguments otherwise).
inline Integer eg_lower_bound(int d, int r) {
    if (d % 2 != 0) throw OddDegree("eg_lower_bound: requires even degree");
    if (r < 1 || r >= d) throw BadInput("eg_lower_bound: need 0 < r < d");
    long m = std::max(r + 1, d - r), p = std::min(r + 1, d - r);
    Integer num = 1, den = 1;
    for (long i = 1; i < p; ++i) num *= factorial(i);
    for (long i = m - p + 1; i <= m - 1; ++i) num *= factorial(i);
    num *= factorial(p * m / 2);
    for (long i = m - p + 2; i <= m + p - 2; i += 2) den *= factorial(i);
    for (long i = m - p + 1; i <= m + p - 1; i += 2) den *= factorial(i / 2);
    Integer q = num / den;
    if (q * den != num) throw NonIntegralFactorial("eg_lower_bound: non-integral value");
    return q;
}

// Exact ratio of the solution count to the real lower bound; requires m+p
// odd so every factorial argument is integral.
inline Rational reality_ratio(long m, long p) {
    if (m < p || p < 1) throw BadInput("reality_ratio: need m >= p >= 1");
    if ((m + p) % 2 == 0)
        throw NonIntegralFactorial("reality_ratio: half-integer factorials at even m+p");
    Integer num = factorial(m * p), den = factorial(p * m / 2);
    for (long i = m - p + 1; i <= m + p - 1; i += 2) {
        num *= factorial(i / 2);
        den *= factorial(i);
    }
    return Rational(num) / Rational(den);
}

// Special sequences are those whose condition class is a single row or a
// single column; they admit the explicit deformation arguments.
inline bool is_special(const RamificationSequence& a, int r) {
    if ((int)a.alpha.size() != r + 1 || !a.base_point_free()) return false;
    Partition lam = partition_of(a, a.alpha.back(), r);
    if (lam.weight() == 0) return false;
    bool row = lam.length() == 1;
    bool column = lam.parts[0] == 1;
    return row || column;
}

} // namespace inflecta
