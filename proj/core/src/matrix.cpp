#include "fusion/matrix.hpp"

#include <algorithm>
#include <set>

#include "fusion/errors.hpp"

namespace fusion {

RatMatrix RatMatrix::identity(size_t n) {
    RatMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    RatMatrix r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const Rat& x = at(i, k);
            if (x == 0) continue;
            for (size_t j = 0; j < o.cols_; ++j) r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

RatMatrix RatMatrix::transposed() const {
    RatMatrix r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

size_t rank(const RatMatrix& m) {
    // Clear denominators row by row, then run one-step fraction-free
    // elimination; entries stay integral (they are minors of the scaled
    // matrix), which keeps intermediate swell under control.
    const size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<Int>> a(R, std::vector<Int>(C));
    for (size_t i = 0; i < R; ++i) {
        Int l = 1;
        for (size_t j = 0; j < C; ++j) l = lcm(l, m.at(i, j).get_den());
        for (size_t j = 0; j < C; ++j) {
            Rat v = m.at(i, j) * Rat(l);
            v.canonicalize();
            a[i][j] = v.get_num();
        }
    }
    size_t r = 0;
    Int prev = 1;
    for (size_t c = 0; c < C && r < R; ++c) {
        size_t p = r;
        while (p < R && a[p][c] == 0) ++p;
        if (p == R) continue;
        std::swap(a[p], a[r]);
        for (size_t i = r + 1; i < R; ++i) {
            for (size_t j = c + 1; j < C; ++j) {
                Int t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = t;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

namespace {

// Gauss-Jordan to reduced row echelon form.  `order` maps preference rank to
// column index; pivots are chosen in that order.  Returns pivot columns.
std::vector<size_t> rref_in_place(std::vector<std::vector<Rat>>& rows, size_t cols,
                                  const std::vector<size_t>& order) {
    std::vector<size_t> pivots;
    size_t top = 0;
    for (size_t oi = 0; oi < order.size() && top < rows.size(); ++oi) {
        const size_t c = order[oi];
        size_t p = top;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[top]);
        const Rat inv = Rat(1) / rows[top][c];
        for (size_t j = 0; j < cols; ++j) rows[top][j] *= inv;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == top || rows[i][c] == 0) continue;
            const Rat f = rows[i][c];
            for (size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[top][j];
        }
        pivots.push_back(c);
        ++top;
    }
    rows.resize(top);
    return pivots;
}

std::vector<size_t> natural_order(size_t n, bool reversed) {
    std::vector<size_t> o(n);
    for (size_t i = 0; i < n; ++i) o[i] = reversed ? n - 1 - i : i;
    return o;
}

}  // namespace

std::vector<std::vector<Rat>> kernel_basis(const RatMatrix& m) {
    const size_t C = m.cols();
    std::vector<std::vector<Rat>> rows(m.rows(), std::vector<Rat>(C));
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < C; ++j) rows[i][j] = m.at(i, j);
    const auto pivots = rref_in_place(rows, C, natural_order(C, false));

    std::set<size_t> pivot_set(pivots.begin(), pivots.end());
    std::vector<std::vector<Rat>> basis;
    for (size_t f = 0; f < C; ++f) {
        if (pivot_set.count(f)) continue;
        std::vector<Rat> v(C, Rat(0));
        v[f] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

QuotientSpace::QuotientSpace(size_t ambient_dim, const std::vector<std::vector<Rat>>& relations)
    : ambient_(ambient_dim) {
    std::vector<std::vector<Rat>> rows;
    rows.reserve(relations.size());
    for (const auto& r : relations) {
        if (r.size() != ambient_dim)
            throw InternalCheckError("relation length does not match ambient dimension");
        rows.push_back(r);
    }
    const auto pivots = rref_in_place(rows, ambient_dim, natural_order(ambient_dim, true));
    std::set<size_t> pivot_set(pivots.begin(), pivots.end());
    for (size_t c = 0; c < ambient_dim; ++c)
        if (!pivot_set.count(c)) {
            rep_pos_[c] = reps_.size();
            reps_.push_back(c);
        }
    for (size_t r = 0; r < pivots.size(); ++r) pivot_rows_.emplace_back(pivots[r], rows[r]);
}

std::vector<Rat> QuotientSpace::project(const std::vector<Rat>& ambient) const {
    if (ambient.size() != ambient_)
        throw InternalCheckError("vector length does not match ambient dimension");
    std::vector<Rat> v = ambient;
    for (const auto& [col, row] : pivot_rows_) {
        if (v[col] == 0) continue;
        const Rat f = v[col];
        for (size_t j = 0; j < ambient_; ++j) v[j] -= f * row[j];
    }
    std::vector<Rat> out(reps_.size(), Rat(0));
    for (size_t k = 0; k < reps_.size(); ++k) out[k] = v[reps_[k]];
    return out;
}

bool QuotientSpace::is_zero(const std::vector<Rat>& ambient) const {
    for (const Rat& c : project(ambient))
        if (c != 0) return false;
    return true;
}

std::vector<Rat> QuotientSpace::solution_vector(size_t rep_pos) const {
    // Fully reduced pivot rows have support {pivot} + representatives, so
    // u[pivot] = -row[rep] solves row . u = 0 with the requested unit part.
    const size_t rep_col = reps_.at(rep_pos);
    std::vector<Rat> u(ambient_, Rat(0));
    u[rep_col] = 1;
    for (const auto& [col, row] : pivot_rows_) u[col] = -row[rep_col];
    return u;
}

std::vector<Rat> charpoly(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw InternalCheckError("charpoly needs a square matrix");
    const size_t n = m.rows();
    std::vector<Rat> c(n + 1, Rat(0));
    c[n] = 1;
    RatMatrix M = RatMatrix::identity(n);  // M_0
    for (size_t k = 1; k <= n; ++k) {
        M = m * M;
        Rat tr(0);
        for (size_t i = 0; i < n; ++i) tr += M.at(i, i);
        c[n - k] = -tr / Rat(static_cast<long>(k));
        for (size_t i = 0; i < n; ++i) M.at(i, i) += c[n - k];
    }
    return c;
}

std::vector<Rat> poly_derivative(const std::vector<Rat>& p) {
    std::vector<Rat> d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<long>(i)));
    if (d.empty()) d.push_back(Rat(0));
    return d;
}

namespace {

void poly_trim(std::vector<Rat>& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

std::vector<Rat> poly_mod(std::vector<Rat> a, const std::vector<Rat>& b) {
    poly_trim(a);
    while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
        const Rat f = a.back() / b.back();
        const size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        poly_trim(a);
        if (a.size() < b.size()) break;
        if (a.back() == 0) poly_trim(a);
    }
    return a;
}

std::vector<Rat> poly_make_monic(std::vector<Rat> p) {
    poly_trim(p);
    if (p.back() != 0) {
        const Rat inv = Rat(1) / p.back();
        for (auto& c : p) c *= inv;
    }
    return p;
}

std::vector<Rat> poly_divide(std::vector<Rat> a, const std::vector<Rat>& b) {
    poly_trim(a);
    std::vector<Rat> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, Rat(0));
    while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
        const Rat f = a.back() / b.back();
        const size_t shift = a.size() - b.size();
        q[shift] = f;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        poly_trim(a);
        if (a.size() == 1 && a[0] == 0) break;
    }
    return q;
}

Rat poly_eval(const std::vector<Rat>& p, const Rat& x) {
    Rat acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

}  // namespace

std::vector<Rat> poly_divide_linear(const std::vector<Rat>& p, const Rat& root) {
    // Synthetic division by (x - root).
    std::vector<Rat> q(p.size() - 1, Rat(0));
    Rat carry = p.back();
    for (size_t i = p.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = p[i] + carry * root;
    }
    if (carry != 0) throw InternalCheckError("poly_divide_linear: not a root");
    return q;
}

std::vector<Rat> poly_gcd(std::vector<Rat> a, std::vector<Rat> b) {
    poly_trim(a);
    poly_trim(b);
    while (!(b.size() == 1 && b[0] == 0)) {
        auto r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_make_monic(a);
}

std::vector<Rat> rational_roots(const std::vector<Rat>& p) {
    // Scale to a primitive integer polynomial, then try p/q candidates from
    // the divisors of the ends.  Fine at the sizes this project meets.
    std::vector<Rat> q = p;
    poly_trim(q);
    std::set<Rat> found;
    // Strip zero roots first.
    while (q.size() > 1 && q[0] == 0) {
        found.insert(Rat(0));
        q.erase(q.begin());
    }
    if (q.size() <= 1) return std::vector<Rat>(found.begin(), found.end());

    Int l = 1;
    for (const auto& c : q) l = lcm(l, c.get_den());
    std::vector<Int> z;
    for (const auto& c : q) {
        Rat v = c * Rat(l);
        v.canonicalize();
        z.push_back(v.get_num());
    }
    Int content = 0;
    for (const auto& c : z) content = gcd(content, c);
    for (auto& c : z) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());

    auto divisors = [](Int n) {
        std::vector<Int> d;
        n = abs(n);
        for (Int i = 1; i * i <= n; ++i) {
            if (n % i == 0) {
                d.push_back(i);
                if (i * i != n) d.push_back(n / i);
            }
        }
        return d;
    };
    for (const Int& pn : divisors(z.front()))
        for (const Int& qn : divisors(z.back()))
            for (int s : {1, -1}) {
                Rat cand(pn * s, qn);
                cand.canonicalize();
                if (poly_eval(q, cand) == 0) found.insert(cand);
            }
    return std::vector<Rat>(found.begin(), found.end());
}

JordanReport jordan_structure(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw InternalCheckError("jordan_structure needs a square matrix");
    const size_t n = m.rows();
    JordanReport rep;
    if (n == 0) return rep;

    std::vector<Rat> p = charpoly(m);
    std::vector<Rat> roots = rational_roots(p);

    std::vector<Rat> remainder = p;
    for (const Rat& lambda : roots) {
        size_t mult = 0;
        while (remainder.size() > 1 && poly_eval(remainder, lambda) == 0) {
            remainder = poly_divide_linear(remainder, lambda);
            ++mult;
        }
        // Block sizes from ranks of powers of (m - lambda I):
        // #blocks of size >= k is rank((m-lI)^{k-1}) - rank((m-lI)^k).
        RatMatrix shifted = m;
        for (size_t i = 0; i < n; ++i) shifted.at(i, i) -= lambda;
        std::vector<size_t> ranks{n};  // rank of the 0th power
        RatMatrix power = RatMatrix::identity(n);
        for (size_t k = 1; k <= mult; ++k) {
            power = power * shifted;
            ranks.push_back(rank(power));
            if (n - ranks.back() >= mult) break;  // generalized eigenspace saturated
        }
        std::vector<size_t> at_least;  // at_least[k-1] = #blocks of size >= k
        for (size_t k = 1; k < ranks.size(); ++k) at_least.push_back(ranks[k - 1] - ranks[k]);
        std::vector<size_t> sizes;
        for (size_t k = 0; k < at_least.size(); ++k) {
            const size_t next = (k + 1 < at_least.size()) ? at_least[k + 1] : 0;
            for (size_t c = 0; c < at_least[k] - next; ++c) sizes.push_back(k + 1);
        }
        std::sort(sizes.rbegin(), sizes.rend());
        rep.blocks.push_back({lambda, sizes});
    }

    // Remainder has no rational roots; report its square-free factors with
    // multiplicity.  No splitting into irreducibles is attempted beyond that.
    std::vector<Rat> rem = poly_make_monic(remainder);
    while (rem.size() > 1) {
        auto g = poly_gcd(rem, poly_derivative(rem));
        auto sqfree = poly_divide(rem, g);
        sqfree = poly_make_monic(sqfree);
        size_t mult = 0;
        while (rem.size() >= sqfree.size()) {
            auto r = poly_mod(rem, sqfree);
            if (!(r.size() == 1 && r[0] == 0)) break;
            rem = poly_divide(rem, sqfree);
            ++mult;
        }
        rep.residual_factors.push_back({sqfree, mult});
        rem = poly_make_monic(rem);
    }

    size_t total = 0;
    for (const auto& b : rep.blocks)
        for (size_t s : b.block_sizes) total += s;
    for (const auto& f : rep.residual_factors) total += (f.coeffs.size() - 1) * f.multiplicity;
    if (total != n) throw InternalCheckError("jordan_structure: block/factor sizes do not sum to n");
    return rep;
}

}  // namespace fusion
