#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "fusion/rational.hpp"

namespace fusion {

// Dense rational matrix.  Treated as immutable once filled in.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Rat& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const Rat& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    static RatMatrix identity(size_t n);
    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix transposed() const;

private:
    size_t rows_, cols_;
    std::vector<Rat> a_;
};

// Rank via fraction-free (Bareiss) elimination on a denominator-cleared copy.
size_t rank(const RatMatrix& m);

// Basis of the right nullspace in the textbook free-variable normal form:
// one vector per free column, with a 1 at that free column and 0 at every
// other free column.  Deterministic and unique.
std::vector<std::vector<Rat>> kernel_basis(const RatMatrix& m);

// Quotient of an ambient coordinate space by the span of relation rows.
// Pivots are chosen at the latest coordinates, so the surviving
// representatives are the lexicographically earliest ones.
class QuotientSpace {
public:
    QuotientSpace(size_t ambient_dim, const std::vector<std::vector<Rat>>& relations);

    size_t ambient_dim() const { return ambient_; }
    size_t dim() const { return reps_.size(); }
    size_t relation_rank() const { return pivot_rows_.size(); }
    const std::vector<size_t>& representatives() const { return reps_; }

    // Rewrites an ambient vector over the representative coordinates.
    std::vector<Rat> project(const std::vector<Rat>& ambient) const;

    // True when the ambient vector lies in the relation span.
    bool is_zero(const std::vector<Rat>& ambient) const;

    // Dense annihilator vector u with u . r = 0 for every relation row r,
    // u[representative(rep_pos)] = 1 and u = 0 at the other representatives.
    // These span the dual solution space of the relation system.
    std::vector<Rat> solution_vector(size_t rep_pos) const;

private:
    size_t ambient_;
    std::vector<size_t> reps_;                       // ascending non-pivot columns
    std::map<size_t, size_t> rep_pos_;               // column -> index in reps_
    std::vector<std::pair<size_t, std::vector<Rat>>> pivot_rows_;  // pivot col -> reduced row
};

// Characteristic polynomial, monic, coefficients by ascending degree
// (size rows+1).  Faddeev-LeVerrier over exact rationals.
std::vector<Rat> charpoly(const RatMatrix& m);

struct JordanBlockSet {
    Rat eigenvalue;
    std::vector<size_t> block_sizes;  // descending
};

struct ResidualFactor {
    std::vector<Rat> coeffs;  // monic, ascending degree, degree >= 2
    size_t multiplicity;
};

// Jordan data over the rationals: rational eigenvalues are fully resolved into
// block sizes via ranks of powers of (m - lambda I); what remains of the
// characteristic polynomial is reported unresolved as residual factors
// (square-free, without a certified irreducibility split).
struct JordanReport {
    std::vector<JordanBlockSet> blocks;      // by ascending eigenvalue
    std::vector<ResidualFactor> residual_factors;

    bool operator==(const JordanReport& o) const {
        if (residual_factors.size() != o.residual_factors.size()) return false;
        for (size_t i = 0; i < residual_factors.size(); ++i)
            if (residual_factors[i].coeffs != o.residual_factors[i].coeffs ||
                residual_factors[i].multiplicity != o.residual_factors[i].multiplicity)
                return false;
        if (blocks.size() != o.blocks.size()) return false;
        for (size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].eigenvalue != o.blocks[i].eigenvalue ||
                blocks[i].block_sizes != o.blocks[i].block_sizes)
                return false;
        return true;
    }
};

JordanReport jordan_structure(const RatMatrix& m);

// Polynomial helpers (coefficients ascending, exact).  Exposed for tests.
std::vector<Rat> poly_divide_linear(const std::vector<Rat>& p, const Rat& root);
std::vector<Rat> poly_derivative(const std::vector<Rat>& p);
std::vector<Rat> poly_gcd(std::vector<Rat> a, std::vector<Rat> b);
std::vector<Rat> rational_roots(const std::vector<Rat>& p);  // distinct, ascending

}  // namespace fusion
