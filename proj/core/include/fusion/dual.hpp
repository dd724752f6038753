#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fusion/fusion.hpp"

namespace fusion {

// Functional on the truncated tensor space: coordinate -> value of the
// pairing against that basis tensor.
struct Functional {
    const TensorSpace* space = nullptr;
    std::map<size_t, Rat> values;

    Rat pair(const TensorElement& x) const;
};

// Pairing row of the dual mode action: the tensor vector r with
// <x(n) psi, t> = psi(r) for the unit tensor t.  By the quasiprimary adjoint
// this is sign * delta2(x(-n)) applied to t.
TensorElement dual_action_row(const TensorSpace& space, int gen, long n, const Rat& w,
                              const TensorElement& x);

// <x(n) psi, -> as a functional on the coordinates where the row fits inside
// the truncation; coordinates without headroom are absent.
Functional dual_action(const TensorSpace& space, int gen, long n, const Rat& w,
                       const Functional& psi);

// Linear system cutting the compatible functionals out of the truncated dual:
// annihilation by all raising monomials of degree > depth together with the
// smeared-action consistency family, solved into a canonical solution basis
// parametrized by the earliest coordinates.
struct DualConstraintSystem {
    std::shared_ptr<const TensorSpace> space;
    std::shared_ptr<const QuotientSpace> solved;
    long depth = 0;
    Rat w;
    size_t equation_count = 0;
    std::vector<size_t> unknowns;          // parametrizing coordinates
    std::vector<std::string> unknown_labels;
    size_t candidate_count = 0;            // naive unknown count from the candidate set
    bool consistent = true;                // solution dim == candidate count

    size_t solution_dim() const { return unknowns.size(); }
};

DualConstraintSystem compat_constraints(std::shared_ptr<const Module> m1,
                                        std::shared_ptr<const Module> m2, long depth, const Rat& w,
                                        long lmax, bool audit_extra_family = false);

// Matrix of the dual L(0) action on the solved unknowns (column convention:
// the matrix maps unknown values to the values of L(0) psi).
RatMatrix dual_l0_matrix(const DualConstraintSystem& system);

// Stabilized dual pipeline: solves at lmax and lmax+1 and accepts only when
// the unknown labels and the L(0) matrix repeat.
struct DualResult {
    std::vector<std::string> unknown_labels;
    RatMatrix l0_matrix;
    JordanReport jordan;
    size_t solution_dim = 0;
    size_t candidate_count = 0;
    long stabilized_at = 0;
    Rat w;
    long depth = 0;
};

DualResult solve_dual(std::shared_ptr<const Module> m1, std::shared_ptr<const Module> m2,
                      long depth, const Rat& w, long lmax, bool audit_extra_family = false);

// Comparison of the two pipelines: basis pairing, transpose equality of the
// L(0) matrices, and identical Jordan reports.
struct CrosscheckReport {
    bool basis_match = false;
    bool transpose_match = false;
    bool jordan_match = false;
    bool ok() const { return basis_match && transpose_match && jordan_match; }
};

CrosscheckReport crosscheck(const FusionResult& ngk, const DualResult& dual);

}  // namespace fusion
