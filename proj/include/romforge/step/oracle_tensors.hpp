#pragma once

#include "romforge/step/step.hpp"

namespace romforge::step {

/// Exact identification of the quadratic and cubic force tensors restricted
/// to a basis of directions. For f(x) = A x x + B x x x (A, B symmetric in
/// their displacement arguments), stores the full-length contractions
/// A v_i v_j and B v_i v_j v_l for all basis combinations, identified from
/// signed evaluations of f alone. Identification is exact for polynomial f,
/// so this is an independent oracle for any projection-based scheme.
class NonlinearTensors {
public:
    /// Basis columns capped at 60 directions (evaluation count grows as the
    /// cube of the basis size).
    NonlinearTensors(const ForceEval& f, const MatX& basis);

    Index basis_size() const { return n_; }

    /// Contraction A v_i v_j (symmetric in i, j), full vector.
    const VecX& quadratic(Index i, Index j) const;
    /// Contraction B v_i v_j v_l (fully symmetric), full vector.
    const VecX& cubic(Index i, Index j, Index l) const;

    /// f reconstructed at x = sum_i c_i v_i:
    /// sum_ij c_i c_j A v_i v_j + sum_ijl c_i c_j c_l B v_i v_j v_l.
    VecX evaluate(const VecX& coeffs) const;

    /// Modal coupling coefficients in the upper-triangular monomial
    /// convention, for basis = mass-normalized mode shapes:
    ///   alpha(k; i, j) = (2 - delta_ij) phi_k . A v_i v_j
    ///   beta(k; i, j, l) = multiplicity(i, j, l) phi_k . B v_i v_j v_l
    CouplingCoefficients project(const ModeSet& modes) const;

private:
    Index pidx(Index i, Index j) const;
    Index tidx(Index i, Index j, Index l) const;

    MatX basis_;
    Index n_ = 0;
    std::vector<VecX> quad_;  // pair-indexed
    std::vector<VecX> cub_;   // triple-indexed
};

} // namespace romforge::step
