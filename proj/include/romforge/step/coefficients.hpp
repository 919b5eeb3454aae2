#pragma once

#include "romforge/types.hpp"

#include <string>
#include <vector>

namespace romforge::step {

/// Quadratic and cubic modal coupling coefficients in upper-triangular
/// monomial convention: alpha(k; i, j) with i <= j multiplies q_i q_j in the
/// equation of mode k, beta(k; i, j, l) with i <= j <= l multiplies
/// q_i q_j q_l. Excited indices i, j, l range over a small basis of modes;
/// the projection index k ranges over a (possibly much larger) mode set.
class CouplingCoefficients {
public:
    CouplingCoefficients() = default;
    CouplingCoefficients(std::vector<Index> excited, std::vector<Index> projected);

    Index n_excited() const { return static_cast<Index>(excited_.size()); }
    Index n_projected() const { return static_cast<Index>(projected_.size()); }
    const std::vector<Index>& excited() const { return excited_; }
    const std::vector<Index>& projected() const { return projected_; }

    /// Local pair/triple enumeration over the excited basis, i <= j (<= l).
    Index pair_index(Index i, Index j) const;
    Index triple_index(Index i, Index j, Index l) const;
    Index n_pairs() const;
    Index n_triples() const;

    Real& alpha(Index k, Index i, Index j);
    Real alpha(Index k, Index i, Index j) const;
    Real& beta(Index k, Index i, Index j, Index l);
    Real beta(Index k, Index i, Index j, Index l) const;

    bool has_alpha(Index k, Index i, Index j) const;
    bool has_beta(Index k, Index i, Index j, Index l) const;

    /// Position of a global mode id within the projection set (-1 if absent).
    Index projected_row(Index global_mode) const;

    /// Column vectors over the projection set.
    VecX alpha_column(Index i, Index j) const;
    VecX beta_column(Index i, Index j, Index l) const;

    /// CSV with 1-based global mode ids, one coefficient per line:
    ///   alpha,k,i,j,value
    ///   beta,k,i,j,l,value
    /// Rows are ordered by kind, then k, then the excited indices, so output
    /// is byte-stable across runs.
    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<Index> excited_;
    std::vector<Index> projected_;
    MatX alpha_;               // n_projected x n_pairs
    MatX beta_;                // n_projected x n_triples
    std::vector<bool> alpha_set_;
    std::vector<bool> beta_set_;
};

} // namespace romforge::step
