#pragma once

#include "romforge/fe/assembly.hpp"

#include <string>
#include <vector>

namespace romforge::modal {

using fe::Assembler;

/// Mass-normalized modes of (K, M), frequency-ascending.
struct ModeSet {
    VecX omega; ///< angular frequencies [rad/s]
    MatX phi;   ///< free-dof shapes, one column per mode, Phi^T M Phi = I

    Index count() const { return omega.size(); }
    VecX frequencies_hz() const;
};

struct ModalOptions {
    Index count = -1;            ///< -1: full spectrum (dense solver)
    Index dense_threshold = 3000; ///< partial requests up to this size run dense
    Real residual_tol = 1e-8;    ///< Lanczos acceptance: |K x - w^2 M x| <= tol |K x|
};

/// Dense path (Cholesky-reduced LAPACK solve) for the full spectrum or small
/// systems; shift-invert Lanczos with full reorthogonalization above the
/// threshold. Vectors are exactly mass-normalized in both paths.
ModeSet solve_modes(const Assembler& asmb, const ModalOptions& opts = {});

enum class ModeLabel { Bending, NonBending };

struct ModeInfo {
    ModeLabel label;
    Real transverse_ratio; ///< |transverse part| / |full part| on the midset
};

/// Labels modes as bending / non-bending from their restriction to a midset
/// (midline or midsurface). Also post-processes the shapes in place:
///  - frequency-degenerate clusters are rotated so that members are ordered
///    by decreasing transverse content on the midset (makes the orientation
///    of exactly degenerate pairs deterministic),
///  - every shape is sign-fixed so its largest-magnitude entry is positive.
std::vector<ModeInfo> classify_modes(const Assembler& asmb, ModeSet& modes, const std::string& midset,
                                     int transverse_dir, Real bending_threshold = 0.5);

/// Fraction of modal mass carried by one displacement direction:
/// sqrt(phi_d^T M phi_d) for a mass-normalized shape.
Real direction_mass_fraction(const Assembler& asmb, const VecX& phi, int dir);

} // namespace romforge::modal
