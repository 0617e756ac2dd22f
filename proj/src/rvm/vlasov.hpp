#pragma once

#include "rvm/characteristics.hpp"
#include "rvm/distribution.hpp"
#include "rvm/field.hpp"
#include "rvm/grid.hpp"
#include "rvm/sampler.hpp"

namespace rvm {

// Velocity moments (rho, j1, j2) by tensor trapezoid over the full v grid;
// x nodes outside the stored support are exactly zero.
CurrentSlice moments(const DistributionState& f, const PhaseSpaceGrid& g,
                     const VelocityTables& vt);

// Generic weighted v-moment: weight is a (nv+1)^2 node array (row-major j,k)
// multiplied into the trapezoid weights.  Used for the |vhat2| and Lorentz
// (kinetic energy) moments.
std::vector<double> weighted_moment(const DistributionState& f,
                                    const PhaseSpaceGrid& g,
                                    const VelocityTables& vt,
                                    const std::vector<double>& weight);

// Semi-Lagrangian transport step t -> t + dt (dt = grid dt): every node in
// the active window is traced backward through the sampled fields with four
// RK4 substeps and filled with the trilinear interpolant of f at the foot.
// The interpolant is clamped to [0, max of its stencil] (local maximum
// principle, exact positivity) and values below 1e-14 * max f are flushed
// to zero so the tolerance-zero support cannot creep across the grid.
DistributionState advance_f(const DistributionState& f,
                            const FieldSampler& fields,
                            const PhaseSpaceGrid& g);

}  // namespace rvm
