#pragma once

#include <iosfwd>

#include "jamshield/detector_math.hpp"
#include "jamshield/rng.hpp"

namespace jamshield {

// Quadrature oracle for the normal upper tail: adaptive Simpson integration
// of the density, independent of the erfc-based implementation it checks.
double normal_upper_tail_quadrature(double x);

// Empirical survival of the 2N-dof noncentral chi-square: sums of squared
// unit normals with the noncentrality placed in the first component.
double mc_noncentral_chi2_sf(Rng& rng, double x, int dof, double lambda, long draws);

double mc_detection_probability(Rng& rng, double p_t, double h_tj, const DetectorParams& det,
                                long draws);

// The checks behind the `verify` subcommand: detector identities, TD and
// gradient unit oracles, and the analytic fixed-baseline total. Prints one
// line per check; returns true when everything passed.
bool run_verification(std::ostream& out);

}  // namespace jamshield
