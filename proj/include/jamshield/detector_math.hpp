#pragma once

namespace jamshield {

struct DetectorParams {
  int num_samples = 1;       // N; the detection statistic has 2N degrees of freedom
  double noise_power = 0.0;  // sigma_J^2, linear units
  double threshold = 0.2;    // tau, linear units

  void validate() const;  // throws std::domain_error
};

// Standard normal upper-tail probability Q(x), absolute error <= 1e-12.
double gaussian_q(double x);

// Survival function Pr(chi2_dof(lambda) > x) for even dof = 2N, evaluated as
// the generalized Marcum Q-function Q_N(sqrt(lambda), sqrt(x)) by a
// mode-centered truncated series. Absolute error <= 1e-10.
double noncentral_chi2_sf(double x, int dof, double lambda);

// Probability that the jammer's energy detector fires when a transmission of
// power p_t is seen through gain h_tj. With noiseless sensing
// (noise_power == 0) the comparison against the threshold is exact on the
// represented values, returning 0.5 on an exact hit.
double detection_probability(double p_t, double h_tj, const DetectorParams& det);

}  // namespace jamshield
