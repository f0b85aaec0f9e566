#include "jamshield/detector_math.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jamshield {

namespace {

constexpr double kTailTol = 1e-14;       // truncation budget, well under the 1e-10 contract
constexpr long long kMaxTerms = 50'000'000;

[[noreturn]] void series_failure(const char* what) {
  throw std::runtime_error(std::string("noncentral_chi2_sf: ") + what);
}

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
// Series for x < a + 1, Lentz continued fraction otherwise (the usual split).
double gamma_q_regularized(double a, double x) {
  if (x == 0.0) return 1.0;
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (long long i = 0; i < kMaxTerms; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-17) {
        return 1.0 - sum * std::exp(log_prefix);
      }
    }
    series_failure("incomplete gamma series did not converge");
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (long long i = 1; i < kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double mult = d * c;
    h *= mult;
    if (std::fabs(mult - 1.0) < 1e-16) {
      return h * std::exp(log_prefix);
    }
  }
  series_failure("incomplete gamma continued fraction did not converge");
}

}  // namespace

void DetectorParams::validate() const {
  if (num_samples < 1) throw std::domain_error("DetectorParams: num_samples must be >= 1");
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw std::domain_error("DetectorParams: threshold must be positive and finite");
  if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
    throw std::domain_error("DetectorParams: noise_power must be nonnegative and finite");
}

double gaussian_q(double x) {
  if (!std::isfinite(x)) throw std::domain_error("gaussian_q: non-finite input");
  return 0.5 * std::erfc(x * 0.7071067811865475244);
}

double noncentral_chi2_sf(double x, int dof, double lambda) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("noncentral_chi2_sf: x must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::domain_error("noncentral_chi2_sf: lambda must be >= 0");
  if (dof < 2 || dof % 2 != 0) throw std::domain_error("noncentral_chi2_sf: dof must be even and >= 2");

  const double n = static_cast<double>(dof / 2);
  if (x == 0.0) return 1.0;
  const double y = 0.5 * x;
  const double h = 0.5 * lambda;
  if (h == 0.0) return gamma_q_regularized(n, y);

  // Poisson mixture of central chi-square survivals, summed outward from the
  // Poisson mode so huge noncentralities never underflow the leading term.
  const long long k0 = static_cast<long long>(std::floor(h));
  const double pois0 =
      std::exp(static_cast<double>(k0) * std::log(h) - h - std::lgamma(static_cast<double>(k0) + 1.0));
  const double g0 = gamma_q_regularized(n + static_cast<double>(k0), y);
  // d_j = e^{-y} y^{n+j} / (n+j)! advances Q(n+j, y) to Q(n+j+1, y).
  const double d0 =
      std::exp((n + static_cast<double>(k0)) * std::log(y) - y - std::lgamma(n + static_cast<double>(k0) + 1.0));

  double sum = 0.0;

  double pois = pois0, g = g0, d = d0;
  for (long long j = k0;; ++j) {
    sum += pois * g;
    g += d;
    d *= y / (n + static_cast<double>(j) + 1.0);
    pois *= h / (static_cast<double>(j) + 1.0);
    const double ratio = h / (static_cast<double>(j) + 2.0);
    if (ratio < 1.0 && pois / (1.0 - ratio) < kTailTol) break;  // geometric bound, g <= 1
    if (j - k0 >= kMaxTerms) series_failure("forward sum did not converge");
  }

  pois = pois0;
  g = g0;
  d = d0;
  for (long long j = k0 - 1; j >= 0; --j) {
    pois *= (static_cast<double>(j) + 1.0) / h;
    d *= (n + static_cast<double>(j) + 1.0) / y;
    g -= d;
    if (g < 0.0) g = 0.0;
    sum += pois * g;
    const double ratio = static_cast<double>(j) / h;
    if (ratio < 1.0 && pois * ratio / (1.0 - ratio) < kTailTol) break;
  }

  if (sum < 0.0) return 0.0;
  if (sum > 1.0) return 1.0;
  return sum;
}

double detection_probability(double p_t, double h_tj, const DetectorParams& det) {
  if (!(p_t >= 0.0) || !std::isfinite(p_t)) throw std::domain_error("detection_probability: p_t must be >= 0");
  if (!(h_tj >= 0.0) || !std::isfinite(h_tj))
    throw std::domain_error("detection_probability: h_tj must be >= 0");
  det.validate();

  const double received = p_t * h_tj;
  if (det.noise_power == 0.0) {
    // Exact comparison on the represented values; the power grid and the
    // thresholds are chosen so exact hits happen (e.g. 0.4 * 0.5 == 0.2).
    if (received > det.threshold) return 1.0;
    if (received < det.threshold) return 0.0;
    return 0.5;
  }
  const double lambda = static_cast<double>(det.num_samples) * received / det.noise_power;
  return noncentral_chi2_sf(det.threshold / det.noise_power, 2 * det.num_samples, lambda);
}

}  // namespace jamshield
