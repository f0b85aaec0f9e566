#include "jamshield/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "jamshield/agents.hpp"
#include "jamshield/harness.hpp"

namespace jamshield {

namespace {

double normal_pdf(double t) {
  return std::exp(-0.5 * t * t) * 0.39894228040143267793994605993438;  // 1/sqrt(2 pi)
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = normal_pdf(lm);
  const double frm = normal_pdf(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double normal_upper_tail_quadrature(double x) {
  if (x < 0.0) return 1.0 - normal_upper_tail_quadrature(-x);
  const double a = x;
  const double b = x + 45.0;  // density beyond is below 1e-300
  const double m = 0.5 * (a + b);
  const double fa = normal_pdf(a), fm = normal_pdf(m), fb = normal_pdf(b);
  return adaptive_simpson(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 1e-15, 60);
}

double mc_noncentral_chi2_sf(Rng& rng, double x, int dof, double lambda, long draws) {
  const double mu = std::sqrt(lambda);
  long hits = 0;
  for (long i = 0; i < draws; ++i) {
    double sum = 0.0;
    for (int k = 0; k < dof; ++k) {
      const double z = rng.normal01() + (k == 0 ? mu : 0.0);
      sum += z * z;
    }
    if (sum > x) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

double mc_detection_probability(Rng& rng, double p_t, double h_tj, const DetectorParams& det,
                                long draws) {
  const double lambda = det.num_samples * p_t * h_tj / det.noise_power;
  return mc_noncentral_chi2_sf(rng, det.threshold / det.noise_power, 2 * det.num_samples, lambda,
                               draws);
}

namespace {

struct Checker {
  std::ostream& out;
  bool ok = true;

  void item(const char* name, bool pass, double detail = 0.0, bool with_detail = false) {
    char buf[160];
    if (with_detail) {
      std::snprintf(buf, sizeof(buf), "[%s] %s (%.3g)\n", pass ? "ok" : "FAIL", name, detail);
    } else {
      std::snprintf(buf, sizeof(buf), "[%s] %s\n", pass ? "ok" : "FAIL", name);
    }
    out << buf;
    ok = ok && pass;
  }
};

void check_gaussian_q(Checker& c) {
  c.item("gaussian_q(0) == 0.5", gaussian_q(0.0) == 0.5);

  double max_err = 0.0;
  for (double x : {-4.0, -1.5, 0.3, 1.0, 2.0, 3.0, 5.5}) {
    max_err = std::max(max_err, std::fabs(gaussian_q(x) - normal_upper_tail_quadrature(x)));
  }
  c.item("gaussian_q matches quadrature oracle to 1e-12", max_err <= 1e-12, max_err, true);

  double max_sym = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    max_sym = std::max(max_sym, std::fabs(gaussian_q(x) + gaussian_q(-x) - 1.0));
  }
  c.item("gaussian_q(x) + gaussian_q(-x) == 1 to 1e-12", max_sym <= 1e-12, max_sym, true);

  // Bisection on the quadrature oracle for the 5% point.
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_upper_tail_quadrature(mid) > 0.05 ? lo : hi) = mid;
  }
  const double x05 = 0.5 * (lo + hi);
  c.item("5% tail point near 1.6448536", std::fabs(x05 - 1.6448536269514722) <= 1e-7);
  c.item("gaussian_q at 5% point", std::fabs(gaussian_q(x05) - 0.05) <= 1e-10);
}

void check_noncentral(Checker& c) {
  double max_err = 0.0;
  for (double x = 0.0; x <= 50.0; x += 0.25) {
    max_err = std::max(max_err, std::fabs(noncentral_chi2_sf(x, 2, 0.0) - std::exp(-0.5 * x)));
  }
  c.item("noncentral_chi2_sf(x,2,0) == exp(-x/2) to 1e-10 on [0,50]", max_err <= 1e-10, max_err,
         true);

  c.item("noncentral_chi2_sf(0,dof,lambda) == 1",
         noncentral_chi2_sf(0.0, 4, 3.7) == 1.0 && noncentral_chi2_sf(0.0, 2, 0.0) == 1.0);

  Rng rng(0xd7e7ec);
  struct Point {
    double x;
    int dof;
    double lambda;
  } points[] = {{2.0, 2, 2.0}, {5.0, 4, 1.5}, {1.0, 2, 8.0}};
  double worst = 0.0;
  for (const auto& p : points) {
    const double mc = mc_noncentral_chi2_sf(rng, p.x, p.dof, p.lambda, 1000000);
    worst = std::max(worst, std::fabs(mc - noncentral_chi2_sf(p.x, p.dof, p.lambda)));
  }
  c.item("noncentral_chi2_sf vs 1e6-draw Monte Carlo within 0.005", worst <= 0.005, worst, true);
}

void check_detector_limit(Checker& c) {
  // Away from the threshold by at least 0.05*tau the noisy detector collapses
  // onto the noiseless branch as sigma_J^2 -> 0.
  double worst = 0.0;
  for (double sigma : {1e-6, 1e-9}) {
    for (double tau : {0.2, 0.4}) {
      for (double received : {0.5 * tau, 0.94 * tau, 1.06 * tau, 1.5 * tau}) {
        DetectorParams noisy{1, sigma, tau};
        DetectorParams clean{1, 0.0, tau};
        const double diff =
            std::fabs(detection_probability(received, 1.0, noisy) -
                      detection_probability(received, 1.0, clean));
        worst = std::max(worst, diff);
      }
    }
  }
  c.item("sigma_j2 -> 0 limit matches noiseless branch to 1e-3", worst <= 1e-3, worst, true);
}

void check_q_update(Checker& c) {
  {
    QTable t(2, 3);
    q_update(t, 0, 1, 2.0, 1, 0.1, 0.95);
    const double expected = 0.0 + 0.1 * (2.0 + 0.95 * 0.0 - 0.0);
    c.item("q_update on a zero table", t.at(0, 1) == expected && t.at(0, 1) == 0.2);
  }
  {
    QTable t(2, 3);
    t.at(0, 0) = 1.0;
    t.at(1, 2) = 2.0;
    q_update(t, 0, 0, 0.0, 1, 0.1, 0.95);
    const double expected = 1.0 + 0.1 * (0.0 + 0.95 * 2.0 - 1.0);
    c.item("q_update with a bootstrap term", t.at(0, 0) == expected);
  }
  {
    QTable t(2, 3);
    t.at(1, 1) = 5.0;
    q_update(t, 1, 1, 3.0, 0, 1.0, 0.0);
    c.item("q_update with alpha=1, gamma=0 overwrites with r", t.at(1, 1) == 3.0);
  }
}

void check_td_targets(Checker& c) {
  Rng rng(0x7d7a9e);
  Mlp target(1, 16, 16, 8);
  target.init_uniform(rng);
  std::vector<Transition> batch(64);
  for (auto& t : batch) {
    t.state = rng.uniform01();
    t.action = rng.below(8);
    t.reward = 6.0 * rng.uniform01();
    t.next_state = rng.uniform01();
    t.episode_end = rng.below(5) == 0;
  }
  MlpWorkspace ws;
  const std::vector<double> y = td_targets(batch, target, 0.95, ws);

  bool equal = y.size() == batch.size();
  std::vector<double> q(8);
  MlpWorkspace ws2;
  for (std::size_t i = 0; i < batch.size() && equal; ++i) {
    double expected = batch[i].reward;
    if (!batch[i].episode_end) {
      target.forward({&batch[i].next_state, 1}, q, ws2);
      double best = q[0];
      for (double v : q) best = std::max(best, v);
      expected += 0.95 * best;
    }
    equal = y[i] == expected;
  }
  c.item("td_targets equals the scalar-loop oracle elementwise", equal);
}

void check_gradient(Checker& c) {
  Rng rng(0x6ead5e);
  Mlp online(1, 64, 64, 10);
  online.init_uniform(rng);
  Mlp target(1, 64, 64, 10);
  target.init_uniform(rng);

  std::vector<Transition> batch(16);
  for (auto& t : batch) {
    t.state = rng.uniform01();
    t.action = rng.below(10);
    t.reward = 6.0 * rng.uniform01();
    t.next_state = rng.uniform01();
    t.episode_end = rng.below(8) == 0;
  }
  MlpWorkspace ws;
  const std::vector<double> y = td_targets(batch, target, 0.95, ws);

  std::vector<double> grad(online.parameter_count());
  dqn_batch_gradient(online, batch, y, ws, grad);

  const double step = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t idx = static_cast<std::size_t>(rng.below(static_cast<int>(online.parameter_count())));
    auto params = online.parameters();
    const double saved = params[idx];
    params[idx] = saved + step;
    const double up = dqn_batch_loss(online, batch, y, ws);
    params[idx] = saved - step;
    const double down = dqn_batch_loss(online, batch, y, ws);
    params[idx] = saved;
    const double fd = (up - down) / (2.0 * step);
    const double denom = std::max({std::fabs(fd), std::fabs(grad[idx]), 1e-6});
    worst = std::max(worst, std::fabs(grad[idx] - fd) / denom);
  }
  c.item("DQN gradient vs central differences, rel err <= 1e-4", worst <= 1e-4, worst, true);
}

void check_baseline_total(Checker& c) {
  const ExperimentPreset preset = preset_by_name("table2-fixed");
  const RunResult r = run_experiment(preset, 1);
  c.item("table2-fixed sigma_j2=0 total within 428.55 +- 0.5",
         std::fabs(r.summary.total_reward - 428.55) <= 0.5, r.summary.total_reward, true);
}

}  // namespace

bool run_verification(std::ostream& out) {
  Checker c{out};
  check_gaussian_q(c);
  check_noncentral(c);
  check_detector_limit(c);
  check_q_update(c);
  check_td_targets(c);
  check_gradient(c);
  check_baseline_total(c);
  out << (c.ok ? "verification passed\n" : "verification FAILED\n");
  return c.ok;
}

}  // namespace jamshield
