// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. The CLI binary path must be
// passed as argv[1] for the determinism/exit-code criterion.

#include "mtf/analytic.hpp"
#include "mtf/montecarlo.hpp"
#include "mtf/quadrature.hpp"
#include "mtf/rng.hpp"
#include "mtf/special_fn.hpp"
#include "mtf/weights.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace mtf;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool passed,
            const std::string& detail) {
  std::cout << (passed ? "[PASS] " : "[FAIL] ") << "C" << index << " " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!passed) ++g_failures;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// ---------------------------------------------------------------- C1
void criterion1() {
  double worst = 0.0;
  bool ok = true;
  for (double g : {0.1, 0.2, 0.3, 0.4}) {
    const MomentValue m = limit_moment(g, 1);
    if (m.divergent) {
      ok = false;
      continue;
    }
    worst = std::max(worst, rel_err(m.value, g / (1.0 - 2.0 * g)));
  }
  ok = ok && worst <= 1e-12;
  for (double g : {0.5, 0.6}) ok = ok && limit_moment(g, 1).divergent;
  std::ostringstream detail;
  detail << "max rel err " << worst;
  report(1, "first-moment limit and finiteness threshold", ok, detail.str());
}

// ---------------------------------------------------------------- C2
void criterion2() {
  const double e2 = rel_err(limit_moment(0.25, 2).value, 2.5);
  const double closed2 = 0.25 * 1.25 / ((1.0 - 0.75) * (1.0 - 0.5));
  const double e2c = rel_err(limit_moment(0.25, 2).value, closed2);
  const double e3 = rel_err(limit_moment(0.2, 3).value, 25.0 / 3.0);
  const double closed3 =
      0.2 * 2.0 / ((1.0 - 0.8) * (1.0 - 0.6) * (1.0 - 0.4));
  const double e3c = rel_err(limit_moment(0.2, 3).value, closed3);
  const bool divergences =
      limit_moment(1.0 / 3.0, 2).divergent && limit_moment(0.25, 3).divergent;
  const bool ok = e2 <= 1e-12 && e2c <= 1e-12 && e3 <= 1e-12 &&
                  e3c <= 1e-12 && divergences;
  std::ostringstream detail;
  detail << "rel errs " << e2 << ", " << e3;
  report(2, "closed-form second and third moment limits", ok, detail.str());
}

// ---------------------------------------------------------------- C3
void criterion3() {
  const auto tri = CoefficientTriangle::build(5);
  const std::vector<std::vector<unsigned long>> expected = {
      {1}, {1, 1}, {1, 3, 1}, {1, 7, 6, 1}, {1, 15, 25, 10, 1}};
  bool ok = true;
  for (int k = 1; k <= 5; ++k)
    for (int l = 1; l <= k; ++l)
      ok = ok && tri.at(k, l) == wide_uint{expected[k - 1][l - 1]};
  report(3, "coefficient triangle rows 1-5", ok, "");
}

// ---------------------------------------------------------------- C4
void criterion4() {
  const QuadratureSpec spec{};
  bool ok = true;
  double worst = 0.0;
  std::string worst_at;
  for (double g : {0.1, 0.2, 0.3}) {
    for (long n : {5L, 10L, 50L}) {
      for (int k : {1, 2, 3}) {
        const double quad = Mkn_quadrature(g, n, k, spec);
        const double analytic = finite_n_Mk(g, n, k);
        const double err = rel_err(quad, analytic);
        const double tol = k == 3 ? 1e-5 : 1e-6;
        if (err > tol) ok = false;
        if (err > worst) {
          worst = err;
          std::ostringstream at;
          at << "g=" << g << " n=" << n << " k=" << k;
          worst_at = at.str();
        }
      }
    }
  }
  double worst_inner = 0.0;
  for (double g : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    for (long n : {5L, 10L, 50L}) {
      for (double c : {2.0, 3.0, 4.0}) {
        const double got = inner_integral(g, n, c, spec);
        const double want = g * hyp2f1(2.0, 1.0, 1.0 / g + 1.0, 1.0 - c / n);
        worst_inner = std::max(worst_inner, rel_err(got, want));
      }
    }
  }
  ok = ok && worst_inner <= 1e-6;
  std::ostringstream detail;
  detail << "worst Mk err " << worst << " at " << worst_at
         << ", worst inner err " << worst_inner;
  report(4, "quadrature/analytic identity grid", ok, detail.str());
}

// ---------------------------------------------------------------- C5
void criterion5() {
  bool ok = true;
  double worst_norm = 0.0;
  for (double g : {0.2, 0.3})
    for (long n : {5L, 20L})
      worst_norm = std::max(worst_norm, rel_err(laplace_Sn(g, n, 0.0), 1.0));
  ok = worst_norm <= 1e-6;

  QuadratureSpec tight;
  tight.rel_tol = 1e-10;
  tight.abs_tol = 1e-14;
  double worst_deriv = 0.0;
  for (double g : {0.2, 0.3}) {
    for (long n : {5L, 20L}) {
      const double h = 1e-4;
      auto one_sided = [&](double step) {
        const double f0 = laplace_Sn(g, n, 0.0, tight);
        const double f1 = laplace_Sn(g, n, step, tight);
        const double f2 = laplace_Sn(g, n, 2.0 * step, tight);
        return -(-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step);
      };
      const double d = (4.0 * one_sided(h / 2.0) - one_sided(h)) / 3.0;
      worst_deriv = std::max(worst_deriv, rel_err(d, finite_n_moment(g, n, 1)));
    }
  }
  ok = ok && worst_deriv <= 1e-4;
  std::ostringstream detail;
  detail << "worst normalization err " << worst_norm << ", worst derivative err "
         << worst_deriv;
  report(5, "Laplace transform normalization and derivative", ok, detail.str());
}

// ---------------------------------------------------------------- C6
void criterion6() {
  const double e2 = rel_err(finite_n_moment(0.25, 100, 1), 0.5);
  const double e3 = rel_err(finite_n_moment(0.25, 1000, 1), 0.5);
  const double e4 = rel_err(finite_n_moment(0.25, 10000, 1), 0.5);
  bool ok = e2 > e3 && e3 > e4 && e4 < 0.02;
  const double v2 = finite_n_moment(0.4, 100, 2);
  const double v3 = finite_n_moment(0.4, 1000, 2);
  const double v4 = finite_n_moment(0.4, 10000, 2);
  ok = ok && v2 < v3 && v3 < v4;
  std::ostringstream detail;
  detail << "gaps " << e2 << " > " << e3 << " > " << e4 << "; divergent ladder "
         << v2 << " < " << v3 << " < " << v4;
  report(6, "convergence and divergence along the n ladder", ok, detail.str());
}

// ---------------------------------------------------------------- C7
void criterion7() {
  const double g = 0.25;
  const int n = 500;
  const long weight_draws = 200;
  const long costs = 500;
  const auto model = WeightModel::stable(g, n);
  const auto chain =
      mc_moments(model, 2, weight_draws, costs, 20240801, McMethod::Chain);
  const auto exact =
      mc_moments(model, 2, weight_draws, costs, 20240801, McMethod::ExactAges);
  bool ok = true;
  std::ostringstream detail;
  for (int k = 1; k <= 2; ++k) {
    const double want = finite_n_moment(g, n, k);
    const double zc = std::abs(chain[k - 1].mean - want) / chain[k - 1].std_error;
    const double ze = std::abs(exact[k - 1].mean - want) / exact[k - 1].std_error;
    const double zb = std::abs(chain[k - 1].mean - exact[k - 1].mean) /
                      std::hypot(chain[k - 1].std_error, exact[k - 1].std_error);
    ok = ok && zc <= 3.0 && ze <= 3.0 && zb <= 3.0;
    detail << "k=" << k << ": chain " << zc << "σ, exact " << ze
           << "σ, between " << zb << "σ; ";
  }
  report(7, "Monte Carlo agreement at (0.25, 500)", ok, detail.str());
}

// ---------------------------------------------------------------- C8
void criterion8() {
  RngStream rng(8);
  const long draws = 100000;
  std::vector<double> xs(draws);
  for (auto& x : xs) x = sample_stable(0.5, 1.0, rng);
  bool ok = true;
  double worst = 0.0;
  for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    double mean = 0.0, m2 = 0.0;
    for (double x : xs) {
      const double v = std::exp(-s * x);
      mean += v;
      m2 += v * v;
    }
    mean /= draws;
    m2 /= draws;
    const double se = std::sqrt((m2 - mean * mean) / (draws - 1));
    const double z = std::abs(mean - std::exp(-std::pow(s, 0.5))) / se;
    ok = ok && z <= 3.0;
    worst = std::max(worst, z);
  }
  std::ostringstream detail;
  detail << "worst deviation " << worst << "σ over 1e5 draws";
  report(8, "stable sampler Laplace calibration", ok, detail.str());
}

// ---------------------------------------------------------------- C9
int run_cli(const std::string& cli, const std::string& args,
            const std::string& stdout_file) {
  const std::string cmd =
      cli + " " + args + " > " + stdout_file + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9(const std::string& cli) {
  if (cli.empty()) {
    report(9, "CLI determinism and exit codes", false,
           "CLI binary path not supplied");
    return;
  }
  const std::string common =
      "verify --seed 4242 --replicates 50 --samples 150";
  const int c1 = run_cli(cli, common + " --out accept_run1.csv", "accept_out1.txt");
  const int c2 = run_cli(cli, common + " --out accept_run2.csv", "accept_out2.txt");
  const bool identical = slurp("accept_run1.csv") == slurp("accept_run2.csv") &&
                         slurp("accept_out1.txt") == slurp("accept_out2.txt") &&
                         !slurp("accept_run1.csv").empty();
  const bool exit_ok = c1 == 0 && c2 == 0;

  const int fail_code =
      run_cli(cli, common + " --tol 1e-15", "accept_out3.txt");
  const int usage_code = run_cli(cli, "limits --gamma 1.5", "accept_out4.txt");
  const int parse_code = run_cli(cli, "limits --bogus 1", "accept_out5.txt");

  const bool ok = identical && exit_ok && fail_code == 1 && usage_code == 2 &&
                  parse_code == 2;
  std::ostringstream detail;
  detail << "identical=" << identical << " codes=" << c1 << "," << fail_code
         << "," << usage_code << "," << parse_code << " (want 0,1,2,2)";
  report(9, "CLI determinism and exit codes", ok, detail.str());
}

} // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9(cli);
  if (g_failures == 0)
    std::cout << "ACCEPTANCE: all 9 criteria passed\n";
  else
    std::cout << "ACCEPTANCE: " << g_failures << " criterion(s) failed\n";
  return g_failures == 0 ? 0 : 1;
}
