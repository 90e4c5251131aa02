#include "mtf/cli.hpp"

#include "mtf/analytic.hpp"
#include "mtf/montecarlo.hpp"
#include "mtf/quadrature.hpp"
#include "mtf/special_fn.hpp"
#include "mtf/weights.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace mtf::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Row {
  double gamma = 0.0;
  std::optional<long> n;
  int k = 1;
  std::string method;
  std::optional<double> value; // nullopt: divergent
  std::optional<double> std_error;
  std::optional<double> threshold;
};

void sort_rows(std::vector<Row>& rows) {
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    const long an = a.n.value_or(-1), bn = b.n.value_or(-1);
    return std::tie(a.gamma, an, a.k, a.method) <
           std::tie(b.gamma, bn, b.k, b.method);
  });
}

void write_csv(const std::vector<Row>& rows, bool with_threshold,
               std::ostream& out) {
  out << "gamma,n,k,method,value,stderr";
  if (with_threshold) out << ",threshold";
  out << "\n";
  for (const Row& r : rows) {
    out << fmt_double(r.gamma) << ",";
    if (r.n) out << *r.n;
    out << "," << r.k << "," << r.method << ",";
    out << (r.value ? fmt_double(*r.value) : std::string("divergent"));
    out << ",";
    if (r.std_error) out << fmt_double(*r.std_error);
    if (with_threshold) {
      out << ",";
      if (r.threshold) out << fmt_double(*r.threshold);
    }
    out << "\n";
  }
}

nlohmann::ordered_json meta_json(const RunConfig& config, const char* command) {
  nlohmann::ordered_json meta;
  meta["command"] = command;
  meta["seed"] = config.seed;
  meta["tol"] = config.tol;
  meta["quad_rel_tol"] = QuadratureSpec{}.rel_tol;
  meta["quad_abs_tol"] = QuadratureSpec{}.abs_tol;
  meta["version"] = kVersion;
  return meta;
}

void write_json(const std::vector<Row>& rows, const RunConfig& config,
                const char* command, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["meta"] = meta_json(config, command);
  auto& arr = doc["rows"] = nlohmann::ordered_json::array();
  for (const Row& r : rows) {
    nlohmann::ordered_json jr;
    jr["gamma"] = r.gamma;
    if (r.n) jr["n"] = *r.n; else jr["n"] = nullptr;
    jr["k"] = r.k;
    jr["method"] = r.method;
    if (r.value) jr["value"] = *r.value; else jr["value"] = "divergent";
    if (r.std_error) jr["stderr"] = *r.std_error; else jr["stderr"] = nullptr;
    if (r.threshold) jr["threshold"] = *r.threshold;
    arr.push_back(std::move(jr));
  }
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------
// verify machinery

struct Check {
  std::string name;
  bool passed = false;
  double achieved = 0.0;  // relative error, or sigma distance for MC
  double tolerance = 0.0; // matching threshold
};

double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

void check_rel(std::vector<Check>& checks, const std::string& name, double got,
               double want, double tol) {
  const double err = rel_err(got, want);
  checks.push_back({name, err <= tol, err, tol});
}

void check_true(std::vector<Check>& checks, const std::string& name, bool ok) {
  checks.push_back({name, ok, ok ? 0.0 : 1.0, 1.0});
}

std::vector<Check> run_verify_checks(const RunConfig& config,
                                     std::ostream& diag) {
  std::vector<Check> checks;
  const double qtol = config.tol;

  // Kingman first-moment limit and its divergence threshold
  for (double g : {0.1, 0.2, 0.3, 0.4}) {
    const MomentValue m = limit_moment(g, 1);
    check_rel(checks, "kingman_limit_g" + fmt_double(g),
              m.divergent ? std::nan("") : m.value, g / (1.0 - 2.0 * g), 1e-12);
  }
  for (double g : {0.5, 0.6})
    check_true(checks, "kingman_divergent_g" + fmt_double(g),
               limit_moment(g, 1).divergent);

  // closed-form second and third moments
  check_rel(checks, "second_moment_closed_form", limit_moment(0.25, 2).value,
            2.5, 1e-12);
  check_rel(checks, "third_moment_closed_form", limit_moment(0.2, 3).value,
            25.0 / 3.0, 1e-12);
  check_true(checks, "second_moment_divergent_at_third",
             limit_moment(1.0 / 3.0, 2).divergent);
  check_true(checks, "third_moment_divergent_at_quarter",
             limit_moment(0.25, 3).divergent);

  // coefficient triangle rows
  {
    const auto tri = CoefficientTriangle::build(5);
    const std::vector<std::vector<unsigned long>> expected = {
        {1}, {1, 1}, {1, 3, 1}, {1, 7, 6, 1}, {1, 15, 25, 10, 1}};
    bool ok = true;
    for (int k = 1; k <= 5; ++k)
      for (int l = 1; l <= k; ++l)
        ok = ok && tri.at(k, l) == expected[k - 1][l - 1];
    check_true(checks, "coefficient_triangle_rows_1_to_5", ok);
  }

  diag << "verify: analytic identities done\n";

  // quadrature cross-validation
  const QuadratureSpec spec{};
  for (double g : {0.1, 0.2, 0.3}) {
    for (long n : {5L, 10L, 50L}) {
      for (int k : {1, 2, 3}) {
        if (n <= k + 1) continue;
        const double analytic = finite_n_Mk(g, n, k);
        const double quad = Mkn_quadrature(g, n, k, spec);
        const double tol = k == 3 ? 10.0 * qtol : qtol;
        check_rel(checks,
                  "quad_identity_g" + fmt_double(g) + "_n" + std::to_string(n) +
                      "_k" + std::to_string(k),
                  quad, analytic, tol);
      }
    }
  }
  for (double g : {0.2, 0.4}) {
    for (long n : {10L, 50L}) {
      for (double c : {2.0, 3.0}) {
        const double got = inner_integral(g, n, c, spec);
        const double want =
            g * hyp2f1(2.0, 1.0, 1.0 / g + 1.0, 1.0 - c / n);
        check_rel(checks,
                  "inner_integral_g" + fmt_double(g) + "_n" +
                      std::to_string(n) + "_c" + fmt_double(c),
                  got, want, qtol);
      }
    }
  }

  diag << "verify: quadrature identities done\n";

  // Laplace transform normalization and first derivative
  for (const auto& [g, n] : std::vector<std::pair<double, long>>{
           {0.2, 5}, {0.3, 20}}) {
    check_rel(checks,
              "laplace_normalization_g" + fmt_double(g) + "_n" +
                  std::to_string(n),
              laplace_Sn(g, n, 0.0, spec), 1.0, 1e-6);
  }
  {
    QuadratureSpec tight;
    tight.rel_tol = 1e-10;
    tight.abs_tol = 1e-14;
    const double g = 0.25;
    const long n = 20;
    const double h = 1e-4;
    auto deriv = [&](double step) {
      const double f0 = laplace_Sn(g, n, 0.0, tight);
      const double f1 = laplace_Sn(g, n, step, tight);
      const double f2 = laplace_Sn(g, n, 2.0 * step, tight);
      return -(-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step);
    };
    const double d = (4.0 * deriv(h / 2.0) - deriv(h)) / 3.0;
    check_rel(checks, "laplace_derivative_matches_first_moment", d,
              finite_n_moment(g, n, 1), 1e-4);
  }

  diag << "verify: laplace checks done\n";

  // convergence along the n-ladder
  {
    const double target = 0.5;
    const double e2 = rel_err(finite_n_moment(0.25, 100, 1), target);
    const double e3 = rel_err(finite_n_moment(0.25, 1000, 1), target);
    const double e4 = rel_err(finite_n_moment(0.25, 10000, 1), target);
    check_true(checks, "first_moment_gap_decreases", e2 > e3 && e3 > e4);
    checks.push_back({"first_moment_gap_at_1e4", e4 < 0.02, e4, 0.02});
    const double v2 = finite_n_moment(0.4, 100, 2);
    const double v3 = finite_n_moment(0.4, 1000, 2);
    const double v4 = finite_n_moment(0.4, 10000, 2);
    check_true(checks, "divergent_regime_grows", v2 < v3 && v3 < v4);
  }

  // stable sampler calibration against its Laplace transform
  {
    RngStream rng(config.seed);
    const double g = 0.5;
    const long draws = 100000;
    std::vector<double> xs(draws);
    for (long i = 0; i < draws; ++i) xs[i] = sample_stable(g, 1.0, rng);
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
      const double want = std::exp(-std::pow(s, g));
      const double sigmas = std::abs(mean - want) / se;
      checks.push_back({"stable_laplace_s" + fmt_double(s), sigmas <= 3.0,
                        sigmas, 3.0});
    }
  }

  diag << "verify: sampler calibration done\n";

  // Monte Carlo vs analytic, both stationary samplers
  {
    const double g = 0.25;
    const int n = 250;
    const auto model = WeightModel::stable(g, n);
    const long reps = std::max<long>(2, config.replicates);
    const long samples = std::max<long>(2, config.samples);
    const auto chain =
        mc_moments(model, 2, reps, samples, config.seed, McMethod::Chain);
    const auto exact =
        mc_moments(model, 2, reps, samples, config.seed, McMethod::ExactAges);
    for (int k = 1; k <= 2; ++k) {
      const double want = finite_n_moment(g, n, k);
      const McEstimate& mc = chain[k - 1];
      const McEstimate& me = exact[k - 1];
      const double s_chain = std::abs(mc.mean - want) / mc.std_error;
      const double s_exact = std::abs(me.mean - want) / me.std_error;
      const double s_between = std::abs(mc.mean - me.mean) /
                               std::hypot(mc.std_error, me.std_error);
      checks.push_back({"mc_chain_vs_analytic_k" + std::to_string(k),
                        s_chain <= 3.0, s_chain, 3.0});
      checks.push_back({"mc_exact_vs_analytic_k" + std::to_string(k),
                        s_exact <= 3.0, s_exact, 3.0});
      checks.push_back({"mc_methods_agree_k" + std::to_string(k),
                        s_between <= 3.0, s_between, 3.0});
    }
  }

  diag << "verify: monte carlo checks done\n";
  return checks;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  const auto checks = run_verify_checks(config, diag);
  const long passed =
      std::count_if(checks.begin(), checks.end(),
                    [](const Check& c) { return c.passed; });
  const bool all = passed == static_cast<long>(checks.size());

  if (config.format == OutFormat::Json) {
    nlohmann::ordered_json doc;
    doc["meta"] = meta_json(config, "verify");
    auto& arr = doc["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : checks) {
      arr.push_back({{"name", c.name},
                     {"passed", c.passed},
                     {"achieved", c.achieved},
                     {"tolerance", c.tolerance}});
    }
    doc["all_passed"] = all;
    out << doc.dump(2) << "\n";
  } else {
    for (const Check& c : checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name
          << " achieved=" << fmt_double(c.achieved)
          << " tol=" << fmt_double(c.tolerance) << "\n";
    }
    out << "SUMMARY " << passed << "/" << checks.size() << " checks passed\n";
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------
// table commands

int cmd_limits(const RunConfig& config, std::ostream& out) {
  std::vector<Row> rows;
  for (double g : config.gammas) {
    for (int k = 1; k <= config.k_max; ++k) {
      const MomentValue m = limit_moment(g, k);
      Row r;
      r.gamma = g;
      r.k = k;
      r.method = "limit";
      if (!m.divergent) r.value = m.value;
      r.threshold = 1.0 / (k + 1);
      rows.push_back(std::move(r));
    }
  }
  sort_rows(rows);
  if (config.format == OutFormat::Csv)
    write_csv(rows, true, out);
  else
    write_json(rows, config, "limits", out);
  return 0;
}

int cmd_finite_n(const RunConfig& config, std::ostream& out) {
  std::vector<Row> rows;
  for (double g : config.gammas)
    for (long n : config.ns)
      for (int k = 1; k <= config.k_max; ++k) {
        Row r;
        r.gamma = g;
        r.n = n;
        r.k = k;
        r.method = "finite_n";
        r.value = finite_n_moment(g, n, k);
        rows.push_back(std::move(r));
      }
  sort_rows(rows);
  if (config.format == OutFormat::Csv)
    write_csv(rows, false, out);
  else
    write_json(rows, config, "finite-n", out);
  return 0;
}

int cmd_quadrature_check(const RunConfig& config, std::ostream& out) {
  const QuadratureSpec spec{};
  const auto tri = CoefficientTriangle::build(config.k_max);
  std::vector<Row> rows;
  for (double g : config.gammas)
    for (long n : config.ns) {
      std::vector<double> mk_quad(config.k_max);
      for (int l = 1; l <= config.k_max; ++l)
        mk_quad[l - 1] = Mkn_quadrature(g, n, l, spec);
      for (int k = 1; k <= config.k_max; ++k) {
        double quad_moment = 0.0;
        for (int l = 1; l <= k; ++l)
          quad_moment += tri.at_double(k, l) * mk_quad[l - 1];
        Row ra;
        ra.gamma = g;
        ra.n = n;
        ra.k = k;
        ra.method = "finite_n";
        ra.value = finite_n_moment(g, n, k);
        rows.push_back(std::move(ra));
        Row rq;
        rq.gamma = g;
        rq.n = n;
        rq.k = k;
        rq.method = "quadrature";
        rq.value = quad_moment;
        rows.push_back(std::move(rq));
      }
    }
  sort_rows(rows);
  if (config.format == OutFormat::Csv)
    write_csv(rows, false, out);
  else
    write_json(rows, config, "quadrature-check", out);
  return 0;
}

int cmd_simulate(const RunConfig& config, std::ostream& out,
                 std::ostream& diag) {
  std::vector<Row> rows;
  for (double g : config.gammas)
    for (long n : config.ns) {
      const auto model = WeightModel::stable(g, static_cast<int>(n));
      auto add = [&](const std::vector<McEstimate>& est, const char* method) {
        for (const McEstimate& e : est) {
          Row r;
          r.gamma = g;
          r.n = n;
          r.k = e.order;
          r.method = method;
          r.value = e.mean;
          r.std_error = e.std_error;
          rows.push_back(std::move(r));
        }
      };
      if (config.method != McChoice::Exact) {
        if (config.burn_in >= 0)
          add(chain_estimate(model, config.k_max, config.burn_in,
                             config.samples, config.replicates, config.seed),
              "mc_chain");
        else
          add(mc_moments(model, config.k_max, config.replicates,
                         config.samples, config.seed, McMethod::Chain),
              "mc_chain");
      }
      if (config.method != McChoice::Chain)
        add(mc_moments(model, config.k_max, config.replicates, config.samples,
                       config.seed, McMethod::ExactAges),
            "mc_exact");
      diag << "simulate: gamma=" << fmt_double(g) << " n=" << n << " done\n";
    }
  sort_rows(rows);
  if (config.format == OutFormat::Csv)
    write_csv(rows, false, out);
  else
    write_json(rows, config, "simulate", out);
  return 0;
}

} // namespace

std::vector<double> parse_real_grid(const std::string& text) {
  std::vector<double> vals;
  auto parse_one = [](const std::string& tok) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number: '" + tok + "'");
    }
    if (pos != tok.size())
      throw ConfigError("cannot parse number: '" + tok + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(parse_one(tok));
    if (parts.size() != 3)
      throw ConfigError("range must be start:stop:step, got '" + text + "'");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0)) throw ConfigError("range step must be positive");
    for (double v = start; v <= stop + 1e-9 * step; v += step)
      vals.push_back(v);
    if (vals.empty()) throw ConfigError("empty range: '" + text + "'");
    return vals;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) vals.push_back(parse_one(tok));
  }
  if (vals.empty()) throw ConfigError("empty grid: '" + text + "'");
  return vals;
}

std::vector<long> parse_int_grid(const std::string& text) {
  const auto reals = parse_real_grid(text);
  std::vector<long> vals;
  vals.reserve(reals.size());
  for (double v : reals) {
    const long n = std::lround(v);
    if (std::abs(v - n) > 1e-9)
      throw ConfigError("expected integer grid entry, got " + fmt_double(v));
    vals.push_back(n);
  }
  return vals;
}

void validate(const RunConfig& config) {
  const bool needs_gamma = config.command != Command::Verify;
  const bool needs_n = config.command == Command::FiniteN ||
                       config.command == Command::QuadratureCheck ||
                       config.command == Command::Simulate;
  if (needs_gamma && config.gammas.empty())
    throw ConfigError("--gamma is required for this command");
  for (double g : config.gammas)
    if (!(g > 0.0 && g < 1.0))
      throw ConfigError("gamma must lie in (0,1), got " + fmt_double(g));
  if (needs_n && config.ns.empty())
    throw ConfigError("--n is required for this command");
  for (long n : config.ns)
    if (n < 1) throw ConfigError("n must be >= 1");
  if (config.k_max < 1 || config.k_max > 32)
    throw ConfigError("--kmax must lie in [1, 32]");
  if (config.command == Command::QuadratureCheck)
    for (long n : config.ns)
      if (n <= config.k_max + 1)
        throw ConfigError("quadrature-check requires every n > kmax + 1");
  if (config.samples < 2) throw ConfigError("--samples must be >= 2");
  if (config.replicates < 2) throw ConfigError("--replicates must be >= 2");
  if (config.burn_in < -1) throw ConfigError("--burn-in must be >= 0");
  if (!(config.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (config.command == Command::Simulate)
    for (long n : config.ns)
      if (n > 100000) throw ConfigError("simulate: n above 1e5 not supported");
}

int run_command(const RunConfig& config, std::ostream& out,
                std::ostream& diag) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    diag << "error: " << e.what() << "\n";
    return 2;
  }
  switch (config.command) {
    case Command::Limits: return cmd_limits(config, out);
    case Command::FiniteN: return cmd_finite_n(config, out);
    case Command::QuadratureCheck: return cmd_quadrature_check(config, out);
    case Command::Simulate: return cmd_simulate(config, out, diag);
    case Command::Verify: return cmd_verify(config, out, diag);
  }
  return 2;
}

} // namespace mtf::cli
