#include "quantest/cli/app.hpp"

#include "quantest/cli/csv.hpp"
#include "quantest/covariance.hpp"
#include "quantest/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>

namespace quantest::cli {

namespace {

// Everything is captured as text first so negative values and "-inf" parse
// uniformly and errors can name the offending flag.
struct RawArgs {
  std::string x, y, column, format = "text";
  std::string measure, u, coef, u2, coef2, p;
  std::vector<std::string> coef_rows;
  std::string alternative = "two.sided", level = "0.95", true_q, min_q;
  bool log = false, back = false, no_bw_correct = false;
  int type = kDefaultQuantileType;
  std::string var_method = "qor", qor_sigma = "standard", kernel = "epanechnikov";
  std::string ineq, J = "100", true_ineq;
  std::string dist = "normal", seed;
  std::size_t n = 100, reps = 1000, B = 2000;
  unsigned threads = 0;
};

double to_double(const std::string& text, const char* flag) {
  std::string_view s = text;
  if (s == "inf" || s == "Inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-Inf") return -std::numeric_limits<double>::infinity();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw UsageError(std::string("invalid number '") + text + "' for " + flag);
  }
  return v;
}

std::vector<double> to_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    std::string item(rest.substr(0, comma));
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    out.push_back(to_double(item, flag));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

void add_input(CLI::App* app, RawArgs& raw, bool two_samples) {
  app->add_option("x", raw.x, "CSV file with the (first) sample")->required();
  if (two_samples) app->add_option("y", raw.y, "CSV file with an independent second sample");
  app->add_option("--column", raw.column, "Column name or 1-based index (default: first)");
}

void add_format(CLI::App* app, RawArgs& raw) {
  app->add_option("--format", raw.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
}

void add_variance_method(CLI::App* app, RawArgs& raw) {
  app->add_option("--type", raw.type, "Sample quantile type (4..9)")->check(CLI::Range(4, 9));
  app->add_option("--var-method", raw.var_method, "Quantile density method")
      ->check(CLI::IsMember({"qor", "density"}));
  app->add_option("--qor-sigma", raw.qor_sigma,
                  "Lognormal QOR sigma: standard (sigma = 1) or fitted to the data")
      ->check(CLI::IsMember({"standard", "fitted"}));
  app->add_option("--kernel", raw.kernel, "Kernel for the direct quantile density estimator")
      ->check(CLI::IsMember({"epanechnikov", "gaussian"}));
  app->add_flag("--no-bw-correct", raw.no_bw_correct,
                "Do not clamp the bandwidth to the unit interval window");
}

void add_measure(CLI::App* app, RawArgs& raw) {
  app->add_option("--measure", raw.measure, "Named measure (median, iqr, rCViqr, bowley, ...)");
  app->add_option("--u", raw.u, "Numerator probabilities, comma separated");
  app->add_option("--coef", raw.coef, "Numerator coefficients (default all ones)");
  app->add_option("--u2", raw.u2, "Denominator probabilities");
  app->add_option("--coef2", raw.coef2, "Denominator coefficients");
  app->add_option("--coef-row", raw.coef_rows,
                  "Coefficient matrix row over --u (give twice: numerator, denominator)");
  app->add_option("--p", raw.p, "Tail parameter of the named measure");
}

void add_test_options(CLI::App* app, RawArgs& raw) {
  app->add_option("--alternative", raw.alternative, "two.sided, less or greater")
      ->check(CLI::IsMember({"two.sided", "two_sided", "less", "greater"}));
  app->add_option("--level", raw.level, "Confidence level");
}

void add_transform_options(CLI::App* app, RawArgs& raw) {
  app->add_option("--true-q", raw.true_q, "Null value (use --true-q=-1 for negatives)");
  app->add_flag("--log", raw.log, "Work on the log scale");
  app->add_flag("--back", raw.back, "Back-transform the log-scale results (needs --log)");
  app->add_option("--min-q", raw.min_q, "Lower bound for the reported interval");
}

void add_inequality(CLI::App* app, RawArgs& raw, const char* flag) {
  app->add_option(flag, raw.ineq, "Inequality measure: QRI or G2")
      ->check(CLI::IsMember({"QRI", "G2"}));
  app->add_option("--J", raw.J, "Grid size J");
}

QdMethod build_method(const RawArgs& raw) {
  QdMethod m;
  m.kind = raw.var_method == "density" ? QdMethodKind::DensityInversion : QdMethodKind::Qor;
  m.sigma = raw.qor_sigma == "fitted" ? LognormalSigma::Fitted : LognormalSigma::Standard;
  m.kernel.kind = raw.kernel == "gaussian" ? KernelKind::Gaussian : KernelKind::Epanechnikov;
  m.bw_correct = !raw.no_bw_correct;
  return m;
}

TestOptions build_options(const RawArgs& raw) {
  TestOptions opts;
  opts.alternative = parse_alternative(raw.alternative);
  opts.conf_level = to_double(raw.level, "--level");
  if (!raw.true_q.empty()) opts.true_q = to_double(raw.true_q, "--true-q");
  if (!raw.min_q.empty()) opts.min_q = to_double(raw.min_q, "--min-q");
  opts.log_transf = raw.log;
  opts.back_transf = raw.back;
  opts.quantile_type = raw.type;
  opts.var_method = build_method(raw);
  if (opts.back_transf && !opts.log_transf) throw UsageError("--back requires --log");
  if (!(opts.conf_level > 0.0 && opts.conf_level < 1.0)) {
    throw UsageError("--level must lie in (0, 1)");
  }
  return opts;
}

MeasureSpec build_measure(const RawArgs& raw) {
  const bool custom = !raw.u.empty();
  const bool custom_parts = !raw.coef.empty() || !raw.u2.empty() || !raw.coef2.empty() ||
                            !raw.coef_rows.empty();
  if (!raw.measure.empty() && (custom || custom_parts)) {
    throw UsageError("--measure conflicts with --u/--coef/--u2/--coef2/--coef-row");
  }
  if (!custom && custom_parts) throw UsageError("--coef, --u2, --coef2 and --coef-row need --u");
  try {
    if (!custom) {
      std::optional<double> p;
      if (!raw.p.empty()) p = to_double(raw.p, "--p");
      return resolve_measure(raw.measure.empty() ? "median" : raw.measure, p);
    }
    if (!raw.p.empty()) throw UsageError("--p applies to named measures only");
    const auto u = to_list(raw.u, "--u");
    if (!raw.coef_rows.empty()) {
      if (!raw.coef.empty() || !raw.coef2.empty() || !raw.u2.empty()) {
        throw UsageError("--coef-row cannot be combined with --coef, --u2 or --coef2");
      }
      std::vector<std::vector<double>> rows;
      for (const auto& r : raw.coef_rows) rows.push_back(to_list(r, "--coef-row"));
      return MeasureSpec::from_matrix(u, rows);
    }
    return MeasureSpec::from_vectors(u, raw.coef.empty() ? std::vector<double>{}
                                                         : to_list(raw.coef, "--coef"),
                                     raw.u2.empty() ? std::vector<double>{}
                                                    : to_list(raw.u2, "--u2"),
                                     raw.coef2.empty() ? std::vector<double>{}
                                                       : to_list(raw.coef2, "--coef2"));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

InequalitySpec build_inequality(const RawArgs& raw, const char* flag) {
  InequalitySpec spec;
  if (!raw.ineq.empty()) spec.kind = parse_ineq_kind(raw.ineq);
  const double J = to_double(raw.J, "--J");
  if (J != std::floor(J) || J < 2 || J > 1e6) throw UsageError("--J must be an integer >= 2");
  spec.J = static_cast<int>(J);
  if (!raw.true_ineq.empty()) spec.true_ineq = to_double(raw.true_ineq, "--true-ineq");
  spec.alternative = parse_alternative(raw.alternative);
  spec.conf_level = to_double(raw.level, "--level");
  spec.quantile_type = raw.type;
  spec.var_method = build_method(raw);
  if (!(spec.conf_level > 0.0 && spec.conf_level < 1.0)) {
    throw UsageError("--level must lie in (0, 1)");
  }
  (void)flag;
  return spec;
}

std::uint64_t resolve_seed(const std::string& flag_value) {
  std::string text = flag_value;
  const char* source = "--seed";
  if (text.empty()) {
    if (const char* env = std::getenv("QUANTEST_SEED"); env != nullptr && *env != '\0') {
      text = env;
      source = "QUANTEST_SEED";
    } else {
      return kDefaultSeed;
    }
  }
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw UsageError(std::string("invalid seed '") + text + "' from " + source);
  }
  return v;
}

const CLI::App* deepest_parsed(const CLI::App* app) {
  for (const auto* sub : app->get_subcommands()) {
    if (sub->parsed()) return deepest_parsed(sub);
  }
  return app;
}

std::string display_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

Sample load(const std::string& path, const std::string& column, std::ostream& err) {
  LoadedColumn loaded = load_column(path, column);
  if (loaded.skipped > 0) {
    err << "warning: skipped " << loaded.skipped
        << " row(s) with missing or non-numeric values in column '" << loaded.column << "' of "
        << path << "\n";
  }
  return std::move(loaded.sample);
}

std::string measure_name(const CliConfig& c) {
  if (c.inequality) return std::string(to_string(c.inequality->kind));
  return c.measure.name;
}

}  // namespace

CliConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Distribution-free inference for quantile-based measures", "quantest"};
  app.require_subcommand(1);
  RawArgs raw;

  auto* qtest = app.add_subcommand("qtest", "Test and interval for a quantile measure");
  add_input(qtest, raw, true);
  add_measure(qtest, raw);
  add_test_options(qtest, raw);
  add_transform_options(qtest, raw);
  add_variance_method(qtest, raw);
  add_format(qtest, raw);

  auto* qineq = app.add_subcommand("qineq", "Test and interval for the QRI or G2 index");
  add_input(qineq, raw, true);
  add_inequality(qineq, raw, "--measure");
  qineq->add_option("--true-ineq", raw.true_ineq, "Null value (one sample default 0.5)");
  add_test_options(qineq, raw);
  add_variance_method(qineq, raw);
  add_format(qineq, raw);

  auto* qcov_cmd = app.add_subcommand("qcov", "Covariance matrix of quantile estimators");
  add_input(qcov_cmd, raw, false);
  qcov_cmd->add_option("--u", raw.u, "Probabilities, comma separated")->required();
  add_variance_method(qcov_cmd, raw);
  add_format(qcov_cmd, raw);

  auto* verify = app.add_subcommand("verify", "Monte Carlo and bootstrap verification");
  verify->require_subcommand(1);
  auto* coverage = verify->add_subcommand("coverage", "Empirical coverage of Wald intervals");
  coverage->add_option("--dist", raw.dist, "normal[:mu,sigma], lognormal[:mu,sigma], "
                                           "uniform[:a,b] or exponential[:rate]");
  coverage->add_option("--n", raw.n, "Sample size")->check(CLI::PositiveNumber);
  coverage->add_option("--reps", raw.reps, "Replications (>= 100)");
  coverage->add_option("--seed", raw.seed, "Seed (default: $QUANTEST_SEED, else 1234)");
  coverage->add_option("--threads", raw.threads, "Worker threads (0 = all cores)");
  add_measure(coverage, raw);
  add_inequality(coverage, raw, "--ineq");
  add_test_options(coverage, raw);
  add_transform_options(coverage, raw);
  add_variance_method(coverage, raw);

  auto* bootstrap = verify->add_subcommand("bootstrap", "Bootstrap standard error of a measure");
  add_input(bootstrap, raw, false);
  bootstrap->add_option("--B", raw.B, "Bootstrap resamples (>= 500)");
  bootstrap->add_option("--seed", raw.seed, "Seed (default: $QUANTEST_SEED, else 1234)");
  bootstrap->add_option("--threads", raw.threads, "Worker threads (0 = all cores)");
  add_measure(bootstrap, raw);
  add_inequality(bootstrap, raw, "--ineq");
  add_variance_method(bootstrap, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{deepest_parsed(&app)->help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliConfig c;
  c.x_path = raw.x;
  if (!raw.y.empty()) c.y_path = raw.y;
  c.column = raw.column;
  c.format = parse_format(raw.format);
  c.n = raw.n;
  c.reps = raw.reps;
  c.B = raw.B;
  c.dist = raw.dist;
  c.threads = raw.threads;

  try {
    if (qtest->parsed()) {
      c.command = Command::QTest;
      c.options = build_options(raw);
      c.measure = build_measure(raw);
    } else if (qineq->parsed()) {
      c.command = Command::QIneq;
      c.inequality = build_inequality(raw, "--measure");
    } else if (qcov_cmd->parsed()) {
      c.command = Command::QCov;
      c.options.quantile_type = raw.type;
      c.options.var_method = build_method(raw);
      c.probs = to_list(raw.u, "--u");
      for (double p : c.probs) {
        if (!(p > 0.0 && p < 1.0)) throw UsageError("--u probabilities must lie in (0, 1)");
      }
    } else if (coverage->parsed() || bootstrap->parsed()) {
      c.command = coverage->parsed() ? Command::VerifyCoverage : Command::VerifyBootstrap;
      c.seed = resolve_seed(raw.seed);
      if (!raw.ineq.empty()) {
        if (!raw.measure.empty() || !raw.u.empty()) {
          throw UsageError("--ineq conflicts with --measure/--u");
        }
        c.inequality = build_inequality(raw, "--ineq");
      } else {
        c.measure = build_measure(raw);
      }
      if (coverage->parsed()) {
        c.options = build_options(raw);
        if (c.reps < 100) throw UsageError("--reps must be at least 100");
        (void)Distribution::parse(c.dist);
      } else {
        c.options.quantile_type = raw.type;
        c.options.var_method = build_method(raw);
        if (c.B < 500) throw UsageError("--B must be at least 500");
      }
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return c;
}

CliConfig parse_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"quantest"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

int run(const CliConfig& c, std::ostream& out, std::ostream& err) {
  try {
    switch (c.command) {
      case Command::QTest: {
        const Sample x = load(c.x_path, c.column, err);
        TestResult r;
        if (c.y_path) {
          const Sample y = load(*c.y_path, c.column, err);
          r = q_test_two(x, y, c.measure, c.options);
          r.data_name = display_name(c.x_path) + " and " + display_name(*c.y_path);
        } else {
          r = q_test_one(x, c.measure, c.options);
          r.data_name = display_name(c.x_path);
        }
        out << render(r, c.format);
        break;
      }
      case Command::QIneq: {
        const Sample x = load(c.x_path, c.column, err);
        std::optional<Sample> y;
        if (c.y_path) y.emplace(load(*c.y_path, c.column, err));
        TestResult r = qineq_test(x, y, *c.inequality);
        r.data_name = display_name(c.x_path);
        if (c.y_path) r.data_name += " and " + display_name(*c.y_path);
        out << render(r, c.format);
        break;
      }
      case Command::QCov: {
        const Sample x = load(c.x_path, c.column, err);
        out << render(qcov(x, c.probs, c.options.var_method, c.options.quantile_type), c.format);
        break;
      }
      case Command::VerifyCoverage: {
        SimConfig cfg;
        cfg.dist = Distribution::parse(c.dist);
        cfg.n = c.n;
        cfg.reps = c.reps;
        cfg.options = c.options;
        cfg.seed = c.seed;
        cfg.threads = c.threads;
        if (c.inequality) {
          cfg.measure = *c.inequality;
        } else {
          cfg.measure = c.measure;
        }
        const CoverageResult res = coverage_sim(cfg);
        const double level =
            c.inequality ? c.inequality->conf_level : c.options.conf_level;
        out << "coverage\t" << cfg.dist.describe() << "\t" << measure_name(c) << "\tn=" << c.n
            << "\treps=" << res.reps << "\tlevel=" << level << "\t" << res.coverage << "\t"
            << res.avg_width << "\t" << res.mc_se << "\t" << res.true_value << "\t"
            << res.failures << "\n";
        nlohmann::json j{{"kind", "coverage"},
                         {"distribution", cfg.dist.describe()},
                         {"measure", measure_name(c)},
                         {"n", c.n},
                         {"reps", res.reps},
                         {"level", level},
                         {"coverage", res.coverage},
                         {"avg_width", res.avg_width},
                         {"mc_se", res.mc_se},
                         {"true_value", res.true_value},
                         {"failures", res.failures},
                         {"seed", c.seed},
                         {"rng", kRngName}};
        out << j.dump() << "\n";
        break;
      }
      case Command::VerifyBootstrap: {
        const Sample x = load(c.x_path, c.column, err);
        SimMeasure measure = c.measure;
        double delta_se = 0.0;
        if (c.inequality) {
          measure = *c.inequality;
          delta_se = std::sqrt(ineq_variance(x, *c.inequality));
        } else {
          delta_se = std::sqrt(working_estimate(x, c.measure, c.options).variance);
        }
        const BootstrapResult res =
            bootstrap_se(x, measure, c.B, c.seed, c.options.quantile_type, c.threads);
        out << "bootstrap\t" << measure_name(c) << "\tn=" << x.size() << "\tB=" << res.B << "\t"
            << res.se << "\t" << delta_se << "\t" << delta_se / res.se << "\t" << res.failures
            << "\n";
        nlohmann::json j{{"kind", "bootstrap"},
                         {"measure", measure_name(c)},
                         {"n", x.size()},
                         {"B", res.B},
                         {"bootstrap_se", res.se},
                         {"bootstrap_mean", res.mean},
                         {"delta_se", delta_se},
                         {"ratio", delta_se / res.se},
                         {"failures", res.failures},
                         {"seed", c.seed},
                         {"rng", kRngName}};
        out << j.dump() << "\n";
        break;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& help) {
    out << help.text;
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun 'quantest --help' for usage.\n";
    return 2;
  }
  return run(config, out, err);
}

}  // namespace quantest::cli
