// Command-line front end: threshold, verify, experiment and sweep.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sketchlb/bound_engine.hpp"
#include "sketchlb/experiment.hpp"
#include "sketchlb/hard_instance.hpp"
#include "sketchlb/verify.hpp"

using namespace sketchlb;

namespace {

const std::map<std::string, OutputFormat> kFormats{{"json", OutputFormat::Json},
                                                   {"csv", OutputFormat::Csv}};
const std::map<std::string, Conditioning> kConditioning{{"analytic", Conditioning::Analytic},
                                                        {"mc", Conditioning::MonteCarlo}};

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  write(out);
  if (!out) throw std::runtime_error("failed writing output file " + path);
}

std::optional<double> optional_eps(double eps) {
  return eps > 0.0 ? std::optional<double>(eps) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-instance laboratory for linear sketches of p-th moments"};
  app.set_config("--config", "", "Optional TOML/INI file; command-line flags take precedence");
  app.require_subcommand(1);

  // threshold
  std::size_t th_n = 4096;
  double th_p = 4.0, th_eps = 0.0;
  std::string th_format = "text";
  auto* threshold = app.add_subcommand("threshold", "Print the constants and the measurement threshold");
  threshold->add_option("--n", th_n, "Dimension n")->capture_default_str();
  threshold->add_option("--p", th_p, "Moment order p > 2")->capture_default_str();
  threshold->add_option("--eps", th_eps, "Slack eps in (0, 1-2/p); default (1-2/p)/2");
  threshold->add_option("--format", th_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // verify
  std::string kind;
  VerifyConfig vc;
  double v_eps = 0.0;
  std::size_t v_m = 0;
  auto* verify = app.add_subcommand("verify", "Run a property suite; exits nonzero on failure");
  verify->add_option("kind", kind, "lemma1 | chi2 | events | frobenius | dpi")
      ->required()
      ->check(CLI::IsMember({"lemma1", "chi2", "events", "frobenius", "dpi"}));
  verify->add_option("--n", vc.n, "Dimension n")->capture_default_str();
  verify->add_option("--p", vc.p, "Moment order p > 2")->capture_default_str();
  verify->add_option("--eps", v_eps, "Slack eps in (0, 1-2/p)");
  verify->add_option("--m", v_m, "Fixed number of measurements (suite default otherwise)");
  verify->add_option("--trials", vc.trials, "Monte Carlo trials")->capture_default_str();
  verify->add_option("--cases", vc.cases, "Random cases per suite")->capture_default_str();
  verify->add_option("--seed", vc.seed, "Seed")->capture_default_str();

  // experiment
  ExperimentConfig ec;
  double e_eps = 0.0;
  std::vector<std::string> e_m;
  std::string e_format = "json", e_out, e_conditioning = "analytic";
  auto* experiment = app.add_subcommand("experiment", "Empirical success rates next to the bound chain");
  experiment->add_option("--n", ec.n, "Dimension n")->capture_default_str();
  experiment->add_option("--p", ec.p, "Moment order p > 2")->capture_default_str();
  experiment->add_option("--eps", e_eps, "Slack eps in (0, 1-2/p)");
  experiment->add_option("--m", e_m, "Measurement counts, or \"auto\"")->delimiter(',');
  experiment->add_option("--trials", ec.trials, "Monte Carlo trials per m")->capture_default_str();
  experiment->add_option("--seed", ec.seed, "Seed")->capture_default_str();
  experiment->add_option("--format", e_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  experiment->add_option("--out", e_out, "Output path (stdout if omitted)");
  experiment->add_option("--conditioning", e_conditioning, "analytic or mc")
      ->check(CLI::IsMember({"analytic", "mc"}))
      ->capture_default_str();

  // sweep
  double s_p = 4.0, s_eps = 0.0;
  std::size_t s_min = 1024, s_max = 1048576;
  std::string s_format = "csv", s_out;
  auto* sweep = app.add_subcommand("sweep", "Analytic thresholds and chi2 bounds over doubling n");
  sweep->add_option("--p", s_p, "Moment order p > 2")->capture_default_str();
  sweep->add_option("--eps", s_eps, "Slack eps in (0, 1-2/p)");
  sweep->add_option("--n-min", s_min, "Smallest n")->capture_default_str();
  sweep->add_option("--n-max", s_max, "Largest n")->capture_default_str();
  sweep->add_option("--format", s_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sweep->add_option("--out", s_out, "Output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*threshold) {
      const HardInstanceParams params = derive_params(th_n, th_p, optional_eps(th_eps));
      const double real = measurement_threshold_real(params.n, params.p, params.eps);
      const std::size_t m = measurement_threshold(params.n, params.p, params.eps);
      if (th_format == "json") {
        std::cout << nlohmann::json{{"n", params.n},     {"p", params.p},         {"eps", params.eps},
                                    {"t_p", params.t_p}, {"C", params.C},         {"C1", params.C1},
                                    {"spike", params.spike}, {"m_threshold_real", real},
                                    {"m_threshold", m}}
                         .dump(2)
                  << '\n';
      } else {
        std::printf("n                 %zu\n", params.n);
        std::printf("p                 %.17g\n", params.p);
        std::printf("eps               %.17g\n", params.eps);
        std::printf("t_p               %.17g\n", params.t_p);
        std::printf("C                 %.17g\n", params.C);
        std::printf("C1                %.17g\n", params.C1);
        std::printf("spike             %.17g\n", params.spike);
        std::printf("m_threshold_real  %.17g\n", real);
        std::printf("m_threshold       %zu\n", m);
      }
      return 0;
    }

    if (*verify) {
      vc.eps = optional_eps(v_eps);
      if (v_m > 0) vc.m = v_m;
      const VerifyReport report = run_verification(parse_verify_kind(kind), vc);
      for (const auto& c : report.checks) {
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.label.c_str(), c.detail.c_str());
      }
      std::printf("%s: %s\n", report.suite.c_str(), report.passed() ? "PASS" : "FAIL");
      return report.passed() ? 0 : 1;
    }

    if (*experiment) {
      ec.eps = optional_eps(e_eps);
      ec.conditioning = kConditioning.at(e_conditioning);
      for (const auto& token : e_m) {
        if (token == "auto") continue;
        ec.m_list.push_back(static_cast<std::size_t>(std::stoull(token)));
      }
      const ExperimentResult result = run_experiment(ec);
      emit(e_out, [&](std::ostream& out) { write_result(out, result, kFormats.at(e_format)); });
      return 0;
    }

    if (*sweep) {
      const auto rows = run_sweep(s_p, optional_eps(s_eps), s_min, s_max);
      const double eps = derive_params(1, s_p, optional_eps(s_eps)).eps;
      emit(s_out, [&](std::ostream& out) { write_sweep(out, rows, s_p, eps, kFormats.at(s_format)); });
      return 0;
    }
  } catch (const RetriesExhausted& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
