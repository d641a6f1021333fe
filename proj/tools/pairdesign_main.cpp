// Command-line front end: construct certified D-optimal paired-comparison
// designs, check designs against the equivalence theorem, realize and
// simulate them, and print the reference tables.
//
// Exit codes: 0 success (and certified where that applies), 1 valid input
// that fails certification, 2 usage or parse errors.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairdesign/pairdesign.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUncertified = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open design file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

pairdesign::DepthDesign load_design(const std::string& path) {
  return pairdesign::parse_design_document(read_file(path)).to_depth_design();
}

std::vector<double> default_beta(std::int64_t p) {
  std::vector<double> beta(static_cast<std::size_t>(p));
  for (std::int64_t t = 0; t < p; ++t)
    beta[static_cast<std::size_t>(t)] = 1.0 / static_cast<double>(1 + t);
  return beta;
}

int run_design(int k, const std::string& out_path) {
  const pairdesign::OptimalDesignResult result = pairdesign::d_optimal_design(k);

  // Guard against transcription slips in the closed-form weights: when a
  // closed form exists for this K and disagrees with the optimizer beyond
  // 1e-6 on its own support, the numeric result wins and we warn.
  if (const auto analytic = pairdesign::analytic_weight(k)) {
    const pairdesign::DepthDesign restricted =
        pairdesign::optimize_weights(k, {k, analytic->intermediate_depth});
    if (std::abs(restricted.weight(k) - analytic->full_depth_weight) > 1e-6)
      std::cerr << "warning: closed-form weight for K=" << k
                << " disagrees with the optimizer; using the numeric result\n";
    if (analytic->intermediate_depth != result.support_depths.front())
      std::cerr << "note: closed-form support {" << k << "," << analytic->intermediate_depth
                << "} is not the certified optimum for K=" << k << "\n";
  }

  write_output(pairdesign::to_json_text(pairdesign::make_design_document(result)), out_path);
  return result.certified ? kExitOk : kExitUncertified;
}

int run_check(const std::string& path) {
  const pairdesign::DepthDesign design = load_design(path);
  const pairdesign::KwCertification cert = pairdesign::kw_certify(design);
  for (int d = 0; d <= design.attribute_count(); ++d) {
    std::printf("d=%-3d v/p = %.9f\n", d, cert.profile.normalized(d));
  }
  std::printf("max v/p = %.9f -> %s\n", cert.kw_max,
              cert.certified ? "certified D-optimal" : "not optimal");
  return cert.certified ? kExitOk : kExitUncertified;
}

int run_realize(const std::string& path, std::int64_t n, const std::string& format,
                const std::string& out_path) {
  if (format != "csv") throw CLI::ValidationError("--format", "only 'csv' is supported");
  const pairdesign::RealizedDesign realized =
      pairdesign::realize_exact(load_design(path), n);
  if (realized.support_truncated)
    std::cerr << "warning: N is smaller than the design support; "
                 "some support pairs receive no replicate\n";
  write_output(pairdesign::format_exact_design_csv(realized.design), out_path);
  return kExitOk;
}

int run_simulate(const std::string& path, std::int64_t n, double sigma,
                 std::uint64_t seed, int reps, bool compare,
                 const std::string& out_path) {
  const pairdesign::DepthDesign design = load_design(path);
  const pairdesign::ModelSpec spec(design.attribute_count());
  const pairdesign::ExactDesign exact = pairdesign::realize_exact(design, n).design;
  pairdesign::SimulationConfig cfg;
  cfg.beta = default_beta(spec.p_total);
  cfg.sigma = sigma;
  cfg.seed = seed;
  cfg.replications = reps;
  const pairdesign::MonteCarloSummary mc = pairdesign::run_monte_carlo(exact, cfg);

  nlohmann::ordered_json j;
  j["k"] = design.attribute_count();
  j["n"] = n;
  j["sigma"] = sigma;
  j["seed"] = seed;
  j["replications"] = reps;
  j["beta_true"] = cfg.beta;
  j["beta_hat_mean"] = mc.beta_mean;
  j["covariance_frobenius_relative_error"] = mc.frobenius_relative_error;
  j["generalized_variance"] = mc.generalized_variance;
  if (compare) {
    const pairdesign::ExactDesign naive = pairdesign::realize_exact(
        pairdesign::DepthDesign::point_mass(design.attribute_count(), 1), n).design;
    const pairdesign::MonteCarloSummary mc_naive = pairdesign::run_monte_carlo(naive, cfg);
    j["naive_depth1_generalized_variance"] = mc_naive.generalized_variance;
    j["efficiency_ratio"] = mc_naive.generalized_variance / mc.generalized_variance;
  }
  write_output(j.dump(2) + "\n", out_path);
  return kExitOk;
}

int run_probe(int k_max) {
  const std::vector<pairdesign::ProbeReport> reports = pairdesign::conjecture_probe(k_max);
  std::cout << pairdesign::format_probe_report(reports);
  for (const pairdesign::ProbeReport& r : reports)
    if (!r.computed || !r.certified) return kExitUncertified;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D-optimal designs for paired comparisons of two-level attributes "
               "under a second-order-interactions model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pairdesign::kVersion));

  int k = 0;
  std::string design_file, out_path, format = "csv";
  std::int64_t n = 1;
  double sigma = 1.0;
  std::uint64_t seed = 20240101;
  int reps = 1000, k_max = 20;
  bool csv = false, compare = false;

  CLI::App* design = app.add_subcommand("design", "construct the certified D-optimal design");
  design->add_option("--k", k, "number of attributes (>= 3)")->required()
      ->check(CLI::Range(3, 1000));
  design->add_option("--out", out_path, "write the design document to a file");

  CLI::App* check = app.add_subcommand("check", "evaluate a design's variance profile");
  check->add_option("file", design_file, "design document (JSON)")->required();

  CLI::App* realize = app.add_subcommand("realize", "round a design to N comparisons");
  realize->add_option("file", design_file, "design document (JSON)")->required();
  realize->add_option("--n", n, "number of comparisons")->required()
      ->check(CLI::PositiveNumber);
  realize->add_option("--format", format, "output format (csv)");
  realize->add_option("--out", out_path, "write the listing to a file");

  CLI::App* simulate = app.add_subcommand("simulate", "replicated synthetic experiment");
  simulate->add_option("file", design_file, "design document (JSON)")->required();
  simulate->add_option("--n", n, "comparisons per replication")->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--sigma", sigma, "noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", seed, "random seed");
  simulate->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
  simulate->add_flag("--compare", compare, "also simulate the uniform depth-1 design");
  simulate->add_option("--out", out_path, "write the summary to a file");

  CLI::App* table1 = app.add_subcommand("table1", "optimal depths and weights, K = 4..10");
  table1->add_flag("--csv", csv, "emit CSV");
  CLI::App* table2 = app.add_subcommand("table2", "normalized variance profiles, K = 4..10");
  table2->add_flag("--csv", csv, "emit CSV");

  CLI::App* probe = app.add_subcommand("probe", "sweep K and test the two-depth pattern");
  probe->add_option("--kmax", k_max, "largest K to probe")->check(CLI::Range(4, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (design->parsed()) return run_design(k, out_path);
    if (check->parsed()) return run_check(design_file);
    if (realize->parsed()) return run_realize(design_file, n, format, out_path);
    if (simulate->parsed()) return run_simulate(design_file, n, sigma, seed, reps, compare, out_path);
    if (table1->parsed()) {
      std::cout << pairdesign::format_weight_table(csv);
      return kExitOk;
    }
    if (table2->parsed()) {
      std::cout << pairdesign::format_variance_table(csv);
      return kExitOk;
    }
    if (probe->parsed()) return run_probe(k_max);
  } catch (const pairdesign::CertificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUncertified;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed design document: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
