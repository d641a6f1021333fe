#ifndef PAIRDESIGN_SIMULATE_HPP
#define PAIRDESIGN_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "pairdesign/designs.hpp"
#include "pairdesign/matrix.hpp"
#include "pairdesign/model.hpp"

namespace pairdesign {

/// Ground truth for a synthetic paired-comparison experiment. Errors are
/// N(0, sigma^2); the model only asks for uncorrelated homoscedastic noise,
/// normality is a simulation choice that makes the covariance checks sharp.
struct SimulationConfig {
  std::vector<double> beta;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  int replications = 1;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// One standard normal draw per two engine outputs (Box-Muller, cosine
// branch). Spelled out here so identical seeds give identical streams on
// every platform, which std::normal_distribution does not promise.
inline double standard_normal(std::mt19937_64& engine) {
  const double u1 = static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace detail

/// Stream seed for one replication, derived from the base seed.
inline std::uint64_t replication_seed(std::uint64_t base, int replication) {
  return detail::splitmix64(base ^ detail::splitmix64(static_cast<std::uint64_t>(replication)));
}

/// Draws one response per comparison: Y_n = (f(i_n) - f(j_n))' beta + eps_n.
/// Identical (design, config) input gives a bit-identical output vector.
inline std::vector<double> simulate_responses(const ExactDesign& design,
                                              const SimulationConfig& cfg) {
  if (design.pairs.empty()) throw std::domain_error("simulate_responses: empty design");
  const ModelSpec spec(design.attribute_count);
  if (static_cast<std::int64_t>(cfg.beta.size()) != spec.p_total)
    throw std::domain_error("simulate_responses: beta length does not match p");
  if (!(cfg.sigma >= 0.0)) throw std::domain_error("simulate_responses: sigma must be >= 0");

  std::mt19937_64 engine(cfg.seed);
  std::vector<double> responses;
  responses.reserve(design.pairs.size());
  for (const PairedComparison& pair : design.pairs) {
    const std::vector<double> diff = difference_vector(pair, spec);
    double mean = 0.0;
    for (std::size_t t = 0; t < diff.size(); ++t) mean += diff[t] * cfg.beta[t];
    responses.push_back(mean + cfg.sigma * detail::standard_normal(engine));
  }
  return responses;
}

struct LeastSquaresFit {
  std::vector<double> beta_hat;
  double sigma2_hat = std::numeric_limits<double>::quiet_NaN();  // RSS / (N - p)
  DenseMatrix covariance;  // sigma2_hat * (N M(xi_N))^{-1}
};

/// Ordinary least squares on the difference-vector design matrix. The Gram
/// matrix X'X = N M(xi_N) has integer entries and is accumulated exactly.
inline LeastSquaresFit least_squares(const ExactDesign& design,
                                     const std::vector<double>& responses) {
  if (design.pairs.empty()) throw std::domain_error("least_squares: empty design");
  const ModelSpec spec(design.attribute_count);
  const int p = static_cast<int>(spec.p_total);
  const std::int64_t n = design.total();
  if (static_cast<std::int64_t>(responses.size()) != n)
    throw std::domain_error("least_squares: response length does not match design");

  std::vector<std::int64_t> gram(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0);
  std::vector<double> xty(static_cast<std::size_t>(p), 0.0);
  std::vector<std::vector<double>> rows;
  rows.reserve(design.pairs.size());
  for (std::size_t idx = 0; idx < design.pairs.size(); ++idx) {
    rows.push_back(difference_vector(design.pairs[idx], spec));
    const std::vector<double>& x = rows.back();
    for (int r = 0; r < p; ++r) {
      const std::int64_t xr = static_cast<std::int64_t>(x[static_cast<std::size_t>(r)]);
      xty[static_cast<std::size_t>(r)] += x[static_cast<std::size_t>(r)] * responses[idx];
      if (xr == 0) continue;
      for (int c = 0; c < p; ++c)
        gram[static_cast<std::size_t>(r) * p + c] +=
            xr * static_cast<std::int64_t>(x[static_cast<std::size_t>(c)]);
    }
  }
  DenseMatrix xtx(p);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c)
      xtx(r, c) = static_cast<double>(gram[static_cast<std::size_t>(r) * p + c]);

  LeastSquaresFit fit{dense_solve(xtx, xty), std::numeric_limits<double>::quiet_NaN(),
                      DenseMatrix(p)};

  double rss = 0.0;
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    double fitted = 0.0;
    for (int t = 0; t < p; ++t)
      fitted += rows[idx][static_cast<std::size_t>(t)] * fit.beta_hat[static_cast<std::size_t>(t)];
    const double resid = responses[idx] - fitted;
    rss += resid * resid;
  }
  if (n > p) fit.sigma2_hat = rss / static_cast<double>(n - p);

  const DenseMatrix xtx_inv = dense_inverse(xtx);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c) fit.covariance(r, c) = fit.sigma2_hat * xtx_inv(r, c);
  return fit;
}

/// Replicated simulate-and-fit study of one exact design.
struct MonteCarloSummary {
  int replications = 0;
  std::vector<double> beta_mean;
  DenseMatrix empirical_covariance;    // sample covariance of beta_hat
  DenseMatrix theoretical_covariance;  // sigma^2 (N M(xi_N))^{-1}
  double frobenius_relative_error = 0.0;
  double generalized_variance = 0.0;   // det of the empirical covariance
};

inline MonteCarloSummary run_monte_carlo(const ExactDesign& design,
                                         const SimulationConfig& cfg) {
  if (cfg.replications < 2) throw std::domain_error("run_monte_carlo: need >= 2 replications");
  const ModelSpec spec(design.attribute_count);
  const int p = static_cast<int>(spec.p_total);
  const int reps = cfg.replications;

  std::vector<std::vector<double>> estimates;
  estimates.reserve(static_cast<std::size_t>(reps));
  for (int rep = 0; rep < reps; ++rep) {
    SimulationConfig one = cfg;
    one.seed = replication_seed(cfg.seed, rep);
    const std::vector<double> y = simulate_responses(design, one);
    estimates.push_back(least_squares(design, y).beta_hat);
  }

  MonteCarloSummary out{reps, std::vector<double>(static_cast<std::size_t>(p), 0.0),
                        DenseMatrix(p), DenseMatrix(p), 0.0, 0.0};
  for (const auto& b : estimates)
    for (int t = 0; t < p; ++t) out.beta_mean[static_cast<std::size_t>(t)] += b[static_cast<std::size_t>(t)];
  for (double& m : out.beta_mean) m /= static_cast<double>(reps);

  for (const auto& b : estimates)
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c)
        out.empirical_covariance(r, c) +=
            (b[static_cast<std::size_t>(r)] - out.beta_mean[static_cast<std::size_t>(r)]) *
            (b[static_cast<std::size_t>(c)] - out.beta_mean[static_cast<std::size_t>(c)]);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c)
      out.empirical_covariance(r, c) /= static_cast<double>(reps - 1);

  const DenseMatrix m = info_matrix_exact(design, spec);
  DenseMatrix nm(p);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c) nm(r, c) = static_cast<double>(design.total()) * m(r, c);
  const DenseMatrix nm_inv = dense_inverse(nm);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c)
      out.theoretical_covariance(r, c) = cfg.sigma * cfg.sigma * nm_inv(r, c);

  double num = 0.0, den = 0.0;
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c) {
      const double diff = out.empirical_covariance(r, c) - out.theoretical_covariance(r, c);
      num += diff * diff;
      den += out.theoretical_covariance(r, c) * out.theoretical_covariance(r, c);
    }
  out.frobenius_relative_error = std::sqrt(num / den);
  out.generalized_variance = dense_det(out.empirical_covariance);
  return out;
}

}  // namespace pairdesign

#endif  // PAIRDESIGN_SIMULATE_HPP
