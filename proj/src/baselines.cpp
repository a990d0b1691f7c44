#include "olda/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "olda/errors.hpp"
#include "olda/rng.hpp"

namespace olda {

double digamma(double x) {
  if (x < 1e-6) x = 1e-6;
  double result = 0.0;
  // Upward recurrence into the asymptotic region.
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                            inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return result;
}

namespace {

constexpr double kBetaFloor = 1e-12;

double floored(double x) { return x < kBetaFloor ? kBetaFloor : x; }

// Evidence lower bound for one document given responsibilities phi and the
// variational Dirichlet gamma, with a symmetric prior alpha.
double vb_lower_bound(const Document& d, const TopicMatrix& beta, double alpha,
                      const std::vector<double>& gamma, const Matrix& phi) {
  const std::size_t k_count = gamma.size();
  const double gamma_total = std::accumulate(gamma.begin(), gamma.end(), 0.0);
  const double psi_total = digamma(gamma_total);

  std::vector<double> elog_theta(k_count);
  for (std::size_t k = 0; k < k_count; ++k) elog_theta[k] = digamma(gamma[k]) - psi_total;

  double bound = std::lgamma(static_cast<double>(k_count) * alpha) -
                 static_cast<double>(k_count) * std::lgamma(alpha);
  for (std::size_t k = 0; k < k_count; ++k) bound += (alpha - 1.0) * elog_theta[k];

  for (std::size_t j = 0; j < d.ids.size(); ++j) {
    const double dj = static_cast<double>(d.cnts[j]);
    for (std::size_t k = 0; k < k_count; ++k) {
      const double p = phi(j, k);
      if (p <= 0.0) continue;
      bound += dj * p * (elog_theta[k] + std::log(floored(beta(k, d.ids[j]))) - std::log(p));
    }
  }

  bound -= std::lgamma(gamma_total);
  for (std::size_t k = 0; k < k_count; ++k) {
    bound += std::lgamma(gamma[k]) - (gamma[k] - 1.0) * elog_theta[k];
  }
  return bound;
}

}  // namespace

VbResult vb_infer_detailed(const Document& d, const TopicMatrix& beta, double alpha,
                           const VbConfig& cfg) {
  const std::size_t k_count = beta.rows();
  const double n_d = static_cast<double>(d.token_count());

  VbResult result;
  result.gamma.assign(k_count, alpha + n_d / static_cast<double>(k_count));
  result.phi = Matrix(d.ids.size(), k_count);

  std::vector<double> psi_gamma(k_count), log_phi(k_count), gamma_new(k_count);
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    for (std::size_t k = 0; k < k_count; ++k) psi_gamma[k] = digamma(result.gamma[k]);
    std::fill(gamma_new.begin(), gamma_new.end(), alpha);

    for (std::size_t j = 0; j < d.ids.size(); ++j) {
      const std::uint32_t term = d.ids[j];
      double max_log = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < k_count; ++k) {
        log_phi[k] = std::log(floored(beta(k, term))) + psi_gamma[k];
        max_log = std::max(max_log, log_phi[k]);
      }
      double total = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        log_phi[k] = std::exp(log_phi[k] - max_log);
        total += log_phi[k];
      }
      const double dj = static_cast<double>(d.cnts[j]);
      for (std::size_t k = 0; k < k_count; ++k) {
        const double p = log_phi[k] / total;
        result.phi(j, k) = p;
        gamma_new[k] += dj * p;
      }
    }
    result.gamma = gamma_new;
    result.iterations = iter;

    const double bound = vb_lower_bound(d, beta, alpha, result.gamma, result.phi);
    if (!result.bounds.empty() && cfg.tol > 0.0) {
      const double prev = result.bounds.back();
      const double improvement = (bound - prev) / std::fabs(prev);
      result.bounds.push_back(bound);
      if (improvement < cfg.tol) break;
    } else {
      result.bounds.push_back(bound);
    }
  }

  const double gamma_total =
      std::accumulate(result.gamma.begin(), result.gamma.end(), 0.0);
  result.theta.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) result.theta[k] = result.gamma[k] / gamma_total;
  return result;
}

TopicMixture vb_infer(const Document& d, const TopicMatrix& beta, double alpha,
                      const VbConfig& cfg) {
  return vb_infer_detailed(d, beta, alpha, cfg).theta;
}

TopicMixture cgs_infer(const Document& d, const TopicMatrix& beta, double alpha,
                       const CgsConfig& cfg, std::uint64_t seed) {
  const std::size_t k_count = beta.rows();
  if (cfg.n_samples <= cfg.burn_in) {
    throw std::invalid_argument("cgs_infer: n_samples must exceed burn_in");
  }
  if (k_count == 1) return {1.0};
  if (d.empty()) return TopicMixture(k_count, 1.0 / static_cast<double>(k_count));

  std::vector<std::uint32_t> tokens;
  tokens.reserve(static_cast<std::size_t>(d.token_count()));
  for (std::size_t j = 0; j < d.ids.size(); ++j) {
    tokens.insert(tokens.end(), static_cast<std::size_t>(d.cnts[j]), d.ids[j]);
  }
  const double len = static_cast<double>(tokens.size());

  auto rng = make_rng(derive_seed({seed, 0x63677321ull}));
  std::vector<double> counts(k_count, 0.0), weights(k_count);
  std::vector<std::size_t> assignment(tokens.size());

  auto sample_topic = [&](std::uint32_t term) {
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      weights[k] = floored(beta(k, term)) * (counts[k] + alpha);
      total += weights[k];
    }
    double u = uniform01(rng) * total;
    for (std::size_t k = 0; k + 1 < k_count; ++k) {
      u -= weights[k];
      if (u < 0.0) return k;
    }
    return k_count - 1;
  };

  // Progressive initialization, then full sweeps.
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t z = sample_topic(tokens[i]);
    assignment[i] = z;
    counts[z] += 1.0;
  }

  const int kept = cfg.n_samples - cfg.burn_in;
  TopicMixture theta(k_count, 0.0);
  for (int sweep = 1; sweep <= cfg.n_samples; ++sweep) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      counts[assignment[i]] -= 1.0;
      const std::size_t z = sample_topic(tokens[i]);
      assignment[i] = z;
      counts[z] += 1.0;
    }
    if (sweep > cfg.burn_in) {
      for (std::size_t k = 0; k < k_count; ++k) theta[k] += counts[k] + alpha;
    }
  }
  const double denom = static_cast<double>(kept) * (len + static_cast<double>(k_count) * alpha);
  for (double& x : theta) x /= denom;
  return theta;
}

InferMethod parse_infer_method(std::string_view name) {
  if (name == "ope") return InferMethod::Ope;
  if (name == "vb") return InferMethod::Vb;
  if (name == "cgs") return InferMethod::Cgs;
  throw UsageError("unknown inference method \"" + std::string(name) +
                   "\" (expected ope, vb, or cgs)");
}

std::string_view infer_method_name(InferMethod method) {
  switch (method) {
    case InferMethod::Ope: return "ope";
    case InferMethod::Vb: return "vb";
    case InferMethod::Cgs: return "cgs";
  }
  return "?";
}

TopicMixture infer_theta(InferMethod method, const Document& d, const TopicMatrix& beta,
                         double alpha, const InferConfig& cfg, std::uint64_t seed) {
  switch (method) {
    case InferMethod::Ope: {
      OpeConfig ope_cfg = cfg.ope;
      ope_cfg.seed = seed;
      return ope_infer(d, beta, alpha, ope_cfg);
    }
    case InferMethod::Vb:
      return vb_infer(d, beta, alpha, cfg.vb);
    case InferMethod::Cgs:
      return cgs_infer(d, beta, alpha, cfg.cgs, seed);
  }
  throw std::logic_error("unreachable");
}

LocalInfer make_local_infer(InferMethod method, double alpha, InferConfig cfg) {
  return [method, alpha, cfg](const Document& d, const TopicMatrix& beta, std::uint64_t seed) {
    return infer_theta(method, d, beta, alpha, cfg, seed);
  };
}

}  // namespace olda
