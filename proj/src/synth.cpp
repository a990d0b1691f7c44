#include "olda/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "olda/rng.hpp"

namespace olda {

std::vector<double> sample_dirichlet(std::size_t dim, double concentration,
                                     std::mt19937_64& rng) {
  if (dim == 0 || concentration <= 0.0) {
    throw std::invalid_argument("sample_dirichlet: dim > 0 and concentration > 0 required");
  }
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> x(dim);
  double sum = 0.0;
  for (double& v : x) {
    // A floor keeps extreme concentrations from underflowing a whole draw.
    v = std::max(gamma(rng), 1e-300);
    sum += v;
  }
  for (double& v : x) v /= sum;
  return x;
}

namespace {

// Inverse-CDF draw against a cumulative row.
std::size_t sample_cumulative(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

SynthResult generate_synthetic(const SynthConfig& cfg, const TopicMatrix* beta) {
  if (cfg.topics < 1 || cfg.vocab_size == 0 || cfg.docs == 0 || cfg.doc_length < 1) {
    throw std::invalid_argument("generate_synthetic: dimensions must be positive");
  }
  if (cfg.alpha <= 0.0 || cfg.eta <= 0.0) {
    throw std::invalid_argument("generate_synthetic: alpha and eta must be positive");
  }
  const std::size_t k_count = static_cast<std::size_t>(cfg.topics);
  auto rng = make_rng(derive_seed({cfg.seed, 0x73796e74ull}));

  SynthResult result;
  if (beta) {
    if (beta->rows() != k_count || beta->cols() != cfg.vocab_size) {
      throw std::invalid_argument("generate_synthetic: supplied topic matrix has wrong shape");
    }
    result.beta_true = *beta;
  } else {
    result.beta_true = Matrix(k_count, cfg.vocab_size);
    for (std::size_t k = 0; k < k_count; ++k) {
      const auto row = sample_dirichlet(cfg.vocab_size, cfg.eta, rng);
      std::copy(row.begin(), row.end(), result.beta_true.row(k).begin());
    }
  }

  std::vector<std::vector<double>> topic_cdf(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    auto row = result.beta_true.row(k);
    topic_cdf[k].resize(row.size());
    std::partial_sum(row.begin(), row.end(), topic_cdf[k].begin());
  }

  result.corpus.vocab = Vocabulary::placeholder(cfg.vocab_size);
  result.corpus.documents.reserve(cfg.docs);
  result.mixtures.reserve(cfg.docs);

  std::vector<double> theta_cdf(k_count);
  std::vector<std::pair<std::uint32_t, std::int32_t>> entries;
  for (std::size_t i = 0; i < cfg.docs; ++i) {
    TopicMixture theta = sample_dirichlet(k_count, cfg.alpha, rng);
    std::partial_sum(theta.begin(), theta.end(), theta_cdf.begin());

    entries.clear();
    for (int n = 0; n < cfg.doc_length; ++n) {
      const std::size_t z = sample_cumulative(theta_cdf, uniform01(rng));
      const std::size_t w = sample_cumulative(topic_cdf[z], uniform01(rng));
      entries.emplace_back(static_cast<std::uint32_t>(w), 1);
    }
    result.corpus.documents.push_back(Document::from_pairs(entries));
    result.mixtures.push_back(std::move(theta));
  }
  return result;
}

}  // namespace olda
