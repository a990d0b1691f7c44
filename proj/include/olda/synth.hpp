#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "olda/corpus.hpp"
#include "olda/matrix.hpp"
#include "olda/ope.hpp"

namespace olda {

struct SynthConfig {
  int topics = 10;
  std::size_t vocab_size = 1000;
  std::size_t docs = 5000;
  int doc_length = 100;
  double alpha = 0.1;  // concentration of per-document mixtures
  double eta = 0.1;    // concentration of topic rows
  std::uint64_t seed = 42;
};

struct SynthResult {
  Corpus corpus;
  TopicMatrix beta_true;
  std::vector<TopicMixture> mixtures;  // the theta_d actually drawn
};

// Normalized independent gamma draws.
std::vector<double> sample_dirichlet(std::size_t dim, double concentration,
                                     std::mt19937_64& rng);

// Admixture sampling: topics from Dirichlet(eta) rows (or the supplied
// matrix), theta_d from Dirichlet(alpha), then doc_length tokens each drawn
// topic-then-term.
SynthResult generate_synthetic(const SynthConfig& cfg, const TopicMatrix* beta = nullptr);

}  // namespace olda
