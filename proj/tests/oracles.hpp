#pragma once

// Independent oracles used by the unit and acceptance suites: brute-force
// maximizers and hand computations kept deliberately separate from the
// library's own code paths.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "olda/corpus.hpp"
#include "olda/matrix.hpp"
#include "olda/ope.hpp"
#include "olda/rng.hpp"

namespace oracle {

// Exhaustive grid search of the document objective over the 3-simplex at the
// given resolution. Returns the best value found.
inline double grid_search_delta3(const olda::Document& d, const olda::TopicMatrix& beta,
                                 double alpha, double resolution) {
  const int steps = static_cast<int>(std::lround(1.0 / resolution));
  double best = -std::numeric_limits<double>::infinity();
  olda::TopicMixture theta(3);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps - i; ++j) {
      theta[0] = i * resolution;
      theta[1] = j * resolution;
      theta[2] = 1.0 - theta[0] - theta[1];
      const double value = olda::objective(theta, d, beta, alpha);
      if (value > best) best = value;
    }
  }
  return best;
}

// Central finite difference of a scalar function along coordinate k.
template <typename Fn>
double central_difference(Fn&& fn, olda::TopicMixture theta, std::size_t k, double h) {
  theta[k] += h;
  const double up = fn(theta);
  theta[k] -= 2.0 * h;
  const double down = fn(theta);
  return (up - down) / (2.0 * h);
}

// Random row-stochastic topic matrix with strictly positive entries.
inline olda::TopicMatrix random_beta(std::size_t topics, std::size_t vocab,
                                     std::mt19937_64& rng) {
  olda::TopicMatrix beta(topics, vocab);
  for (std::size_t k = 0; k < topics; ++k) {
    auto row = beta.row(k);
    double sum = 0.0;
    for (double& x : row) {
      x = olda::uniform01(rng) + 1e-3;
      sum += x;
    }
    for (double& x : row) x /= sum;
  }
  return beta;
}

// Random sparse document over the vocabulary with 1..max_terms distinct terms.
inline olda::Document random_document(std::size_t vocab, int max_terms, int max_count,
                                      std::mt19937_64& rng) {
  std::vector<std::pair<std::uint32_t, std::int32_t>> entries;
  const int n_terms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_terms));
  for (int j = 0; j < n_terms; ++j) {
    entries.emplace_back(static_cast<std::uint32_t>(rng() % vocab),
                         1 + static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(max_count)));
  }
  return olda::Document::from_pairs(std::move(entries));
}

// Random interior point of the simplex with entries bounded away from zero.
inline olda::TopicMixture random_interior_point(std::size_t dim, std::mt19937_64& rng) {
  olda::TopicMixture theta(dim);
  double sum = 0.0;
  for (double& x : theta) {
    x = 0.05 + olda::uniform01(rng);
    sum += x;
  }
  for (double& x : theta) x /= sum;
  return theta;
}

}  // namespace oracle
