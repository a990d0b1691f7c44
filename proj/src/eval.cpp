#include "olda/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "olda/rng.hpp"

namespace olda {

double log_predictive_single(const TopicMixture& theta, std::span<const std::uint32_t> heldout,
                             const TopicMatrix& beta, std::size_t* floored_tokens) {
  constexpr double kProbFloor = 1e-12;
  double log_prob = 0.0;
  for (const std::uint32_t term : heldout) {
    double p = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) p += theta[k] * beta(k, term);
    if (p < kProbFloor) {
      p = kProbFloor;
      if (floored_tokens) ++*floored_tokens;
    }
    log_prob += std::log(p);
  }
  return log_prob / static_cast<double>(heldout.size());
}

LppResult log_predictive_probability(const TopicMatrix& beta, const Corpus& test,
                                     const LocalInfer& infer, const LppOptions& opts) {
  if (opts.n_splits < 1) throw std::invalid_argument("lpp: n_splits must be >= 1");
  LppResult result;

  std::vector<const Document*> usable;
  usable.reserve(test.doc_count());
  for (const Document& d : test.documents) {
    if (d.token_count() >= 2) {
      usable.push_back(&d);
    } else {
      ++result.skipped_docs;
    }
  }
  if (usable.empty()) throw std::invalid_argument("lpp: no document has at least 2 tokens");

  double split_sum = 0.0;
  for (int s = 0; s < opts.n_splits; ++s) {
    double doc_sum = 0.0;
    for (std::size_t i = 0; i < usable.size(); ++i) {
      const auto split = split_holdout(*usable[i], opts.ratio,
                                       derive_seed({opts.seed, static_cast<std::uint64_t>(s), i}));
      const TopicMixture theta =
          infer(split.observed, beta, derive_seed({opts.seed, 0x696e66ull,
                                                   static_cast<std::uint64_t>(s), i}));
      doc_sum += log_predictive_single(theta, split.heldout, beta, &result.floored_tokens);
    }
    split_sum += doc_sum / static_cast<double>(usable.size());
  }
  result.value = split_sum / static_cast<double>(opts.n_splits);
  return result;
}

std::uint64_t CooccurrenceStats::pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

double CooccurrenceStats::p(std::uint32_t w) const {
  const auto it = doc_freq.find(w);
  return it == doc_freq.end()
             ? 0.0
             : static_cast<double>(it->second) / static_cast<double>(doc_count);
}

double CooccurrenceStats::p_joint(std::uint32_t a, std::uint32_t b) const {
  const auto it = pair_freq.find(pair_key(a, b));
  return it == pair_freq.end()
             ? 0.0
             : static_cast<double>(it->second) / static_cast<double>(doc_count);
}

CooccurrenceStats cooccurrence_stats(const Corpus& training,
                                     std::span<const std::uint32_t> candidate_terms) {
  if (training.doc_count() == 0) {
    throw std::invalid_argument("cooccurrence_stats: empty corpus");
  }
  std::vector<char> is_candidate(training.vocab_size(), 0);
  for (const std::uint32_t term : candidate_terms) {
    if (term >= training.vocab_size()) {
      throw std::invalid_argument("cooccurrence_stats: candidate term out of vocabulary");
    }
    is_candidate[term] = 1;
  }

  CooccurrenceStats stats;
  stats.doc_count = training.doc_count();
  std::vector<std::uint32_t> present;
  for (const Document& d : training.documents) {
    present.clear();
    for (const std::uint32_t term : d.ids) {
      if (is_candidate[term]) present.push_back(term);
    }
    for (std::size_t i = 0; i < present.size(); ++i) {
      ++stats.doc_freq[present[i]];
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        ++stats.pair_freq[CooccurrenceStats::pair_key(present[i], present[j])];
      }
    }
  }
  return stats;
}

std::vector<std::uint32_t> top_terms(std::span<const double> topic_row, int n) {
  if (n < 0 || static_cast<std::size_t>(n) > topic_row.size()) {
    throw std::invalid_argument("top_terms: n exceeds the vocabulary size");
  }
  std::vector<std::uint32_t> order(topic_row.size());
  std::iota(order.begin(), order.end(), 0u);
  std::partial_sort(order.begin(), order.begin() + n, order.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (topic_row[a] != topic_row[b]) return topic_row[a] > topic_row[b];
                      return a < b;
                    });
  order.resize(static_cast<std::size_t>(n));
  return order;
}

std::vector<std::uint32_t> top_term_union(const TopicMatrix& beta, int n) {
  std::vector<char> seen(beta.cols(), 0);
  std::vector<std::uint32_t> result;
  for (std::size_t k = 0; k < beta.rows(); ++k) {
    for (const std::uint32_t term : top_terms(beta.row(k), n)) {
      if (!seen[term]) {
        seen[term] = 1;
        result.push_back(term);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

double npmi_pair(double p_i, double p_j, double p_ij) {
  if (p_ij <= 0.0) return -1.0;
  if (p_ij >= 1.0) return 0.0;
  return std::log(p_ij / (p_i * p_j)) / (-std::log(p_ij));
}

NpmiResult npmi(const TopicMatrix& beta, const CooccurrenceStats& stats, int top_n) {
  if (static_cast<std::size_t>(top_n) > beta.cols()) {
    throw std::invalid_argument("npmi: top_n exceeds the vocabulary size");
  }
  NpmiResult result;
  result.per_topic.reserve(beta.rows());
  for (std::size_t k = 0; k < beta.rows(); ++k) {
    const auto terms = top_terms(beta.row(k), top_n);
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t j = 1; j < terms.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        sum += npmi_pair(stats.p(terms[i]), stats.p(terms[j]),
                         stats.p_joint(terms[i], terms[j]));
        ++pairs;
      }
    }
    result.per_topic.push_back(pairs == 0 ? 0.0 : sum / static_cast<double>(pairs));
  }
  result.model =
      std::accumulate(result.per_topic.begin(), result.per_topic.end(), 0.0) /
      static_cast<double>(result.per_topic.size());
  return result;
}

std::vector<StabilityRow> stability_report(const Corpus& docs, const TopicMatrix& beta,
                                           double alpha, int runs,
                                           std::span<const int> iteration_counts,
                                           std::uint64_t seed, double epsilon) {
  if (runs < 2) throw std::invalid_argument("stability_report: runs must be >= 2");
  std::vector<StabilityRow> rows;
  rows.reserve(docs.doc_count() * iteration_counts.size());
  for (std::size_t i = 0; i < docs.doc_count(); ++i) {
    const Document& d = docs.documents[i];
    for (const int iterations : iteration_counts) {
      std::vector<double> values(static_cast<std::size_t>(runs));
      for (int r = 0; r < runs; ++r) {
        OpeConfig cfg;
        cfg.iterations = iterations;
        cfg.epsilon = epsilon;
        cfg.random_init = true;
        cfg.seed = derive_seed({seed, i, static_cast<std::uint64_t>(iterations),
                                static_cast<std::uint64_t>(r)});
        const TopicMixture theta = ope_infer(d, beta, alpha, cfg);
        values[static_cast<std::size_t>(r)] = objective(theta, d, beta, alpha);
      }
      const double mean =
          std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(runs);
      double var = 0.0;
      for (const double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(runs);
      rows.push_back({i, iterations, mean, std::sqrt(var)});
    }
  }
  return rows;
}

void write_stability_csv(const std::vector<StabilityRow>& rows, std::ostream& out) {
  out << "doc_id,T,mean_objective,std_objective\n";
  for (const auto& row : rows) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g", row.mean_objective, row.std_objective);
    out << row.doc_id << ',' << row.iterations << ',' << buf << '\n';
  }
}

}  // namespace olda
