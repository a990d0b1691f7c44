#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "olda/baselines.hpp"
#include "olda/corpus.hpp"
#include "olda/matrix.hpp"
#include "olda/ope.hpp"

namespace olda {

struct LppOptions {
  int n_splits = 5;
  double ratio = 0.7;
  std::uint64_t seed = 0;
};

struct LppResult {
  double value = 0.0;
  std::size_t skipped_docs = 0;    // documents with fewer than 2 tokens
  std::size_t floored_tokens = 0;  // held-out tokens hit by the 1e-12 probability floor
};

// Mean per-held-out-token log probability of each token given inference on
// the observed 70%: averaged over documents, then over random splits.
LppResult log_predictive_probability(const TopicMatrix& beta, const Corpus& test,
                                     const LocalInfer& infer, const LppOptions& opts);

// log prob of one held-out token list under mixture theta, divided by the
// list length.
double log_predictive_single(const TopicMixture& theta, std::span<const std::uint32_t> heldout,
                             const TopicMatrix& beta, std::size_t* floored_tokens = nullptr);

// Document-level binary co-occurrence counts over a candidate term set.
struct CooccurrenceStats {
  std::size_t doc_count = 0;
  std::unordered_map<std::uint32_t, std::uint32_t> doc_freq;
  std::unordered_map<std::uint64_t, std::uint32_t> pair_freq;

  static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b);

  double p(std::uint32_t w) const;
  double p_joint(std::uint32_t a, std::uint32_t b) const;
};

CooccurrenceStats cooccurrence_stats(const Corpus& training,
                                     std::span<const std::uint32_t> candidate_terms);

// Term ids of the n highest entries of a topic row; ties broken by lower id.
std::vector<std::uint32_t> top_terms(std::span<const double> topic_row, int n);
std::vector<std::uint32_t> top_term_union(const TopicMatrix& beta, int n);

// Pairs that never co-occur score -1; pairs that always co-occur score 0.
double npmi_pair(double p_i, double p_j, double p_ij);

struct NpmiResult {
  double model = 0.0;
  std::vector<double> per_topic;
};

NpmiResult npmi(const TopicMatrix& beta, const CooccurrenceStats& stats, int top_n = 10);

struct StabilityRow {
  std::size_t doc_id = 0;
  int iterations = 0;
  double mean_objective = 0.0;
  double std_objective = 0.0;
};

// For each document and each iteration budget: `runs` random-start inference
// runs; mean and standard deviation of the final objective values.
std::vector<StabilityRow> stability_report(const Corpus& docs, const TopicMatrix& beta,
                                           double alpha, int runs,
                                           std::span<const int> iteration_counts,
                                           std::uint64_t seed, double epsilon = 1e-10);

// "doc_id,T,mean_objective,std_objective"
void write_stability_csv(const std::vector<StabilityRow>& rows, std::ostream& out);

}  // namespace olda
