#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "olda/corpus.hpp"
#include "olda/matrix.hpp"

namespace olda {

struct LdaHyper {
  int topics = 10;     // K
  double alpha = 0.1;  // Dirichlet parameter of per-document mixtures
  double eta = 0.1;    // Dirichlet parameter of topics (lambda-based learners)
};

// rho_t = (t + tau)^(-kappa); tau > 0, kappa in (0.5, 1].
struct StepSchedule {
  double tau = 1.0;
  double kappa = 0.9;
};

double step_size(std::uint64_t t, const StepSchedule& schedule);

// Divides each row by its sum; a row with sum below `floor` becomes uniform.
TopicMatrix normalize_rows(Matrix m, double floor = 1e-12);

TopicMatrix topics_from_lambda(const VariationalTopics& lambda);

// i.i.d. Uniform(0.01, 1.01) entries.
VariationalTopics random_lambda(int topics, std::size_t vocab_size, std::uint64_t seed);

// Row-normalized Uniform(0.01, 1.01) rows; start point for beta-based learning.
TopicMatrix random_topic_matrix(int topics, std::size_t vocab_size, std::uint64_t seed);

enum class SnapshotKind { Beta, Lambda };

// Persistable model state: hyperparameters, learner step count, and the
// global matrix (beta or lambda).
struct Snapshot {
  SnapshotKind kind = SnapshotKind::Beta;
  LdaHyper hyper;
  std::uint64_t step = 0;
  Matrix matrix;

  // beta as-is; lambda row-normalized into expected topics.
  TopicMatrix topics() const;
};

// Versioned plain-text format: a header (magic, version, kind, K, V, alpha,
// eta, t) followed by K rows of V decimal values. Doubles are written with 17
// significant digits so a write/read round trip is lossless.
void snapshot_write(const Snapshot& snapshot, std::ostream& out);
Snapshot snapshot_read(std::istream& in);
void snapshot_save(const Snapshot& snapshot, const std::string& path);
Snapshot snapshot_load(const std::string& path);

// "topic_id,rank,term,probability" rows for each topic's top terms.
void write_top_terms_csv(const TopicMatrix& beta, const Vocabulary& vocab, int top_n,
                         std::ostream& out);

}  // namespace olda
