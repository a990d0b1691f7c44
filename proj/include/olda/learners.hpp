#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

#include "olda/baselines.hpp"
#include "olda/corpus.hpp"
#include "olda/matrix.hpp"
#include "olda/model.hpp"
#include "olda/ope.hpp"

namespace olda {

// phi_jk = theta_k beta_kj / sum_l theta_l beta_lj, one row per distinct term
// of d (aligned with d.ids). Throws DegenerateSupportError on an all-zero
// denominator.
Matrix compute_phi(const TopicMixture& theta, const TopicMatrix& beta, const Document& d);

struct MlOpeState {
  TopicMatrix beta;
  std::uint64_t t = 0;
  StepSchedule schedule;
  LdaHyper hyper;
};

struct OnlineOpeState {
  VariationalTopics lambda;
  std::uint64_t t = 0;
  StepSchedule schedule;
  LdaHyper hyper;
  std::size_t corpus_size = 0;  // D
};

struct StreamingOpeState {
  VariationalTopics lambda;
  std::uint64_t t = 0;
  LdaHyper hyper;
};

// Per-document inference for a whole batch. Seeds are derived from
// (seed, step, position in batch), so results do not depend on the worker
// schedule. infer_seconds, when given, accumulates wall time spent inferring.
std::vector<TopicMixture> infer_batch(const DocBatch& batch, const TopicMatrix& beta,
                                      const LocalInfer& infer, std::uint64_t seed,
                                      std::uint64_t step, int workers,
                                      double* infer_seconds = nullptr);

// Row-normalized sum_d d_j theta_dk; rows with no mass become uniform.
TopicMatrix ml_intermediate_topics(const DocBatch& batch, const std::vector<TopicMixture>& thetas,
                                   int topics, std::size_t vocab_size);

// K x V matrix of sum_d d_j phi_djk.
Matrix batch_phi_stats(const DocBatch& batch, const TopicMatrix& beta,
                       const std::vector<TopicMixture>& thetas);

// current = (1 - rho) * current + rho * target.
void blend_in_place(Matrix& current, const Matrix& target, double rho);

// One global step each: infer mixtures for the batch against the current
// topics, fold the batch statistics into the global state, advance t.
MlOpeState ml_ope_step(MlOpeState state, const DocBatch& batch, const LocalInfer& infer,
                       std::uint64_t seed, int workers = 1, double* infer_seconds = nullptr);
OnlineOpeState online_ope_step(OnlineOpeState state, const DocBatch& batch,
                               const LocalInfer& infer, std::uint64_t seed, int workers = 1,
                               double* infer_seconds = nullptr);
StreamingOpeState streaming_ope_step(StreamingOpeState state, const DocBatch& batch,
                                     const LocalInfer& infer, std::uint64_t seed, int workers = 1,
                                     double* infer_seconds = nullptr);

enum class LearnerKind { MlOpe, OnlineOpe, StreamingOpe };

// "ml-ope" | "online-ope" | "streaming-ope"; unknown names raise UsageError.
LearnerKind parse_learner_kind(std::string_view name);
std::string_view learner_kind_name(LearnerKind kind);

struct LearnerConfig {
  LearnerKind learner = LearnerKind::OnlineOpe;
  InferMethod infer = InferMethod::Ope;
  LdaHyper hyper;
  StepSchedule schedule;
  InferConfig infer_cfg;
  std::size_t batch_size = 500;
  int passes = 1;                  // multi-pass mode: passes * ceil(D/S) sampled batches
  bool sequential_stream = false;  // single sequential pass, ceil(D/S) steps
  int eval_every = 10;             // minibatches between evaluations; 0 = never
  std::uint64_t seed = 0;
  int workers = 1;
};

struct EvalOptions {
  const Corpus* test = nullptr;           // held-out documents for predictive probability
  const Corpus* cooccurrence = nullptr;   // training documents for coherence stats
  int lpp_splits = 5;
  double lpp_ratio = 0.7;
  int npmi_top_n = 10;
  std::uint64_t seed = 0;
};

// Metrics not computable with the supplied hooks (e.g. no test corpus) stay
// NaN and print as "nan" in the CSV.
struct MetricsRecord {
  std::uint64_t step = 0;
  std::uint64_t docs_seen = 0;
  double elapsed_seconds = 0.0;  // learning time only; evaluation is excluded
  double log_predictive_probability = std::numeric_limits<double>::quiet_NaN();
  double npmi = std::numeric_limits<double>::quiet_NaN();
};

struct StepTiming {
  std::uint64_t step = 0;
  double avg_infer_seconds_per_doc = 0.0;
};

struct LearnerRun {
  Snapshot model;
  std::vector<MetricsRecord> metrics;
  std::vector<StepTiming> timings;  // one row per step
};

// Drives minibatches through the configured learner, evaluating every
// eval_every steps when hooks are given.
LearnerRun run_learner(const Corpus& train, const LearnerConfig& cfg,
                       const EvalOptions* eval = nullptr);

// "step,docs_seen,elapsed_seconds,log_predictive_probability,npmi"
void write_metrics_csv(const std::vector<MetricsRecord>& metrics, std::ostream& out);

}  // namespace olda
