#include "olda/learners.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "olda/errors.hpp"
#include "olda/eval.hpp"
#include "olda/rng.hpp"

namespace olda {

Matrix compute_phi(const TopicMixture& theta, const TopicMatrix& beta, const Document& d) {
  const std::size_t k_count = theta.size();
  Matrix phi(d.ids.size(), k_count);
  for (std::size_t j = 0; j < d.ids.size(); ++j) {
    const std::uint32_t term = d.ids[j];
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const double w = theta[k] * beta(k, term);
      phi(j, k) = w;
      total += w;
    }
    if (total <= 0.0) {
      throw DegenerateSupportError("term " + std::to_string(term) +
                                   " has zero probability under every topic");
    }
    for (std::size_t k = 0; k < k_count; ++k) phi(j, k) /= total;
  }
  return phi;
}

namespace {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int thread_count = static_cast<int>(std::min<std::size_t>(n, workers));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(thread_count));
  for (int w = 0; w < thread_count; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::vector<TopicMixture> infer_batch(const DocBatch& batch, const TopicMatrix& beta,
                                      const LocalInfer& infer, std::uint64_t seed,
                                      std::uint64_t step, int workers, double* infer_seconds) {
  const auto start = Clock::now();
  std::vector<TopicMixture> thetas(batch.size());
  parallel_for(batch.size(), workers, [&](std::size_t i) {
    thetas[i] = infer(batch.documents[i], beta, derive_seed({seed, step, i}));
  });
  if (infer_seconds) *infer_seconds += seconds_since(start);
  return thetas;
}

TopicMatrix ml_intermediate_topics(const DocBatch& batch, const std::vector<TopicMixture>& thetas,
                                   int topics, std::size_t vocab_size) {
  Matrix raw(static_cast<std::size_t>(topics), vocab_size, 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Document& d = batch.documents[i];
    const TopicMixture& theta = thetas[i];
    for (std::size_t j = 0; j < d.ids.size(); ++j) {
      const double dj = static_cast<double>(d.cnts[j]);
      for (std::size_t k = 0; k < theta.size(); ++k) raw(k, d.ids[j]) += dj * theta[k];
    }
  }
  return normalize_rows(std::move(raw));
}

Matrix batch_phi_stats(const DocBatch& batch, const TopicMatrix& beta,
                       const std::vector<TopicMixture>& thetas) {
  Matrix stats(beta.rows(), beta.cols(), 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Document& d = batch.documents[i];
    const Matrix phi = compute_phi(thetas[i], beta, d);
    for (std::size_t j = 0; j < d.ids.size(); ++j) {
      const double dj = static_cast<double>(d.cnts[j]);
      for (std::size_t k = 0; k < beta.rows(); ++k) stats(k, d.ids[j]) += dj * phi(j, k);
    }
  }
  return stats;
}

void blend_in_place(Matrix& current, const Matrix& target, double rho) {
  auto cur = current.data();
  auto tgt = target.data();
  const double keep = 1.0 - rho;
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = keep * cur[i] + rho * tgt[i];
}

MlOpeState ml_ope_step(MlOpeState state, const DocBatch& batch, const LocalInfer& infer,
                       std::uint64_t seed, int workers, double* infer_seconds) {
  if (batch.size() == 0) throw std::invalid_argument("ml_ope_step: empty batch");
  const std::uint64_t t = state.t + 1;
  const auto thetas = infer_batch(batch, state.beta, infer, seed, t, workers, infer_seconds);
  const TopicMatrix beta_hat =
      ml_intermediate_topics(batch, thetas, state.hyper.topics, state.beta.cols());
  blend_in_place(state.beta, beta_hat, step_size(t, state.schedule));
  state.t = t;
  return state;
}

OnlineOpeState online_ope_step(OnlineOpeState state, const DocBatch& batch,
                               const LocalInfer& infer, std::uint64_t seed, int workers,
                               double* infer_seconds) {
  if (batch.size() == 0) throw std::invalid_argument("online_ope_step: empty batch");
  if (state.corpus_size == 0) {
    throw std::invalid_argument("online_ope_step: corpus_size must be known");
  }
  const std::uint64_t t = state.t + 1;
  const TopicMatrix beta = topics_from_lambda(state.lambda);
  const auto thetas = infer_batch(batch, beta, infer, seed, t, workers, infer_seconds);

  Matrix lambda_hat = batch_phi_stats(batch, beta, thetas);
  const double scale =
      static_cast<double>(state.corpus_size) / static_cast<double>(batch.size());
  for (double& x : lambda_hat.data()) x = state.hyper.eta + scale * x;

  blend_in_place(state.lambda, lambda_hat, step_size(t, state.schedule));
  state.t = t;
  return state;
}

StreamingOpeState streaming_ope_step(StreamingOpeState state, const DocBatch& batch,
                                     const LocalInfer& infer, std::uint64_t seed, int workers,
                                     double* infer_seconds) {
  if (batch.size() == 0) throw std::invalid_argument("streaming_ope_step: empty batch");
  const std::uint64_t t = state.t + 1;
  const TopicMatrix beta = topics_from_lambda(state.lambda);
  const auto thetas = infer_batch(batch, beta, infer, seed, t, workers, infer_seconds);

  const Matrix lambda_hat = batch_phi_stats(batch, beta, thetas);
  auto lam = state.lambda.data();
  auto hat = lambda_hat.data();
  for (std::size_t i = 0; i < lam.size(); ++i) lam[i] += hat[i];
  state.t = t;
  return state;
}

LearnerKind parse_learner_kind(std::string_view name) {
  if (name == "ml-ope") return LearnerKind::MlOpe;
  if (name == "online-ope") return LearnerKind::OnlineOpe;
  if (name == "streaming-ope") return LearnerKind::StreamingOpe;
  throw UsageError("unknown learner \"" + std::string(name) +
                   "\" (expected ml-ope, online-ope, or streaming-ope)");
}

std::string_view learner_kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::MlOpe: return "ml-ope";
    case LearnerKind::OnlineOpe: return "online-ope";
    case LearnerKind::StreamingOpe: return "streaming-ope";
  }
  return "?";
}

namespace {

DocBatch sequential_batch(const Corpus& corpus, std::size_t batch_size, std::uint64_t t) {
  const std::size_t begin = (t - 1) * batch_size;
  const std::size_t end = std::min(begin + batch_size, corpus.doc_count());
  DocBatch batch;
  batch.documents.assign(corpus.documents.begin() + static_cast<std::ptrdiff_t>(begin),
                         corpus.documents.begin() + static_cast<std::ptrdiff_t>(end));
  return batch;
}

}  // namespace

LearnerRun run_learner(const Corpus& train, const LearnerConfig& cfg, const EvalOptions* eval) {
  if (train.doc_count() == 0) throw std::invalid_argument("run_learner: empty corpus");
  if (cfg.batch_size == 0) throw std::invalid_argument("run_learner: batch_size must be >= 1");
  if (!cfg.sequential_stream && cfg.passes < 1) {
    throw std::invalid_argument("run_learner: passes must be >= 1");
  }

  const std::size_t d_count = train.doc_count();
  const std::size_t v_count = train.vocab_size();
  const std::uint64_t steps_per_pass =
      (d_count + cfg.batch_size - 1) / cfg.batch_size;
  const std::uint64_t total_steps = cfg.sequential_stream
                                        ? steps_per_pass
                                        : steps_per_pass * static_cast<std::uint64_t>(cfg.passes);

  MlOpeState ml;
  OnlineOpeState online;
  StreamingOpeState streaming;
  switch (cfg.learner) {
    case LearnerKind::MlOpe:
      ml = {random_topic_matrix(cfg.hyper.topics, v_count, derive_seed({cfg.seed, 1})), 0,
            cfg.schedule, cfg.hyper};
      break;
    case LearnerKind::OnlineOpe:
      online = {random_lambda(cfg.hyper.topics, v_count, derive_seed({cfg.seed, 2})), 0,
                cfg.schedule, cfg.hyper, d_count};
      break;
    case LearnerKind::StreamingOpe:
      streaming = {random_lambda(cfg.hyper.topics, v_count, derive_seed({cfg.seed, 3})), 0,
                   cfg.hyper};
      break;
  }

  const LocalInfer infer = make_local_infer(cfg.infer, cfg.hyper.alpha, cfg.infer_cfg);

  LearnerRun run;
  std::uint64_t docs_seen = 0;
  double learn_seconds = 0.0;

  auto current_topics = [&]() -> TopicMatrix {
    switch (cfg.learner) {
      case LearnerKind::MlOpe: return ml.beta;
      case LearnerKind::OnlineOpe: return topics_from_lambda(online.lambda);
      case LearnerKind::StreamingOpe: return topics_from_lambda(streaming.lambda);
    }
    throw std::logic_error("unreachable");
  };

  for (std::uint64_t t = 1; t <= total_steps; ++t) {
    DocBatch batch = cfg.sequential_stream
                         ? sequential_batch(train, cfg.batch_size, t)
                         : sample_minibatch(train, cfg.batch_size, cfg.seed, t);
    docs_seen += batch.size();

    double infer_seconds = 0.0;
    const auto step_start = Clock::now();
    switch (cfg.learner) {
      case LearnerKind::MlOpe:
        ml = ml_ope_step(std::move(ml), batch, infer, cfg.seed, cfg.workers, &infer_seconds);
        break;
      case LearnerKind::OnlineOpe:
        online = online_ope_step(std::move(online), batch, infer, cfg.seed, cfg.workers,
                                 &infer_seconds);
        break;
      case LearnerKind::StreamingOpe:
        streaming = streaming_ope_step(std::move(streaming), batch, infer, cfg.seed,
                                       cfg.workers, &infer_seconds);
        break;
    }
    learn_seconds += seconds_since(step_start);
    run.timings.push_back({t, infer_seconds / static_cast<double>(batch.size())});

    if (eval && cfg.eval_every > 0 && t % static_cast<std::uint64_t>(cfg.eval_every) == 0) {
      MetricsRecord record;
      record.step = t;
      record.docs_seen = docs_seen;
      record.elapsed_seconds = learn_seconds;
      const TopicMatrix topics = current_topics();
      if (eval->test) {
        LppOptions opts;
        opts.n_splits = eval->lpp_splits;
        opts.ratio = eval->lpp_ratio;
        opts.seed = derive_seed({eval->seed, 0x6c7070ull});
        record.log_predictive_probability =
            log_predictive_probability(topics, *eval->test, infer, opts).value;
      }
      if (eval->cooccurrence) {
        const int top_n = std::min<int>(eval->npmi_top_n, static_cast<int>(topics.cols()));
        const auto candidates = top_term_union(topics, top_n);
        const auto stats = cooccurrence_stats(*eval->cooccurrence, candidates);
        record.npmi = npmi(topics, stats, top_n).model;
      }
      run.metrics.push_back(record);
    }
  }

  run.model.hyper = cfg.hyper;
  run.model.step = total_steps;
  if (cfg.learner == LearnerKind::MlOpe) {
    run.model.kind = SnapshotKind::Beta;
    run.model.matrix = std::move(ml.beta);
  } else {
    run.model.kind = SnapshotKind::Lambda;
    run.model.matrix = cfg.learner == LearnerKind::OnlineOpe ? std::move(online.lambda)
                                                             : std::move(streaming.lambda);
  }
  return run;
}

void write_metrics_csv(const std::vector<MetricsRecord>& metrics, std::ostream& out) {
  out << "step,docs_seen,elapsed_seconds,log_predictive_probability,npmi\n";
  for (const auto& m : metrics) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f,%.10g,%.10g", m.elapsed_seconds,
                  m.log_predictive_probability, m.npmi);
    out << m.step << ',' << m.docs_seen << ',' << buf << '\n';
  }
}

}  // namespace olda
