#include "olda/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "olda/baselines.hpp"
#include "olda/corpus.hpp"
#include "olda/errors.hpp"
#include "olda/eval.hpp"
#include "olda/learners.hpp"
#include "olda/model.hpp"
#include "olda/ope.hpp"
#include "olda/rng.hpp"
#include "olda/synth.hpp"

namespace olda {

namespace {

namespace fs = std::filesystem;

struct TrainArgs {
  std::string corpus_path;
  std::string vocab_path;
  std::string test_corpus_path;
  std::size_t n_test = 0;
  std::string out_dir;
  std::string learner = "online-ope";
  std::string infer = "ope";
  int topics = 10;
  double alpha = -1.0;  // default 1/K
  double eta = -1.0;    // default 1/K
  double tau = 1.0;
  double kappa = 0.9;
  std::size_t batch_size = 500;
  int iters = 50;
  double epsilon = 1e-10;
  int passes = 1;
  bool streaming = false;
  int eval_every = 10;
  std::uint64_t seed = 42;
  int workers = 1;
  int lpp_splits = 5;
  double lpp_ratio = 0.7;
  int npmi_top = 10;
  int vb_max_iter = 50;
  double vb_tol = 1e-4;
  int cgs_samples = 50;
  int cgs_burn_in = 25;
};

void add_train_options(CLI::App* cmd, TrainArgs& args, bool corpus_required = true) {
  cmd->add_option("--corpus", args.corpus_path, "training corpus in UCI bag-of-words format")
      ->required(corpus_required);
  cmd->add_option("--vocab", args.vocab_path, "vocabulary file, one term per line");
  auto* test_corpus = cmd->add_option("--test-corpus", args.test_corpus_path,
                                      "held-out corpus for predictive-probability evaluation");
  cmd->add_option("--n-test", args.n_test,
                  "split this many documents off the training corpus for evaluation")
      ->excludes(test_corpus);
  cmd->add_option("--topics", args.topics, "number of topics K")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", args.alpha, "document-mixture Dirichlet parameter (default 1/K)");
  cmd->add_option("--eta", args.eta, "topic Dirichlet parameter (default 1/K)");
  cmd->add_option("--tau", args.tau, "step-size offset")->check(CLI::PositiveNumber);
  cmd->add_option("--kappa", args.kappa, "forgetting rate in (0.5, 1]");
  cmd->add_option("--batch-size", args.batch_size, "minibatch size S")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--iters", args.iters, "inference iterations T")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", args.epsilon, "simplex truncation for inference");
  cmd->add_option("--passes", args.passes, "passes over the corpus (sampled minibatches)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--streaming", args.streaming,
                "single sequential pass; the corpus is treated as a stream");
  cmd->add_option("--eval-every", args.eval_every,
                  "evaluate every N minibatches (0 disables evaluation)");
  cmd->add_option("--seed", args.seed, "master RNG seed");
  cmd->add_option("--workers", args.workers, "worker threads for per-document inference")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lpp-splits", args.lpp_splits, "observed/held-out splits per test document");
  cmd->add_option("--lpp-ratio", args.lpp_ratio, "observed fraction of each test document");
  cmd->add_option("--npmi-top", args.npmi_top, "top terms per topic for coherence");
  cmd->add_option("--vb-max-iter", args.vb_max_iter, "VB iteration cap");
  cmd->add_option("--vb-tol", args.vb_tol, "VB relative lower-bound tolerance");
  cmd->add_option("--cgs-samples", args.cgs_samples, "CGS sweeps");
  cmd->add_option("--cgs-burn-in", args.cgs_burn_in, "CGS burn-in sweeps");
}

void finalize_hyper(TrainArgs& args) {
  if (args.alpha < 0.0) args.alpha = 1.0 / args.topics;
  if (args.eta < 0.0) args.eta = 1.0 / args.topics;
  if (args.kappa <= 0.5 || args.kappa > 1.0) {
    throw UsageError("--kappa must lie in (0.5, 1]");
  }
}

LearnerConfig make_learner_config(const TrainArgs& args) {
  LearnerConfig cfg;
  cfg.learner = parse_learner_kind(args.learner);
  cfg.infer = parse_infer_method(args.infer);
  cfg.hyper = {args.topics, args.alpha, args.eta};
  cfg.schedule = {args.tau, args.kappa};
  cfg.infer_cfg.ope.iterations = args.iters;
  cfg.infer_cfg.ope.epsilon = args.epsilon;
  cfg.infer_cfg.vb = {args.vb_max_iter, args.vb_tol};
  cfg.infer_cfg.cgs = {args.cgs_samples, args.cgs_burn_in};
  cfg.batch_size = args.batch_size;
  cfg.passes = args.passes;
  cfg.sequential_stream = args.streaming;
  cfg.eval_every = args.eval_every;
  cfg.seed = args.seed;
  cfg.workers = args.workers;
  return cfg;
}

Corpus load_corpus_with_vocab(const std::string& corpus_path, const std::string& vocab_path) {
  UciParseResult parsed = vocab_path.empty()
                              ? load_uci_bow(corpus_path)
                              : load_uci_bow(corpus_path, load_vocab(vocab_path));
  if (parsed.dropped_empty_docs > 0) {
    std::cerr << "warning: dropped " << parsed.dropped_empty_docs << " empty document(s) from "
              << corpus_path << "\n";
  }
  return std::move(parsed.corpus);
}

void check_snapshot_matches(const Snapshot& snap, const Corpus& corpus) {
  if (snap.matrix.cols() != corpus.vocab_size()) {
    throw FormatError("snapshot V=" + std::to_string(snap.matrix.cols()) +
                      " does not match corpus vocabulary size " +
                      std::to_string(corpus.vocab_size()));
  }
}

std::ofstream must_open(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open \"" + path.string() + "\" for writing");
  return out;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  SynthConfig cfg;
  std::string beta_path;
};

int cmd_synth(const SynthArgs& args) {
  std::optional<Snapshot> supplied;
  if (!args.beta_path.empty()) supplied = snapshot_load(args.beta_path);

  SynthConfig cfg = args.cfg;
  if (supplied) {
    cfg.topics = static_cast<int>(supplied->matrix.rows());
    cfg.vocab_size = supplied->matrix.cols();
  }
  if (cfg.alpha < 0.0) cfg.alpha = 1.0 / cfg.topics;
  if (cfg.eta < 0.0) cfg.eta = 1.0 / cfg.topics;
  const SynthResult result =
      generate_synthetic(cfg, supplied ? &supplied->matrix : nullptr);

  fs::create_directories(args.out_dir);
  save_uci_bow(result.corpus, (fs::path(args.out_dir) / "corpus.uci").string());
  save_vocab(result.corpus.vocab, (fs::path(args.out_dir) / "vocab.txt").string());

  Snapshot truth;
  truth.kind = SnapshotKind::Beta;
  truth.hyper = {cfg.topics, cfg.alpha, cfg.eta};
  truth.step = 0;
  truth.matrix = result.beta_true;
  snapshot_save(truth, (fs::path(args.out_dir) / "beta_true.snapshot").string());

  std::cout << "wrote " << result.corpus.doc_count() << " documents, vocabulary "
            << result.corpus.vocab_size() << ", topics " << cfg.topics << " to " << args.out_dir
            << "\n";
  return 0;
}

// --- train ---------------------------------------------------------------

int cmd_train(const TrainArgs& args_in, const CLI::App* cmd) {
  TrainArgs args = args_in;
  finalize_hyper(args);
  LearnerConfig cfg = make_learner_config(args);

  if (cfg.learner == LearnerKind::StreamingOpe) {
    for (const char* name : {"--eta", "--tau", "--kappa"}) {
      if (cmd->count(name) > 0) {
        std::cerr << "warning: " << name << " has no effect on streaming-ope\n";
      }
    }
  }
  if (cfg.sequential_stream && cfg.learner == LearnerKind::OnlineOpe) {
    throw UsageError(
        "online-ope needs the corpus size up front and cannot run in --streaming mode; "
        "use ml-ope or streaming-ope");
  }
  if (cfg.sequential_stream && cmd->count("--passes") > 0) {
    throw UsageError("--passes and --streaming are mutually exclusive");
  }

  Corpus train = load_corpus_with_vocab(args.corpus_path, args.vocab_path);
  Corpus test;
  if (!args.test_corpus_path.empty()) {
    test = load_corpus_with_vocab(args.test_corpus_path, args.vocab_path);
  } else if (args.n_test > 0) {
    auto [tr, te] = train_test_split(train, args.n_test, derive_seed({args.seed, 0x74657374ull}));
    train = std::move(tr);
    test = std::move(te);
  }

  EvalOptions eval;
  eval.test = test.doc_count() > 0 ? &test : nullptr;
  eval.cooccurrence = &train;
  eval.lpp_splits = args.lpp_splits;
  eval.lpp_ratio = args.lpp_ratio;
  eval.npmi_top_n = args.npmi_top;
  eval.seed = derive_seed({args.seed, 0x6576616cull});

  const LearnerRun run = run_learner(train, cfg, &eval);

  fs::create_directories(args.out_dir);
  snapshot_save(run.model, (fs::path(args.out_dir) / "model.snapshot").string());
  {
    auto out = must_open(fs::path(args.out_dir) / "metrics.csv");
    write_metrics_csv(run.metrics, out);
  }
  {
    auto out = must_open(fs::path(args.out_dir) / "top_terms.csv");
    write_top_terms_csv(run.model.topics(), train.vocab, args.npmi_top, out);
  }
  std::cout << "trained " << args.learner << "+" << args.infer << " for " << run.model.step
            << " steps; wrote " << args.out_dir << "\n";
  return 0;
}

// --- infer ---------------------------------------------------------------

struct InferArgs {
  std::string snapshot_path;
  std::string corpus_path;
  std::string vocab_path;
  std::string out_path;
  std::string method = "ope";
  int iters = 50;
  double epsilon = 1e-10;
  std::uint64_t seed = 42;
  int vb_max_iter = 50;
  double vb_tol = 1e-4;
  int cgs_samples = 50;
  int cgs_burn_in = 25;
  std::string trace_path;  // optional per-document diagnostics, OPE only
};

int cmd_infer(const InferArgs& args) {
  const Snapshot snap = snapshot_load(args.snapshot_path);
  const Corpus corpus = load_corpus_with_vocab(args.corpus_path, args.vocab_path);
  check_snapshot_matches(snap, corpus);

  const InferMethod method = parse_infer_method(args.method);
  InferConfig cfg;
  cfg.ope.iterations = args.iters;
  cfg.ope.epsilon = args.epsilon;
  cfg.vb = {args.vb_max_iter, args.vb_tol};
  cfg.cgs = {args.cgs_samples, args.cgs_burn_in};

  const TopicMatrix beta = snap.topics();
  auto out = must_open(args.out_path);
  out << "doc_id";
  for (int k = 1; k <= snap.hyper.topics; ++k) out << ",theta_" << k;
  out << '\n';

  std::ofstream trace_out;
  if (!args.trace_path.empty()) {
    trace_out = must_open(args.trace_path);
  }

  for (std::size_t i = 0; i < corpus.doc_count(); ++i) {
    TopicMixture theta;
    if (method == InferMethod::Ope && trace_out.is_open()) {
      OpeConfig ope_cfg = cfg.ope;
      ope_cfg.seed = derive_seed({args.seed, i});
      OpeTrace trace;
      theta = ope_infer(corpus.documents[i], beta, snap.hyper.alpha, ope_cfg, &trace);
      trace_out << "# doc " << i << '\n';
      write_trace_csv(trace, trace_out);
    } else {
      theta = infer_theta(method, corpus.documents[i], beta, snap.hyper.alpha, cfg,
                          derive_seed({args.seed, i}));
    }
    out << i;
    for (const double x : theta) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << ',' << buf;
    }
    out << '\n';
  }
  return 0;
}

// --- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string snapshot_path;
  std::string train_corpus_path;
  std::string test_corpus_path;
  std::string vocab_path;
  std::string infer = "ope";
  std::string out_dir;
  int iters = 50;
  double epsilon = 1e-10;
  int lpp_splits = 5;
  double lpp_ratio = 0.7;
  int npmi_top = 10;
  std::uint64_t seed = 42;
  int vb_max_iter = 50;
  double vb_tol = 1e-4;
  int cgs_samples = 50;
  int cgs_burn_in = 25;
};

int cmd_eval(const EvalArgs& args) {
  const Snapshot snap = snapshot_load(args.snapshot_path);
  const Corpus train = load_corpus_with_vocab(args.train_corpus_path, args.vocab_path);
  const Corpus test = load_corpus_with_vocab(args.test_corpus_path, args.vocab_path);
  check_snapshot_matches(snap, train);
  check_snapshot_matches(snap, test);

  InferConfig cfg;
  cfg.ope.iterations = args.iters;
  cfg.ope.epsilon = args.epsilon;
  cfg.vb = {args.vb_max_iter, args.vb_tol};
  cfg.cgs = {args.cgs_samples, args.cgs_burn_in};
  const LocalInfer infer =
      make_local_infer(parse_infer_method(args.infer), snap.hyper.alpha, cfg);

  const TopicMatrix beta = snap.topics();
  LppOptions opts;
  opts.n_splits = args.lpp_splits;
  opts.ratio = args.lpp_ratio;
  opts.seed = derive_seed({args.seed, 0x6c7070ull});
  const LppResult lpp = log_predictive_probability(beta, test, infer, opts);

  const int top_n = std::min<int>(args.npmi_top, static_cast<int>(beta.cols()));
  const auto candidates = top_term_union(beta, top_n);
  const auto stats = cooccurrence_stats(train, candidates);
  const NpmiResult coherence = npmi(beta, stats, top_n);

  std::printf("log_predictive_probability %.10g\n", lpp.value);
  std::printf("npmi %.10g\n", coherence.model);
  if (lpp.skipped_docs > 0) {
    std::printf("skipped_short_docs %zu\n", lpp.skipped_docs);
  }
  if (lpp.floored_tokens > 0) {
    std::printf("floored_tokens %zu\n", lpp.floored_tokens);
  }
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    auto out = must_open(fs::path(args.out_dir) / "top_terms.csv");
    write_top_terms_csv(beta, train.vocab, args.npmi_top, out);
  }
  return 0;
}

// --- bench ---------------------------------------------------------------

struct BenchArgs {
  TrainArgs train;
  std::string cells =
      "ml-ope+ope,online-ope+ope,streaming-ope+ope,online-ope+vb,streaming-ope+vb";
};

std::vector<std::pair<std::string, std::string>> parse_cells(const std::string& cell_list) {
  std::vector<std::pair<std::string, std::string>> cells;
  std::string item;
  std::istringstream in(cell_list);
  while (std::getline(in, item, ',')) {
    const auto plus = item.find('+');
    if (plus == std::string::npos) {
      throw UsageError("bench cell \"" + item + "\" must look like <learner>+<infer>");
    }
    cells.emplace_back(item.substr(0, plus), item.substr(plus + 1));
  }
  if (cells.empty()) throw UsageError("no bench cells given");
  return cells;
}

int cmd_bench(const BenchArgs& args) {
  TrainArgs base = args.train;
  finalize_hyper(base);

  Corpus train = load_corpus_with_vocab(base.corpus_path, base.vocab_path);
  Corpus test;
  if (!base.test_corpus_path.empty()) {
    test = load_corpus_with_vocab(base.test_corpus_path, base.vocab_path);
  } else if (base.n_test > 0) {
    auto [tr, te] = train_test_split(train, base.n_test, derive_seed({base.seed, 0x74657374ull}));
    train = std::move(tr);
    test = std::move(te);
  }

  EvalOptions eval;
  eval.test = test.doc_count() > 0 ? &test : nullptr;
  eval.cooccurrence = &train;
  eval.lpp_splits = base.lpp_splits;
  eval.lpp_ratio = base.lpp_ratio;
  eval.npmi_top_n = base.npmi_top;
  eval.seed = derive_seed({base.seed, 0x6576616cull});

  fs::create_directories(base.out_dir);
  auto timing_out = must_open(fs::path(base.out_dir) / "timing.csv");
  timing_out << "step,method,avg_infer_seconds_per_doc\n";

  const auto cells = parse_cells(args.cells);
  int failures = 0;
  for (const auto& [learner, infer] : cells) {
    const std::string label = learner + "+" + infer;
    TrainArgs cell = base;
    cell.learner = learner;
    cell.infer = infer;
    try {
      LearnerConfig cfg = make_learner_config(cell);
      const LearnerRun run = run_learner(train, cfg, &eval);
      {
        auto out = must_open(fs::path(base.out_dir) / ("metrics_" + label + ".csv"));
        write_metrics_csv(run.metrics, out);
      }
      for (const auto& timing : run.timings) {
        if (cfg.eval_every > 0 && timing.step % static_cast<std::uint64_t>(cfg.eval_every) == 0) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.9f", timing.avg_infer_seconds_per_doc);
          timing_out << timing.step << ',' << label << ',' << buf << '\n';
        }
      }
      snapshot_save(run.model, (fs::path(base.out_dir) / ("model_" + label + ".snapshot")).string());
      std::cout << "cell " << label << ": done\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "cell " << label << " failed: " << e.what() << "\n";
      auto fail_out = std::ofstream(fs::path(base.out_dir) / "failures.txt", std::ios::app);
      fail_out << label << ": " << e.what() << '\n';
    }
  }
  return failures == static_cast<int>(cells.size()) ? 1 : 0;
}

// --- stability -----------------------------------------------------------

struct StabilityArgs {
  std::string snapshot_path;
  std::string corpus_path;
  std::string vocab_path;
  std::string out_path;
  std::size_t docs = 100;
  int runs = 10;
  std::string iters_list = "50";
  double epsilon = 1e-10;
  std::uint64_t seed = 42;
};

int cmd_stability(const StabilityArgs& args) {
  const Snapshot snap = snapshot_load(args.snapshot_path);
  Corpus corpus = load_corpus_with_vocab(args.corpus_path, args.vocab_path);
  check_snapshot_matches(snap, corpus);
  if (args.docs < corpus.doc_count()) corpus.documents.resize(args.docs);

  std::vector<int> iteration_counts;
  std::istringstream in(args.iters_list);
  std::string item;
  while (std::getline(in, item, ',')) iteration_counts.push_back(std::stoi(item));
  if (iteration_counts.empty()) throw UsageError("--iters-list is empty");

  const auto rows = stability_report(corpus, snap.topics(), snap.hyper.alpha, args.runs,
                                     iteration_counts, args.seed, args.epsilon);
  auto out = must_open(args.out_path);
  write_stability_csv(rows, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"olda: stochastic MAP topic modeling for large corpora and streams"};
  app.require_subcommand(1);

  SynthArgs synth;
  synth.cfg.alpha = -1.0;
  synth.cfg.eta = -1.0;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus and its true topics");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--topics", synth.cfg.topics)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--vocab-size", synth.cfg.vocab_size)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--docs", synth.cfg.docs)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--doc-length", synth.cfg.doc_length)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--alpha", synth.cfg.alpha, "mixture concentration (default 1/K)");
  synth_cmd->add_option("--eta", synth.cfg.eta, "topic concentration (default 1/K)");
  synth_cmd->add_option("--seed", synth.cfg.seed);
  synth_cmd->add_option("--beta", synth.beta_path, "snapshot of topics to sample from");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "learn topics from a corpus");
  add_train_options(train_cmd, train);
  train_cmd->add_option("--out", train.out_dir, "output directory")->required();
  train_cmd->add_option("--learner", train.learner, "ml-ope | online-ope | streaming-ope");
  train_cmd->add_option("--infer", train.infer, "ope | vb | cgs");

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "per-document topic mixtures for a corpus");
  infer_cmd->add_option("--snapshot", infer.snapshot_path)->required();
  infer_cmd->add_option("--corpus", infer.corpus_path)->required();
  infer_cmd->add_option("--vocab", infer.vocab_path);
  infer_cmd->add_option("--out", infer.out_path, "output CSV")->required();
  infer_cmd->add_option("--method", infer.method, "ope | vb | cgs");
  infer_cmd->add_option("--iters", infer.iters)->check(CLI::PositiveNumber);
  infer_cmd->add_option("--epsilon", infer.epsilon);
  infer_cmd->add_option("--seed", infer.seed);
  infer_cmd->add_option("--vb-max-iter", infer.vb_max_iter);
  infer_cmd->add_option("--vb-tol", infer.vb_tol);
  infer_cmd->add_option("--cgs-samples", infer.cgs_samples);
  infer_cmd->add_option("--cgs-burn-in", infer.cgs_burn_in);
  infer_cmd->add_option("--trace", infer.trace_path, "per-iteration diagnostics CSV (ope only)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "predictive probability and coherence of a model");
  eval_cmd->add_option("--snapshot", eval.snapshot_path)->required();
  eval_cmd->add_option("--train-corpus", eval.train_corpus_path)->required();
  eval_cmd->add_option("--test-corpus", eval.test_corpus_path)->required();
  eval_cmd->add_option("--vocab", eval.vocab_path);
  eval_cmd->add_option("--infer", eval.infer, "ope | vb | cgs");
  eval_cmd->add_option("--out", eval.out_dir, "directory for the top-terms CSV");
  eval_cmd->add_option("--iters", eval.iters)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--epsilon", eval.epsilon);
  eval_cmd->add_option("--lpp-splits", eval.lpp_splits);
  eval_cmd->add_option("--lpp-ratio", eval.lpp_ratio);
  eval_cmd->add_option("--npmi-top", eval.npmi_top);
  eval_cmd->add_option("--seed", eval.seed);
  eval_cmd->add_option("--vb-max-iter", eval.vb_max_iter);
  eval_cmd->add_option("--vb-tol", eval.vb_tol);
  eval_cmd->add_option("--cgs-samples", eval.cgs_samples);
  eval_cmd->add_option("--cgs-burn-in", eval.cgs_burn_in);

  BenchArgs bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "run learner/inference cells on shared data and seeds");
  add_train_options(bench_cmd, bench.train);
  bench_cmd->add_option("--out", bench.train.out_dir, "output directory")->required();
  bench_cmd->add_option("--cells", bench.cells, "comma-separated <learner>+<infer> cells");

  StabilityArgs stability;
  auto* stability_cmd =
      app.add_subcommand("stability", "spread of inference objectives over random restarts");
  stability_cmd->add_option("--snapshot", stability.snapshot_path)->required();
  stability_cmd->add_option("--corpus", stability.corpus_path)->required();
  stability_cmd->add_option("--vocab", stability.vocab_path);
  stability_cmd->add_option("--out", stability.out_path, "output CSV")->required();
  stability_cmd->add_option("--docs", stability.docs, "documents to analyze (prefix of corpus)");
  stability_cmd->add_option("--runs", stability.runs, "random restarts per document");
  stability_cmd->add_option("--iters-list", stability.iters_list,
                            "comma-separated iteration budgets");
  stability_cmd->add_option("--epsilon", stability.epsilon);
  stability_cmd->add_option("--seed", stability.seed);

  try {
    app.parse(argc, argv);
    if (synth_cmd->parsed()) return cmd_synth(synth);
    if (train_cmd->parsed()) return cmd_train(train, train_cmd);
    if (infer_cmd->parsed()) return cmd_infer(infer);
    if (eval_cmd->parsed()) return cmd_eval(eval);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (stability_cmd->parsed()) return cmd_stability(stability);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace olda
