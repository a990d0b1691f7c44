#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "olda/cli.hpp"
#include "olda/corpus.hpp"
#include "olda/model.hpp"

using namespace olda;
namespace fs = std::filesystem;

namespace {

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("olda");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "olda_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Strips the elapsed_seconds column from a metrics CSV.
std::string without_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i == 2) continue;
      out << cols[i] << ',';
    }
    out << '\n';
  }
  return out.str();
}

struct SynthOutputs {
  fs::path dir;
  std::string corpus;
  std::string vocab;
  std::string beta;
};

SynthOutputs make_synth(const std::string& name, const std::string& seed = "11") {
  SynthOutputs s;
  s.dir = fresh_dir(name);
  REQUIRE(cli({"synth", "--out", s.dir.string(), "--topics", "3", "--vocab-size", "40",
               "--docs", "120", "--doc-length", "30", "--alpha", "0.2", "--seed", seed}) == 0);
  s.corpus = (s.dir / "corpus.uci").string();
  s.vocab = (s.dir / "vocab.txt").string();
  s.beta = (s.dir / "beta_true.snapshot").string();
  return s;
}

}  // namespace

TEST_CASE("cli usage errors exit with code 2") {
  CHECK(cli({}) == 2);
  CHECK(cli({"no-such-command"}) == 2);
  CHECK(cli({"synth"}) == 2);  // missing --out
  CHECK(cli({"--help"}) == 0);
}

TEST_CASE("synth writes a parseable corpus, vocabulary, and truth snapshot") {
  const SynthOutputs s = make_synth("synth_basic");
  const UciParseResult parsed = load_uci_bow(s.corpus, load_vocab(s.vocab));
  CHECK(parsed.corpus.doc_count() == 120);
  CHECK(parsed.corpus.vocab_size() == 40);

  const Snapshot truth = snapshot_load(s.beta);
  CHECK(truth.kind == SnapshotKind::Beta);
  CHECK(truth.matrix.rows() == 3);
  CHECK(truth.matrix.cols() == 40);

  // Same seed, byte-identical outputs.
  const SynthOutputs again = make_synth("synth_basic_again");
  CHECK(slurp(again.dir / "corpus.uci") == slurp(s.dir / "corpus.uci"));
  CHECK(slurp(again.dir / "beta_true.snapshot") == slurp(s.dir / "beta_true.snapshot"));
}

TEST_CASE("train writes a snapshot and cadenced metrics; reruns differ only in time") {
  const SynthOutputs s = make_synth("train_data");
  const fs::path out1 = fresh_dir("train_run1");
  const std::vector<std::string> train_args{
      "train",        "--corpus",    s.corpus, "--vocab",      s.vocab,
      "--out",        out1.string(), "--learner", "online-ope", "--infer", "ope",
      "--topics",     "3",           "--batch-size", "20",     "--passes", "2",
      "--eval-every", "3",           "--n-test",     "20",     "--iters",  "20",
      "--lpp-splits", "2",           "--seed",       "5"};
  REQUIRE(cli(train_args) == 0);

  const Snapshot model = snapshot_load((out1 / "model.snapshot").string());
  CHECK(model.kind == SnapshotKind::Lambda);
  CHECK(model.step == 10);  // ceil(100/20) * 2 passes

  const std::string metrics = slurp(out1 / "metrics.csv");
  CHECK(metrics.find("step,docs_seen,elapsed_seconds,log_predictive_probability,npmi\n") == 0);
  // floor(10 / 3) = 3 evaluation rows plus the header.
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 4);

  const fs::path out2 = fresh_dir("train_run2");
  std::vector<std::string> rerun = train_args;
  rerun[6] = out2.string();
  REQUIRE(cli(rerun) == 0);
  CHECK(slurp(out2 / "model.snapshot") == slurp(out1 / "model.snapshot"));
  CHECK(without_elapsed(slurp(out2 / "metrics.csv")) == without_elapsed(metrics));
  CHECK(slurp(out2 / "top_terms.csv") == slurp(out1 / "top_terms.csv"));
}

TEST_CASE("train rejects combining --test-corpus with --n-test") {
  const SynthOutputs s = make_synth("train_test_excl");
  const fs::path out = fresh_dir("train_test_excl_out");
  CHECK(cli({"train", "--corpus", s.corpus, "--out", out.string(), "--test-corpus", s.corpus,
             "--n-test", "10"}) == 2);
}

TEST_CASE("train rejects online-ope in streaming mode") {
  const SynthOutputs s = make_synth("train_stream_reject");
  const fs::path out = fresh_dir("train_stream_reject_out");
  CHECK(cli({"train", "--corpus", s.corpus, "--out", out.string(), "--learner", "online-ope",
             "--streaming"}) == 2);
  CHECK(cli({"train", "--corpus", s.corpus, "--out", out.string(), "--learner",
             "streaming-ope", "--streaming", "--topics", "3", "--eval-every", "0"}) == 0);
}

TEST_CASE("train warns that streaming-ope ignores eta, tau, and kappa") {
  const SynthOutputs s = make_synth("train_stream_warn");
  const fs::path out = fresh_dir("train_stream_warn_out");

  std::ostringstream captured;
  std::streambuf* old = std::cerr.rdbuf(captured.rdbuf());
  const int rc = cli({"train", "--corpus", s.corpus, "--out", out.string(), "--learner",
                      "streaming-ope", "--streaming", "--topics", "3", "--eval-every", "0",
                      "--eta", "0.5", "--tau", "2"});
  std::cerr.rdbuf(old);

  CHECK(rc == 0);
  CHECK(captured.str().find("--eta has no effect") != std::string::npos);
  CHECK(captured.str().find("--tau has no effect") != std::string::npos);
  CHECK(captured.str().find("--kappa") == std::string::npos);
}

TEST_CASE("infer with a one-topic snapshot writes all-ones rows") {
  const fs::path dir = fresh_dir("infer_k1");
  REQUIRE(cli({"synth", "--out", dir.string(), "--topics", "1", "--vocab-size", "12",
               "--docs", "15", "--doc-length", "10"}) == 0);
  const fs::path theta_csv = dir / "theta.csv";
  REQUIRE(cli({"infer", "--snapshot", (dir / "beta_true.snapshot").string(), "--corpus",
               (dir / "corpus.uci").string(), "--out", theta_csv.string()}) == 0);
  std::ifstream in(theta_csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "doc_id,theta_1");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.substr(line.find(',') + 1) == "1");
    ++rows;
  }
  CHECK(rows == 15);
}

TEST_CASE("synth can sample from supplied topics") {
  const SynthOutputs s = make_synth("synth_reuse_src");
  const fs::path dir = fresh_dir("synth_reuse_dst");
  REQUIRE(cli({"synth", "--out", dir.string(), "--topics", "3", "--vocab-size", "40",
               "--docs", "30", "--doc-length", "15", "--seed", "77", "--beta", s.beta}) == 0);
  const Snapshot src = snapshot_load(s.beta);
  const Snapshot dst = snapshot_load((dir / "beta_true.snapshot").string());
  CHECK(dst.matrix == src.matrix);
  CHECK(slurp(dir / "corpus.uci") != slurp(s.dir / "corpus.uci"));
}

TEST_CASE("infer writes one simplex row per document") {
  const SynthOutputs s = make_synth("infer_data");
  const fs::path out = fresh_dir("infer_out");
  const fs::path theta_csv = out / "theta.csv";
  REQUIRE(cli({"infer", "--snapshot", s.beta, "--corpus", s.corpus, "--method", "ope",
               "--out", theta_csv.string(), "--seed", "3"}) == 0);

  std::ifstream in(theta_csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "doc_id,theta_1,theta_2,theta_3");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string col;
    std::getline(ls, col, ',');
    double sum = 0.0;
    while (std::getline(ls, col, ',')) sum += std::stod(col);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    ++rows;
  }
  CHECK(rows == 120);

  CHECK(cli({"infer", "--snapshot", s.beta, "--corpus", s.corpus, "--method", "gibbs",
             "--out", theta_csv.string()}) == 2);
}

TEST_CASE("infer rejects a snapshot whose vocabulary size mismatches the corpus") {
  const SynthOutputs s = make_synth("infer_mismatch");
  const fs::path small = fresh_dir("infer_mismatch_small");
  REQUIRE(cli({"synth", "--out", small.string(), "--topics", "2", "--vocab-size", "10",
               "--docs", "20", "--doc-length", "10"}) == 0);
  const fs::path out = fresh_dir("infer_mismatch_out");
  CHECK(cli({"infer", "--snapshot", (small / "beta_true.snapshot").string(), "--corpus",
             s.corpus, "--out", (out / "theta.csv").string()}) == 1);
}

TEST_CASE("eval prints metrics for a snapshot") {
  const SynthOutputs s = make_synth("eval_data");
  CHECK(cli({"eval", "--snapshot", s.beta, "--train-corpus", s.corpus, "--test-corpus",
             s.corpus, "--lpp-splits", "1", "--npmi-top", "5"}) == 0);
}

TEST_CASE("bench writes per-cell metrics and a shared timing csv") {
  const SynthOutputs s = make_synth("bench_data");
  const fs::path out = fresh_dir("bench_out");
  REQUIRE(cli({"bench", "--corpus", s.corpus, "--vocab", s.vocab, "--out", out.string(),
               "--cells", "online-ope+ope,online-ope+vb", "--topics", "3", "--batch-size",
               "30", "--passes", "1", "--eval-every", "2", "--n-test", "20", "--iters", "10",
               "--lpp-splits", "1", "--seed", "4"}) == 0);

  CHECK(fs::exists(out / "metrics_online-ope+ope.csv"));
  CHECK(fs::exists(out / "metrics_online-ope+vb.csv"));
  const std::string timing = slurp(out / "timing.csv");
  CHECK(timing.find("step,method,avg_infer_seconds_per_doc\n") == 0);
  CHECK(timing.find(",online-ope+ope,") != std::string::npos);
  CHECK(timing.find(",online-ope+vb,") != std::string::npos);

  // 100 train docs, batch 30 -> 4 steps; evaluated steps 2 and 4 per cell.
  CHECK(std::count(timing.begin(), timing.end(), '\n') == 5);
}

TEST_CASE("stability writes the documented csv") {
  const SynthOutputs s = make_synth("stability_data");
  const fs::path out = fresh_dir("stability_out");
  const fs::path csv = out / "stability.csv";
  REQUIRE(cli({"stability", "--snapshot", s.beta, "--corpus", s.corpus, "--out", csv.string(),
               "--docs", "5", "--runs", "4", "--iters-list", "10,20"}) == 0);
  const std::string text = slurp(csv);
  CHECK(text.find("doc_id,T,mean_objective,std_objective\n") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);  // header + 5 docs * 2 budgets
}
