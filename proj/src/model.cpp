#include "olda/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "olda/errors.hpp"
#include "olda/rng.hpp"

namespace olda {

double step_size(std::uint64_t t, const StepSchedule& schedule) {
  return std::pow(static_cast<double>(t) + schedule.tau, -schedule.kappa);
}

TopicMatrix normalize_rows(Matrix m, double floor) {
  const std::size_t v = m.cols();
  for (std::size_t k = 0; k < m.rows(); ++k) {
    auto row = m.row(k);
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (sum < floor) {
      const double uniform = 1.0 / static_cast<double>(v);
      std::fill(row.begin(), row.end(), uniform);
    } else {
      for (double& x : row) x /= sum;
    }
  }
  return m;
}

TopicMatrix topics_from_lambda(const VariationalTopics& lambda) {
  return normalize_rows(lambda);
}

VariationalTopics random_lambda(int topics, std::size_t vocab_size, std::uint64_t seed) {
  VariationalTopics lambda(static_cast<std::size_t>(topics), vocab_size);
  auto rng = make_rng(derive_seed({seed, 0x6c616d62ull}));
  for (double& x : lambda.data()) x = 0.01 + uniform01(rng);
  return lambda;
}

TopicMatrix random_topic_matrix(int topics, std::size_t vocab_size, std::uint64_t seed) {
  return normalize_rows(random_lambda(topics, vocab_size, seed));
}

TopicMatrix Snapshot::topics() const {
  return kind == SnapshotKind::Beta ? matrix : topics_from_lambda(matrix);
}

namespace {

constexpr const char* kSnapshotMagic = "olda-snapshot";
constexpr int kSnapshotVersion = 1;

void write_double(std::ostream& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out << buf;
}

}  // namespace

void snapshot_write(const Snapshot& snapshot, std::ostream& out) {
  out << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
  out << "kind " << (snapshot.kind == SnapshotKind::Beta ? "beta" : "lambda") << '\n';
  out << "K " << snapshot.hyper.topics << '\n';
  out << "V " << snapshot.matrix.cols() << '\n';
  out << "alpha ";
  write_double(out, snapshot.hyper.alpha);
  out << '\n' << "eta ";
  write_double(out, snapshot.hyper.eta);
  out << '\n' << "t " << snapshot.step << '\n';
  for (std::size_t k = 0; k < snapshot.matrix.rows(); ++k) {
    auto row = snapshot.matrix.row(k);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ' ';
      write_double(out, row[j]);
    }
    out << '\n';
  }
}

namespace {

std::string expect_field(std::istream& in, const std::string& name) {
  std::string key, value;
  if (!(in >> key >> value) || key != name) {
    throw FormatError("snapshot: expected field \"" + name + "\"");
  }
  return value;
}

long field_as_long(std::istream& in, const std::string& name) {
  try {
    return std::stol(expect_field(in, name));
  } catch (const std::logic_error&) {
    throw FormatError("snapshot: field \"" + name + "\" is not an integer");
  }
}

double field_as_double(std::istream& in, const std::string& name) {
  try {
    return std::stod(expect_field(in, name));
  } catch (const std::logic_error&) {
    throw FormatError("snapshot: field \"" + name + "\" is not a number");
  }
}

}  // namespace

Snapshot snapshot_read(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kSnapshotMagic) {
    throw FormatError("snapshot: bad magic");
  }
  if (version != kSnapshotVersion) {
    throw FormatError("snapshot: unsupported version " + std::to_string(version));
  }

  Snapshot snap;
  const std::string kind = expect_field(in, "kind");
  if (kind == "beta") {
    snap.kind = SnapshotKind::Beta;
  } else if (kind == "lambda") {
    snap.kind = SnapshotKind::Lambda;
  } else {
    throw FormatError("snapshot: unknown kind \"" + kind + "\"");
  }
  const long k = field_as_long(in, "K");
  const long v = field_as_long(in, "V");
  if (k < 1 || v < 1) throw FormatError("snapshot: non-positive dimensions");
  snap.hyper.topics = static_cast<int>(k);
  snap.hyper.alpha = field_as_double(in, "alpha");
  snap.hyper.eta = field_as_double(in, "eta");
  const long step = field_as_long(in, "t");
  if (step < 0) throw FormatError("snapshot: negative step");
  snap.step = static_cast<std::uint64_t>(step);

  snap.matrix = Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(v));
  for (double& x : snap.matrix.data()) {
    if (!(in >> x)) throw FormatError("snapshot: truncated matrix data");
  }
  double extra;
  if (in >> extra) throw FormatError("snapshot: trailing data after the matrix");
  return snap;
}

void snapshot_save(const Snapshot& snapshot, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
  snapshot_write(snapshot, out);
}

Snapshot snapshot_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open \"" + path + "\" for reading");
  return snapshot_read(in);
}

void write_top_terms_csv(const TopicMatrix& beta, const Vocabulary& vocab, int top_n,
                         std::ostream& out) {
  out << "topic_id,rank,term,probability\n";
  const int n = std::min<int>(top_n, static_cast<int>(beta.cols()));
  for (std::size_t k = 0; k < beta.rows(); ++k) {
    auto row = beta.row(k);
    std::vector<std::uint32_t> order(row.size());
    std::iota(order.begin(), order.end(), 0u);
    std::partial_sort(order.begin(), order.begin() + n, order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        if (row[a] != row[b]) return row[a] > row[b];
                        return a < b;
                      });
    for (int r = 0; r < n; ++r) {
      out << k << ',' << (r + 1) << ',' << vocab.terms[order[static_cast<std::size_t>(r)]] << ',';
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.10g", row[order[static_cast<std::size_t>(r)]]);
      out << buf << '\n';
    }
  }
}

}  // namespace olda
