#include "olda/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "olda/errors.hpp"
#include "olda/rng.hpp"

namespace olda {

Vocabulary Vocabulary::placeholder(std::size_t vocab_size) {
  Vocabulary v;
  v.terms.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) v.terms.push_back("term" + std::to_string(i));
  return v;
}

std::int64_t Document::token_count() const {
  return std::accumulate(cnts.begin(), cnts.end(), std::int64_t{0});
}

Document Document::from_pairs(std::vector<std::pair<std::uint32_t, std::int32_t>> entries) {
  std::sort(entries.begin(), entries.end());
  Document d;
  for (const auto& [id, cnt] : entries) {
    if (cnt <= 0) continue;
    if (!d.ids.empty() && d.ids.back() == id) {
      d.cnts.back() += cnt;
    } else {
      d.ids.push_back(id);
      d.cnts.push_back(cnt);
    }
  }
  return d;
}

std::int64_t Corpus::token_count() const {
  std::int64_t total = 0;
  for (const auto& d : documents) total += d.token_count();
  return total;
}

Vocabulary parse_vocab(std::istream& in) {
  Vocabulary vocab;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw FormatError("vocabulary: empty term at line " + std::to_string(line_no));
    }
    if (!seen.insert(line).second) {
      throw FormatError("vocabulary: duplicate term \"" + line + "\" at line " +
                        std::to_string(line_no));
    }
    vocab.terms.push_back(line);
  }
  if (vocab.terms.empty()) throw FormatError("vocabulary: empty file");
  return vocab;
}

namespace {

std::uint64_t read_header_count(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    std::int64_t value = -1;
    if (!(ls >> value) || value < 0) {
      throw FormatError(std::string("bag-of-words: bad ") + what + " header line: \"" + line +
                        "\"");
    }
    std::string rest;
    if (ls >> rest) {
      throw FormatError(std::string("bag-of-words: trailing content in ") + what +
                        " header line");
    }
    return static_cast<std::uint64_t>(value);
  }
  throw FormatError(std::string("bag-of-words: missing ") + what + " header line");
}

}  // namespace

UciParseResult parse_uci_bow(std::istream& in) {
  return parse_uci_bow(in, Vocabulary{});
}

UciParseResult parse_uci_bow(std::istream& in, Vocabulary vocab) {
  const std::uint64_t n_docs = read_header_count(in, "D");
  const std::uint64_t n_words = read_header_count(in, "W");
  const std::uint64_t nnz = read_header_count(in, "NNZ");

  if (vocab.size() == 0) {
    vocab = Vocabulary::placeholder(n_words);
  } else if (vocab.size() != n_words) {
    throw FormatError("bag-of-words: header W=" + std::to_string(n_words) +
                      " does not match vocabulary size " + std::to_string(vocab.size()));
  }

  std::vector<std::vector<std::pair<std::uint32_t, std::int32_t>>> entries(n_docs);
  for (std::uint64_t i = 0; i < nnz; ++i) {
    std::int64_t doc_id = 0, word_id = 0, count = 0;
    if (!(in >> doc_id >> word_id >> count)) {
      throw FormatError("bag-of-words: expected " + std::to_string(nnz) +
                        " entries, stream ended after " + std::to_string(i));
    }
    if (doc_id < 1 || static_cast<std::uint64_t>(doc_id) > n_docs) {
      throw FormatError("bag-of-words: docId " + std::to_string(doc_id) + " out of range [1," +
                        std::to_string(n_docs) + "]");
    }
    if (word_id < 1 || static_cast<std::uint64_t>(word_id) > n_words) {
      throw FormatError("bag-of-words: wordId " + std::to_string(word_id) + " out of range [1," +
                        std::to_string(n_words) + "]");
    }
    if (count <= 0) {
      throw FormatError("bag-of-words: non-positive count " + std::to_string(count) +
                        " for docId " + std::to_string(doc_id));
    }
    entries[doc_id - 1].emplace_back(static_cast<std::uint32_t>(word_id - 1),
                                     static_cast<std::int32_t>(count));
  }
  std::string rest;
  if (in >> rest) {
    throw FormatError("bag-of-words: data after the " + std::to_string(nnz) +
                      " entries announced by the NNZ header");
  }

  UciParseResult result;
  result.corpus.vocab = std::move(vocab);
  result.corpus.documents.reserve(n_docs);
  for (auto& e : entries) {
    Document d = Document::from_pairs(std::move(e));
    if (d.empty()) {
      ++result.dropped_empty_docs;
    } else {
      result.corpus.documents.push_back(std::move(d));
    }
  }
  return result;
}

void write_uci_bow(const Corpus& corpus, std::ostream& out) {
  std::uint64_t nnz = 0;
  for (const auto& d : corpus.documents) nnz += d.distinct_terms();
  out << corpus.doc_count() << '\n' << corpus.vocab_size() << '\n' << nnz << '\n';
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const Document& d = corpus.documents[i];
    for (std::size_t j = 0; j < d.ids.size(); ++j) {
      out << (i + 1) << ' ' << (d.ids[j] + 1) << ' ' << d.cnts[j] << '\n';
    }
  }
}

void write_vocab(const Vocabulary& vocab, std::ostream& out) {
  for (const auto& term : vocab.terms) out << term << '\n';
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open \"" + path + "\" for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
  return out;
}

}  // namespace

Vocabulary load_vocab(const std::string& path) {
  auto in = open_input(path);
  return parse_vocab(in);
}

UciParseResult load_uci_bow(const std::string& path) {
  auto in = open_input(path);
  return parse_uci_bow(in);
}

UciParseResult load_uci_bow(const std::string& path, Vocabulary vocab) {
  auto in = open_input(path);
  return parse_uci_bow(in, std::move(vocab));
}

void save_uci_bow(const Corpus& corpus, const std::string& path) {
  auto out = open_output(path);
  write_uci_bow(corpus, out);
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
  auto out = open_output(path);
  write_vocab(vocab, out);
}

std::pair<Corpus, Corpus> train_test_split(const Corpus& corpus, std::size_t n_test,
                                           std::uint64_t seed) {
  const std::size_t n = corpus.doc_count();
  if (n_test == 0 || n_test >= n) {
    throw std::invalid_argument("train_test_split: n_test must be in (0, " + std::to_string(n) +
                                ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_rng(derive_seed({seed, 0x73706c6974ull}));
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<bool> in_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;

  Corpus train, test;
  train.vocab = corpus.vocab;
  test.vocab = corpus.vocab;
  for (std::size_t i = 0; i < n; ++i) {
    (in_test[i] ? test : train).documents.push_back(corpus.documents[i]);
  }
  return {std::move(train), std::move(test)};
}

DocBatch sample_minibatch(const Corpus& corpus, std::size_t batch_size, std::uint64_t seed,
                          std::uint64_t t) {
  const std::size_t n = corpus.doc_count();
  if (n == 0) throw std::invalid_argument("sample_minibatch: empty corpus");
  if (batch_size == 0) throw std::invalid_argument("sample_minibatch: batch_size must be >= 1");

  DocBatch batch;
  if (batch_size >= n) {
    batch.documents = corpus.documents;
    return batch;
  }
  // Partial Fisher-Yates over an index vector, then ascending order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_rng(derive_seed({seed, t, 0x6d696e69ull}));
  std::vector<std::size_t> picked(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(order[i], order[j]);
    picked[i] = order[i];
  }
  std::sort(picked.begin(), picked.end());
  batch.documents.reserve(batch_size);
  for (std::size_t idx : picked) batch.documents.push_back(corpus.documents[idx]);
  return batch;
}

HoldoutSplit split_holdout(const Document& doc, double ratio, std::uint64_t seed) {
  if (ratio <= 0.0 || ratio >= 1.0) {
    throw std::invalid_argument("split_holdout: ratio must be in (0, 1)");
  }
  if (doc.empty()) throw std::invalid_argument("split_holdout: empty document");
  const std::int64_t n = doc.token_count();
  if (n < 2) throw std::invalid_argument("split_holdout: document needs at least 2 tokens");

  std::vector<std::uint32_t> tokens;
  tokens.reserve(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < doc.ids.size(); ++j) {
    tokens.insert(tokens.end(), static_cast<std::size_t>(doc.cnts[j]), doc.ids[j]);
  }
  auto rng = make_rng(derive_seed({seed, 0x686f6c64ull}));
  std::shuffle(tokens.begin(), tokens.end(), rng);

  std::size_t n_obs = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(n)));
  // Keep both sides non-empty.
  n_obs = std::min(n_obs, static_cast<std::size_t>(n) - 1);
  n_obs = std::max<std::size_t>(n_obs, 1);

  std::vector<std::pair<std::uint32_t, std::int32_t>> obs_entries;
  obs_entries.reserve(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) obs_entries.emplace_back(tokens[i], 1);

  HoldoutSplit split;
  split.observed = Document::from_pairs(std::move(obs_entries));
  split.heldout.assign(tokens.begin() + static_cast<std::ptrdiff_t>(n_obs), tokens.end());
  return split;
}

}  // namespace olda
