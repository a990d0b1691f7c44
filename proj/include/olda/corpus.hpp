#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace olda {

// Term dictionary; a term's index in `terms` is its id.
struct Vocabulary {
  std::vector<std::string> terms;

  std::size_t size() const { return terms.size(); }

  // "term0", "term1", ... names for synthetic or nameless corpora.
  static Vocabulary placeholder(std::size_t vocab_size);
};

// Sparse bag of words: parallel arrays of distinct term ids (strictly
// increasing) and their positive counts.
struct Document {
  std::vector<std::uint32_t> ids;
  std::vector<std::int32_t> cnts;

  std::size_t distinct_terms() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  std::int64_t token_count() const;

  // Builds a document from (term, count) pairs in any order; duplicate term
  // ids are summed, non-positive counts dropped.
  static Document from_pairs(std::vector<std::pair<std::uint32_t, std::int32_t>> entries);

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocab;

  std::size_t doc_count() const { return documents.size(); }
  std::size_t vocab_size() const { return vocab.size(); }
  std::int64_t token_count() const;
};

struct DocBatch {
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
};

// One document split into an observed part and a list of held-out token ids.
struct HoldoutSplit {
  Document observed;
  std::vector<std::uint32_t> heldout;
};

// One UTF-8 term per line; duplicates and empty lines are format errors.
Vocabulary parse_vocab(std::istream& in);

struct UciParseResult {
  Corpus corpus;
  std::size_t dropped_empty_docs = 0;
};

// UCI bag-of-words text: header lines D, W, NNZ, then NNZ lines
// "docId wordId count" with 1-based ids. Documents that end up with no
// entries are dropped and counted in `dropped_empty_docs`.
UciParseResult parse_uci_bow(std::istream& in);
UciParseResult parse_uci_bow(std::istream& in, Vocabulary vocab);

void write_uci_bow(const Corpus& corpus, std::ostream& out);
void write_vocab(const Vocabulary& vocab, std::ostream& out);

Vocabulary load_vocab(const std::string& path);
UciParseResult load_uci_bow(const std::string& path);
UciParseResult load_uci_bow(const std::string& path, Vocabulary vocab);
void save_uci_bow(const Corpus& corpus, const std::string& path);
void save_vocab(const Vocabulary& vocab, const std::string& path);

// Disjoint (train, test) partition with n_test test documents; deterministic
// given the seed. Document order within each side follows the input corpus.
std::pair<Corpus, Corpus> train_test_split(const Corpus& corpus, std::size_t n_test,
                                           std::uint64_t seed);

// batch_size documents sampled uniformly without replacement, independently
// across steps t; the whole corpus when batch_size >= doc count.
DocBatch sample_minibatch(const Corpus& corpus, std::size_t batch_size, std::uint64_t seed,
                          std::uint64_t t);

// Token-level split: the token multiset is shuffled and the first
// ceil(ratio * n) tokens become the observed document, the rest the held-out
// list. Both sides are non-empty; documents with fewer than 2 tokens are
// rejected.
HoldoutSplit split_holdout(const Document& doc, double ratio, std::uint64_t seed);

}  // namespace olda
