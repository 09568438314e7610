#pragma once

#include <map>
#include <string>
#include <vector>

#include "scaffold/autodiff.hpp"
#include "scaffold/rng.hpp"

namespace scaffold {

// Parsed pretrained embedding file: one token per line followed by `dim`
// whitespace-separated decimal floats.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> vectors;
  std::map<std::string, std::size_t> index;

  const std::vector<double>* find(const std::string& token) const {
    auto it = index.find(token);
    return it == index.end() ? nullptr : &vectors[it->second];
  }
};

EmbeddingTable load_embeddings(const std::string& path, std::size_t declared_dim);

// Token -> id map over the distinct tokens of the training corpora, in first
// appearance order. Unseen tokens map to a reserved trailing row of the
// embedding matrix (id == size()).
class Vocabulary {
 public:
  int add(const std::string& token);          // existing id if already present
  int lookup(const std::string& token) const; // unk_id() if absent
  int unk_id() const { return static_cast<int>(tokens_.size()); }
  std::size_t size() const { return tokens_.size(); }
  bool is_oov(int id) const { return oov_[id]; }  // not covered by pretrained vectors
  const std::vector<std::string>& tokens() const { return tokens_; }
  void set_oov(int id, bool v) { oov_[id] = v; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> index_;
  std::vector<bool> oov_;
};

// Distinct tokens of `corpus_tokens` in order; marks tokens absent from the
// embedding table (or all of them when table is null) as OOV.
Vocabulary build_vocab(const std::vector<std::string>& corpus_tokens,
                       const EmbeddingTable* table);

// Fills a [vocab.size()+1, word_dim] matrix: pretrained rows copied from the
// table, OOV rows (and the trailing unk row) drawn once from rng so they stay
// fixed for the whole run.
void init_embedding_matrix(Parameter& embedding, const Vocabulary& vocab,
                           const EmbeddingTable* table, Rng& rng);

}  // namespace scaffold
