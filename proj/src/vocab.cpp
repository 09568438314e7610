#include "scaffold/vocab.hpp"

#include <fstream>
#include <sstream>

#include "scaffold/common.hpp"

namespace scaffold {

EmbeddingTable load_embeddings(const std::string& path,
                               std::size_t declared_dim) {
  std::ifstream is(path);
  if (!is) throw data_error("cannot open embeddings file: " + path);
  EmbeddingTable table;
  table.dim = declared_dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    std::vector<double> vec;
    vec.reserve(declared_dim);
    double v;
    while (ss >> v) vec.push_back(v);
    if (vec.size() != declared_dim)
      throw data_error("embeddings " + path + " line " +
                       std::to_string(line_no) + ": expected " +
                       std::to_string(declared_dim) + " values, found " +
                       std::to_string(vec.size()));
    if (table.index.count(token)) continue;  // keep the first occurrence
    table.index[token] = table.tokens.size();
    table.tokens.push_back(token);
    table.vectors.push_back(std::move(vec));
  }
  return table;
}

int Vocabulary::add(const std::string& token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  index_[token] = id;
  tokens_.push_back(token);
  oov_.push_back(true);
  return id;
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? unk_id() : it->second;
}

Vocabulary build_vocab(const std::vector<std::string>& corpus_tokens,
                       const EmbeddingTable* table) {
  Vocabulary vocab;
  for (const std::string& t : corpus_tokens) {
    const int id = vocab.add(t);
    if (table != nullptr && table->find(t) != nullptr) vocab.set_oov(id, false);
  }
  return vocab;
}

void init_embedding_matrix(Parameter& embedding, const Vocabulary& vocab,
                           const EmbeddingTable* table, Rng& rng) {
  const std::size_t dim = embedding.value.cols();
  if (embedding.value.rows() != vocab.size() + 1)
    throw config_error("embedding matrix rows must be vocab size + 1");
  for (std::size_t id = 0; id <= vocab.size(); ++id) {
    double* out = embedding.value.data.data() + id * dim;
    const std::vector<double>* pre = nullptr;
    if (table != nullptr && id < vocab.size())
      pre = table->find(vocab.tokens()[id]);
    if (pre != nullptr) {
      std::copy(pre->begin(), pre->end(), out);
    } else {
      // persistent random vector for OOV tokens and the unk row
      const double bound = std::sqrt(3.0 / static_cast<double>(dim));
      for (std::size_t k = 0; k < dim; ++k) out[k] = rng.uniform(-bound, bound);
    }
  }
}

}  // namespace scaffold
