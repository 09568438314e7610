#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scaffold/autodiff.hpp"
#include "scaffold/span.hpp"
#include "scaffold/vocab.hpp"

namespace scaffold {

struct EncoderConfig {
  std::size_t word_dim = 300;
  std::size_t target_dim = 100;
  std::size_t hidden_dim = 300;  // per direction
  std::size_t layers = 6;
  double dropout = 0.1;
  bool freeze_embeddings = false;
  bool use_target = true;  // coreference feeds no target indicator

  std::size_t input_dim() const {
    return word_dim + (use_target ? target_dim : 0);
  }
  std::size_t output_dim() const { return 2 * hidden_dim; }
};

struct LstmDirParams {
  Parameter* w = nullptr;  // [4h, in + h], gate order i,f,g,o
  Parameter* b = nullptr;  // [4h]
};

struct EncoderParams {
  EncoderConfig cfg;
  Parameter* embedding = nullptr;     // [vocab+1, word_dim]
  Parameter* target_embed = nullptr;  // [2, target_dim]; row 1 = inside target
  struct Layer {
    LstmDirParams fwd, bwd;
    Parameter* hw_w = nullptr;  // highway gate, layers >= 2 only
    Parameter* hw_b = nullptr;
  };
  std::vector<Layer> layers;
};

EncoderParams make_encoder(ParameterStore& store, const EncoderConfig& cfg,
                           std::size_t vocab_size, Rng& rng,
                           const std::string& prefix = "encoder");

// 0/1 flags marking tokens inside the target span, before the linear
// transform. Throws on an empty sentence or an out-of-bounds target.
std::vector<int> target_indicators(std::size_t n, const Span& target);

// Per-token [x_q; v_q] input vectors. `target` must be given iff the encoder
// was built with use_target.
std::vector<Var> embed_tokens(Tape& tape, const EncoderParams& params,
                              const std::vector<int>& token_ids,
                              const std::optional<Span>& target);

// l-layer bidirectional LSTM with highway connections between stacked
// layers; h_q is the concatenation of both directions' states.
std::vector<Var> encode(Tape& tape, const EncoderParams& params,
                        const std::vector<Var>& inputs);

}  // namespace scaffold
