#include "scaffold/encoder.hpp"

#include "scaffold/common.hpp"

namespace scaffold {

EncoderParams make_encoder(ParameterStore& store, const EncoderConfig& cfg,
                           std::size_t vocab_size, Rng& rng,
                           const std::string& prefix) {
  EncoderParams p;
  p.cfg = cfg;
  p.embedding = store.add(prefix + ".embedding",
                          {vocab_size + 1, cfg.word_dim}, rng,
                          /*trainable=*/!cfg.freeze_embeddings);
  if (cfg.use_target)
    p.target_embed = store.add(prefix + ".target_embed", {2, cfg.target_dim}, rng);
  const std::size_t h = cfg.hidden_dim;
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    const std::size_t in = l == 0 ? cfg.input_dim() : 2 * h;
    EncoderParams::Layer layer;
    const std::string lp = prefix + ".layer" + std::to_string(l);
    layer.fwd.w = store.add(lp + ".fwd.w", {4 * h, in + h}, rng);
    layer.fwd.b = store.add(lp + ".fwd.b", {4 * h}, rng);
    layer.bwd.w = store.add(lp + ".bwd.w", {4 * h, in + h}, rng);
    layer.bwd.b = store.add(lp + ".bwd.b", {4 * h}, rng);
    if (l >= 1) {  // input dim equals output dim from the second layer on
      layer.hw_w = store.add(lp + ".highway.w", {2 * h, 2 * h}, rng);
      layer.hw_b = store.add(lp + ".highway.b", {2 * h}, rng);
    }
    p.layers.push_back(layer);
  }
  return p;
}

std::vector<int> target_indicators(std::size_t n, const Span& target) {
  if (n == 0) throw data_error("empty sentence");
  if (target.i < 1 || target.j > static_cast<int>(n) || target.i > target.j)
    throw data_error("target span out of bounds: (" +
                     std::to_string(target.i) + "," + std::to_string(target.j) +
                     ") for n=" + std::to_string(n));
  std::vector<int> ind(n, 0);
  for (int q = target.i; q <= target.j; ++q) ind[q - 1] = 1;
  return ind;
}

std::vector<Var> embed_tokens(Tape& tape, const EncoderParams& params,
                              const std::vector<int>& token_ids,
                              const std::optional<Span>& target) {
  if (token_ids.empty()) throw data_error("empty sentence");
  const EncoderConfig& cfg = params.cfg;
  if (cfg.use_target != target.has_value())
    throw config_error("encoder target indicator mismatch");
  Var emb = tape.param(*params.embedding);
  std::vector<Var> inputs;
  inputs.reserve(token_ids.size());
  if (cfg.use_target) {
    const std::vector<int> ind = target_indicators(token_ids.size(), *target);
    Var tgt = tape.param(*params.target_embed);
    for (std::size_t q = 0; q < token_ids.size(); ++q) {
      Var x = row(emb, static_cast<std::size_t>(token_ids[q]));
      Var v = row(tgt, static_cast<std::size_t>(ind[q]));
      inputs.push_back(concat({x, v}));
    }
  } else {
    for (int id : token_ids)
      inputs.push_back(row(emb, static_cast<std::size_t>(id)));
  }
  return inputs;
}

namespace {

struct LstmCell {
  Var w, b;
  std::size_t h;

  // returns (h', c')
  std::pair<Var, Var> step(Var x, Var h_prev, Var c_prev) const {
    Var z = matvec(w, concat({x, h_prev})) + b;
    Var i = vsigmoid(slice(z, 0, h));
    Var f = vsigmoid(slice(z, h, 2 * h));
    Var g = vtanh(slice(z, 2 * h, 3 * h));
    Var o = vsigmoid(slice(z, 3 * h, 4 * h));
    Var c = f * c_prev + i * g;
    return {o * vtanh(c), c};
  }
};

std::vector<Var> run_direction(Tape& tape, const LstmCell& cell,
                               const std::vector<Var>& inputs, bool reverse) {
  const std::size_t n = inputs.size();
  std::vector<Var> out(n);
  Var h = tape.input(Tensor::zeros({cell.h}));
  Var c = tape.input(Tensor::zeros({cell.h}));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = reverse ? n - 1 - k : k;
    auto [h2, c2] = cell.step(inputs[q], h, c);
    h = h2;
    c = c2;
    out[q] = h;
  }
  return out;
}

}  // namespace

std::vector<Var> encode(Tape& tape, const EncoderParams& params,
                        const std::vector<Var>& inputs) {
  if (inputs.empty()) throw data_error("encode: empty input");
  const EncoderConfig& cfg = params.cfg;
  const std::size_t n = inputs.size();
  std::vector<Var> layer_in = inputs;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const EncoderParams::Layer& lp = params.layers[l];
    LstmCell fwd{tape.param(*lp.fwd.w), tape.param(*lp.fwd.b), cfg.hidden_dim};
    LstmCell bwd{tape.param(*lp.bwd.w), tape.param(*lp.bwd.b), cfg.hidden_dim};
    std::vector<Var> hf = run_direction(tape, fwd, layer_in, false);
    std::vector<Var> hb = run_direction(tape, bwd, layer_in, true);
    std::vector<Var> out(n);
    Var hw_w, hw_b;
    if (lp.hw_w != nullptr) {
      hw_w = tape.param(*lp.hw_w);
      hw_b = tape.param(*lp.hw_b);
    }
    for (std::size_t q = 0; q < n; ++q) {
      out[q] = concat({hf[q], hb[q]});
      if (lp.hw_w != nullptr) {
        Var gate = vsigmoid(matvec(hw_w, layer_in[q]) + hw_b);
        out[q] = gate * out[q] + addc(scale(gate, -1.0), 1.0) * layer_in[q];
      }
      if (l + 1 < params.layers.size())
        out[q] = dropout(out[q], cfg.dropout);
    }
    layer_in = std::move(out);
  }
  return layer_in;
}

}  // namespace scaffold
