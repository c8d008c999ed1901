#include "easp/tag_decoder.h"

#include <cmath>
#include <stdexcept>

#include "easp/adam.h"
#include "easp/ops.h"

namespace easp {

namespace {

void check_seq(const TagDecoderConfig& cfg, std::span<const int> seq) {
  if (seq.size() < 2) throw std::invalid_argument("tag decoder: sequence needs bos and eos");
  if (static_cast<int>(seq.size()) > cfg.max_len) {
    throw std::invalid_argument("tag decoder: sequence longer than max_len");
  }
  for (int id : seq) {
    if (id < 0 || id >= cfg.vocab_size) {
      throw std::invalid_argument("tag decoder: token id out of range");
    }
  }
}

}  // namespace

std::vector<Parameter*> TagDecoder::params() {
  return {&emb, &pos, &w_feat, &b_h, &w_out, &b_out};
}

TagDecoder TagDecoder::build(const TagDecoderConfig& cfg, Rng& rng) {
  if (cfg.vocab_size < 3 || cfg.d_feat < 1 || cfg.d_hidden < 1 || cfg.max_len < 2) {
    throw std::invalid_argument("tag decoder: invalid config");
  }
  TagDecoder d;
  d.config = cfg;
  d.emb = Parameter("decoder.emb", cfg.vocab_size, cfg.d_hidden);
  d.pos = Parameter("decoder.pos", cfg.max_len, cfg.d_hidden);
  d.w_feat = Parameter("decoder.w_feat", cfg.d_feat, cfg.d_hidden);
  d.b_h = Parameter("decoder.b_h", 1, cfg.d_hidden);
  d.w_out = Parameter("decoder.w_out", cfg.d_hidden, cfg.vocab_size);
  d.b_out = Parameter("decoder.b_out", 1, cfg.vocab_size);
  const double a = std::sqrt(1.0 / cfg.d_hidden);
  for (Parameter* p : d.params()) {
    for (double& v : p->value.data) v = rng.uniform(-a, a);
  }
  return d;
}

// Steps share the feature projection feat*W_f; step t adds the embedding of
// the previous token and its position row.
static Matrix hidden_pre(const TagDecoder& d, const Matrix& feat, std::span<const int> prev_ids) {
  const int dh = d.config.d_hidden;
  Matrix fw = matmul(feat, d.w_feat.value);  // 1 x dh
  Matrix h(static_cast<int>(prev_ids.size()), dh);
  for (size_t t = 0; t < prev_ids.size(); ++t) {
    double* row = h.row(static_cast<int>(t));
    const double* erow = d.emb.value.row(prev_ids[t]);
    const double* prow = d.pos.value.row(static_cast<int>(t));
    for (int c = 0; c < dh; ++c) {
      row[c] = fw.at(0, c) + erow[c] + prow[c] + d.b_h.value.at(0, c);
    }
  }
  return h;
}

double TagDecoder::log_prob(const Matrix& feat, std::span<const int> seq) const {
  check_seq(config, seq);
  std::span<const int> prev = seq.subspan(0, seq.size() - 1);
  Matrix h = relu_forward(hidden_pre(*this, feat, prev));
  Matrix probs = softmax_rows(affine_forward(h, w_out, b_out));
  double lp = 0.0;
  for (size_t t = 1; t < seq.size(); ++t) {
    lp += std::log(probs.at(static_cast<int>(t - 1), seq[t]));
  }
  return lp;
}

double TagDecoder::train_step_loss(const Matrix& feat, std::span<const int> seq) {
  check_seq(config, seq);
  std::span<const int> prev = seq.subspan(0, seq.size() - 1);
  Matrix pre = hidden_pre(*this, feat, prev);
  Matrix h = relu_forward(pre);
  Matrix probs = softmax_rows(affine_forward(h, w_out, b_out));
  std::vector<int> targets(seq.begin() + 1, seq.end());
  XentResult xent = cross_entropy(probs, targets);
  Matrix dlogits = softmax_rows_backward(probs, xent.dprobs);
  Matrix dh = affine_backward(h, w_out, b_out, dlogits);
  Matrix dpre = relu_backward(pre, dh);

  const int dh_cols = config.d_hidden;
  Matrix dfw(1, dh_cols);
  for (int t = 0; t < dpre.rows; ++t) {
    const double* drow = dpre.row(t);
    double* erow = emb.grad.row(prev[t]);
    double* prow = pos.grad.row(t);
    for (int c = 0; c < dh_cols; ++c) {
      erow[c] += drow[c];
      prow[c] += drow[c];
      b_h.grad.at(0, c) += drow[c];
      dfw.at(0, c) += drow[c];
    }
  }
  // w_feat.grad += feat^T dfw
  for (int k = 0; k < config.d_feat; ++k) {
    double* grow = w_feat.grad.row(k);
    for (int c = 0; c < dh_cols; ++c) grow[c] += feat.at(0, k) * dfw.at(0, c);
  }
  return xent.loss;
}

std::vector<int> TagDecoder::predict(const Matrix& feat, const TagVocabulary& vocab) const {
  std::vector<int> seq{vocab.bos_id()};
  while (static_cast<int>(seq.size()) < config.max_len) {
    Matrix h = relu_forward(hidden_pre(*this, feat, seq));
    Matrix logits = affine_forward(h, w_out, b_out);
    const int last = logits.rows - 1;
    int best = 0;
    for (int v = 1; v < logits.cols; ++v) {
      if (logits.at(last, v) > logits.at(last, best)) best = v;
    }
    seq.push_back(best);
    if (best == vocab.eos_id()) break;
  }
  return seq;
}

void fit_tag_decoder(TagDecoder& decoder, std::span<const FeatureSequencePair> pairs,
                     int epochs, double lr) {
  if (pairs.empty()) throw std::invalid_argument("fit_tag_decoder: no training pairs");
  std::vector<Parameter*> params = decoder.params();
  AdamState adam;
  AdamConfig cfg;
  cfg.lr = lr;
  int t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& [feat, seq] : pairs) {
      zero_grads(params);
      decoder.train_step_loss(feat, seq);
      adam_step(params, adam, cfg, ++t);
    }
  }
}

}  // namespace easp
