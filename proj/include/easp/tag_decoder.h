#pragma once

#include <span>
#include <utility>
#include <vector>

#include "easp/matrix.h"
#include "easp/parameter.h"
#include "easp/rng.h"
#include "easp/vocab.h"

namespace easp {

struct TagDecoderConfig {
  int d_feat = 32;
  int vocab_size = 0;
  int d_hidden = 64;
  int max_len = 32;
};

// Minimal single-block autoregressive predictor over the tag vocabulary,
// conditioned on a fixed encoder feature vector:
//   h_t = relu(feat W_f + emb[y_{t-1}] + pos[t] + b_h)
//   logits_t = h_t W_o + b_o
// Teacher-forced cross-entropy for training, greedy decoding for
// prediction.
struct TagDecoder {
  TagDecoderConfig config;
  Parameter emb;     // vocab x d_hidden
  Parameter pos;     // max_len x d_hidden
  Parameter w_feat;  // d_feat x d_hidden
  Parameter b_h;     // 1 x d_hidden
  Parameter w_out;   // d_hidden x vocab
  Parameter b_out;   // 1 x vocab

  std::vector<Parameter*> params();

  static TagDecoder build(const TagDecoderConfig& cfg, Rng& rng);

  // Sum of teacher-forced log-probs of seq[1..] given seq starts with bos;
  // always <= 0.
  double log_prob(const Matrix& feat, std::span<const int> seq) const;

  // Mean cross-entropy over the sequence; accumulates parameter grads.
  double train_step_loss(const Matrix& feat, std::span<const int> seq);

  // Greedy decode: starts after bos, stops at eos or max_len.
  std::vector<int> predict(const Matrix& feat, const TagVocabulary& vocab) const;
};

using FeatureSequencePair = std::pair<Matrix, std::vector<int>>;

// Adam over the pairs (one step per pair per epoch, fixed order).
void fit_tag_decoder(TagDecoder& decoder, std::span<const FeatureSequencePair> pairs,
                     int epochs, double lr);

}  // namespace easp
