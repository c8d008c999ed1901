#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "easp/codec.h"
#include "easp/ctc.h"
#include "easp/gradcheck.h"
#include "easp/ops.h"
#include "easp/rescore.h"
#include "easp/rng.h"
#include "easp/tag_decoder.h"
#include "easp/vocab.h"
#include "oracles.h"

using namespace easp;

namespace {

Matrix random_log_softmax(int rows, int cols, Rng& rng) {
  Matrix logits(rows, cols);
  for (double& v : logits.data) v = rng.uniform(-2.0, 2.0);
  Matrix p = softmax_rows(logits);
  for (double& v : p.data) v = std::log(v);
  return p;
}

Annotation random_annotation(const TagVocabulary& vocab, Rng& rng) {
  Annotation a;
  for (const std::string& t : vocab.task_tags()) {
    if (rng.next_double() < 0.4) a.tasks.push_back(t);
  }
  if (rng.next_double() < 0.7) {
    a.language = vocab.language_tags()[rng.next_u64() % vocab.language_tags().size()];
  }
  if (rng.next_double() < 0.5) {
    a.age = vocab.age_tags()[rng.next_u64() % vocab.age_tags().size()];
  }
  if (rng.next_double() < 0.5) {
    a.gender = vocab.gender_tags()[rng.next_u64() % vocab.gender_tags().size()];
  }
  if (rng.next_double() < 0.5) {
    a.emotion = vocab.emotion_tags()[rng.next_u64() % vocab.emotion_tags().size()];
  }
  for (size_t e = 0; e < vocab.event_tags().size(); ++e) {
    if (rng.next_double() < 0.03) a.events.push_back(vocab.event_tags()[e]);
  }
  const int n_words = static_cast<int>(rng.next_u64() % 6);
  for (int w = 0; w < n_words; ++w) {
    a.transcript.push_back(vocab.text_tokens()[rng.next_u64() % vocab.text_tokens().size()]);
  }
  return a;
}

}  // namespace

TEST_CASE("vocabulary: deterministic layout and required cardinalities") {
  const TagVocabulary v = TagVocabulary::defaults();
  CHECK(v.blank_id() == 0);
  CHECK(v.bos_id() == 1);
  CHECK(v.eos_id() == 2);
  CHECK(v.task_tags().size() == 5);
  CHECK(v.language_tags().size() == 5);
  CHECK(v.age_tags().size() == 3);
  CHECK(v.gender_tags().size() == 2);
  CHECK(v.emotion_tags().size() == 7);
  CHECK(v.event_tags().size() >= 70);

  // Ids are contiguous per category, in declaration order.
  CHECK(v.first_id(TagVocabulary::Kind::task) == 3);
  CHECK(v.first_id(TagVocabulary::Kind::language) == 8);
  CHECK(v.first_id(TagVocabulary::Kind::age) == 13);
  CHECK(v.first_id(TagVocabulary::Kind::gender) == 16);
  CHECK(v.first_id(TagVocabulary::Kind::emotion) == 18);
  CHECK(v.first_id(TagVocabulary::Kind::event) == 25);

  // Tag ids disjoint from text ids by construction: kinds partition the ids.
  std::set<int> text_ids;
  for (const std::string& t : v.text_tokens()) {
    text_ids.insert(v.find(TagVocabulary::Kind::text, t));
  }
  for (int id = 0; id < v.first_id(TagVocabulary::Kind::text); ++id) {
    CHECK(text_ids.count(id) == 0);
  }
}

TEST_CASE("vocabulary: wrong cardinalities and duplicates are rejected") {
  nlohmann::json j{{"emotions", {"happy", "sad"}}};
  CHECK_THROWS_AS(TagVocabulary::from_json(j), std::invalid_argument);
  nlohmann::json dup{{"events", {"cough", "cough"}}};
  CHECK_THROWS_AS(TagVocabulary::from_json(dup), std::invalid_argument);
}

TEST_CASE("codec: documented round trip and the empty annotation") {
  const TagVocabulary vocab = TagVocabulary::defaults();
  Annotation a;
  a.language = "yue";
  a.gender = "female";
  a.transcript = {"hello", "world"};
  const std::vector<int> tokens = encode_targets(a, vocab);
  CHECK(decode_tokens(tokens, vocab) == a);

  const Annotation empty;
  const std::vector<int> bos_eos = encode_targets(empty, vocab);
  CHECK(bos_eos == std::vector<int>{vocab.bos_id(), vocab.eos_id()});
  CHECK(decode_tokens(bos_eos, vocab) == empty);
}

TEST_CASE("codec: 1000 random annotations round-trip exactly") {
  const TagVocabulary vocab = TagVocabulary::defaults();
  Rng rng(70);
  for (int trial = 0; trial < 1000; ++trial) {
    const Annotation a = random_annotation(vocab, rng);
    const std::vector<int> tokens = encode_targets(a, vocab);
    CHECK(decode_tokens(tokens, vocab) == a);
  }
}

TEST_CASE("codec: out-of-order and malformed sequences fail with a position") {
  const TagVocabulary vocab = TagVocabulary::defaults();
  Annotation a;
  a.age = "adult";
  a.transcript = {"hello"};
  std::vector<int> tokens = encode_targets(a, vocab);
  REQUIRE(tokens.size() == 4);  // bos, age, text, eos
  std::swap(tokens[1], tokens[2]);  // age now after transcript
  try {
    decode_tokens(tokens, vocab);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 2);
  }

  CHECK_THROWS_AS(decode_tokens(std::vector<int>{vocab.bos_id()}, vocab), ParseError);
  CHECK_THROWS_AS(decode_tokens(std::vector<int>{vocab.eos_id(), vocab.eos_id()}, vocab),
                  ParseError);
  CHECK_THROWS_AS(decode_tokens(std::vector<int>{vocab.bos_id(), 99999, vocab.eos_id()}, vocab),
                  ParseError);

  Annotation unknown;
  unknown.emotion = "bored";
  CHECK_THROWS_WITH_AS(encode_targets(unknown, vocab),
                       "unknown tag 'bored'; allowed: neutral, anger, sadness, happiness, "
                       "surprise, fear, disgust",
                       std::invalid_argument);
}

TEST_CASE("codec: encode is injective over distinct annotations") {
  const TagVocabulary vocab = TagVocabulary::defaults();
  Rng rng(71);
  auto annotation_key = [](const Annotation& a) {
    std::string key;
    for (const auto& t : a.tasks) key += t + "|";
    key += (a.language ? *a.language : "-") + "|";
    key += (a.age ? *a.age : "-") + "|";
    key += (a.gender ? *a.gender : "-") + "|";
    key += (a.emotion ? *a.emotion : "-") + "|";
    for (const auto& e : a.events) key += e + "|";
    for (const auto& w : a.transcript) key += w + "|";
    return key;
  };
  std::set<std::vector<int>> encodings;
  std::set<std::string> annotations;
  for (int trial = 0; trial < 300; ++trial) {
    const Annotation a = random_annotation(vocab, rng);
    if (!annotations.insert(annotation_key(a)).second) continue;  // drawn twice
    CHECK(encodings.insert(encode_targets(a, vocab)).second);
  }
}

TEST_CASE("ctc: single-frame uniform table") {
  Matrix table(1, 2);
  table.fill(std::log(0.5));
  const std::vector<int> target{1};
  const CtcResult r = ctc_loss(table, target);
  CHECK(r.loss == doctest::Approx(-std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("ctc: infeasible targets get infinite loss and zero grad") {
  Matrix table(2, 3);
  table.fill(std::log(1.0 / 3));
  const std::vector<int> too_long{1, 1};  // needs a separating blank: 3 frames
  const CtcResult r = ctc_loss(table, too_long);
  CHECK(std::isinf(r.loss));
  for (double g : r.grad.data) CHECK(g == 0.0);

  const std::vector<int> fits{1, 2};
  CHECK(std::isfinite(ctc_loss(table, fits).loss));
}

TEST_CASE("ctc: rejects out-of-range target ids and degenerate tables") {
  Matrix table(2, 3);
  table.fill(std::log(1.0 / 3));
  CHECK_THROWS_AS(ctc_loss(table, std::vector<int>{0}), std::invalid_argument);
  CHECK_THROWS_AS(ctc_loss(table, std::vector<int>{3}), std::invalid_argument);
  CHECK_THROWS_AS(ctc_loss(Matrix(0, 3), std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("ctc: empty target sums the all-blank paths") {
  Matrix table(3, 2);
  table.fill(std::log(0.5));
  // P(empty) = 0.5^3 over the single all-blank path.
  const CtcResult r = ctc_loss(table, std::vector<int>{});
  CHECK(r.loss == doctest::Approx(-3.0 * std::log(0.5)).epsilon(1e-12));
  CHECK(r.loss == doctest::Approx(oracles::ctc_loss_exhaustive(table, std::vector<int>{}))
                      .epsilon(1e-12));
}

TEST_CASE("ctc matches exhaustive path enumeration on random small instances") {
  Rng rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    const int T = 2 + static_cast<int>(rng.next_u64() % 7);   // 2..8
    const int V = 2 + static_cast<int>(rng.next_u64() % 3);   // 2..4
    const int L = 1 + static_cast<int>(rng.next_u64() % 3);   // 1..3
    Matrix table = random_log_softmax(T, V, rng);
    std::vector<int> target;
    for (int i = 0; i < L; ++i) target.push_back(1 + static_cast<int>(rng.next_u64() % (V - 1)));
    const CtcResult fast = ctc_loss(table, target);
    const double slow = oracles::ctc_loss_exhaustive(table, target);
    if (std::isinf(slow)) {
      CHECK(std::isinf(fast.loss));
    } else {
      CHECK(fast.loss == doctest::Approx(slow).epsilon(1e-9));
    }
  }
}

TEST_CASE("ctc gradient matches finite differences on the table") {
  Rng rng(73);
  Parameter table("table", 5, 4);
  table.value = random_log_softmax(5, 4, rng);
  const std::vector<int> target{2, 1, 2};

  auto loss_fn = [&] { return ctc_loss(table.value, target).loss; };
  table.grad = ctc_loss(table.value, target).grad;
  std::vector<Parameter*> params{&table};
  const std::vector<Matrix> numeric = finite_diff_grad(loss_fn, params);
  CHECK(grads_close(table.grad, numeric[0]));
}

TEST_CASE("ctc is covariant under vocabulary relabeling") {
  Rng rng(74);
  Matrix table = random_log_softmax(6, 4, rng);
  const std::vector<int> target{1, 3, 2};
  // Relabel non-blank symbols with the permutation 1->3, 2->1, 3->2.
  const int perm[4] = {0, 3, 1, 2};
  Matrix relabeled(table.rows, table.cols);
  for (int t = 0; t < table.rows; ++t) {
    for (int v = 0; v < table.cols; ++v) relabeled.at(t, perm[v]) = table.at(t, v);
  }
  std::vector<int> permuted_target;
  for (int v : target) permuted_target.push_back(perm[v]);
  CHECK(ctc_loss(table, target).loss ==
        doctest::Approx(ctc_loss(relabeled, permuted_target).loss).epsilon(1e-12));
}

TEST_CASE("ctc greedy decode: collapse rules") {
  auto one_hot_table = [](const std::vector<int>& frames, int vocab) {
    Matrix t(static_cast<int>(frames.size()), vocab);
    t.fill(std::log(1e-9));
    for (size_t i = 0; i < frames.size(); ++i) t.at(static_cast<int>(i), frames[i]) = 0.0;
    return t;
  };
  CHECK(ctc_greedy_decode(one_hot_table({1, 1, 0, 2}, 3)) == std::vector<int>{1, 2});
  CHECK(ctc_greedy_decode(one_hot_table({0, 0, 0}, 3)) == std::vector<int>{});
  CHECK(ctc_greedy_decode(one_hot_table({1, 0, 1}, 3)) == std::vector<int>{1, 1});
}

TEST_CASE("ctc greedy decode of any valid path's one-hot lattice recovers its collapse") {
  Rng rng(75);
  for (int trial = 0; trial < 200; ++trial) {
    const int T = 1 + static_cast<int>(rng.next_u64() % 8);
    const int V = 2 + static_cast<int>(rng.next_u64() % 3);
    std::vector<int> path(T);
    for (int& p : path) p = static_cast<int>(rng.next_u64() % V);
    Matrix table(T, V);
    table.fill(-40.0);
    for (int t = 0; t < T; ++t) table.at(t, path[t]) = -0.01;
    std::vector<int> collapsed;
    int prev = 0;
    for (int p : path) {
      if (p != 0 && p != prev) collapsed.push_back(p);
      prev = p;
    }
    CHECK(ctc_greedy_decode(table) == collapsed);
  }
}

TEST_CASE("rescore: lambda endpoints and a hand-computed midpoint") {
  const std::vector<Candidate> candidates{
      {{1, 2}, -1.0}, {{1, 3}, -2.0}, {{2, 2}, -3.0}};
  // Decoder prefers the last candidate.
  auto decoder = [](std::span<const int> seq) {
    return seq[0] == 2 ? -0.5 : -4.0;
  };

  CHECK(rescore_index(candidates, decoder, {1.0}) == 0);  // pure CTC
  CHECK(rescore_index(candidates, decoder, {0.0}) == 2);  // pure decoder
  // lambda=0.5: scores are (-2.5, -3.0, -1.75) -> candidate 2.
  CHECK(rescore_index(candidates, decoder, {0.5}) == 2);
  CHECK(rescore(candidates, decoder, {0.5}) == std::vector<int>{2, 2});
}

TEST_CASE("rescore: constant decoder reduces to CTC ranking for any lambda") {
  Rng rng(76);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Candidate> candidates;
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    for (int i = 0; i < n; ++i) {
      candidates.push_back({{i}, rng.uniform(-5.0, 0.0)});
    }
    auto constant = [](std::span<const int>) { return -1.25; };
    const int best_ctc = rescore_index(candidates, constant, {1.0});
    for (double lambda : {0.25, 0.5, 0.9}) {
      CHECK(rescore_index(candidates, constant, {lambda}) == best_ctc);
    }
  }
}

TEST_CASE("rescore: ties go to the lower candidate index, empty list throws") {
  const std::vector<Candidate> tied{{{1}, -1.0}, {{2}, -1.0}};
  auto constant = [](std::span<const int>) { return -2.0; };
  CHECK(rescore_index(tied, constant, {0.5}) == 0);
  const std::vector<Candidate> none;
  CHECK_THROWS_AS(rescore_index(none, constant, {0.5}), std::invalid_argument);
}

TEST_CASE("tag decoder: teacher-forced log-prob is never positive") {
  const TagVocabulary vocab = TagVocabulary::defaults();
  TagDecoderConfig cfg;
  cfg.d_feat = 8;
  cfg.vocab_size = vocab.size();
  Rng rng(77);
  TagDecoder decoder = TagDecoder::build(cfg, rng);
  Matrix feat(1, 8);
  for (double& v : feat.data) v = rng.uniform(-1, 1);
  Annotation a;
  a.language = "zh";
  const std::vector<int> seq = encode_targets(a, vocab);
  CHECK(decoder.log_prob(feat, seq) <= 0.0);
}

TEST_CASE("tag decoder overfits 8 fixed pairs to exact reproduction") {
  const TagVocabulary vocab = TagVocabulary::defaults();
  TagDecoderConfig cfg;
  cfg.d_feat = 8;
  cfg.vocab_size = vocab.size();
  Rng rng(78);
  TagDecoder decoder = TagDecoder::build(cfg, rng);

  std::vector<FeatureSequencePair> pairs;
  Rng arng(79);
  for (int i = 0; i < 8; ++i) {
    Matrix feat(1, 8);
    for (double& v : feat.data) v = arng.uniform(-1, 1);
    const Annotation a = random_annotation(vocab, arng);
    std::vector<int> seq = encode_targets(a, vocab);
    if (static_cast<int>(seq.size()) > cfg.max_len) seq.resize(cfg.max_len);
    pairs.emplace_back(std::move(feat), std::move(seq));
  }
  fit_tag_decoder(decoder, pairs, 400, 1e-2);

  for (const auto& [feat, seq] : pairs) {
    const std::vector<int> predicted = decoder.predict(feat, vocab);
    CHECK(predicted == seq);
  }
}

TEST_CASE("tag decoder prediction starts after bos and stops at eos or max length") {
  const TagVocabulary vocab = TagVocabulary::defaults();
  TagDecoderConfig cfg;
  cfg.d_feat = 4;
  cfg.vocab_size = vocab.size();
  cfg.max_len = 6;
  Rng rng(80);
  TagDecoder decoder = TagDecoder::build(cfg, rng);
  Matrix feat(1, 4);
  const std::vector<int> seq = decoder.predict(feat, vocab);
  CHECK(seq.front() == vocab.bos_id());
  CHECK((seq.back() == vocab.eos_id() || static_cast<int>(seq.size()) == cfg.max_len));
}

TEST_CASE("tag decoder gradients match finite differences") {
  TagDecoderConfig cfg;
  cfg.d_feat = 3;
  cfg.vocab_size = 10;
  cfg.d_hidden = 6;
  cfg.max_len = 8;
  Rng rng(81);
  TagDecoder decoder = TagDecoder::build(cfg, rng);
  Matrix feat(1, 3);
  for (double& v : feat.data) v = rng.uniform(-1, 1);
  const std::vector<int> seq{1, 4, 7, 2};

  auto loss_fn = [&]() {
    // log_prob is the negative of the summed xent; rebuild the mean loss.
    TagDecoder& d = decoder;
    return -d.log_prob(feat, seq) / static_cast<double>(seq.size() - 1);
  };
  std::vector<Parameter*> params = decoder.params();
  zero_grads(params);
  decoder.train_step_loss(feat, seq);
  const std::vector<Matrix> numeric = finite_diff_grad(loss_fn, params);
  CHECK(grads_max_violation(params, numeric) <= 1.0);
}
