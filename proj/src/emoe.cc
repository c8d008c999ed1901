#include "easp/emoe.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "easp/ops.h"

namespace easp {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void init_uniform(Parameter& p, double a, Rng& rng) {
  for (double& v : p.value.data) v = rng.uniform(-a, a);
}

// Top-K by gate probability, ties broken by lower expert index. Returned
// indices are ordered by descending probability.
RouteResult top_k_select(const double* probs, int n, int k) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return a < b;
  });
  RouteResult r;
  r.indices.assign(order.begin(), order.begin() + k);
  double total = 0.0;
  for (int idx : r.indices) total += probs[idx];
  r.weights.reserve(k);
  for (int idx : r.indices) r.weights.push_back(probs[idx] / total);
  return r;
}

}  // namespace

int EMoEConfig::total_size(int group) const {
  if (!group_sizes.empty()) return group_sizes[group - 1];
  return base_group_size << (group - 1);
}

int EMoEConfig::routed_count(int group) const { return total_size(group) - shared_experts; }

int EMoEConfig::total_experts() const { return total_size(num_groups); }

int EMoEConfig::routed_experts() const { return total_experts() - shared_experts; }

void EMoEConfig::validate() const {
  require(d_model >= 1 && d_ff >= 1, "emoe config: d_model and d_ff must be >= 1");
  require(shared_experts >= 0, "emoe config: shared_experts must be >= 0");
  require(num_groups >= 1, "emoe config: num_groups must be >= 1");
  require(top_k >= 1, "emoe config: top_k must be >= 1");
  if (group_sizes.empty()) {
    require(base_group_size - shared_experts >= top_k,
            "emoe config: smallest group must contain at least top_k routed experts (G - S >= K)");
  } else {
    require(static_cast<int>(group_sizes.size()) == num_groups,
            "emoe config: group_sizes must list one size per group");
    require(group_sizes[0] == base_group_size,
            "emoe config: group_sizes[0] must equal base_group_size");
    int prev = 0;
    for (int gs : group_sizes) {
      require(gs > prev, "emoe config: group_sizes must be strictly increasing");
      require(gs - shared_experts >= top_k,
              "emoe config: every group needs at least top_k routed experts");
      prev = gs;
    }
  }
}

GroupSchedule GroupSchedule::build(const EMoEConfig& cfg, std::span<const double> probs_override) {
  cfg.validate();
  GroupSchedule s;
  s.groups.reserve(cfg.num_groups);
  for (int g = 1; g <= cfg.num_groups; ++g) {
    s.groups.push_back({cfg.total_size(g), cfg.routed_count(g)});
  }
  if (probs_override.empty()) {
    // p(g_i) proportional to routed_count(i): later (larger) groups sample
    // more often, which keeps the tail experts trained.
    double total = 0.0;
    for (const Group& g : s.groups) total += g.routed_count;
    for (const Group& g : s.groups) s.sampling_probs.push_back(g.routed_count / total);
  } else {
    require(probs_override.size() == s.groups.size(),
            "group schedule: sampling_probs must have one entry per group");
    double total = 0.0;
    double prev = 0.0;
    for (double p : probs_override) {
      require(p >= 0.0, "group schedule: sampling probs must be non-negative");
      require(p >= prev, "group schedule: sampling probs must be non-decreasing over groups");
      total += p;
      prev = p;
    }
    require(std::abs(total - 1.0) < 1e-9, "group schedule: sampling probs must sum to 1");
    s.sampling_probs.assign(probs_override.begin(), probs_override.end());
  }
  return s;
}

Matrix Expert::forward(const Matrix& x, Matrix* h_cache) const {
  Matrix h = relu_forward(affine_forward(x, w1, b1));
  Matrix y = affine_forward(h, w2, b2);
  if (h_cache) *h_cache = std::move(h);
  return y;
}

Matrix Expert::backward(const Matrix& x, const Matrix& h, const Matrix& dy) {
  Matrix dh = affine_backward(h, w2, b2, dy);
  // h is post-relu; h > 0 iff the pre-activation was > 0.
  Matrix dpre = relu_backward(h, dh);
  return affine_backward(x, w1, b1, dpre);
}

void Expert::collect_params(std::vector<Parameter*>& out) {
  out.push_back(&w1);
  out.push_back(&b1);
  out.push_back(&w2);
  out.push_back(&b2);
}

long long Expert::param_count(int d_model, int d_ff) {
  return static_cast<long long>(d_model) * d_ff + d_ff + static_cast<long long>(d_ff) * d_model +
         d_model;
}

void Router::collect_params(std::vector<Parameter*>& out) {
  out.push_back(&w);
  out.push_back(&b);
}

std::vector<Parameter*> EMoELayer::params() {
  std::vector<Parameter*> out;
  for (Expert& e : shared) e.collect_params(out);
  for (Expert& e : routed) e.collect_params(out);
  for (Router& r : routers) r.collect_params(out);
  return out;
}

RouteResult EMoELayer::route(std::span<const double> x_row, int group) const {
  require(group >= 1 && group <= config.num_groups,
          "route: group " + std::to_string(group) + " out of range 1.." +
              std::to_string(config.num_groups));
  require(static_cast<int>(x_row.size()) == config.d_model,
          "route: feature width " + std::to_string(x_row.size()) + " != d_model " +
              std::to_string(config.d_model));
  Matrix x(1, config.d_model);
  std::copy(x_row.begin(), x_row.end(), x.data.begin());
  const Router& r = routers[group - 1];
  Matrix probs = softmax_rows(affine_forward(x, r.w, r.b));
  return top_k_select(probs.row(0), probs.cols, config.top_k);
}

Matrix EMoELayer::forward(const Matrix& x, int group) const {
  EMoECache scratch;
  return forward(x, group, scratch);
}

Matrix EMoELayer::forward(const Matrix& x, int group, EMoECache& cache) const {
  require(group >= 1 && group <= config.num_groups,
          "forward: group " + std::to_string(group) + " out of range 1.." +
              std::to_string(config.num_groups));
  require(x.cols == config.d_model, "forward: input " + x.shape_str() + " does not match d_model " +
                                        std::to_string(config.d_model));
  const int n_routed = config.routed_count(group);
  const Router& router = routers[group - 1];

  cache = EMoECache{};
  cache.group_index = group;
  cache.rows = x.rows;
  cache.probs = softmax_rows(affine_forward(x, router.w, router.b));
  cache.routes.reserve(x.rows);
  for (int i = 0; i < x.rows; ++i) {
    cache.routes.push_back(top_k_select(cache.probs.row(i), n_routed, config.top_k));
  }

  Matrix y(x.rows, config.d_model);
  cache.shared_h.resize(shared.size());
  for (size_t s = 0; s < shared.size(); ++s) {
    Matrix out = shared[s].forward(x, &cache.shared_h[s]);
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] += out.data[i];
  }

  // Dispatch rows to their selected experts; experts run batched on their
  // gathered rows and results scatter back weighted.
  cache.routed.resize(n_routed);
  for (int i = 0; i < x.rows; ++i) {
    const RouteResult& rr = cache.routes[i];
    for (size_t k = 0; k < rr.indices.size(); ++k) {
      cache.routed[rr.indices[k]].row_ids.push_back(i);
      cache.routed[rr.indices[k]].gate_w.push_back(rr.weights[k]);
    }
  }
  for (int j = 0; j < n_routed; ++j) {
    EMoECache::RoutedCache& rc = cache.routed[j];
    if (rc.row_ids.empty()) continue;
    Matrix xs(static_cast<int>(rc.row_ids.size()), config.d_model);
    for (size_t i = 0; i < rc.row_ids.size(); ++i) {
      std::copy_n(x.row(rc.row_ids[i]), config.d_model, xs.row(static_cast<int>(i)));
    }
    rc.out = routed[j].forward(xs, &rc.h);
    for (size_t i = 0; i < rc.row_ids.size(); ++i) {
      double* yrow = y.row(rc.row_ids[i]);
      const double* orow = rc.out.row(static_cast<int>(i));
      for (int c = 0; c < config.d_model; ++c) yrow[c] += rc.gate_w[i] * orow[c];
    }
  }
  return y;
}

Matrix EMoELayer::backward(const Matrix& x, const Matrix& upstream, const EMoECache& cache) {
  if (cache.group_index < 1 || cache.rows != x.rows) {
    throw std::logic_error("emoe backward: no matching forward cached for this input");
  }
  require(upstream.same_shape(x), "emoe backward: upstream " + upstream.shape_str() +
                                      " does not match input " + x.shape_str());
  const int group = cache.group_index;
  const int n_routed = config.routed_count(group);
  Router& router = routers[group - 1];

  Matrix dx(x.rows, x.cols);
  for (size_t s = 0; s < shared.size(); ++s) {
    Matrix d = shared[s].backward(x, cache.shared_h[s], upstream);
    for (size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += d.data[i];
  }

  // dL/d(gate weight) per (row, selected expert), needed for the router.
  std::vector<std::vector<double>> dgate(x.rows);
  for (int i = 0; i < x.rows; ++i) dgate[i].resize(cache.routes[i].indices.size(), 0.0);

  for (int j = 0; j < n_routed; ++j) {
    const EMoECache::RoutedCache& rc = cache.routed[j];
    if (rc.row_ids.empty()) continue;
    const int nr = static_cast<int>(rc.row_ids.size());
    Matrix xs(nr, config.d_model);
    Matrix dys(nr, config.d_model);
    for (int i = 0; i < nr; ++i) {
      const int row = rc.row_ids[i];
      std::copy_n(x.row(row), config.d_model, xs.row(i));
      const double* up = upstream.row(row);
      double* dyrow = dys.row(i);
      for (int c = 0; c < config.d_model; ++c) dyrow[c] = rc.gate_w[i] * up[c];
      // dL/dw_j = expert_out . upstream
      double dot = 0.0;
      const double* orow = rc.out.row(i);
      for (int c = 0; c < config.d_model; ++c) dot += orow[c] * up[c];
      const RouteResult& rr = cache.routes[row];
      for (size_t k = 0; k < rr.indices.size(); ++k) {
        if (rr.indices[k] == j) {
          dgate[row][k] = dot;
          break;
        }
      }
    }
    Matrix dxs = routed[j].backward(xs, rc.h, dys);
    for (int i = 0; i < nr; ++i) {
      double* dst = dx.row(rc.row_ids[i]);
      const double* src = dxs.row(i);
      for (int c = 0; c < config.d_model; ++c) dst[c] += src[c];
    }
  }

  // Gate weights are selected softmax probs renormalized by their sum T:
  // dL/dp_k = dgate_k / T - sum_l(dgate_l * p_l) / T^2 for selected k.
  Matrix dprobs(x.rows, n_routed);
  for (int i = 0; i < x.rows; ++i) {
    const RouteResult& rr = cache.routes[i];
    double t_sum = 0.0;
    for (int idx : rr.indices) t_sum += cache.probs.at(i, idx);
    double weighted = 0.0;
    for (size_t k = 0; k < rr.indices.size(); ++k) {
      weighted += dgate[i][k] * cache.probs.at(i, rr.indices[k]);
    }
    for (size_t k = 0; k < rr.indices.size(); ++k) {
      dprobs.at(i, rr.indices[k]) = dgate[i][k] / t_sum - weighted / (t_sum * t_sum);
    }
  }
  Matrix dlogits = softmax_rows_backward(cache.probs, dprobs);
  Matrix dx_router = affine_backward(x, router.w, router.b, dlogits);
  for (size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dx_router.data[i];
  return dx;
}

EMoELayer make_layer(const EMoEConfig& cfg, const std::string& name_prefix,
                     std::span<const double> sampling_probs) {
  cfg.validate();
  EMoELayer layer;
  layer.config = cfg;
  layer.schedule = GroupSchedule::build(cfg, sampling_probs);

  auto make_expert = [&](const std::string& base, int index) {
    Expert e;
    e.index = index;
    e.w1 = Parameter(base + ".w1", cfg.d_model, cfg.d_ff);
    e.b1 = Parameter(base + ".b1", 1, cfg.d_ff);
    e.w2 = Parameter(base + ".w2", cfg.d_ff, cfg.d_model);
    e.b2 = Parameter(base + ".b2", 1, cfg.d_model);
    return e;
  };

  for (int s = 0; s < cfg.shared_experts; ++s) {
    layer.shared.push_back(make_expert(name_prefix + "shared." + std::to_string(s), s));
  }
  for (int j = 0; j < cfg.routed_experts(); ++j) {
    layer.routed.push_back(make_expert(name_prefix + "routed." + std::to_string(j), j));
  }
  for (int g = 1; g <= cfg.num_groups; ++g) {
    Router r;
    r.group_index = g;
    const std::string base = name_prefix + "routers." + std::to_string(g - 1);
    r.w = Parameter(base + ".w", cfg.d_model, cfg.routed_count(g));
    r.b = Parameter(base + ".b", 1, cfg.routed_count(g));
    layer.routers.push_back(std::move(r));
  }
  return layer;
}

EMoELayer build_layer(const EMoEConfig& cfg, Rng& rng, const std::string& name_prefix,
                      std::span<const double> sampling_probs) {
  EMoELayer layer = make_layer(cfg, name_prefix, sampling_probs);
  const double a = std::sqrt(1.0 / cfg.d_model);
  for (Parameter* p : layer.params()) init_uniform(*p, a, rng);
  return layer;
}

int sample_group(const GroupSchedule& schedule, Rng& rng) {
  return rng.categorical(schedule.sampling_probs) + 1;
}

EMoELayer prune(const EMoELayer& layer, int group) {
  require(group >= 1 && group <= layer.config.num_groups,
          "prune: group " + std::to_string(group) + " out of range 1.." +
              std::to_string(layer.config.num_groups));
  EMoELayer out;
  out.config = layer.config;
  out.config.base_group_size = layer.config.total_size(group);
  out.config.num_groups = 1;
  out.config.group_sizes.clear();
  out.schedule = GroupSchedule::build(out.config);
  out.shared = layer.shared;
  const int keep = layer.config.routed_count(group);
  out.routed.assign(layer.routed.begin(), layer.routed.begin() + keep);
  Router r = layer.routers[group - 1];
  r.group_index = 1;
  out.routers.push_back(std::move(r));
  for (Parameter* p : out.params()) p->grad.fill(0.0);
  return out;
}

ParamCounts count_params(const EMoELayer& layer, int group) {
  require(group >= 1 && group <= layer.config.num_groups,
          "count_params: group " + std::to_string(group) + " out of range 1.." +
              std::to_string(layer.config.num_groups));
  const EMoEConfig& cfg = layer.config;
  ParamCounts c;
  c.expert_params = static_cast<long long>(cfg.total_size(group)) *
                    Expert::param_count(cfg.d_model, cfg.d_ff);
  const int r = cfg.routed_count(group);
  c.router_params = static_cast<long long>(cfg.d_model) * r + r;
  c.total = c.expert_params + c.router_params;
  return c;
}

}  // namespace easp
