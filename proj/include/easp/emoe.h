#pragma once

#include <span>
#include <vector>

#include "easp/matrix.h"
#include "easp/parameter.h"
#include "easp/rng.h"

namespace easp {

// Elastic mixture-of-experts layer: shared always-on experts plus nested
// groups of routed experts, one independent router per group. Any group can
// be trained against or pruned to; groups are strict prefixes of each other
// over the routed-expert list.
struct EMoEConfig {
  int d_model = 0;
  int d_ff = 0;
  int shared_experts = 0;   // S
  int base_group_size = 0;  // G: experts in the smallest group, shared included
  int num_groups = 1;       // Z
  int top_k = 1;            // K routed experts selected per token
  // Optional explicit total group sizes for linear/custom grouping. Empty
  // means the power rule total_size(i) = G * 2^(i-1).
  std::vector<int> group_sizes;

  int total_size(int group) const;    // group is 1-based
  int routed_count(int group) const;  // total_size(group) - S
  int total_experts() const;          // M = total_size(Z)
  int routed_experts() const;         // N = M - S
  void validate() const;              // throws std::invalid_argument
};

struct GroupSchedule {
  struct Group {
    int total_size = 0;
    int routed_count = 0;
  };
  std::vector<Group> groups;           // groups[0] is group 1
  std::vector<double> sampling_probs;  // sums to 1, non-decreasing

  int num_groups() const { return static_cast<int>(groups.size()); }

  // Default sampling probs are proportional to routed_count; an override
  // must be a non-decreasing distribution over the groups.
  static GroupSchedule build(const EMoEConfig& cfg, std::span<const double> probs_override = {});
};

// Two-layer ReLU feed-forward expert: y = relu(x W1 + b1) W2 + b2.
struct Expert {
  int index = 0;
  Parameter w1, b1, w2, b2;

  Matrix forward(const Matrix& x, Matrix* h_cache = nullptr) const;
  // h is the cached post-relu hidden; accumulates grads, returns dL/dx.
  Matrix backward(const Matrix& x, const Matrix& h, const Matrix& dy);
  void collect_params(std::vector<Parameter*>& out);
  static long long param_count(int d_model, int d_ff);
};

struct Router {
  int group_index = 0;  // 1-based group this router serves
  Parameter w, b;       // d_model -> routed_count(group_index)

  void collect_params(std::vector<Parameter*>& out);
};

struct RouteResult {
  std::vector<int> indices;     // K distinct routed-expert ids, gate prob descending
  std::vector<double> weights;  // selected softmax probs renormalized to sum 1
};

// Activations captured by a training forward and consumed by backward.
struct EMoECache {
  int group_index = 0;  // 0 = no forward recorded
  int rows = 0;
  Matrix probs;  // rows x routed_count(group): full softmax over router logits
  std::vector<RouteResult> routes;
  std::vector<Matrix> shared_h;  // per shared expert
  struct RoutedCache {
    std::vector<int> row_ids;
    std::vector<double> gate_w;
    Matrix h;    // hidden for the gathered rows
    Matrix out;  // raw expert output for the gathered rows
  };
  std::vector<RoutedCache> routed;  // indexed by routed-expert id
};

struct EMoELayer {
  EMoEConfig config;
  GroupSchedule schedule;
  std::vector<Expert> shared;
  std::vector<Expert> routed;
  std::vector<Router> routers;

  // Stable order: shared experts, routed experts, routers.
  std::vector<Parameter*> params();

  RouteResult route(std::span<const double> x_row, int group) const;

  // Inference forward; per row y = sum(shared) + sum(gate_w * selected).
  Matrix forward(const Matrix& x, int group) const;
  // Training forward; fills cache for backward.
  Matrix forward(const Matrix& x, int group, EMoECache& cache) const;
  // Accumulates parameter grads, returns dL/dx. Throws std::logic_error if
  // cache does not match a prior forward on (x, group).
  Matrix backward(const Matrix& x, const Matrix& upstream, const EMoECache& cache);
};

// Zero-initialized layer structure; parameters are filled in later (e.g.
// from a checkpoint). name_prefix namespaces the parameter names, e.g.
// "blocks.0.".
EMoELayer make_layer(const EMoEConfig& cfg, const std::string& name_prefix = "",
                     std::span<const double> sampling_probs = {});

// All parameters uniform in [-a, a], a = sqrt(1/d_model), drawn from rng in
// parameter order (shared, routed, routers).
EMoELayer build_layer(const EMoEConfig& cfg, Rng& rng, const std::string& name_prefix = "",
                      std::span<const double> sampling_probs = {});

// Categorical draw over schedule.sampling_probs; returns a 1-based group.
int sample_group(const GroupSchedule& schedule, Rng& rng);

// Self-contained single-group layer: value-copies of the shared experts,
// the first routed_count(group) routed experts and router `group`. Forward
// of the result equals forward(layer, x, group) bit-for-bit.
EMoELayer prune(const EMoELayer& layer, int group);

struct ParamCounts {
  long long expert_params = 0;
  long long router_params = 0;
  long long total = 0;
};
// Exact parameter counts of the pruned-to-group model.
ParamCounts count_params(const EMoELayer& layer, int group);

}  // namespace easp
