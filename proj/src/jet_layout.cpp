#include "wdvv/jet.hpp"

#include <map>
#include <mutex>

namespace wdvv {

namespace {

// All exponent tuples of the given total degree, lexicographically descending
// (x1^2 before x1 x2 before x2^2).
void enumerate_degree(int num_vars, int degree, int var, MultiIndex& current,
                      std::vector<MultiIndex>& out) {
  if (var == num_vars - 1) {
    current[var] = degree;
    out.push_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[var] = e;
    enumerate_degree(num_vars, degree - e, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

JetLayout::JetLayout(int num_vars, int order) : num_vars_(num_vars), order_(order) {
  if (num_vars <= 0) throw DimensionError("jet needs at least one variable");
  if (order < 0) throw DimensionError("jet order must be non-negative");

  MultiIndex current(num_vars, 0);
  for (int d = 0; d <= order; ++d) enumerate_degree(num_vars, d, 0, current, indices_);

  int table = 1;
  for (int v = 0; v < num_vars; ++v) table *= order + 1;
  lookup_.assign(table, -1);
  for (int k = 0; k < size(); ++k) {
    int deg = 0;
    for (int e : indices_[k]) deg += e;
    degrees_.push_back(deg);
    lookup_[encode(indices_[k])] = k;
  }

  MultiIndex sum(num_vars);
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      for (int v = 0; v < num_vars; ++v) sum[v] = indices_[i][v] + indices_[j][v];
      products_.push_back({i, j, lookup_[encode(sum)]});
    }
  }

  lowered_.assign(static_cast<std::size_t>(size()) * num_vars, -1);
  for (int k = 0; k < size(); ++k) {
    for (int v = 0; v < num_vars; ++v) {
      if (indices_[k][v] == 0) continue;
      MultiIndex low = indices_[k];
      low[v] -= 1;
      lowered_[k * num_vars + v] = lookup_[encode(low)];
    }
  }
}

int JetLayout::encode(std::span<const int> multi_index) const {
  int code = 0;
  for (int e : multi_index) code = code * (order_ + 1) + e;
  return code;
}

int JetLayout::position(std::span<const int> multi_index) const {
  if (static_cast<int>(multi_index.size()) != num_vars_) return -1;
  int deg = 0;
  for (int e : multi_index) {
    if (e < 0) return -1;
    deg += e;
  }
  if (deg > order_) return -1;
  return lookup_[encode(multi_index)];
}

std::shared_ptr<const JetLayout> JetLayout::get(int num_vars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{num_vars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(num_vars, order);
  return slot;
}

}  // namespace wdvv
