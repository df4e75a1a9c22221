// Copyright 2026 The QPH Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qph/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_set>

#include "qph/error.hpp"

namespace qph {

namespace {

constexpr std::size_t kLeafSize = 32;

/// Odometer over k in [-(2^r - 1), 2^r - 1]^components.
class GridOdometer {
 public:
  GridOdometer(int components, int r)
      : limit_((1 << r) - 1), digits_(static_cast<std::size_t>(components), -((1 << r) - 1)) {}

  const std::vector<int> &digits() const { return digits_; }

  bool advance() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (digits_[i] < limit_) {
        ++digits_[i];
        return true;
      }
      digits_[i] = -limit_;
    }
    return false;
  }

 private:
  int limit_;
  std::vector<int> digits_;
};

bool passes_norm_filter(const std::vector<int> &digits, int r) {
  long long sum = 0;
  for (int k : digits) sum += static_cast<long long>(k) * k;
  // sum / 4^r >= 1/4
  return 4 * sum >= (1LL << (2 * r));
}

CVector digits_to_vector(const std::vector<int> &digits, int r) {
  const double scale = std::ldexp(1.0, -r);
  CVector v(static_cast<Eigen::Index>(digits.size() / 2));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = Complex(digits[static_cast<std::size_t>(2 * i)] * scale,
                   digits[static_cast<std::size_t>(2 * i + 1)] * scale);
  return v;
}

using RayKey = std::array<std::int32_t, 8>;

struct RayKeyHash {
  std::size_t operator()(const RayKey &k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int32_t v : k) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Primitive Gaussian-integer representative of the ray through `digits`:
/// multiply by the conjugate of the first nonzero component, then divide out
/// the gcd. Two integer vectors span the same complex ray iff keys agree.
RayKey ray_key(const std::vector<int> &digits) {
  RayKey key{};
  const std::size_t d = digits.size() / 2;
  std::size_t first = 0;
  while (first < d && digits[2 * first] == 0 && digits[2 * first + 1] == 0) ++first;
  const long long a0 = digits[2 * first], b0 = digits[2 * first + 1];
  long long g = 0;
  std::array<long long, 8> w{};
  for (std::size_t j = first; j < d; ++j) {
    const long long a = digits[2 * j], b = digits[2 * j + 1];
    w[2 * j] = a0 * a + b0 * b;      // Re(conj(v0) v_j)
    w[2 * j + 1] = a0 * b - b0 * a;  // Im(conj(v0) v_j)
    g = std::gcd(g, std::gcd(std::abs(w[2 * j]), std::abs(w[2 * j + 1])));
  }
  for (std::size_t i = 0; i < 2 * d; ++i) key[i] = static_cast<std::int32_t>(w[i] / g);
  return key;
}

}  // namespace

std::uint64_t grid_code_count(const GridSpec &spec) {
  if (spec.n < 1 || spec.r < 1) return 0;
  const long double exponent =
      static_cast<long double>(spec.r + 1) * std::ldexp(1.0L, spec.n + 1);
  if (exponent >= 64) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << static_cast<int>(exponent);
}

std::string grid_code_count_text(const GridSpec &spec) {
  const long double exponent =
      static_cast<long double>(spec.r + 1) * std::ldexp(1.0L, spec.n + 1);
  std::string text = "2^" + std::to_string(static_cast<long long>(exponent));
  if (exponent < 64) text += " = " + std::to_string(grid_code_count(spec));
  return text;
}

void check_grid_budget(const GridSpec &spec, const Budget &budget) {
  if (spec.n < 1 || spec.r < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid needs n >= 1 and r >= 1");
  }
  if (grid_code_count(spec) > budget.grid_count) {
    throw Error(ErrorCode::BudgetExceeded,
                "grid n=" + std::to_string(spec.n) + " r=" + std::to_string(spec.r) + " has " +
                    grid_code_count_text(spec) + " codes, budget is " +
                    std::to_string(budget.grid_count));
  }
}

void grid_enumerate(const GridSpec &spec, const std::function<void(const Qustring &)> &emit,
                    const Budget &budget) {
  check_grid_budget(spec, budget);
  GridOdometer odo(2 << spec.n, spec.r);
  do {
    if (passes_norm_filter(odo.digits(), spec.r))
      emit(Qustring::normalized(digits_to_vector(odo.digits(), spec.r)));
  } while (odo.advance());
}

CVector truncate_components(const CVector &v, int r) {
  const double scale = std::ldexp(1.0, r);
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = Complex(std::trunc(v[i].real() * scale) / scale,
                     std::trunc(v[i].imag() * scale) / scale);
  }
  return out;
}

Eigen::VectorXd projector_features(const CVector &unit) {
  const Eigen::Index d = unit.size();
  Eigen::VectorXd f(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j) f[k++] = std::norm(unit[j]);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = j + 1; l < d; ++l) {
      const Complex rho = unit[j] * std::conj(unit[l]);
      f[k++] = 2.0 * rho.real();
      f[k++] = 2.0 * rho.imag();
    }
  }
  return f;
}

Eigen::VectorXd operator_features(const CMatrix &m) {
  const Eigen::Index d = m.rows();
  Eigen::VectorXd f(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j) f[k++] = m(j, j).real();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = j + 1; l < d; ++l) {
      f[k++] = m(j, l).real();
      f[k++] = m(j, l).imag();
    }
  }
  return f;
}

InnerProductIndex::InnerProductIndex(Eigen::MatrixXd points) : points_(std::move(points)) {
  order_.resize(static_cast<std::size_t>(points_.cols()));
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!order_.empty()) build(0, order_.size());
}

int InnerProductIndex::build(std::size_t begin, std::size_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = points_.col(static_cast<Eigen::Index>(order_[begin]));
  node.hi = node.lo;
  for (std::size_t i = begin + 1; i < end; ++i) {
    const auto p = points_.col(static_cast<Eigen::Index>(order_[i]));
    node.lo = node.lo.cwiseMin(p);
    node.hi = node.hi.cwiseMax(p);
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  Eigen::Index axis = 0;
  (node.hi - node.lo).maxCoeff(&axis);
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double pa = points_(axis, static_cast<Eigen::Index>(a));
                     const double pb = points_(axis, static_cast<Eigen::Index>(b));
                     return pa < pb || (pa == pb && a < b);
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double InnerProductIndex::bound(const Node &node, const Eigen::VectorXd &u) const {
  return u.cwiseProduct(node.lo).cwiseMax(u.cwiseProduct(node.hi)).sum();
}

InnerProductIndex::Hit InnerProductIndex::max_inner(const Eigen::VectorXd &u) const {
  Hit best{-std::numeric_limits<double>::infinity(), 0};
  if (nodes_.empty()) return best;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node &node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (bound(node, u) <= best.value) continue;
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const double v = u.dot(points_.col(static_cast<Eigen::Index>(idx)));
        if (v > best.value || (v == best.value && idx < best.index)) best = {v, idx};
      }
      continue;
    }
    const double bl = bound(nodes_[static_cast<std::size_t>(node.left)], u);
    const double br = bound(nodes_[static_cast<std::size_t>(node.right)], u);
    // Push the more promising child last so it is explored first.
    if (bl >= br) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return best;
}

namespace {

Eigen::MatrixXd feature_matrix(const std::vector<CVector> &states) {
  if (states.empty()) return {};
  const Eigen::Index d = states.front().size();
  Eigen::MatrixXd f(d * d, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i)
    f.col(static_cast<Eigen::Index>(i)) = projector_features(states[i]);
  return f;
}

}  // namespace

GridSet::GridSet(GridSpec spec, std::vector<CVector> states)
    : spec_(spec),
      states_(std::move(states)),
      features_(feature_matrix(states_)),
      index_(features_) {}

std::shared_ptr<const GridSet> grid_set(const GridSpec &spec, const Budget &budget) {
  check_grid_budget(spec, budget);
  if (spec.n > 2) {
    throw Error(ErrorCode::NotSupported, "direction sets are built for n <= 2 only");
  }
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const GridSet>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto &slot = cache[{spec.n, spec.r}];
  if (slot) return slot;

  std::unordered_set<RayKey, RayKeyHash> seen;
  std::vector<CVector> states;
  GridOdometer odo(2 << spec.n, spec.r);
  do {
    if (!passes_norm_filter(odo.digits(), spec.r)) continue;
    if (!seen.insert(ray_key(odo.digits())).second) continue;
    CVector v = digits_to_vector(odo.digits(), spec.r);
    v.normalize();
    states.push_back(std::move(v));
  } while (odo.advance());
  slot = std::make_shared<const GridSet>(spec, std::move(states));
  return slot;
}

}  // namespace qph
