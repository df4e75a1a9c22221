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

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qph/state.hpp"

namespace qph {

/// Grid of n-qubit vectors whose real and imaginary parts are signed binary
/// fractions k / 2^r with |k| < 2^r (one sign bit plus r fraction bits).
struct GridSpec {
  int n = 1;
  int r = 1;
};

/// Number of raw codes, 2^((r+1) * 2^(n+1)), saturated at UINT64_MAX.
std::uint64_t grid_code_count(const GridSpec &spec);
/// Human-readable exact count ("2^40 = 1099511627776").
std::string grid_code_count_text(const GridSpec &spec);
void check_grid_budget(const GridSpec &spec, const Budget &budget);

/// Streams every grid vector with squared norm >= 1/4, normalized, in
/// odometer order over (re_0, im_0, re_1, ...), last component fastest.
void grid_enumerate(const GridSpec &spec, const std::function<void(const Qustring &)> &emit,
                    const Budget &budget = {});

/// Truncates each real component of `v` toward zero to r fraction bits.
CVector truncate_components(const CVector &v, int r);

/// Real coordinates of a density matrix such that
/// tr(M rho) = operator_features(M) . projector_features(psi).
Eigen::VectorXd projector_features(const CVector &unit);
Eigen::VectorXd operator_features(const CMatrix &m);

/// Exact maximum-inner-product search over a fixed point set (kd-tree with
/// box bounds).
class InnerProductIndex {
 public:
  explicit InnerProductIndex(Eigen::MatrixXd points);  // one point per column

  struct Hit {
    double value;
    std::size_t index;
  };
  /// Largest u . p; ties go to the point found first.
  Hit max_inner(const Eigen::VectorXd &u) const;

 private:
  struct Node {
    Eigen::VectorXd lo, hi;
    std::size_t begin = 0, end = 0;
    int left = -1, right = -1;
  };
  int build(std::size_t begin, std::size_t end);
  double bound(const Node &node, const Eigen::VectorXd &u) const;

  Eigen::MatrixXd points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

/// The distinct directions of a grid: one normalized representative per
/// projector, in first-seen enumeration order.
class GridSet {
 public:
  GridSet(GridSpec spec, std::vector<CVector> states);

  const GridSpec &spec() const { return spec_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<CVector> &states() const { return states_; }
  const Eigen::MatrixXd &features() const { return features_; }
  const InnerProductIndex &index() const { return index_; }

 private:
  GridSpec spec_;
  std::vector<CVector> states_;
  Eigen::MatrixXd features_;
  InnerProductIndex index_;
};

/// Memoized per (n, r); safe to call from several threads.
std::shared_ptr<const GridSet> grid_set(const GridSpec &spec, const Budget &budget = {});

}  // namespace qph
