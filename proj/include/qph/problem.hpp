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

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qph/quantifier.hpp"
#include "qph/state.hpp"

namespace qph {

/// Tolerance for treating two qustrings as the same point (projector
/// distance, so global phase is ignored).
inline constexpr double kSameStateTolerance = 1e-10;

bool same_state(const Qustring &a, const Qustring &b);
bool same_tuple(const QTuple &a, const QTuple &b);

/// A pair (A, B) of disjoint sets of qustring tuples. Every tuple has the
/// same part sizes (`shape`). Explicit problems list both sets; threshold
/// problems accept when the quantified value reaches a and reject when it
/// falls to b, with the tuple parts feeding the instance's input registers.
class PartialProblem {
 public:
  static PartialProblem explicit_sets(std::vector<int> shape, std::vector<QTuple> accept,
                                      std::vector<QTuple> reject);
  static PartialProblem threshold(HierarchyInstance inst, DecisionThresholds th,
                                  Method method = ExactMethod{});

  bool is_explicit() const { return !instance_.has_value(); }
  const std::vector<int> &shape() const { return shape_; }
  int ground_size() const;

  const std::vector<QTuple> &accept_set() const;
  const std::vector<QTuple> &reject_set() const;
  const HierarchyInstance &instance() const;
  const DecisionThresholds &thresholds() const { return thresholds_; }
  const Method &method() const { return method_; }

  Decision membership(const QTuple &x, const Budget &budget = {}) const;

 private:
  PartialProblem() = default;

  std::vector<int> shape_;
  std::vector<QTuple> accept_;
  std::vector<QTuple> reject_;
  std::optional<HierarchyInstance> instance_;
  DecisionThresholds thresholds_;
  Method method_ = ExactMethod{};
};

PartialProblem complement(const PartialProblem &p);
PartialProblem intersect(const PartialProblem &p, const PartialProblem &q);
PartialProblem unite(const PartialProblem &p, const PartialProblem &q);
/// (A,B) is included in (C,D) iff A is a subset of C and A u B = C u D.
bool includes(const PartialProblem &p, const PartialProblem &q);
/// Same accept set and same reject set (explicit problems).
bool same_problem(const PartialProblem &p, const PartialProblem &q);

/// Length-prefixed pairing of binary strings: per component, its length as
/// 8-bit groups (continuation flag + 7 payload bits, low group first)
/// followed by the component's bits.
std::string pair_encode(const std::vector<std::string> &components);
std::vector<std::string> pair_decode(std::string_view bits);

struct ClassicalPart {
  std::set<std::vector<std::string>> tuples;

  std::vector<std::string> encoded() const;
};

struct ClassicalParts {
  ClassicalPart accept;
  ClassicalPart reject;
  std::size_t tested = 0;
  /// Every tested basis tuple landed in one of the two parts.
  bool total = false;
};

/// Membership of every basis tuple of the problem's shape. Throws
/// BudgetExceeded when the ground size exceeds `max_n` or the budget.
ClassicalParts classical_part(const PartialProblem &p, int max_n, const Budget &budget = {});

struct SeparabilityProbe {
  QTuple phi;  // the classically separable coordinates
  QTuple psi;  // remaining coordinates, possibly empty
};

using Membership = std::function<bool(const QTuple &phi, const QTuple &psi)>;

struct SeparabilityResult {
  bool separable = true;
  std::size_t probes_checked = 0;
  std::optional<SeparabilityProbe> counterexample;
};

/// For each probe: if every basis tuple x in the support of phi has
/// (x, psi) in S, then (phi, psi) must be in S. Basis-state probes for every
/// distinct psi are checked as well. Stops at the first violation.
SeparabilityResult is_classically_separable(const Membership &set, int n, int m,
                                            const std::vector<SeparabilityProbe> &probes,
                                            const Budget &budget = {});

/// Membership predicates for the accept and reject sets of a problem; the
/// probe's phi and psi parts are concatenated into one input tuple.
Membership accept_membership(const PartialProblem &p, const Budget &budget = {});
Membership reject_membership(const PartialProblem &p, const Budget &budget = {});

}  // namespace qph
