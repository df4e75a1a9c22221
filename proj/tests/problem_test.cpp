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

#include "qph/problem.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qph/random.hpp"
#include "qph/suite.hpp"
#include "test_util.hpp"

using namespace qph;
using qph::testing::code_of;
using qph::testing::vec;

namespace {

const double kR = 1.0 / std::numbers::sqrt2;

QTuple one(const Qustring &s) { return QTuple({s}); }

const Qustring kZero = Qustring::basis(1, 0);
const Qustring kOne = Qustring::basis(1, 1);
const Qustring kPlus = Qustring::make(vec({kR, kR}));
const Qustring kMinus = Qustring::make(vec({kR, -kR}));

PartialProblem sets(std::vector<Qustring> a, std::vector<Qustring> b) {
  std::vector<QTuple> at, bt;
  for (const auto &s : a) at.push_back(one(s));
  for (const auto &s : b) bt.push_back(one(s));
  return PartialProblem::explicit_sets({1}, std::move(at), std::move(bt));
}

bool contains(const std::vector<QTuple> &set, const Qustring &s) {
  for (const auto &t : set)
    if (same_tuple(t, one(s))) return true;
  return false;
}

/// Accepts with probability |<1|x>|^2 on input x.
HierarchyInstance read_input() {
  CircuitBuilder b;
  b.input("x");
  return HierarchyInstance::make(b.build(0), 0, 1, 1, Pattern::Sigma,
                                 {{"x", Qustring::basis(1, 0)}});
}

/// Accepts with probability |<+|x>|^2.
HierarchyInstance plus_only() {
  CircuitBuilder b;
  b.input("x").apply(gates::h(0)).apply(gates::x(0));
  return HierarchyInstance::make(b.build(0), 0, 1, 1, Pattern::Sigma,
                                 {{"x", Qustring::basis(1, 0)}});
}

/// Dephased input x, witness w; accepts iff x and w read equal. Every basis
/// input has value 1 while |+> has value 1/2.
HierarchyInstance mixed_equality(Pattern pattern) {
  CircuitBuilder b;
  b.input("x").witness("w", 1).ancilla("o").dephase("x");
  b.apply(gates::cnot(0, 2)).apply(gates::cnot(1, 2)).apply(gates::x(2));
  return HierarchyInstance::make(b.build(2), 1, 1, 1, pattern, {{"x", Qustring::basis(1, 0)}});
}

std::vector<SeparabilityProbe> random_probes(int count, Rng &rng) {
  std::vector<SeparabilityProbe> probes;
  for (int i = 0; i < count; ++i) probes.push_back({one(random_qustring(1, rng)), QTuple()});
  return probes;
}

}  // namespace

TEST(Algebra, ComplementSwapsSets) {
  const auto p = sets({kZero}, {kOne});
  const auto c = complement(p);
  EXPECT_TRUE(same_problem(c, sets({kOne}, {kZero})));
  EXPECT_TRUE(same_problem(complement(c), p));
}

TEST(Algebra, IntersectAndUniteByHand) {
  // x, y, z = |0>, |1>, |+>; E = {x,y} n {x,z} = {x}.
  const auto p = sets({kZero}, {kOne});
  const auto q = sets({kZero}, {kPlus});
  EXPECT_TRUE(same_problem(intersect(p, q), sets({kZero}, {})));
  EXPECT_TRUE(same_problem(unite(p, q), sets({kZero}, {})));
  EXPECT_TRUE(intersect(p, complement(p)).accept_set().empty());
}

TEST(Algebra, Includes) {
  const auto p = sets({kZero}, {kOne, kPlus});
  EXPECT_TRUE(includes(p, p));
  EXPECT_TRUE(includes(p, sets({kZero, kOne}, {kPlus})));
  EXPECT_FALSE(includes(sets({kZero}, {kOne}), sets({kZero}, {kPlus})));
  EXPECT_FALSE(includes(sets({kZero, kOne}, {kPlus}), p));
}

TEST(Algebra, FiniteSetIdentities) {
  const std::vector<Qustring> pool{kZero, kOne, kPlus, kMinus};
  // Every problem over the pool: each element is accepted, rejected or absent.
  std::vector<PartialProblem> all;
  for (int code = 0; code < 81; ++code) {
    std::vector<Qustring> a, b;
    int c = code;
    for (const auto &s : pool) {
      if (c % 3 == 1) a.push_back(s);
      if (c % 3 == 2) b.push_back(s);
      c /= 3;
    }
    all.push_back(sets(a, b));
  }
  for (std::size_t i = 0; i < all.size(); i += 7) {
    const auto &p = all[i];
    EXPECT_TRUE(same_problem(intersect(p, p), p));
    EXPECT_TRUE(same_problem(unite(p, p), p));
    for (std::size_t j = 0; j < all.size(); j += 5) {
      const auto &q = all[j];
      EXPECT_TRUE(same_problem(complement(unite(p, q)), intersect(complement(p), complement(q))));
      EXPECT_TRUE(same_problem(intersect(p, q), intersect(q, p)));
      EXPECT_TRUE(same_problem(unite(p, q), unite(q, p)));
      const auto &r = all[(i + j) % all.size()];
      EXPECT_TRUE(same_problem(intersect(intersect(p, q), r), intersect(p, intersect(q, r))));
      EXPECT_TRUE(same_problem(unite(unite(p, q), r), unite(p, unite(q, r))));
      // Results stay disjoint.
      const auto u = unite(p, q);
      for (const auto &t : u.accept_set()) EXPECT_FALSE(contains(u.reject_set(), t.parts()[0]));
    }
  }
}

TEST(Algebra, Errors) {
  EXPECT_EQ(code_of([] { sets({kZero}, {kZero}); }), ErrorCode::InvalidArgument);
  const auto two = PartialProblem::explicit_sets({2}, {one(Qustring::basis(2, 0))}, {});
  EXPECT_EQ(code_of([&] { intersect(sets({kZero}, {}), two); }), ErrorCode::GroundMismatch);
  EXPECT_EQ(code_of([&] { includes(sets({kZero}, {}), two); }), ErrorCode::GroundMismatch);
  EXPECT_EQ(code_of([] { PartialProblem::explicit_sets({1}, {one(Qustring::basis(2, 0))}, {}); }),
            ErrorCode::GroundMismatch);
  const auto th = PartialProblem::threshold(read_input(), DecisionThresholds{});
  EXPECT_EQ(code_of([&] { unite(th, th); }), ErrorCode::NotSupported);
  EXPECT_EQ(code_of([&] { th.accept_set(); }), ErrorCode::NotSupported);
}

TEST(Threshold, ComplementMembershipSwaps) {
  const auto p = PartialProblem::threshold(read_input(), DecisionThresholds{});
  const auto c = complement(p);
  Rng rng(83);
  for (int i = 0; i < 20; ++i) {
    const QTuple x = one(random_qustring(1, rng));
    const Decision d = p.membership(x);
    const Decision e = c.membership(x);
    if (d == Decision::Accept) EXPECT_EQ(e, Decision::Reject);
    if (d == Decision::Reject) EXPECT_EQ(e, Decision::Accept);
    if (d == Decision::OutsideLegalRegion) EXPECT_EQ(e, Decision::OutsideLegalRegion);
  }
  EXPECT_EQ(p.membership(one(kOne)), Decision::Accept);
  EXPECT_EQ(p.membership(one(kPlus)), Decision::OutsideLegalRegion);
}

TEST(Pairing, RoundTripAndInjective) {
  const std::vector<std::vector<std::string>> cases{
      {}, {""}, {"", ""}, {"0"}, {"1", "0"}, {"01", "1"}, {"0", "11"}, {std::string(200, '1')}};
  std::set<std::string> seen;
  for (const auto &c : cases) {
    const auto enc = pair_encode(c);
    EXPECT_EQ(pair_decode(enc), c);
    EXPECT_TRUE(seen.insert(enc).second);
  }
  // Flag 0 (last group), payload 0000001, then the bit itself.
  EXPECT_EQ(pair_encode({"1"}), "000000011");
  EXPECT_EQ(code_of([] { pair_decode("1000"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { pair_decode("000000101"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { pair_decode("10000001x"); }), ErrorCode::InvalidArgument);
}

TEST(ClassicalPart, Examples) {
  const auto p = PartialProblem::threshold(read_input(), DecisionThresholds{});
  const auto parts = classical_part(p, 4);
  EXPECT_EQ(parts.accept.tuples, (std::set<std::vector<std::string>>{{"1"}}));
  EXPECT_EQ(parts.reject.tuples, (std::set<std::vector<std::string>>{{"0"}}));
  EXPECT_TRUE(parts.total);
  EXPECT_EQ(parts.tested, 2u);
  EXPECT_EQ(parts.accept.encoded(), std::vector<std::string>{pair_encode({"1"})});

  const auto plus = classical_part(PartialProblem::threshold(plus_only(), DecisionThresholds{}), 4);
  EXPECT_TRUE(plus.accept.tuples.empty());
  EXPECT_FALSE(plus.total);

  const auto swapped = classical_part(complement(p), 4);
  EXPECT_EQ(swapped.accept.tuples, parts.reject.tuples);
  EXPECT_EQ(swapped.reject.tuples, parts.accept.tuples);

  const auto ex = classical_part(sets({kZero, kPlus}, {kMinus}), 1);
  EXPECT_EQ(ex.accept.tuples, (std::set<std::vector<std::string>>{{"0"}}));
  EXPECT_TRUE(ex.reject.tuples.empty());
  EXPECT_FALSE(ex.total);

  EXPECT_EQ(code_of([&] { classical_part(p, 0); }), ErrorCode::BudgetExceeded);
}

TEST(Separability, EverythingIsSeparable) {
  Rng rng(89);
  const auto res = is_classically_separable([](const QTuple &, const QTuple &) { return true; }, 1,
                                            1, random_probes(10, rng));
  EXPECT_TRUE(res.separable);
  EXPECT_GE(res.probes_checked, 10u);
}

TEST(Separability, ExcludedSuperposition) {
  const Membership basis_only = [](const QTuple &phi, const QTuple &) {
    const Qustring &s = phi.parts()[0];
    return std::abs(s[0]) < 1e-12 || std::abs(s[1]) < 1e-12;
  };
  const auto res = is_classically_separable(basis_only, 1, 1, {{one(kPlus), QTuple()}});
  ASSERT_FALSE(res.separable);
  EXPECT_TRUE(same_tuple(res.counterexample->phi, one(kPlus)));
}

TEST(Separability, UnmixedPlusAcceptorFails) {
  // Value 1/2 + |<+|x>|^2 / 2: both basis states reach 3/4, |-> only 1/2.
  CircuitBuilder b;
  b.input("x").ancilla("c").ancilla("o");
  b.apply(gates::h(1)).apply(gates::cnot(1, 2));
  b.apply(gates::controlled(gates::h(0), {1}, {0}));
  b.apply(gates::controlled(gates::x(2), {1, 0}, {0, 0}));
  const auto inst = HierarchyInstance::make(b.build(2), 0, 1, 1, Pattern::Sigma,
                                            {{"x", Qustring::basis(1, 0)}});
  EXPECT_NEAR(evaluate(inst.base(), {{"x", kZero}}), 0.75, 1e-12);
  EXPECT_NEAR(evaluate(inst.base(), {{"x", kMinus}}), 0.5, 1e-12);
  const auto p = PartialProblem::threshold(inst, DecisionThresholds{});
  Rng rng(97);
  const auto res = is_classically_separable(accept_membership(p), 1, 1, random_probes(20, rng));
  ASSERT_FALSE(res.separable);
  EXPECT_LT(evaluate(inst.base(), {{"x", res.counterexample->phi.parts()[0]}}), 0.75);
}

TEST(Separability, MixedWithoutWitnessIsSeparable) {
  // With no quantifier the value is linear in the dephased input.
  Rng rng(101);
  for (int i = 0; i < 5; ++i) {
    CircuitBuilder b;
    b.input("x").ancilla("o").dephase("x");
    b.apply(gates::unitary(random_unitary(4, rng), {0, 1}));
    const auto inst = HierarchyInstance::make(b.build(1), 0, 1, 1, Pattern::Sigma,
                                              {{"x", Qustring::basis(1, 0)}});
    const auto p = PartialProblem::threshold(inst, DecisionThresholds{});
    const auto probes = random_probes(100, rng);
    EXPECT_TRUE(is_classically_separable(accept_membership(p), 1, 1, probes).separable);
    EXPECT_TRUE(is_classically_separable(reject_membership(p), 1, 1, probes).separable);
  }
}

TEST(Separability, MixedWithWitnessCanFail) {
  // The sup over witnesses is convex, not linear, in the mixed input: both
  // basis inputs reach 1 while |+> reaches only 1/2. Dually the inf form
  // sends both basis inputs to 0 and |+> to 1/2.
  const auto sigma = mixed_equality(Pattern::Sigma);
  EXPECT_NEAR(qopt_value(sigma.with_inputs({{"x", kPlus}}), ExactMethod{}).value, 0.5, 1e-12);
  EXPECT_NEAR(qopt_value(sigma.with_inputs({{"x", kOne}}), ExactMethod{}).value, 1.0, 1e-12);
  const std::vector<SeparabilityProbe> probe{{one(kPlus), QTuple()}};
  const auto p = PartialProblem::threshold(sigma, DecisionThresholds{});
  EXPECT_FALSE(is_classically_separable(accept_membership(p), 1, 1, probe).separable);
  EXPECT_TRUE(is_classically_separable(reject_membership(p), 1, 1, probe).separable);

  const auto q = PartialProblem::threshold(mixed_equality(Pattern::Pi), DecisionThresholds{});
  EXPECT_FALSE(is_classically_separable(reject_membership(q), 1, 1, probe).separable);
  EXPECT_TRUE(is_classically_separable(accept_membership(q), 1, 1, probe).separable);
}

TEST(Separability, Budget) {
  Budget b;
  b.grid_count = 2;
  EXPECT_EQ(code_of([&] {
              is_classically_separable([](const QTuple &, const QTuple &) { return true; }, 2, 1,
                                       {}, b);
            }),
            ErrorCode::BudgetExceeded);
}
