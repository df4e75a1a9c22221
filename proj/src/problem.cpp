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

#include <numeric>

#include "qph/error.hpp"

namespace qph {

bool same_state(const Qustring &a, const Qustring &b) {
  return a.size() == b.size() && projector_distance(a, b) < kSameStateTolerance;
}

bool same_tuple(const QTuple &a, const QTuple &b) {
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!same_state(a.parts()[i], b.parts()[i])) return false;
  return true;
}

namespace {

bool contains(const std::vector<QTuple> &set, const QTuple &x) {
  for (const auto &y : set)
    if (same_tuple(x, y)) return true;
  return false;
}

void add_unique(std::vector<QTuple> &set, const QTuple &x) {
  if (!contains(set, x)) set.push_back(x);
}

std::vector<QTuple> set_union(const std::vector<QTuple> &a, const std::vector<QTuple> &b) {
  std::vector<QTuple> out;
  for (const auto &x : a) add_unique(out, x);
  for (const auto &x : b) add_unique(out, x);
  return out;
}

std::vector<QTuple> set_intersection(const std::vector<QTuple> &a, const std::vector<QTuple> &b) {
  std::vector<QTuple> out;
  for (const auto &x : a)
    if (contains(b, x)) add_unique(out, x);
  return out;
}

bool subset(const std::vector<QTuple> &a, const std::vector<QTuple> &b) {
  for (const auto &x : a)
    if (!contains(b, x)) return false;
  return true;
}

bool set_equal(const std::vector<QTuple> &a, const std::vector<QTuple> &b) {
  return subset(a, b) && subset(b, a);
}

void check_shape(const QTuple &x, const std::vector<int> &shape) {
  bool ok = x.arity() == shape.size();
  for (std::size_t i = 0; ok && i < shape.size(); ++i) ok = x.parts()[i].size() == shape[i];
  if (!ok) throw Error(ErrorCode::GroundMismatch, "tuple does not match the problem shape");
}

void require_explicit_pair(const PartialProblem &p, const PartialProblem &q) {
  if (!p.is_explicit() || !q.is_explicit()) {
    throw Error(ErrorCode::NotSupported, "set algebra needs explicit problems");
  }
  if (p.shape() != q.shape()) {
    throw Error(ErrorCode::GroundMismatch, "problems are over different tuple shapes");
  }
}

}  // namespace

PartialProblem PartialProblem::explicit_sets(std::vector<int> shape, std::vector<QTuple> accept,
                                             std::vector<QTuple> reject) {
  PartialProblem p;
  p.shape_ = std::move(shape);
  for (int s : p.shape_)
    if (s < 1) throw Error(ErrorCode::InvalidArgument, "tuple parts need at least one qubit");
  for (const auto &x : accept) {
    check_shape(x, p.shape_);
    add_unique(p.accept_, x);
  }
  for (const auto &x : reject) {
    check_shape(x, p.shape_);
    if (contains(p.accept_, x)) {
      throw Error(ErrorCode::InvalidArgument, "accept and reject sets overlap");
    }
    add_unique(p.reject_, x);
  }
  return p;
}

PartialProblem PartialProblem::threshold(HierarchyInstance inst, DecisionThresholds th,
                                         Method method) {
  PartialProblem p;
  for (std::size_t reg : inst.base().input_registers())
    p.shape_.push_back(inst.base().registers()[reg].qubits);
  p.instance_ = std::move(inst);
  p.thresholds_ = DecisionThresholds::make(th.a, th.b);
  p.method_ = std::move(method);
  return p;
}

int PartialProblem::ground_size() const {
  return std::accumulate(shape_.begin(), shape_.end(), 0);
}

const std::vector<QTuple> &PartialProblem::accept_set() const {
  if (!is_explicit()) throw Error(ErrorCode::NotSupported, "threshold problems have no listed sets");
  return accept_;
}

const std::vector<QTuple> &PartialProblem::reject_set() const {
  if (!is_explicit()) throw Error(ErrorCode::NotSupported, "threshold problems have no listed sets");
  return reject_;
}

const HierarchyInstance &PartialProblem::instance() const {
  if (is_explicit()) throw Error(ErrorCode::NotSupported, "explicit problems have no instance");
  return *instance_;
}

Decision PartialProblem::membership(const QTuple &x, const Budget &budget) const {
  check_shape(x, shape_);
  if (is_explicit()) {
    if (contains(accept_, x)) return Decision::Accept;
    if (contains(reject_, x)) return Decision::Reject;
    return Decision::OutsideLegalRegion;
  }
  const QuantumFunction &f = instance_->base();
  Assignment inputs;
  const auto regs = f.input_registers();
  for (std::size_t i = 0; i < regs.size(); ++i)
    inputs.emplace(f.registers()[regs[i]].name, x.parts()[i]);
  return decide(instance_->with_inputs(std::move(inputs)), thresholds_, method_, budget);
}

PartialProblem complement(const PartialProblem &p) {
  if (p.is_explicit()) return PartialProblem::explicit_sets(p.shape(), p.reject_set(), p.accept_set());
  return PartialProblem::threshold(complement_instance(p.instance()), p.thresholds(), p.method());
}

PartialProblem intersect(const PartialProblem &p, const PartialProblem &q) {
  require_explicit_pair(p, q);
  const auto legal = set_intersection(set_union(p.accept_set(), p.reject_set()),
                                      set_union(q.accept_set(), q.reject_set()));
  return PartialProblem::explicit_sets(
      p.shape(), set_intersection(p.accept_set(), q.accept_set()),
      set_intersection(set_union(p.reject_set(), q.reject_set()), legal));
}

PartialProblem unite(const PartialProblem &p, const PartialProblem &q) {
  require_explicit_pair(p, q);
  const auto legal = set_intersection(set_union(p.accept_set(), p.reject_set()),
                                      set_union(q.accept_set(), q.reject_set()));
  return PartialProblem::explicit_sets(
      p.shape(), set_intersection(set_union(p.accept_set(), q.accept_set()), legal),
      set_intersection(p.reject_set(), q.reject_set()));
}

bool includes(const PartialProblem &p, const PartialProblem &q) {
  require_explicit_pair(p, q);
  return subset(p.accept_set(), q.accept_set()) &&
         set_equal(set_union(p.accept_set(), p.reject_set()),
                   set_union(q.accept_set(), q.reject_set()));
}

bool same_problem(const PartialProblem &p, const PartialProblem &q) {
  require_explicit_pair(p, q);
  return set_equal(p.accept_set(), q.accept_set()) && set_equal(p.reject_set(), q.reject_set());
}

std::string pair_encode(const std::vector<std::string> &components) {
  std::string out;
  for (const auto &c : components) {
    for (char ch : c)
      if (ch != '0' && ch != '1') throw Error(ErrorCode::InvalidArgument, "component is not binary");
    std::size_t len = c.size();
    do {
      const std::size_t group = len & 0x7f;
      len >>= 7;
      out.push_back(len ? '1' : '0');
      for (int b = 6; b >= 0; --b) out.push_back(((group >> b) & 1u) ? '1' : '0');
    } while (len);
    out += c;
  }
  return out;
}

std::vector<std::string> pair_decode(std::string_view bits) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < bits.size()) {
    std::size_t len = 0;
    int shift = 0;
    bool more = true;
    while (more) {
      if (pos + 8 > bits.size() || shift > 56) {
        throw Error(ErrorCode::InvalidArgument, "truncated length prefix");
      }
      more = bits[pos] == '1';
      std::size_t group = 0;
      for (int b = 1; b < 8; ++b) {
        const char ch = bits[pos + static_cast<std::size_t>(b)];
        if (ch != '0' && ch != '1') throw Error(ErrorCode::InvalidArgument, "not a bit string");
        group = (group << 1) | static_cast<std::size_t>(ch == '1');
      }
      len |= group << shift;
      shift += 7;
      pos += 8;
    }
    if (pos + len > bits.size()) throw Error(ErrorCode::InvalidArgument, "truncated component");
    const std::string_view comp = bits.substr(pos, len);
    if (comp.find_first_not_of("01") != std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "not a bit string");
    }
    out.emplace_back(comp);
    pos += len;
  }
  return out;
}

std::vector<std::string> ClassicalPart::encoded() const {
  std::vector<std::string> out;
  for (const auto &t : tuples) out.push_back(pair_encode(t));
  return out;
}

namespace {

std::string bit_string(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if ((value >> (width - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

void check_enumeration(int total_bits, const Budget &budget) {
  if (total_bits >= 63 || (std::uint64_t{1} << total_bits) > budget.grid_count) {
    throw Error(ErrorCode::BudgetExceeded, "2^" + std::to_string(total_bits) +
                                               " basis tuples exceed the enumeration budget");
  }
}

}  // namespace

ClassicalParts classical_part(const PartialProblem &p, int max_n, const Budget &budget) {
  const int total = p.ground_size();
  if (total > max_n) {
    throw Error(ErrorCode::BudgetExceeded, "ground size " + std::to_string(total) +
                                               " exceeds max_n " + std::to_string(max_n));
  }
  check_enumeration(total, budget);
  ClassicalParts out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << total); ++code) {
    std::vector<Qustring> parts;
    std::vector<std::string> strings;
    int shift = total;
    for (int size : p.shape()) {
      shift -= size;
      const std::uint64_t x = (code >> shift) & ((std::uint64_t{1} << size) - 1);
      parts.push_back(Qustring::basis(size, x));
      strings.push_back(bit_string(x, size));
    }
    const Decision d = p.membership(QTuple(std::move(parts)), budget);
    if (d == Decision::Accept) out.accept.tuples.insert(strings);
    if (d == Decision::Reject) out.reject.tuples.insert(strings);
    ++out.tested;
  }
  out.total = out.accept.tuples.size() + out.reject.tuples.size() == out.tested;
  return out;
}

SeparabilityResult is_classically_separable(const Membership &set, int n, int m,
                                            const std::vector<SeparabilityProbe> &probes,
                                            const Budget &budget) {
  if (n < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and m >= 1");
  check_enumeration(n * m, budget);
  const std::uint64_t count = std::uint64_t{1} << (n * m);
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;

  auto basis_tuple = [&](std::uint64_t code) {
    std::vector<Qustring> parts;
    for (int i = 0; i < m; ++i)
      parts.push_back(Qustring::basis(n, (code >> (n * (m - 1 - i))) & mask));
    return QTuple(std::move(parts));
  };

  std::vector<SeparabilityProbe> all = probes;
  std::vector<QTuple> psis;
  for (const auto &pr : probes) {
    bool ok = pr.phi.arity() == static_cast<std::size_t>(m);
    for (const auto &part : pr.phi.parts()) ok = ok && part.size() == n;
    if (!ok) throw Error(ErrorCode::GroundMismatch, "probe does not match n and m");
    bool seen = false;
    for (const auto &q : psis) seen = seen || same_tuple(q, pr.psi);
    if (!seen) psis.push_back(pr.psi);
  }
  if (psis.empty()) psis.emplace_back();
  for (const auto &psi : psis)
    for (std::uint64_t code = 0; code < count; ++code) all.push_back({basis_tuple(code), psi});

  SeparabilityResult result;
  for (const auto &pr : all) {
    ++result.probes_checked;
    bool premise = true;
    for (std::uint64_t code = 0; premise && code < count; ++code) {
      Complex amp = 1.0;
      for (int i = 0; i < m; ++i)
        amp *= pr.phi.parts()[static_cast<std::size_t>(i)][(code >> (n * (m - 1 - i))) & mask];
      if (std::abs(amp) <= 1e-12) continue;
      premise = set(basis_tuple(code), pr.psi);
    }
    if (premise && !set(pr.phi, pr.psi)) {
      result.separable = false;
      result.counterexample = pr;
      return result;
    }
  }
  return result;
}

namespace {

Membership membership_is(const PartialProblem &p, Decision want, const Budget &budget) {
  return [p, want, budget](const QTuple &phi, const QTuple &psi) {
    std::vector<Qustring> parts = phi.parts();
    parts.insert(parts.end(), psi.parts().begin(), psi.parts().end());
    return p.membership(QTuple(std::move(parts)), budget) == want;
  };
}

}  // namespace

Membership accept_membership(const PartialProblem &p, const Budget &budget) {
  return membership_is(p, Decision::Accept, budget);
}

Membership reject_membership(const PartialProblem &p, const Budget &budget) {
  return membership_is(p, Decision::Reject, budget);
}

}  // namespace qph
