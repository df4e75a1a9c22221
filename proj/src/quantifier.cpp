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

#include "qph/quantifier.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Eigenvalues>

#include "qph/error.hpp"
#include "qph/random.hpp"

namespace qph {

HierarchyInstance HierarchyInstance::make(QuantumFunction base, int levels, int arity,
                                          int witness_qubits, Pattern pattern,
                                          Assignment inputs) {
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "negative number of levels");
  if (arity < 1 || witness_qubits < 1) {
    throw Error(ErrorCode::InvalidArgument, "arity and witness size must be positive");
  }
  for (const auto &r : base.registers()) {
    if (r.role != RegisterRole::Witness) continue;
    if (r.level < 1 || r.level > levels) {
      throw Error(ErrorCode::RegisterMismatch,
                  "witness register " + r.name + " has level " + std::to_string(r.level) +
                      " outside 1.." + std::to_string(levels));
    }
    if (r.qubits != witness_qubits) {
      throw Error(ErrorCode::RegisterMismatch, "witness register " + r.name + " has " +
                                                   std::to_string(r.qubits) + " qubits, expected " +
                                                   std::to_string(witness_qubits));
    }
  }
  for (int level = 1; level <= levels; ++level) {
    const auto regs = base.witness_registers(level);
    if (static_cast<int>(regs.size()) != arity) {
      throw Error(ErrorCode::RegisterMismatch,
                  "level " + std::to_string(level) + " has " + std::to_string(regs.size()) +
                      " witness registers, expected " + std::to_string(arity));
    }
  }
  const auto input_regs = base.input_registers();
  for (std::size_t i : input_regs) {
    const auto &r = base.registers()[i];
    auto it = inputs.find(r.name);
    if (it == inputs.end()) {
      throw Error(ErrorCode::RegisterMismatch, "input register " + r.name + " is not assigned");
    }
    if (it->second.size() != r.qubits) {
      throw Error(ErrorCode::RegisterMismatch, "input register " + r.name + " expects " +
                                                   std::to_string(r.qubits) + " qubits");
    }
  }
  if (inputs.size() != input_regs.size()) {
    throw Error(ErrorCode::RegisterMismatch, "inputs name a register that is not an input");
  }
  return HierarchyInstance(std::make_shared<const QuantumFunction>(std::move(base)), levels, arity,
                           witness_qubits, pattern, std::move(inputs));
}

Quantifier HierarchyInstance::quantifier(int level) const {
  const bool odd = level % 2 == 1;
  return (odd == (pattern_ == Pattern::Sigma)) ? Quantifier::Sup : Quantifier::Inf;
}

HierarchyInstance HierarchyInstance::with_inputs(Assignment inputs) const {
  return make(*base_, levels_, arity_, witness_qubits_, pattern_, std::move(inputs));
}

DecisionThresholds DecisionThresholds::make(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a + b - 1.0) > 1e-12 || !(a > b)) {
    throw Error(ErrorCode::InvalidArgument, "thresholds need a + b = 1 and a > b");
  }
  return DecisionThresholds{a, b};
}

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw Error(ErrorCode::ConfigInvalid, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Method parse_method(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "exact") {
    ExactMethod m;
    if (!args.empty()) m.outer_r = parse_int(args, "grid precision");
    if (m.outer_r < 1) throw Error(ErrorCode::ConfigInvalid, "grid precision must be positive");
    return m;
  }
  if (head == "grid") {
    GridMethod m;
    if (!args.empty()) m.r = parse_int(args, "grid precision");
    if (m.r < 1) throw Error(ErrorCode::ConfigInvalid, "grid precision must be positive");
    return m;
  }
  if (head == "alt" || head == "alternating") {
    AlternatingMethod m;
    if (!args.empty()) {
      const auto parts = split(args, ',');
      if (parts.size() > 3) throw Error(ErrorCode::ConfigInvalid, "alt takes iters,restarts,seed");
      m.iters = parse_int(parts[0], "iteration count");
      if (parts.size() > 1) m.restarts = parse_int(parts[1], "restart count");
      if (parts.size() > 2) m.seed = static_cast<std::uint64_t>(parse_int(parts[2], "seed"));
    }
    if (m.restarts < 1) throw Error(ErrorCode::ConfigInvalid, "need at least one restart");
    return m;
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown method '" + std::string(text) + "'");
}

std::string method_name(const Method &method) {
  struct Visitor {
    std::string operator()(const ExactMethod &m) const {
      return "exact:" + std::to_string(m.outer_r);
    }
    std::string operator()(const GridMethod &m) const { return "grid:" + std::to_string(m.r); }
    std::string operator()(const AlternatingMethod &m) const {
      return "alt:" + std::to_string(m.iters) + "," + std::to_string(m.restarts) + "," +
             std::to_string(m.seed);
    }
  };
  return std::visit(Visitor{}, method);
}

std::string_view bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::Exact: return "exact";
    case BoundKind::Lower: return "lower";
    case BoundKind::Upper: return "upper";
    case BoundKind::Heuristic: return "heuristic";
  }
  return "?";
}

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::Accept: return "Accept";
    case Decision::Reject: return "Reject";
    case Decision::OutsideLegalRegion: return "OutsideLegalRegion";
  }
  return "?";
}

EigenResult eigen_oracle(const CMatrix &m, Quantifier mode, const Budget &budget) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimMismatch, "operator must be square and nonempty");
  }
  const auto dim = static_cast<std::size_t>(m.rows());
  if (dim > budget.matrix_dim) {
    throw Error(ErrorCode::BudgetExceeded, "operator dimension " + std::to_string(dim) +
                                               " exceeds " + std::to_string(budget.matrix_dim));
  }
  if (!is_power_of_two(dim)) throw Error(ErrorCode::NotPowerOfTwo, "operator dimension");

  Eigen::SelfAdjointEigenSolver<CMatrix> solver((m + m.adjoint()) * 0.5);
  const Eigen::VectorXd &vals = solver.eigenvalues();
  const CMatrix &vecs = solver.eigenvectors();
  const Eigen::Index n = vals.size();
  const Eigen::Index extreme = mode == Quantifier::Sup ? n - 1 : 0;
  const double value = vals[extreme];

  std::vector<Eigen::Index> tied;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(vals[i] - value) <= 1e-9) tied.push_back(i);

  CVector v = vecs.col(extreme);
  if (tied.size() > 1) {
    CMatrix basis(n, static_cast<Eigen::Index>(tied.size()));
    for (std::size_t c = 0; c < tied.size(); ++c)
      basis.col(static_cast<Eigen::Index>(c)) = vecs.col(tied[c]);
    for (Eigen::Index j = 0; j < n; ++j) {
      CVector proj = basis * basis.row(j).adjoint();
      const double norm = proj.norm();
      if (norm > 1e-6) {
        v = proj / norm;
        break;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v[i]) > 1e-9) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      break;
    }
  }
  return {value, Qustring::normalized(std::move(v))};
}

EigenResult eigen_oracle(const AcceptanceOperator &op, Quantifier mode, const Budget &budget) {
  return eigen_oracle(op.matrix, mode, budget);
}

EigenResult grid_extreme(const CMatrix &m, int r, Quantifier mode, const Budget &budget) {
  if (m.rows() != m.cols() || !is_power_of_two(static_cast<std::size_t>(m.rows())) ||
      m.rows() < 2) {
    throw Error(ErrorCode::DimMismatch, "operator must act on at least one qubit");
  }
  const int n = log2_exact(static_cast<std::size_t>(m.rows()));
  const auto gs = grid_set(GridSpec{n, r}, budget);
  Eigen::VectorXd u = operator_features(m);
  if (mode == Quantifier::Inf) u = -u;
  const auto hit = gs->index().max_inner(u);
  const double value = mode == Quantifier::Sup ? hit.value : -hit.value;
  return {value, Qustring::normalized(gs->states()[hit.index])};
}

Decision decide_value(double value, const DecisionThresholds &th) {
  if (value >= th.a - kPromiseGapTolerance) return Decision::Accept;
  if (value <= th.b + kPromiseGapTolerance) return Decision::Reject;
  return Decision::OutsideLegalRegion;
}

namespace {

bool better(double candidate, double incumbent, Quantifier q) {
  return q == Quantifier::Sup ? candidate > incumbent : candidate < incumbent;
}

double worst(Quantifier q) {
  return q == Quantifier::Sup ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();
}

/// Shared view of an instance during nested optimization. `assign` holds the
/// inputs plus the witnesses chosen so far.
struct Nest {
  const HierarchyInstance &inst;
  const Budget &budget;
  std::vector<std::vector<std::string>> names;  // per level, 1-based
  Assignment assign;

  Nest(const HierarchyInstance &i, const Budget &b) : inst(i), budget(b), assign(i.inputs()) {
    names.resize(static_cast<std::size_t>(i.levels()) + 1);
    for (int level = 1; level <= i.levels(); ++level)
      for (std::size_t reg : i.base().witness_registers(level))
        names[static_cast<std::size_t>(level)].push_back(i.base().registers()[reg].name);
  }

  const QuantumFunction &f() const { return inst.base(); }
  int k() const { return inst.levels(); }
  const std::vector<std::string> &level_names(int level) const {
    return names[static_cast<std::size_t>(level)];
  }

  /// True when the innermost block is one register whose acceptance
  /// probability is a quadratic form in its state.
  bool innermost_quadratic() const {
    if (k() == 0) return false;
    const auto &inner = level_names(k());
    if (inner.size() != 1) return false;
    const std::size_t reg = f().register_index(inner[0]);
    return f().is_dephased(reg) || f().layout().copies_of(reg) == 1;
  }

  AcceptanceOperator innermost_operator() {
    const std::string &name = level_names(k())[0];
    assign.erase(name);
    return acceptance_operator(f(), assign, name, budget);
  }

  void set(int level, const std::vector<Qustring> &states) {
    const auto &ns = level_names(level);
    for (std::size_t j = 0; j < ns.size(); ++j) assign.insert_or_assign(ns[j], states[j]);
  }
};

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    out *= base;
  }
  return out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

/// Nested search where every enumerated block ranges over `points`.
class Enumerator {
 public:
  Enumerator(Nest &nest, const std::vector<Qustring> &points, const GridSet *inner_index)
      : nest_(nest), points_(points), inner_index_(inner_index) {}

  /// Optimizes blocks `level`..k. The innermost block is solved by the
  /// eigen oracle when `inner_index_` is null and the block is quadratic,
  /// by the grid index when it is set, and by enumeration otherwise.
  double level_value(int level, std::vector<Qustring> *best_out, bool exact_inner) {
    const Quantifier q = nest_.inst.quantifier(level);
    if (level == nest_.k() && nest_.innermost_quadratic() && (exact_inner || inner_index_)) {
      const AcceptanceOperator op = nest_.innermost_operator();
      EigenResult res = exact_inner ? eigen_oracle(op, q, nest_.budget)
                                    : index_extreme(op.matrix, q);
      nest_.set(level, {res.witness});
      if (best_out) *best_out = {res.witness};
      return std::clamp(res.value, 0.0, 1.0);
    }
    const std::size_t m = nest_.level_names(level).size();
    std::vector<std::size_t> idx(m, 0);
    std::vector<Qustring> current(m, points_[0]);
    double best = worst(q);
    std::vector<std::size_t> best_idx;
    while (true) {
      for (std::size_t j = 0; j < m; ++j) current[j] = points_[idx[j]];
      nest_.set(level, current);
      const double v = level == nest_.k() ? evaluate(nest_.f(), nest_.assign, nest_.budget)
                                          : level_value(level + 1, nullptr, exact_inner);
      if (better(v, best, q)) {
        best = v;
        best_idx = idx;
      }
      std::size_t j = m;
      while (j > 0 && ++idx[j - 1] == points_.size()) idx[--j] = 0;
      if (j == 0) break;
    }
    if (best_out) {
      best_out->clear();
      for (std::size_t i : best_idx) best_out->push_back(points_[i]);
    }
    return best;
  }

 private:
  EigenResult index_extreme(const CMatrix &m, Quantifier q) const {
    Eigen::VectorXd u = operator_features(m);
    if (q == Quantifier::Inf) u = -u;
    const auto hit = inner_index_->index().max_inner(u);
    return {q == Quantifier::Sup ? hit.value : -hit.value, points_[hit.index]};
  }

  Nest &nest_;
  const std::vector<Qustring> &points_;
  const GridSet *inner_index_;
};

std::vector<Qustring> as_qustrings(const GridSet &gs) {
  std::vector<Qustring> out;
  out.reserve(gs.size());
  for (const auto &v : gs.states()) out.push_back(Qustring::normalized(v));
  return out;
}

void check_work(std::uint64_t work, const Budget &budget) {
  if (work > budget.grid_count) {
    throw Error(ErrorCode::BudgetExceeded,
                "nested enumeration needs " + std::to_string(work) + " points, budget is " +
                    std::to_string(budget.grid_count));
  }
}

BoundKind one_sided(const HierarchyInstance &inst) {
  return inst.quantifier(1) == Quantifier::Sup ? BoundKind::Lower : BoundKind::Upper;
}

QoptResult finish(double value, std::string method, std::optional<QTuple> witness,
                  BoundKind bound) {
  QoptResult r;
  r.value = std::clamp(value, 0.0, 1.0);
  r.method = std::move(method);
  r.witness = std::move(witness);
  r.bound = bound;
  r.certified = bound != BoundKind::Heuristic;
  return r;
}

QoptResult run_exact(const HierarchyInstance &inst, const ExactMethod &method,
                     const Budget &budget) {
  Nest nest(inst, budget);
  const std::string name = method_name(method);
  if (inst.levels() == 0) {
    return finish(evaluate(inst.base(), inst.inputs(), budget), name, std::nullopt,
                  BoundKind::Exact);
  }
  if (inst.levels() > 2) {
    throw Error(ErrorCode::NotSupported, "exact method handles at most two quantifier blocks");
  }
  if (!nest.innermost_quadratic()) {
    throw Error(ErrorCode::NotSupported,
                "exact method needs a single uncopied register in the innermost block");
  }
  std::vector<Qustring> best;
  if (inst.levels() == 1) {
    const std::vector<Qustring> none;
    Enumerator e(nest, none, nullptr);
    const double v = e.level_value(1, &best, true);
    return finish(v, name, QTuple(best), BoundKind::Exact);
  }
  const auto gs = grid_set(GridSpec{inst.witness_qubits(), method.outer_r}, budget);
  check_work(saturating_pow(gs->size(), inst.arity()), budget);
  const auto points = as_qustrings(*gs);
  Enumerator e(nest, points, nullptr);
  const double v = e.level_value(1, &best, true);
  return finish(v, name, QTuple(best), one_sided(inst));
}

QoptResult run_grid(const HierarchyInstance &inst, const GridMethod &method,
                    const Budget &budget) {
  Nest nest(inst, budget);
  const std::string name = method_name(method);
  if (inst.levels() == 0) {
    return finish(evaluate(inst.base(), inst.inputs(), budget), name, std::nullopt,
                  BoundKind::Exact);
  }
  const auto gs = grid_set(GridSpec{inst.witness_qubits(), method.r}, budget);
  const bool indexed = nest.innermost_quadratic();
  std::uint64_t work = 1;
  for (int level = 1; level <= inst.levels(); ++level) {
    if (level == inst.levels() && indexed) break;
    work = saturating_mul(work, saturating_pow(gs->size(), inst.arity()));
  }
  check_work(work, budget);
  const auto points = as_qustrings(*gs);
  Enumerator e(nest, points, indexed ? gs.get() : nullptr);
  std::vector<Qustring> best;
  const double v = e.level_value(1, &best, false);
  return finish(v, name, QTuple(best),
                inst.levels() == 1 ? one_sided(inst) : BoundKind::Heuristic);
}

class LocalSearch {
 public:
  LocalSearch(Nest &nest, const AlternatingMethod &method)
      : nest_(nest), method_(method), rng_(method.seed) {}

  double level_value(int level, std::vector<Qustring> *best_out) {
    const Quantifier q = nest_.inst.quantifier(level);
    if (level == nest_.k() && nest_.innermost_quadratic()) {
      const EigenResult res = eigen_oracle(nest_.innermost_operator(), q, nest_.budget);
      nest_.set(level, {res.witness});
      if (best_out) *best_out = {res.witness};
      return std::clamp(res.value, 0.0, 1.0);
    }
    const std::size_t m = nest_.level_names(level).size();
    const int p = nest_.inst.witness_qubits();
    double best = worst(q);
    std::vector<Qustring> best_states;
    for (int restart = 0; restart < method_.restarts; ++restart) {
      std::vector<Qustring> cur;
      for (std::size_t j = 0; j < m; ++j) cur.push_back(random_qustring(p, rng_));
      double v = inner(level, cur);
      double sigma = 0.5;
      for (int it = 0; it < method_.iters; ++it) {
        std::vector<Qustring> cand;
        for (const auto &s : cur) {
          CVector step = gaussian_vector(s.dim(), rng_);
          cand.push_back(Qustring::normalized(s.amplitudes() + sigma * step));
        }
        const double vc = inner(level, cand);
        if (better(vc, v, q)) {
          cur = std::move(cand);
          v = vc;
        } else {
          sigma = std::max(sigma * 0.8, 1e-3);
        }
      }
      if (better(v, best, q)) {
        best = v;
        best_states = cur;
      }
    }
    nest_.set(level, best_states);
    if (best_out) *best_out = best_states;
    return best;
  }

 private:
  double inner(int level, const std::vector<Qustring> &states) {
    nest_.set(level, states);
    return level == nest_.k() ? evaluate(nest_.f(), nest_.assign, nest_.budget)
                              : level_value(level + 1, nullptr);
  }

  Nest &nest_;
  AlternatingMethod method_;
  Rng rng_;
};

QoptResult run_alternating(const HierarchyInstance &inst, const AlternatingMethod &method,
                           const Budget &budget) {
  Nest nest(inst, budget);
  const std::string name = method_name(method);
  if (inst.levels() == 0) {
    return finish(evaluate(inst.base(), inst.inputs(), budget), name, std::nullopt,
                  BoundKind::Exact);
  }
  LocalSearch search(nest, method);
  std::vector<Qustring> best;
  const double v = search.level_value(1, &best);
  const bool exact_inner = nest.innermost_quadratic();
  BoundKind bound = BoundKind::Heuristic;
  if (inst.levels() == 1) {
    bound = exact_inner ? BoundKind::Exact : one_sided(inst);
  } else if (inst.levels() == 2 && exact_inner) {
    bound = one_sided(inst);
  }
  return finish(v, name, QTuple(best), bound);
}

}  // namespace

QoptResult qopt_value(const HierarchyInstance &inst, const Method &method, const Budget &budget) {
  return std::visit(
      [&](const auto &m) -> QoptResult {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ExactMethod>) return run_exact(inst, m, budget);
        else if constexpr (std::is_same_v<M, GridMethod>) return run_grid(inst, m, budget);
        else return run_alternating(inst, m, budget);
      },
      method);
}

double classical_quantifier_value(const HierarchyInstance &inst, const Budget &budget) {
  Nest nest(inst, budget);
  if (inst.levels() == 0) return evaluate(inst.base(), inst.inputs(), budget);
  const int p = inst.witness_qubits();
  if (p >= 32) throw Error(ErrorCode::BudgetExceeded, "witness registers too large");
  std::uint64_t work = 1;
  for (int level = 1; level <= inst.levels(); ++level)
    work = saturating_mul(work, saturating_pow(std::uint64_t{1} << p, inst.arity()));
  check_work(work, budget);
  std::vector<Qustring> basis;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << p); ++x) basis.push_back(Qustring::basis(p, x));
  Enumerator e(nest, basis, nullptr);
  return e.level_value(1, nullptr, false);
}

Decision decide(const HierarchyInstance &inst, const DecisionThresholds &th, const Method &method,
                const Budget &budget) {
  return decide_value(qopt_value(inst, method, budget).value, th);
}

namespace {

std::string fresh_name(const std::string &want, std::set<std::string> &taken) {
  std::string name = want;
  for (int i = 1; taken.count(name); ++i) name = want + "_" + std::to_string(i);
  taken.insert(name);
  return name;
}

}  // namespace

HierarchyInstance amplify(const HierarchyInstance &inst, int t, const Budget &budget) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "repetition count must be positive");
  if (t % 2 == 0) throw Error(ErrorCode::EvenT, "majority vote needs an odd repetition count");
  if (t > 31) throw Error(ErrorCode::BudgetExceeded, "repetition count too large");
  const QuantumFunction &f = inst.base();
  const auto &base_regs = f.registers();

  std::set<std::string> taken;
  for (const auto &r : base_regs) taken.insert(r.name);
  std::vector<Register> regs;
  std::vector<std::size_t> kept(base_regs.size(), 0);
  std::vector<std::vector<std::size_t>> blocks(base_regs.size());
  for (std::size_t i = 0; i < base_regs.size(); ++i) {
    const Register &r = base_regs[i];
    if (r.role != RegisterRole::Ancilla) {
      kept[i] = regs.size();
      regs.push_back(r);
      continue;
    }
    for (int j = 0; j < t; ++j) {
      blocks[i].push_back(regs.size());
      Register copy = r;
      copy.name = fresh_name(r.name + "#" + std::to_string(j), taken);
      regs.push_back(std::move(copy));
    }
  }
  const std::size_t maj = regs.size();
  regs.push_back(Register{fresh_name("maj", taken), RegisterRole::Ancilla, 1, 0});

  std::vector<int> poly = f.copy_polynomial();
  for (int &c : poly) c *= t;
  const RegisterLayout layout(regs, poly);
  if (layout.wire_count() > budget.qubits) {
    throw Error(ErrorCode::BudgetExceeded, "amplified circuit needs " +
                                               std::to_string(layout.wire_count()) +
                                               " wires, budget is " +
                                               std::to_string(budget.qubits));
  }

  const RegisterLayout &old = f.layout();
  auto remap = [&](int wire, int block) {
    for (std::size_t i = 0; i < base_regs.size(); ++i) {
      const int local = wire - old.offset(i);
      if (local < 0 || local >= old.physical_qubits(i)) continue;
      if (base_regs[i].role == RegisterRole::Ancilla) {
        return layout.offset(blocks[i][static_cast<std::size_t>(block)]) + local;
      }
      const int qubits = base_regs[i].qubits;
      const int copy = local / qubits;
      const int qubit = local % qubits;
      return layout.offset(kept[i]) + (block * old.copies_of(i) + copy) * qubits + qubit;
    }
    throw Error(ErrorCode::BadLayout, "wire " + std::to_string(wire) + " is outside every register");
  };

  std::vector<Gate> gate_list;
  std::vector<int> outs;
  for (int j = 0; j < t; ++j) {
    for (const Gate &g : f.gate_list()) {
      Gate ng = g;
      for (int &w : ng.targets) w = remap(w, j);
      for (int &w : ng.controls) w = remap(w, j);
      gate_list.push_back(std::move(ng));
    }
    outs.push_back(remap(f.output_wire(), j));
  }
  const int maj_wire = layout.offset(maj);
  for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << t); ++pattern) {
    if (std::popcount(pattern) <= t / 2) continue;
    std::vector<int> values;
    for (int j = 0; j < t; ++j) values.push_back(static_cast<int>((pattern >> j) & 1u));
    gate_list.push_back(gates::controlled(gates::x(maj_wire), outs, std::move(values)));
  }
  QuantumFunction nf = QuantumFunction::make(std::move(regs), std::move(gate_list), maj_wire,
                                             std::move(poly), f.dephased());
  return HierarchyInstance::make(std::move(nf), inst.levels(), inst.arity(),
                                 inst.witness_qubits(), inst.pattern(), inst.inputs());
}

HierarchyInstance complement_instance(const HierarchyInstance &inst) {
  const QuantumFunction &f = inst.base();
  std::vector<Gate> gate_list = f.gate_list();
  gate_list.push_back(gates::x(f.output_wire()));
  QuantumFunction nf = QuantumFunction::make(f.registers(), std::move(gate_list), f.output_wire(),
                                             f.copy_polynomial(), f.dephased());
  const Pattern flipped = inst.pattern() == Pattern::Sigma ? Pattern::Pi : Pattern::Sigma;
  return HierarchyInstance::make(std::move(nf), inst.levels(), inst.arity(),
                                 inst.witness_qubits(), flipped, inst.inputs());
}

HierarchyInstance transpose_prefix(const HierarchyInstance &inst) {
  if (inst.levels() != 2) {
    throw Error(ErrorCode::InvalidArgument, "prefix transpose needs exactly two blocks");
  }
  const QuantumFunction &f = inst.base();
  std::vector<Register> regs = f.registers();
  for (auto &r : regs)
    if (r.role == RegisterRole::Witness) r.level = 3 - r.level;
  QuantumFunction nf = QuantumFunction::make(std::move(regs), f.gate_list(), f.output_wire(),
                                             f.copy_polynomial(), f.dephased());
  const Pattern flipped = inst.pattern() == Pattern::Sigma ? Pattern::Pi : Pattern::Sigma;
  return HierarchyInstance::make(std::move(nf), 2, inst.arity(), inst.witness_qubits(), flipped,
                                 inst.inputs());
}

}  // namespace qph
