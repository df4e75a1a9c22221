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

#include "qph/state.hpp"

#include <cmath>
#include <string>

#include "qph/error.hpp"

namespace qph {

bool is_power_of_two(std::size_t value) {
  return value != 0 && (value & (value - 1)) == 0;
}

int log2_exact(std::size_t value) {
  int n = 0;
  while ((std::size_t{1} << n) < value) ++n;
  return n;
}

Qustring Qustring::make(CVector amplitudes) {
  const auto dim = static_cast<std::size_t>(amplitudes.size());
  if (dim < 2 || !is_power_of_two(dim)) {
    throw Error(ErrorCode::NotPowerOfTwo,
                "amplitude vector of length " + std::to_string(dim));
  }
  const double norm = amplitudes.norm();
  if (!(std::abs(norm - 1.0) <= kInputTolerance)) {
    throw Error(ErrorCode::NormOutOfTolerance,
                "norm deviates from 1 by " + std::to_string(norm - 1.0));
  }
  amplitudes /= norm;
  return Qustring(log2_exact(dim), std::move(amplitudes));
}

Qustring Qustring::normalized(CVector amplitudes) {
  const auto dim = static_cast<std::size_t>(amplitudes.size());
  if (dim < 2 || !is_power_of_two(dim)) {
    throw Error(ErrorCode::NotPowerOfTwo,
                "amplitude vector of length " + std::to_string(dim));
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::NormOutOfTolerance, "cannot normalize a zero vector");
  }
  amplitudes /= norm;
  return Qustring(log2_exact(dim), std::move(amplitudes));
}

Qustring Qustring::basis(int size_n, std::uint64_t index) {
  const std::size_t dim = std::size_t{1} << size_n;
  if (size_n < 1 || index >= dim) {
    throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  }
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return Qustring(size_n, std::move(v));
}

int QTuple::total_size() const {
  int total = 0;
  for (const auto &p : parts_) total += p.size();
  return total;
}

Qustring QTuple::flatten(const Budget &budget) const {
  if (parts_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty tuple");
  }
  Qustring acc = parts_.front();
  for (std::size_t i = 1; i < parts_.size(); ++i) acc = tensor(acc, parts_[i], budget);
  return acc;
}

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kEigenFloor = -1e-10;

}  // namespace

DensityMatrix DensityMatrix::make(CMatrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw Error(ErrorCode::DimMismatch, "density matrix must be square");
  }
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw Error(ErrorCode::InvalidArgument, "density matrix is not Hermitian");
  }
  if (std::abs(entries.trace() - Complex(1.0)) > kHermitianTolerance) {
    throw Error(ErrorCode::InvalidArgument, "density matrix trace is not 1");
  }
  // Symmetrize away the sub-tolerance skew before the spectral check.
  CMatrix herm = (entries + entries.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenFloor) {
    throw Error(ErrorCode::InvalidArgument, "density matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(herm));
}

DensityMatrix DensityMatrix::pure(const Qustring &state) {
  const CVector &v = state.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

Qustring tensor(const Qustring &a, const Qustring &b, const Budget &budget) {
  const int size = a.size() + b.size();
  if (size > budget.qubits) {
    throw Error(ErrorCode::SizeOverflow, "tensor product of " + std::to_string(size) +
                                             " qubits exceeds budget of " +
                                             std::to_string(budget.qubits));
  }
  const Eigen::Index db = b.amplitudes().size();
  CVector out(a.amplitudes().size() * db);
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    out.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
  }
  return Qustring::normalized(std::move(out));
}

Qustring copies(const QTuple &tuple, int k, const Budget &budget) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "copy count must be positive");
  const long long total = static_cast<long long>(k) * tuple.total_size();
  if (total > budget.qubits) {
    throw Error(ErrorCode::SizeOverflow, std::to_string(k) + " copies of " +
                                             std::to_string(tuple.total_size()) +
                                             " qubits exceed budget of " +
                                             std::to_string(budget.qubits));
  }
  const Qustring one = tuple.flatten(budget);
  Qustring acc = one;
  for (int i = 1; i < k; ++i) acc = tensor(acc, one, budget);
  return acc;
}

Qustring copies(const Qustring &state, int k, const Budget &budget) {
  return copies(QTuple({state}), k, budget);
}

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorCode::DimMismatch, "trace distance of " + std::to_string(rho.dim()) +
                                            " and " + std::to_string(sigma.dim()));
  }
  const CMatrix diff = rho.entries() - sigma.entries();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(diff, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double projector_distance(const Qustring &a, const Qustring &b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "projector distance of unequal dimensions");
  }
  const Complex overlap = a.amplitudes().dot(b.amplitudes());
  const double orth = (b.amplitudes() - overlap * a.amplitudes()).norm();
  return 2.0 * orth;
}

double fidelity(const Qustring &a, const Qustring &b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "fidelity of unequal dimensions");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> layout,
                            std::span<const std::size_t> keep) {
  std::size_t total = 1;
  for (std::size_t d : layout) {
    if (d == 0) throw Error(ErrorCode::BadLayout, "register of dimension 0");
    total *= d;
  }
  if (layout.empty() || total != rho.dim()) {
    throw Error(ErrorCode::BadLayout, "layout dimensions multiply to " +
                                          std::to_string(total) + ", state has " +
                                          std::to_string(rho.dim()));
  }
  std::vector<bool> kept(layout.size(), false);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= layout.size() || (i > 0 && keep[i] <= keep[i - 1])) {
      throw Error(ErrorCode::BadLayout, "kept registers must be ascending and in range");
    }
    kept[keep[i]] = true;
  }
  if (keep.empty()) throw Error(ErrorCode::BadLayout, "nothing to keep");

  // Split every full index into (kept index, traced index) in mixed radix.
  std::size_t kept_dim = 1;
  for (std::size_t r = 0; r < layout.size(); ++r)
    if (kept[r]) kept_dim *= layout[r];
  std::vector<std::size_t> kept_of(total), traced_of(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx, k = 0, t = 0, kmul = 1, tmul = 1;
    for (std::size_t r = layout.size(); r-- > 0;) {
      const std::size_t digit = rest % layout[r];
      rest /= layout[r];
      if (kept[r]) {
        k += digit * kmul;
        kmul *= layout[r];
      } else {
        t += digit * tmul;
        tmul *= layout[r];
      }
    }
    kept_of[idx] = k;
    traced_of[idx] = t;
  }
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(kept_dim),
                              static_cast<Eigen::Index>(kept_dim));
  const CMatrix &m = rho.entries();
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (traced_of[i] != traced_of[j]) continue;
      out(static_cast<Eigen::Index>(kept_of[i]), static_cast<Eigen::Index>(kept_of[j])) +=
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return DensityMatrix::make(std::move(out));
}

}  // namespace qph
