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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qph {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Resource caps shared by every module. 2^20 complex doubles is ~16 MB.
struct Budget {
  int qubits = 20;
  std::uint64_t grid_count = std::uint64_t{1} << 24;
  std::size_t matrix_dim = std::size_t{1} << 10;
};

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kInputTolerance = 1e-9;

/// A unit-norm vector of 2^n complex amplitudes. Qubit 0 is the most
/// significant bit of the amplitude index.
class Qustring {
 public:
  /// Validates and renormalizes. Throws NotPowerOfTwo or NormOutOfTolerance.
  static Qustring make(CVector amplitudes);

  /// Rescales any vector with nonzero norm; used for grid points and
  /// simulator outputs that are unit-norm only up to rounding.
  static Qustring normalized(CVector amplitudes);

  static Qustring basis(int size_n, std::uint64_t index);

  int size() const { return size_n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector &amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

 private:
  Qustring(int size_n, CVector amplitudes)
      : size_n_(size_n), amplitudes_(std::move(amplitudes)) {}

  int size_n_;
  CVector amplitudes_;
};

/// An ordered m-tuple of qustrings, m >= 1.
class QTuple {
 public:
  QTuple() = default;
  explicit QTuple(std::vector<Qustring> parts) : parts_(std::move(parts)) {}

  const std::vector<Qustring> &parts() const { return parts_; }
  std::size_t arity() const { return parts_.size(); }
  /// Sum of part sizes.
  int total_size() const;
  /// Tensor product of the parts, left to right.
  Qustring flatten(const Budget &budget = {}) const;

 private:
  std::vector<Qustring> parts_;
};

class DensityMatrix {
 public:
  /// Checks Hermiticity and unit trace within 1e-12 and eigenvalues >= -1e-10.
  static DensityMatrix make(CMatrix entries);
  static DensityMatrix pure(const Qustring &state);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix &entries() const { return entries_; }

 private:
  explicit DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {}

  CMatrix entries_;
};

bool is_power_of_two(std::size_t value);
/// log2 of a power of two.
int log2_exact(std::size_t value);

Qustring tensor(const Qustring &a, const Qustring &b, const Budget &budget = {});

/// k-fold tensor power of the flattened tuple. Throws SizeOverflow when
/// k * total_size exceeds budget.qubits.
Qustring copies(const QTuple &tuple, int k, const Budget &budget = {});
Qustring copies(const Qustring &state, int k, const Budget &budget = {});

/// Sum of singular values of (rho - sigma).
double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Trace distance between the projectors of two pure states, computed from
/// the component of b orthogonal to a so that it stays accurate near zero.
double projector_distance(const Qustring &a, const Qustring &b);

/// |<a|b>|^2.
double fidelity(const Qustring &a, const Qustring &b);

/// Reduced state on the registers listed in `keep` (ascending, no repeats).
/// `layout` gives the dimension of each register, leftmost first.
DensityMatrix partial_trace(const DensityMatrix &rho,
                            std::span<const std::size_t> layout,
                            std::span<const std::size_t> keep);

}  // namespace qph
