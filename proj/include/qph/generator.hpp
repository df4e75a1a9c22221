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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qph/state.hpp"

namespace qph {

using Matrix2 = Eigen::Matrix2cd;

/// Nodes are keyed by binary strings of length <= n, stored in
/// length-then-lexicographic order: "", "0", "1", "00", "01", ...
std::size_t node_count(int n);
std::size_t node_index(std::string_view label);
std::string node_label(std::size_t index);

/// Tree of 2x2 unitaries whose layered, prefix-controlled application to
/// |0^{n+1}> prepares a state of n+1 qubits.
class Generator {
 public:
  static Generator make(int n, std::vector<Matrix2> nodes);

  int n() const { return n_; }
  const std::vector<Matrix2> &nodes() const { return nodes_; }
  const Matrix2 &node(std::string_view label) const { return nodes_[node_index(label)]; }

 private:
  Generator(int n, std::vector<Matrix2> nodes) : n_(n), nodes_(std::move(nodes)) {}

  int n_;
  std::vector<Matrix2> nodes_;
};

/// Signed fixed-point complex number with `t` fractional bits:
/// value = (re + i im) / 2^t.
struct FixedComplex {
  std::int64_t re = 0;
  std::int64_t im = 0;

  friend bool operator==(const FixedComplex &, const FixedComplex &) = default;
};

/// Row-major entries u00, u01, u10, u11.
using FixedNode = std::array<FixedComplex, 4>;

/// A generator whose entries were truncated toward zero to `precision_bits`
/// fractional bits. Each real component occupies one sign bit, one integer
/// bit and t fraction bits.
class Fragment {
 public:
  static Fragment make(int n, int precision_bits, std::vector<FixedNode> nodes,
                       std::optional<double> epsilon = std::nullopt);

  int n() const { return n_; }
  int precision_bits() const { return t_; }
  const std::vector<FixedNode> &nodes() const { return nodes_; }
  /// Set when produced by quantize; not part of the wire format.
  std::optional<double> epsilon() const { return epsilon_; }
  Matrix2 node_matrix(std::size_t index) const;

  friend bool operator==(const Fragment &a, const Fragment &b) {
    return a.n_ == b.n_ && a.t_ == b.t_ && a.nodes_ == b.nodes_;
  }

 private:
  Fragment(int n, int t, std::vector<FixedNode> nodes, std::optional<double> epsilon)
      : n_(n), t_(t), nodes_(std::move(nodes)), epsilon_(epsilon) {}

  int n_;
  int t_;
  std::vector<FixedNode> nodes_;
  std::optional<double> epsilon_;
};

/// Smallest t with 2^-t <= eps, i.e. ceil(log2(1/eps)).
int precision_bits_for(double eps);

Generator decompose(const Qustring &state);
Qustring recompose(const Generator &generator);
Fragment quantize(const Generator &generator, double eps);

/// Header "QGF1" + n (u16) + t (u16), big-endian, then every node's four
/// entries as (re, im) pairs of t+2 bits each, packed MSB-first and padded
/// with zero bits to a whole byte.
std::vector<std::uint8_t> encode(const Fragment &fragment);
Fragment decode(std::span<const std::uint8_t> bytes);
/// As above, additionally requiring the header to announce (n, t).
Fragment decode(std::span<const std::uint8_t> bytes, int n, int precision_bits);
std::size_t encoded_size(int n, int precision_bits);

/// Applies the fragment nodes, each projected to its nearest unitary, to
/// |0^{n+1}>. Throws NonInvertibleNode if a node's smallest singular value is
/// below 1e-8.
DensityMatrix reconstruct(const Fragment &fragment);

/// Unitary factor of the polar decomposition.
Matrix2 nearest_unitary(const Matrix2 &m);
/// Largest singular value.
double operator_norm(const Matrix2 &m);

}  // namespace qph
