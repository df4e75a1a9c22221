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

#include "qph/generator.hpp"

#include <cmath>
#include <string>

#include "qph/circuit.hpp"
#include "qph/error.hpp"

namespace qph {

namespace {

constexpr double kDegenerateBranch = 1e-12;
constexpr double kSingularFloor = 1e-8;
constexpr int kMaxPrecisionBits = 60;
constexpr std::size_t kHeaderBytes = 8;
constexpr char kMagic[4] = {'Q', 'G', 'F', '1'};

/// Completes a unit first column [c1, c2] with [-conj(c2), conj(c1)].
Matrix2 complete_column(Complex c1, Complex c2) {
  Matrix2 u;
  u << c1, -std::conj(c2), c2, std::conj(c1);
  return u;
}

/// Layered prefix-controlled application of `nodes` to |0^{n+1}>.
CVector apply_layers(int n, const std::vector<Matrix2> &nodes) {
  const int wires = n + 1;
  const std::size_t dim = std::size_t{1} << wires;
  CVector state = CVector::Zero(static_cast<Eigen::Index>(dim));
  state[0] = 1.0;
  for (int k = 0; k <= n; ++k) {
    const std::size_t bit = std::size_t{1} << (wires - 1 - k);
    const std::size_t layer_base = (std::size_t{1} << k) - 1;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const std::size_t prefix = i >> (wires - k);
      const Matrix2 &u = nodes[layer_base + prefix];
      const Complex a = state[static_cast<Eigen::Index>(i)];
      const Complex b = state[static_cast<Eigen::Index>(i | bit)];
      state[static_cast<Eigen::Index>(i)] = u(0, 0) * a + u(0, 1) * b;
      state[static_cast<Eigen::Index>(i | bit)] = u(1, 0) * a + u(1, 1) * b;
    }
  }
  return state;
}

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t> &out) : out_(out) {}

  void put(std::uint64_t value, int bits) {
    for (int b = bits - 1; b >= 0; --b) {
      if (used_ == 0) out_.push_back(0);
      if ((value >> b) & 1u) out_.back() |= static_cast<std::uint8_t>(0x80u >> used_);
      used_ = (used_ + 1) % 8;
    }
  }

 private:
  std::vector<std::uint8_t> &out_;
  int used_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint64_t get(int bits) {
    std::uint64_t value = 0;
    for (int b = 0; b < bits; ++b) {
      const std::uint8_t byte = in_[pos_ / 8];
      value = (value << 1) | ((byte >> (7 - pos_ % 8)) & 1u);
      ++pos_;
    }
    return value;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t node_count(int n) { return (std::size_t{1} << (n + 1)) - 1; }

std::size_t node_index(std::string_view label) {
  std::size_t value = 0;
  for (char c : label) {
    if (c != '0' && c != '1') throw Error(ErrorCode::InvalidArgument, "node label must be binary");
    value = value * 2 + static_cast<std::size_t>(c - '0');
  }
  return ((std::size_t{1} << label.size()) - 1) + value;
}

std::string node_label(std::size_t index) {
  std::size_t length = 0;
  while (((std::size_t{1} << (length + 1)) - 1) <= index) ++length;
  const std::size_t value = index - ((std::size_t{1} << length) - 1);
  std::string label(length, '0');
  for (std::size_t i = 0; i < length; ++i)
    if ((value >> (length - 1 - i)) & 1u) label[i] = '1';
  return label;
}

Generator Generator::make(int n, std::vector<Matrix2> nodes) {
  if (n < 0 || n > 24) throw Error(ErrorCode::InvalidArgument, "generator depth out of range");
  if (nodes.size() != node_count(n)) {
    throw Error(ErrorCode::InvalidArgument, "generator needs " + std::to_string(node_count(n)) +
                                                " nodes, got " + std::to_string(nodes.size()));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!is_unitary(nodes[i], 1e-10)) {
      throw Error(ErrorCode::InvalidArgument, "node '" + node_label(i) + "' is not unitary");
    }
  }
  return Generator(n, std::move(nodes));
}

Matrix2 Fragment::node_matrix(std::size_t index) const {
  const double scale = std::ldexp(1.0, -t_);
  Matrix2 m;
  const FixedNode &node = nodes_[index];
  for (int e = 0; e < 4; ++e) {
    m(e / 2, e % 2) = Complex(static_cast<double>(node[e].re) * scale,
                              static_cast<double>(node[e].im) * scale);
  }
  return m;
}

Fragment Fragment::make(int n, int precision_bits, std::vector<FixedNode> nodes,
                        std::optional<double> epsilon) {
  if (n < 0 || n > 24) throw Error(ErrorCode::InvalidArgument, "fragment depth out of range");
  if (precision_bits < 1 || precision_bits > kMaxPrecisionBits) {
    throw Error(ErrorCode::InvalidArgument, "precision bits out of range");
  }
  if (nodes.size() != node_count(n)) {
    throw Error(ErrorCode::InvalidArgument, "fragment needs " + std::to_string(node_count(n)) +
                                                " nodes, got " + std::to_string(nodes.size()));
  }
  const std::int64_t limit = (std::int64_t{1} << (precision_bits + 1)) - 1;
  const double scale = std::ldexp(1.0, -precision_bits);
  const double magnitude_cap = 1.0 + std::ldexp(1.0, 1 - precision_bits);
  for (const auto &node : nodes) {
    for (const auto &e : node) {
      if (std::abs(e.re) > limit || std::abs(e.im) > limit) {
        throw Error(ErrorCode::InvalidArgument, "fragment entry exceeds t+1 magnitude bits");
      }
      const double mag = std::hypot(static_cast<double>(e.re) * scale,
                                    static_cast<double>(e.im) * scale);
      if (mag > magnitude_cap) {
        throw Error(ErrorCode::InvalidArgument, "fragment entry magnitude exceeds 1 + 2^(1-t)");
      }
    }
  }
  return Fragment(n, precision_bits, std::move(nodes), epsilon);
}

int precision_bits_for(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  int t = 1;
  while (std::ldexp(1.0, -t) > eps) {
    if (++t > kMaxPrecisionBits) {
      throw Error(ErrorCode::InvalidArgument, "eps needs more than 60 fraction bits");
    }
  }
  return t;
}

Generator decompose(const Qustring &state) {
  const int n = state.size() - 1;
  // weights[L][v]: squared norm of the amplitudes whose first L bits spell v.
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(n + 2));
  weights[static_cast<std::size_t>(n + 1)].resize(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i)
    weights[static_cast<std::size_t>(n + 1)][i] = std::norm(state[i]);
  for (int level = n; level >= 0; --level) {
    auto &w = weights[static_cast<std::size_t>(level)];
    const auto &below = weights[static_cast<std::size_t>(level + 1)];
    w.resize(std::size_t{1} << level);
    for (std::size_t v = 0; v < w.size(); ++v) w[v] = below[2 * v] + below[2 * v + 1];
  }

  std::vector<Matrix2> nodes(node_count(n));
  for (int level = 0; level <= n; ++level) {
    const auto &below = weights[static_cast<std::size_t>(level + 1)];
    for (std::size_t v = 0; v < (std::size_t{1} << level); ++v) {
      Matrix2 &u = nodes[((std::size_t{1} << level) - 1) + v];
      const double g = std::sqrt(below[2 * v] + below[2 * v + 1]);
      if (g < kDegenerateBranch) {
        u = Matrix2::Identity();
        continue;
      }
      Complex c1, c2;
      if (level < n) {
        c1 = std::sqrt(below[2 * v]);
        c2 = std::sqrt(below[2 * v + 1]);
      } else {
        c1 = state[2 * v];
        c2 = state[2 * v + 1];
      }
      const double norm = std::sqrt(std::norm(c1) + std::norm(c2));
      u = complete_column(c1 / norm, c2 / norm);
    }
  }
  return Generator::make(n, std::move(nodes));
}

Qustring recompose(const Generator &generator) {
  return Qustring::normalized(apply_layers(generator.n(), generator.nodes()));
}

Fragment quantize(const Generator &generator, double eps) {
  const int t = precision_bits_for(eps);
  const double scale = std::ldexp(1.0, t);
  std::vector<FixedNode> nodes;
  nodes.reserve(generator.nodes().size());
  for (const Matrix2 &u : generator.nodes()) {
    FixedNode node;
    for (int e = 0; e < 4; ++e) {
      const Complex v = u(e / 2, e % 2);
      node[e].re = static_cast<std::int64_t>(std::trunc(v.real() * scale));
      node[e].im = static_cast<std::int64_t>(std::trunc(v.imag() * scale));
    }
    nodes.push_back(node);
  }
  return Fragment::make(generator.n(), t, std::move(nodes), eps);
}

std::size_t encoded_size(int n, int precision_bits) {
  const std::size_t bits = node_count(n) * 8 * static_cast<std::size_t>(precision_bits + 2);
  return kHeaderBytes + (bits + 7) / 8;
}

std::vector<std::uint8_t> encode(const Fragment &fragment) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  const auto n = static_cast<std::uint16_t>(fragment.n());
  const auto t = static_cast<std::uint16_t>(fragment.precision_bits());
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n & 0xff));
  out.push_back(static_cast<std::uint8_t>(t >> 8));
  out.push_back(static_cast<std::uint8_t>(t & 0xff));
  BitWriter writer(out);
  const int magnitude_bits = fragment.precision_bits() + 1;
  auto put_component = [&](std::int64_t v) {
    writer.put(v < 0 ? 1u : 0u, 1);
    writer.put(static_cast<std::uint64_t>(v < 0 ? -v : v), magnitude_bits);
  };
  for (const auto &node : fragment.nodes()) {
    for (const auto &e : node) {
      put_component(e.re);
      put_component(e.im);
    }
  }
  return out;
}

Fragment decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorCode::LengthMismatch, "fragment shorter than its header");
  }
  for (int i = 0; i < 4; ++i) {
    if (bytes[static_cast<std::size_t>(i)] != static_cast<std::uint8_t>(kMagic[i])) {
      throw Error(ErrorCode::MalformedHeader, "bad magic");
    }
  }
  const int n = (bytes[4] << 8) | bytes[5];
  const int t = (bytes[6] << 8) | bytes[7];
  if (n > 24 || t < 1 || t > kMaxPrecisionBits) {
    throw Error(ErrorCode::MalformedHeader,
                "unsupported n=" + std::to_string(n) + " t=" + std::to_string(t));
  }
  if (bytes.size() != encoded_size(n, t)) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(encoded_size(n, t)) +
                                               " bytes, got " + std::to_string(bytes.size()));
  }
  BitReader reader(bytes.subspan(kHeaderBytes));
  auto get_component = [&]() {
    const bool negative = reader.get(1) != 0;
    const auto mag = static_cast<std::int64_t>(reader.get(t + 1));
    return negative ? -mag : mag;
  };
  std::vector<FixedNode> nodes(node_count(n));
  for (auto &node : nodes) {
    for (auto &e : node) {
      e.re = get_component();
      e.im = get_component();
    }
  }
  return Fragment::make(n, t, std::move(nodes));
}

Fragment decode(std::span<const std::uint8_t> bytes, int n, int precision_bits) {
  if (bytes.size() >= kHeaderBytes) {
    const int hn = (bytes[4] << 8) | bytes[5];
    const int ht = (bytes[6] << 8) | bytes[7];
    if (hn != n || ht != precision_bits) {
      throw Error(ErrorCode::MalformedHeader, "header announces n=" + std::to_string(hn) +
                                                  " t=" + std::to_string(ht));
    }
  }
  return decode(bytes);
}

Matrix2 nearest_unitary(const Matrix2 &m) {
  Eigen::JacobiSVD<Matrix2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < kSingularFloor) {
    throw Error(ErrorCode::NonInvertibleNode, "node is singular, smallest singular value " +
                                                  std::to_string(svd.singularValues().minCoeff()));
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

double operator_norm(const Matrix2 &m) {
  Eigen::JacobiSVD<Matrix2> svd(m);
  return svd.singularValues()[0];
}

DensityMatrix reconstruct(const Fragment &fragment) {
  std::vector<Matrix2> gates(fragment.nodes().size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    try {
      gates[i] = nearest_unitary(fragment.node_matrix(i));
    } catch (const Error &) {
      throw Error(ErrorCode::NonInvertibleNode,
                  "node '" + node_label(i) + "' cannot be projected to a unitary");
    }
  }
  return DensityMatrix::pure(Qustring::normalized(apply_layers(fragment.n(), gates)));
}

}  // namespace qph
