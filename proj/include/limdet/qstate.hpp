// Copyright 2026 The limdet Authors
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

// Dense N-qubit pure states, density matrices and local operators.
//
// Index convention: qubit 0 is the most significant bit of a basis index, so
// |q0 q1 ... q_{n-1}> has index sum_q q_i * 2^(n-1-i).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "limdet/errors.hpp"

namespace limdet {

inline constexpr int kDefaultMaxQubits = 16;

/// Projection weights below this are treated as exact orthogonality.
inline constexpr double kZeroWeight = 1e-14;

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

inline std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

/// Returns n if size == 2^n for n >= 1, otherwise -1.
inline int qubits_for_dim(std::size_t size) {
  if (size < 2 || (size & (size - 1)) != 0) return -1;
  int n = 0;
  while ((std::size_t{1} << n) < size) ++n;
  return n;
}

/// Splits the basis index space of an n-qubit register into the bits owned by
/// an ordered target list and the remaining bits. Offsets are precomputed so a
/// full index is target_offset(local) + rest_offset(rest).
class QubitSplit {
 public:
  QubitSplit(std::span<const int> targets, int n_qubits) : n_(n_qubits) {
    std::vector<bool> used(static_cast<std::size_t>(n_qubits), false);
    for (int t : targets) {
      if (t < 0 || t >= n_qubits) {
        throw InvalidIndexError("qubit index " + std::to_string(t) + " out of range for " +
                                std::to_string(n_qubits) + " qubits");
      }
      if (used[static_cast<std::size_t>(t)]) {
        throw InvalidIndexError("qubit index " + std::to_string(t) + " repeated");
      }
      used[static_cast<std::size_t>(t)] = true;
    }
    std::vector<int> rest;
    for (int q = 0; q < n_qubits; ++q) {
      if (!used[static_cast<std::size_t>(q)]) rest.push_back(q);
    }
    target_offsets_ = offsets(targets);
    rest_offsets_ = offsets(rest);
  }

  std::size_t local_dim() const { return target_offsets_.size(); }
  std::size_t rest_dim() const { return rest_offsets_.size(); }
  std::size_t target_offset(std::size_t local) const { return target_offsets_[local]; }
  std::size_t rest_offset(std::size_t rest) const { return rest_offsets_[rest]; }

 private:
  std::vector<std::size_t> offsets(std::span<const int> qubits) const {
    const std::size_t m = qubits.size();
    std::vector<std::size_t> out(std::size_t{1} << m, 0);
    for (std::size_t local = 0; local < out.size(); ++local) {
      std::size_t full = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if ((local >> (m - 1 - j)) & 1U) full |= std::size_t{1} << (n_ - 1 - qubits[j]);
      }
      out[local] = full;
    }
    return out;
  }

  int n_;
  std::vector<std::size_t> target_offsets_;
  std::vector<std::size_t> rest_offsets_;
};

template <typename Real>
Real max_abs(const CMatrix<Real>& m) {
  return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Computes (op ⊗ I_rest) * m, where op acts on `targets` of an n-qubit register.
template <typename Real>
CMatrix<Real> apply_left(const CMatrix<Real>& op, std::span<const int> targets, int n_qubits,
                         const CMatrix<Real>& m) {
  const detail::QubitSplit split(targets, n_qubits);
  const auto local = static_cast<Eigen::Index>(split.local_dim());
  if (op.rows() != local || op.cols() != local) throw DimensionError("operator size does not match targets");
  if (static_cast<std::size_t>(m.rows()) != detail::dim_of(n_qubits)) {
    throw DimensionError("matrix row count does not match register size");
  }
  CMatrix<Real> out(m.rows(), m.cols());
  CVector<Real> gathered(local);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
      const std::size_t base = split.rest_offset(r);
      for (Eigen::Index s = 0; s < local; ++s) {
        gathered(s) = m(static_cast<Eigen::Index>(base + split.target_offset(static_cast<std::size_t>(s))), c);
      }
      const CVector<Real> mapped = op * gathered;
      for (Eigen::Index s = 0; s < local; ++s) {
        out(static_cast<Eigen::Index>(base + split.target_offset(static_cast<std::size_t>(s))), c) = mapped(s);
      }
    }
  }
  return out;
}

/// Computes m * (op ⊗ I_rest).
template <typename Real>
CMatrix<Real> apply_right(const CMatrix<Real>& m, const CMatrix<Real>& op, std::span<const int> targets,
                          int n_qubits) {
  return apply_left<Real>(op.transpose(), targets, n_qubits, m.transpose()).transpose();
}

/// Expands an operator on `targets` to the full 2^n × 2^n matrix.
template <typename Real>
CMatrix<Real> embed(const CMatrix<Real>& op, std::span<const int> targets, int n_qubits) {
  const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
  return apply_left<Real>(op, targets, n_qubits, CMatrix<Real>::Identity(d, d));
}

/// Normalized N-qubit state vector.
template <typename Real>
class BasicPureState {
 public:
  using Vector = CVector<Real>;

  explicit BasicPureState(Vector amplitudes, int max_qubits = kDefaultMaxQubits)
      : n_(detail::qubits_for_dim(static_cast<std::size_t>(amplitudes.size()))), amps_(std::move(amplitudes)) {
    if (n_ < 1) throw DimensionError("amplitude vector length must be 2^n with n >= 1");
    if (n_ > max_qubits) {
      throw CapacityError(std::to_string(n_) + " qubits exceeds the cap of " + std::to_string(max_qubits));
    }
    const Real norm = amps_.norm();
    if (!(norm > Real(0))) throw InvalidArgument("pure state has zero norm");
    amps_ /= norm;
  }

  /// Computational basis state |bits> with qubit 0 first.
  static BasicPureState basis(std::span<const int> bits, int max_qubits = kDefaultMaxQubits) {
    const int n = static_cast<int>(bits.size());
    if (n > max_qubits) throw CapacityError("basis state exceeds the qubit cap");
    std::size_t index = 0;
    for (int b : bits) index = (index << 1) | (b != 0 ? 1U : 0U);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(detail::dim_of(n)));
    v(static_cast<Eigen::Index>(index)) = Real(1);
    return BasicPureState(std::move(v), max_qubits);
  }

  int n_qubits() const { return n_; }
  const Vector& amplitudes() const { return amps_; }
  Complex<Real> operator[](Eigen::Index i) const { return amps_(i); }

  CMatrix<Real> projector() const { return amps_ * amps_.adjoint(); }

 private:
  int n_;
  Vector amps_;
};

/// Hermitian, unit-trace operator on N qubits.
template <typename Real>
class BasicDensityMatrix {
 public:
  using Matrix = CMatrix<Real>;

  /// Takes a Hermitian positive operator and rescales it to unit trace.
  explicit BasicDensityMatrix(Matrix m) : n_(detail::qubits_for_dim(static_cast<std::size_t>(m.rows()))) {
    if (n_ < 1 || m.rows() != m.cols()) throw DimensionError("density matrix must be 2^n x 2^n with n >= 1");
    const Real tr = m.trace().real();
    if (!(tr > Real(0))) throw InvalidArgument("density matrix must have positive trace");
    m /= tr;
    if (detail::max_abs<Real>(m - m.adjoint()) > Real(1e-12)) {
      throw InvalidArgument("density matrix is not Hermitian");
    }
    matrix_ = (m + m.adjoint()) / Real(2);
  }

  explicit BasicDensityMatrix(const BasicPureState<Real>& psi) : BasicDensityMatrix(psi.projector()) {}

  static BasicDensityMatrix maximally_mixed(int n_qubits) {
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
    return BasicDensityMatrix(Matrix::Identity(d, d));
  }

  int n_qubits() const { return n_; }
  const Matrix& matrix() const { return matrix_; }
  Complex<Real> operator()(Eigen::Index r, Eigen::Index c) const { return matrix_(r, c); }

  Real min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  /// <phi|rho|phi> for a pure state on the same register.
  Real overlap(const BasicPureState<Real>& phi) const {
    if (phi.n_qubits() != n_) throw DimensionError("overlap: qubit counts differ");
    return (phi.amplitudes().adjoint() * matrix_ * phi.amplitudes())(0, 0).real();
  }

 private:
  int n_;
  Matrix matrix_;
};

/// An operator acting on an ordered list of qubits of a larger register.
template <typename Real>
struct LocalOperator {
  std::vector<int> targets;
  CMatrix<Real> matrix;
};

/// POVM element 0 <= E <= I on an ordered list of target qubits.
template <typename Real>
class BasicEffect {
 public:
  BasicEffect(std::vector<int> targets, CMatrix<Real> m) : targets_(std::move(targets)), matrix_(std::move(m)) {
    const auto d = static_cast<Eigen::Index>(detail::dim_of(static_cast<int>(targets_.size())));
    if (targets_.empty() || matrix_.rows() != d || matrix_.cols() != d) {
      throw DimensionError("effect matrix size does not match its target list");
    }
    if (detail::max_abs<Real>(matrix_ - matrix_.adjoint()) > Real(1e-10)) {
      throw InvalidArgument("effect is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(matrix_);
    const auto& ev = solver.eigenvalues();
    if (ev.minCoeff() < Real(-1e-10) || ev.maxCoeff() > Real(1) + Real(1e-10)) {
      throw InvalidArgument("effect eigenvalues must lie in [0, 1]");
    }
    const auto clamped = ev.cwiseMax(Real(0)).cwiseSqrt();
    sqrt_ = solver.eigenvectors() * clamped.asDiagonal() * solver.eigenvectors().adjoint();
  }

  const std::vector<int>& targets() const { return targets_; }
  const CMatrix<Real>& matrix() const { return matrix_; }
  const CMatrix<Real>& sqrt() const { return sqrt_; }
  LocalOperator<Real> as_operator() const { return {targets_, matrix_}; }

 private:
  std::vector<int> targets_;
  CMatrix<Real> matrix_;
  CMatrix<Real> sqrt_;
};

/// Kronecker product of two dense matrices, a's factor most significant.
template <typename Real>
CMatrix<Real> kron(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

using PureState = BasicPureState<double>;
using DensityMatrix = BasicDensityMatrix<double>;
using Effect = BasicEffect<double>;
using Operator = LocalOperator<double>;

/// Kronecker product, a's qubits first.
template <typename Real>
BasicPureState<Real> tensor(const BasicPureState<Real>& a, const BasicPureState<Real>& b,
                            int max_qubits = kDefaultMaxQubits) {
  if (a.n_qubits() + b.n_qubits() > max_qubits) {
    throw CapacityError(std::to_string(a.n_qubits() + b.n_qubits()) + " qubits exceeds the cap of " +
                        std::to_string(max_qubits));
  }
  CVector<Real> v(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a[i] * b.amplitudes();
  }
  return BasicPureState<Real>(std::move(v), max_qubits);
}

template <typename Real>
BasicDensityMatrix<Real> tensor(const BasicDensityMatrix<Real>& a, const BasicDensityMatrix<Real>& b,
                                int max_qubits = kDefaultMaxQubits) {
  if (a.n_qubits() + b.n_qubits() > max_qubits) throw CapacityError("tensor product exceeds the qubit cap");
  return BasicDensityMatrix<Real>(kron<Real>(a.matrix(), b.matrix()));
}

/// Traces out `traced` (a nonempty proper subset of the register).
template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, std::span<const int> traced) {
  const int n = rho.n_qubits();
  if (traced.empty()) throw InvalidIndexError("partial trace needs at least one qubit to trace");
  if (static_cast<int>(traced.size()) >= n) throw InvalidIndexError("cannot trace out every qubit");
  const detail::QubitSplit split(traced, n);
  const auto keep_dim = static_cast<Eigen::Index>(split.rest_dim());
  CMatrix<Real> out = CMatrix<Real>::Zero(keep_dim, keep_dim);
  const auto& m = rho.matrix();
  for (Eigen::Index j = 0; j < keep_dim; ++j) {
    const std::size_t cj = split.rest_offset(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < keep_dim; ++i) {
      const std::size_t ri = split.rest_offset(static_cast<std::size_t>(i));
      Complex<Real> acc(0);
      for (std::size_t t = 0; t < split.local_dim(); ++t) {
        const std::size_t off = split.target_offset(t);
        acc += m(static_cast<Eigen::Index>(ri + off), static_cast<Eigen::Index>(cj + off));
      }
      out(i, j) = acc;
    }
  }
  return BasicDensityMatrix<Real>(std::move(out));
}

/// Tr(rho * (op ⊗ I)). Throws if op is not Hermitian or the imaginary residue exceeds 1e-10.
template <typename Real>
Real expectation(const BasicDensityMatrix<Real>& rho, const LocalOperator<Real>& op) {
  if (detail::max_abs<Real>(op.matrix - op.matrix.adjoint()) > Real(1e-10)) {
    throw InvalidArgument("observable is not Hermitian");
  }
  const detail::QubitSplit split(op.targets, rho.n_qubits());
  const auto local = static_cast<Eigen::Index>(split.local_dim());
  if (op.matrix.rows() != local || op.matrix.cols() != local) {
    throw DimensionError("observable size does not match its target list");
  }
  const auto& m = rho.matrix();
  Complex<Real> acc(0);
  for (std::size_t r = 0; r < split.rest_dim(); ++r) {
    const std::size_t base = split.rest_offset(r);
    for (Eigen::Index s = 0; s < local; ++s) {
      const auto row = static_cast<Eigen::Index>(base + split.target_offset(static_cast<std::size_t>(s)));
      for (Eigen::Index t = 0; t < local; ++t) {
        const auto col = static_cast<Eigen::Index>(base + split.target_offset(static_cast<std::size_t>(t)));
        acc += op.matrix(s, t) * m(col, row);
      }
    }
  }
  if (std::abs(acc.imag()) > Real(1e-10)) throw InvalidArgument("expectation has a non-negligible imaginary part");
  return acc.real();
}

/// Tr(rho * O) for an operator on the whole register.
template <typename Real>
Real expectation(const BasicDensityMatrix<Real>& rho, const CMatrix<Real>& full_operator) {
  std::vector<int> all(static_cast<std::size_t>(rho.n_qubits()));
  for (int q = 0; q < rho.n_qubits(); ++q) all[static_cast<std::size_t>(q)] = q;
  return expectation<Real>(rho, LocalOperator<Real>{std::move(all), full_operator});
}

/// Outcome of applying an effect: the success weight and, unless the weight is
/// below kZeroWeight, the renormalized post-measurement state.
template <typename Real>
struct BasicProjection {
  Real weight = 0;
  std::optional<BasicDensityMatrix<Real>> state;

  bool absent() const { return !state.has_value(); }
};

using Projection = BasicProjection<double>;

/// Lüders update: weight = Tr(E rho), post-state ∝ sqrt(E) rho sqrt(E). The
/// register keeps all of its qubits.
template <typename Real>
BasicProjection<Real> project(const BasicDensityMatrix<Real>& rho, const BasicEffect<Real>& effect) {
  const int n = rho.n_qubits();
  const Real weight = expectation<Real>(rho, effect.as_operator());
  BasicProjection<Real> out;
  out.weight = std::max(weight, Real(0));
  if (weight < Real(kZeroWeight)) return out;
  CMatrix<Real> post = apply_left<Real>(effect.sqrt(), effect.targets(), n, rho.matrix());
  post = apply_right<Real>(post, effect.sqrt(), effect.targets(), n);
  post = (post + post.adjoint()).eval() / Real(2);
  out.state.emplace(std::move(post));
  return out;
}

/// As project(), then discards the measured qubits. Requires the effect to
/// leave at least one qubit untouched.
template <typename Real>
BasicProjection<Real> project_out(const BasicDensityMatrix<Real>& rho, const BasicEffect<Real>& effect) {
  auto result = project(rho, effect);
  if (result.state) result.state.emplace(partial_trace<Real>(*result.state, effect.targets()));
  return result;
}

namespace pauli {

template <typename Real = double>
CMatrix<Real> identity() {
  return CMatrix<Real>::Identity(2, 2);
}
template <typename Real = double>
CMatrix<Real> x() {
  CMatrix<Real> m(2, 2);
  m << Real(0), Real(1), Real(1), Real(0);
  return m;
}
template <typename Real = double>
CMatrix<Real> y() {
  CMatrix<Real> m(2, 2);
  m << Real(0), Complex<Real>(0, -1), Complex<Real>(0, 1), Real(0);
  return m;
}
template <typename Real = double>
CMatrix<Real> z() {
  CMatrix<Real> m(2, 2);
  m << Real(1), Real(0), Real(0), Real(-1);
  return m;
}

}  // namespace pauli

}  // namespace limdet
