#pragma once

// Dense complex linear algebra for registers of one to four qubits:
// state vectors, operators, density operators, tensor products, partial
// trace, projective measurement and pure-target fidelity.
//
// Conventions, fixed across the library:
//   * qubit k contributes bit k of a basis-state label, so qubit 0 is the
//     least significant bit;
//   * tensor(a, b) places the left operand on the lower-indexed qubits;
//   * matrices are row-major, entry(i, j) = <i|M|j>.
//
// Registers never exceed four qubits (16x16 matrices), so storage is dense
// and every operation is written for clarity rather than scale. All values
// are immutable after construction and all operations are pure functions,
// safe to call concurrently without synchronization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqt {

using cplx = std::complex<double>;

namespace tol {
inline constexpr double exact = 1e-12;   // exact algebraic identities
inline constexpr double chain = 1e-10;   // chained numerical pipelines
inline constexpr double branch = 1e-14;  // measurement-branch probability cutoff
}  // namespace tol

// Thrown when a density-operator invariant (Hermiticity, trace, positivity)
// fails mid-pipeline. Callers treat this as a hard error.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

inline void require_finite(const std::vector<cplx>& v, const char* what) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

inline std::size_t dim_of(int num_qubits) {
  return std::size_t{1} << num_qubits;
}

}  // namespace detail

class StateVector {
 public:
  StateVector(int num_qubits, std::vector<cplx> amplitudes)
      : nq_(num_qubits), amp_(std::move(amplitudes)) {
    detail::require(num_qubits >= 1, "StateVector: need at least one qubit");
    detail::require(amp_.size() == detail::dim_of(nq_),
                    "StateVector: amplitude count must be 2^num_qubits");
    detail::require_finite(amp_, "StateVector");
  }

  static StateVector basis(int num_qubits, std::size_t label) {
    std::vector<cplx> a(detail::dim_of(num_qubits), cplx{0.0, 0.0});
    if (label >= a.size()) throw std::invalid_argument("StateVector::basis: label out of range");
    a[label] = cplx{1.0, 0.0};
    return StateVector(num_qubits, std::move(a));
  }

  int num_qubits() const { return nq_; }
  std::size_t dim() const { return amp_.size(); }
  const cplx& operator[](std::size_t i) const { return amp_[i]; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  double squared_norm() const {
    double s = 0.0;
    for (const cplx& z : amp_) s += std::norm(z);
    return s;
  }

  bool normalized(double t = tol::exact) const {
    return std::abs(squared_norm() - 1.0) <= t;
  }

 private:
  int nq_;
  std::vector<cplx> amp_;
};

enum class OpKind { unitary, projector, general };

class Operator {
 public:
  Operator(int num_qubits, std::vector<cplx> entries, OpKind kind, bool validate = true)
      : nq_(num_qubits), m_(std::move(entries)), kind_(kind) {
    const std::size_t d = detail::dim_of(nq_);
    detail::require(nq_ >= 1, "Operator: need at least one qubit");
    detail::require(m_.size() == d * d, "Operator: entry count must be dim^2");
    detail::require_finite(m_, "Operator");
    if (validate) check_kind();
  }

  int num_qubits() const { return nq_; }
  std::size_t dim() const { return detail::dim_of(nq_); }
  OpKind kind() const { return kind_; }
  const cplx& entry(std::size_t i, std::size_t j) const { return m_[i * dim() + j]; }
  const std::vector<cplx>& entries() const { return m_; }

 private:
  void check_kind() const {
    const std::size_t d = dim();
    if (kind_ == OpKind::unitary) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          cplx s{0.0, 0.0};
          for (std::size_t k = 0; k < d; ++k) s += entry(i, k) * std::conj(entry(j, k));
          const cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
          if (std::abs(s - want) > tol::chain)
            throw std::invalid_argument("Operator: not unitary within tolerance");
        }
    } else if (kind_ == OpKind::projector) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          if (std::abs(entry(i, j) - std::conj(entry(j, i))) > tol::chain)
            throw std::invalid_argument("Operator: projector not Hermitian");
          cplx s{0.0, 0.0};
          for (std::size_t k = 0; k < d; ++k) s += entry(i, k) * entry(k, j);
          if (std::abs(s - entry(i, j)) > tol::chain)
            throw std::invalid_argument("Operator: projector not idempotent");
        }
    }
  }

  int nq_;
  std::vector<cplx> m_;
  OpKind kind_;
};

// Minimum eigenvalue of a Hermitian matrix, used for positivity checks.
// The complex Hermitian problem is mapped to the real symmetric matrix
// [[Re, -Im], [Im, Re]] (same spectrum, doubled multiplicity) and solved
// with cyclic Jacobi rotations; at dimension <= 32 this is effectively exact.
inline double min_hermitian_eigenvalue(const std::vector<cplx>& m, std::size_t dim) {
  const std::size_t n = 2 * dim;
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const cplx h = 0.5 * (m[i * dim + j] + std::conj(m[j * dim + i]));
      a[i * n + j] = h.real();
      a[i * n + (j + dim)] = -h.imag();
      a[(i + dim) * n + j] = h.imag();
      a[(i + dim) * n + (j + dim)] = h.real();
    }
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double stop = 1e-15 * std::max(1.0, scale);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p * n + q]));
    if (off <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  double mn = a[0];
  for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, a[i * n + i]);
  return mn;
}

class DensityOperator {
 public:
  DensityOperator(int num_qubits, std::vector<cplx> entries, bool normalized,
                  bool validate = true)
      : nq_(num_qubits), m_(std::move(entries)), normalized_(normalized) {
    const std::size_t d = detail::dim_of(nq_);
    detail::require(nq_ >= 1, "DensityOperator: need at least one qubit");
    detail::require(m_.size() == d * d, "DensityOperator: entry count must be dim^2");
    detail::require_finite(m_, "DensityOperator");
    if (validate) this->validate();
  }

  int num_qubits() const { return nq_; }
  std::size_t dim() const { return detail::dim_of(nq_); }
  bool normalized() const { return normalized_; }
  const cplx& entry(std::size_t i, std::size_t j) const { return m_[i * dim() + j]; }
  const std::vector<cplx>& entries() const { return m_; }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim(); ++i) t += entry(i, i);
    return t;
  }

  double min_eigenvalue() const { return min_hermitian_eigenvalue(m_, dim()); }

  // Hermitian within 1e-10 entrywise, PSD within -1e-10, trace 1 within
  // 1e-10 when flagged normalized (trace in (0, 1] otherwise).
  void validate() const {
    const std::size_t d = dim();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (std::abs(entry(i, j) - std::conj(entry(j, i))) > tol::chain)
          throw InvariantViolation("DensityOperator: not Hermitian");
    const cplx t = trace();
    if (std::abs(t.imag()) > tol::chain)
      throw InvariantViolation("DensityOperator: complex trace");
    if (normalized_) {
      if (std::abs(t.real() - 1.0) > tol::chain)
        throw InvariantViolation("DensityOperator: trace != 1");
    } else {
      if (t.real() <= 0.0 || t.real() > 1.0 + tol::chain)
        throw InvariantViolation("DensityOperator: trace outside (0, 1]");
    }
    if (min_eigenvalue() < -tol::chain)
      throw InvariantViolation("DensityOperator: negative eigenvalue");
  }

  bool valid() const {
    try {
      validate();
      return true;
    } catch (const InvariantViolation&) {
      return false;
    }
  }

 private:
  int nq_;
  std::vector<cplx> m_;
  bool normalized_;
};

// ---------------------------------------------------------------------------
// Tensor products. The left operand occupies the lower-indexed qubits, so a
// result label decomposes as label = (label_b << a.num_qubits()) | label_a.

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  const std::size_t da = a.dim(), db = b.dim();
  std::vector<cplx> out(da * db);
  for (std::size_t j = 0; j < db; ++j)
    for (std::size_t i = 0; i < da; ++i) out[(j << a.num_qubits()) | i] = a[i] * b[j];
  return StateVector(a.num_qubits() + b.num_qubits(), std::move(out));
}

inline Operator tensor(const Operator& a, const Operator& b) {
  const std::size_t da = a.dim(), db = b.dim();
  const int nq = a.num_qubits() + b.num_qubits();
  std::vector<cplx> out(da * db * da * db);
  const std::size_t d = da * db;
  for (std::size_t ib = 0; ib < db; ++ib)
    for (std::size_t ia = 0; ia < da; ++ia)
      for (std::size_t jb = 0; jb < db; ++jb)
        for (std::size_t ja = 0; ja < da; ++ja) {
          const std::size_t i = (ib << a.num_qubits()) | ia;
          const std::size_t j = (jb << a.num_qubits()) | ja;
          out[i * d + j] = a.entry(ia, ja) * b.entry(ib, jb);
        }
  OpKind kind = OpKind::general;
  if (a.kind() == OpKind::unitary && b.kind() == OpKind::unitary) kind = OpKind::unitary;
  if (a.kind() == OpKind::projector && b.kind() == OpKind::projector) kind = OpKind::projector;
  return Operator(nq, std::move(out), kind, false);
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  const std::size_t da = a.dim(), db = b.dim();
  const std::size_t d = da * db;
  std::vector<cplx> out(d * d);
  for (std::size_t ib = 0; ib < db; ++ib)
    for (std::size_t ia = 0; ia < da; ++ia)
      for (std::size_t jb = 0; jb < db; ++jb)
        for (std::size_t ja = 0; ja < da; ++ja) {
          const std::size_t i = (ib << a.num_qubits()) | ia;
          const std::size_t j = (jb << a.num_qubits()) | ja;
          out[i * d + j] = a.entry(ia, ja) * b.entry(ib, jb);
        }
  return DensityOperator(a.num_qubits() + b.num_qubits(), std::move(out),
                         a.normalized() && b.normalized(), false);
}

inline DensityOperator outer(const StateVector& psi) {
  const std::size_t d = psi.dim();
  std::vector<cplx> out(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = psi[i] * std::conj(psi[j]);
  return DensityOperator(psi.num_qubits(), std::move(out), psi.normalized(), false);
}

// ---------------------------------------------------------------------------
// Partial trace over the complement of `keep`. Kept qubits are renumbered in
// increasing original order; the trace is preserved exactly.

inline DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep) {
  detail::require(!keep.empty(), "partial_trace: keep set must be nonempty");
  std::sort(keep.begin(), keep.end());
  detail::require(std::unique(keep.begin(), keep.end()) == keep.end(),
                  "partial_trace: duplicate qubit index");
  for (int q : keep)
    detail::require(q >= 0 && q < rho.num_qubits(), "partial_trace: qubit index out of range");

  std::vector<int> env;
  for (int q = 0; q < rho.num_qubits(); ++q)
    if (!std::binary_search(keep.begin(), keep.end(), q)) env.push_back(q);

  const int nk = static_cast<int>(keep.size());
  const std::size_t dk = detail::dim_of(nk);
  const std::size_t de = std::size_t{1} << env.size();
  auto compose = [&](std::size_t kept_bits, std::size_t env_bits) {
    std::size_t label = 0;
    for (int t = 0; t < nk; ++t) label |= ((kept_bits >> t) & 1u) << keep[t];
    for (std::size_t t = 0; t < env.size(); ++t) label |= ((env_bits >> t) & 1u) << env[t];
    return label;
  };

  std::vector<cplx> out(dk * dk, cplx{0.0, 0.0});
  for (std::size_t a = 0; a < dk; ++a)
    for (std::size_t b = 0; b < dk; ++b) {
      cplx s{0.0, 0.0};
      for (std::size_t e = 0; e < de; ++e) s += rho.entry(compose(a, e), compose(b, e));
      out[a * dk + b] = s;
    }
  return DensityOperator(nk, std::move(out), rho.normalized(), false);
}

// ---------------------------------------------------------------------------
// Embedding of an m-qubit operator into an n-qubit register: bit t of the
// operator's local label maps to register qubit on_qubits[t]; identity
// elsewhere.

inline Operator embed(const Operator& op, const std::vector<int>& on_qubits, int total_qubits) {
  detail::require(static_cast<int>(on_qubits.size()) == op.num_qubits(),
                  "embed: operator arity does not match qubit list");
  std::size_t mask = 0;
  for (int q : on_qubits) {
    detail::require(q >= 0 && q < total_qubits, "embed: qubit index out of range");
    detail::require(!((mask >> q) & 1u), "embed: duplicate qubit index");
    mask |= std::size_t{1} << q;
  }
  const std::size_t d = detail::dim_of(total_qubits);
  auto local = [&](std::size_t label) {
    std::size_t l = 0;
    for (std::size_t t = 0; t < on_qubits.size(); ++t) l |= ((label >> on_qubits[t]) & 1u) << t;
    return l;
  };
  std::vector<cplx> out(d * d, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if ((i & ~mask) != (j & ~mask)) continue;
      out[i * d + j] = op.entry(local(i), local(j));
    }
  return Operator(total_qubits, std::move(out), op.kind(), false);
}

// ---------------------------------------------------------------------------
// apply: U|psi> for vectors, A rho A^dagger for density operators, with
// identity padding on the remaining qubits.

inline StateVector apply(const Operator& op, const StateVector& psi,
                         const std::vector<int>& on_qubits) {
  const Operator full = embed(op, on_qubits, psi.num_qubits());
  const std::size_t d = psi.dim();
  std::vector<cplx> out(d, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i) {
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < d; ++j) s += full.entry(i, j) * psi[j];
    out[i] = s;
  }
  return StateVector(psi.num_qubits(), std::move(out));
}

inline StateVector apply(const Operator& op, const StateVector& psi) {
  detail::require(op.num_qubits() == psi.num_qubits(), "apply: arity mismatch");
  std::vector<int> all(psi.num_qubits());
  for (int q = 0; q < psi.num_qubits(); ++q) all[q] = q;
  return apply(op, psi, all);
}

inline DensityOperator apply(const Operator& op, const DensityOperator& rho,
                             const std::vector<int>& on_qubits) {
  const Operator full = embed(op, on_qubits, rho.num_qubits());
  const std::size_t d = rho.dim();
  std::vector<cplx> tmp(d * d, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cplx s{0.0, 0.0};
      for (std::size_t k = 0; k < d; ++k) s += full.entry(i, k) * rho.entry(k, j);
      tmp[i * d + j] = s;
    }
  std::vector<cplx> out(d * d, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cplx s{0.0, 0.0};
      for (std::size_t k = 0; k < d; ++k) s += tmp[i * d + k] * std::conj(full.entry(j, k));
      out[i * d + j] = s;
    }
  return DensityOperator(rho.num_qubits(), std::move(out), rho.normalized(), false);
}

inline DensityOperator apply(const Operator& op, const DensityOperator& rho) {
  detail::require(op.num_qubits() == rho.num_qubits(), "apply: arity mismatch");
  std::vector<int> all(rho.num_qubits());
  for (int q = 0; q < rho.num_qubits(); ++q) all[q] = q;
  return apply(op, rho, all);
}

// ---------------------------------------------------------------------------
// Projective measurement branch. probability = tr(P rho P); the branch is
// normalized and returned only when the probability exceeds the branch
// cutoff, otherwise the caller sees an empty optional (impossible branch).

struct ProjectionResult {
  double probability = 0.0;
  std::optional<DensityOperator> branch;
};

inline ProjectionResult project(const DensityOperator& rho, const Operator& proj,
                                const std::vector<int>& on_qubits) {
  detail::require(proj.kind() == OpKind::projector, "project: operator must be a projector");
  const DensityOperator m = apply(proj, rho, on_qubits);
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < m.dim(); ++i) t += m.entry(i, i);
  const double p = t.real();
  ProjectionResult out;
  out.probability = p;
  if (p > tol::branch) {
    std::vector<cplx> scaled(m.entries());
    for (cplx& z : scaled) z /= p;
    out.branch.emplace(m.num_qubits(), std::move(scaled), true, false);
  }
  return out;
}

// <psi| rho |psi> for a pure target state; lies in [0, 1] for a normalized
// density operator.
inline double fidelity_pure(const StateVector& psi, const DensityOperator& rho) {
  detail::require(psi.num_qubits() == rho.num_qubits(), "fidelity_pure: dimension mismatch");
  cplx s{0.0, 0.0};
  const std::size_t d = psi.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s += std::conj(psi[i]) * rho.entry(i, j) * psi[j];
  return s.real();
}

// ---------------------------------------------------------------------------
// Single-qubit standard operators.

enum class Pauli { I, X, Y, Z };

inline Operator pauli_op(Pauli p) {
  switch (p) {
    case Pauli::I:
      return Operator(1, {cplx{1, 0}, {0, 0}, {0, 0}, {1, 0}}, OpKind::unitary, false);
    case Pauli::X:
      return Operator(1, {cplx{0, 0}, {1, 0}, {1, 0}, {0, 0}}, OpKind::unitary, false);
    case Pauli::Y:
      return Operator(1, {cplx{0, 0}, {0, -1}, {0, 1}, {0, 0}}, OpKind::unitary, false);
    case Pauli::Z:
      return Operator(1, {cplx{1, 0}, {0, 0}, {0, 0}, {-1, 0}}, OpKind::unitary, false);
  }
  throw std::invalid_argument("pauli_op: bad tag");
}

inline Operator identity_operator(int num_qubits) {
  const std::size_t d = detail::dim_of(num_qubits);
  std::vector<cplx> m(d * d, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] = cplx{1.0, 0.0};
  return Operator(num_qubits, std::move(m), OpKind::unitary, false);
}

}  // namespace rqt
