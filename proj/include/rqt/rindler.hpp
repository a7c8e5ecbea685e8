#pragma once

// Uniform-acceleration parameterization and the single-mode transformation
// from Minkowski qubits to Rindler region-I states.
//
// A qubit carried by an observer with proper acceleration a and mode
// frequency omega is described by the parameter r = arctan(exp(-pi omega c / a)),
// which ranges over [0, pi/4]: r = 0 is an inertial qubit, r = pi/4 the
// infinite-acceleration limit. The computational basis maps to the two
// Rindler wedges as
//
//   |0>  ->  cos r |0>_I |0>_II + sin r |1>_I |1>_II
//   |1>  ->  |1>_I |0>_II
//
// and region II is causally inaccessible, so the physical state is the
// reduction onto region I. Each qubit of a register transforms
// independently (one (I, II) pair per qubit, no cross-mode mixing).

#include <cmath>
#include <numbers>
#include <vector>

#include "rqt/qmath.hpp"

namespace rqt {

class AccelerationParam {
 public:
  AccelerationParam() : r_(0.0) {}
  explicit AccelerationParam(double r) : r_(r) {
    detail::require(std::isfinite(r) && r >= 0.0 && r <= std::numbers::pi / 4 + tol::exact,
                    "AccelerationParam: r must lie in [0, pi/4]");
  }

  static AccelerationParam zero() { return AccelerationParam(0.0); }
  static AccelerationParam maximal() { return AccelerationParam(std::numbers::pi / 4); }

  double r() const { return r_; }
  double cos_r() const { return std::cos(r_); }
  double sin_r() const { return std::sin(r_); }

 private:
  double r_;
};

// Physical inputs (a, omega, c), with infinite acceleration represented by
// an explicit flag rather than a floating-point infinity.
struct PhysicalAcceleration {
  double a = 0.0;
  double omega = 1.0;
  double c = 1.0;
  bool infinite = false;

  PhysicalAcceleration(double a_, double omega_, double c_)
      : a(a_), omega(omega_), c(c_) {
    detail::require(std::isfinite(a) && a >= 0.0, "PhysicalAcceleration: a must be >= 0");
    detail::require(std::isfinite(omega) && omega > 0.0, "PhysicalAcceleration: omega must be > 0");
    detail::require(std::isfinite(c) && c > 0.0, "PhysicalAcceleration: c must be > 0");
  }

  static PhysicalAcceleration maximal(double omega_, double c_) {
    PhysicalAcceleration p(0.0, omega_, c_);
    p.infinite = true;
    return p;
  }
};

// tan r = exp(-pi omega c / a); a = 0 maps to r = 0 and the infinite limit
// to r = pi/4. Strictly increasing in a for fixed omega, c.
inline AccelerationParam r_from_physical(const PhysicalAcceleration& p) {
  if (p.infinite) return AccelerationParam::maximal();
  if (p.a == 0.0) return AccelerationParam::zero();
  return AccelerationParam(std::atan(std::exp(-std::numbers::pi * p.omega * p.c / p.a)));
}

// One acceleration parameter per qubit of a register.
struct RegisterAcceleration {
  std::vector<AccelerationParam> per_qubit;

  RegisterAcceleration() = default;
  explicit RegisterAcceleration(std::vector<AccelerationParam> ps) : per_qubit(std::move(ps)) {}

  static RegisterAcceleration uniform(int n, AccelerationParam r) {
    return RegisterAcceleration(std::vector<AccelerationParam>(static_cast<std::size_t>(n), r));
  }
  static RegisterAcceleration zeros(int n) { return uniform(n, AccelerationParam::zero()); }

  std::size_t size() const { return per_qubit.size(); }
  const AccelerationParam& operator[](std::size_t i) const { return per_qubit[i]; }
};

namespace detail {

// Isometry of the single-mode transformation: qubit 0 of the output is the
// region-I mode, qubit 1 its region-II partner.
inline std::vector<cplx> embed_isometry(AccelerationParam r) {
  std::vector<cplx> v(4 * 2, cplx{0.0, 0.0});
  v[0 * 2 + 0] = r.cos_r();  // |0> -> C |00>
  v[3 * 2 + 0] = r.sin_r();  //      + S |11>
  v[1 * 2 + 1] = 1.0;        // |1> -> |10>   (region I first)
  return v;
}

}  // namespace detail

inline StateVector unruh_embed(const StateVector& q, AccelerationParam r) {
  detail::require(q.num_qubits() == 1, "unruh_embed: single-qubit input required");
  const std::vector<cplx> v = detail::embed_isometry(r);
  std::vector<cplx> out(4, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 2; ++j) out[i] += v[i * 2 + j] * q[j];
  return StateVector(2, std::move(out));
}

inline DensityOperator unruh_embed(const DensityOperator& q, AccelerationParam r) {
  detail::require(q.num_qubits() == 1, "unruh_embed: single-qubit input required");
  const std::vector<cplx> v = detail::embed_isometry(r);
  std::vector<cplx> out(16, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx s{0.0, 0.0};
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          s += v[i * 2 + a] * q.entry(a, b) * std::conj(v[j * 2 + b]);
      out[i * 4 + j] = s;
    }
  return DensityOperator(2, std::move(out), q.normalized(), false);
}

// Region-I reduction of an accelerated register. Every qubit is embedded
// into an (I, II) pair, the full 2n-qubit pure state is formed, and all
// region-II partners are traced out. Internally the region-II partner of
// qubit k lives at position n + k; the reduced operator does not depend on
// that interleaving choice. The result is a normalized, validated density
// operator, and at zero acceleration it is exactly the input projector.
inline DensityOperator accelerate_register(const StateVector& psi,
                                           const RegisterAcceleration& acc) {
  const int n = psi.num_qubits();
  detail::require(acc.size() == static_cast<std::size_t>(n),
                  "accelerate_register: acceleration count must match qubit count");

  const std::size_t dim = psi.dim();
  std::vector<cplx> amp(dim * dim, cplx{0.0, 0.0});  // label = (II << n) | I
  for (std::size_t b = 0; b < dim; ++b) {
    if (psi[b] == cplx{0.0, 0.0}) continue;
    // Unexcited qubits split coherently over the two wedges; excited qubits
    // stay in region I with an unexcited partner.
    for (std::size_t y = 0; y < dim; ++y) {
      if ((y & b) != 0) continue;
      double w = 1.0;
      for (int k = 0; k < n; ++k) {
        if ((b >> k) & 1u) continue;
        w *= ((y >> k) & 1u) ? acc[k].sin_r() : acc[k].cos_r();
      }
      amp[(y << n) | (b | y)] += psi[b] * w;
    }
  }

  const StateVector full(2 * n, std::move(amp));
  std::vector<int> region_one(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) region_one[k] = k;
  DensityOperator reduced = partial_trace(outer(full), region_one);
  reduced.validate();
  return reduced;
}

}  // namespace rqt
