#pragma once

// Exact two-qudit simulation over C^{p^2}.
//
// Basis kets |i>|j> are indexed row-major by (i, j) in F_p^2. The maximally
// entangled basis states are
//
//   |phi_ab> = (1/sqrt p) sum_i w^{bi} |i+a>|i>,   w = e^{2 pi i / p},
//
// and the local operators are the p-ary shift and phase gates with the
// convention X(x)Z(z)|i> = w^{zi} |i+x>  (phase first, then shift).

#include <Eigen/Dense>
#include <complex>

#include "qprod/field.hpp"
#include "qprod/rng.hpp"

namespace qprod {

inline constexpr double kStateTol = 1e-9;

// Index (a, b) of the entangled basis state |phi_ab>.
struct BellLabel {
  Fp a;
  Fp b;

  friend bool operator==(const BellLabel& x, const BellLabel& y) {
    return x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const BellLabel& x, const BellLabel& y) {
    return !(x == y);
  }
  friend auto operator<=>(const BellLabel& x, const BellLabel& y) {
    if (auto c = x.a <=> y.a; c != 0) return c;
    return x.b <=> y.b;
  }
};

// The single-qudit operator X(x)Z(z).
struct LocalOp {
  Fp x;
  Fp z;

  friend bool operator==(const LocalOp& a, const LocalOp& b) {
    return a.x == b.x && a.z == b.z;
  }
  friend bool operator!=(const LocalOp& a, const LocalOp& b) {
    return !(a == b);
  }
};

inline LocalOp identity_op(Prime p) { return {Fp(0, p), Fp(0, p)}; }

// A normalized two-qudit state: p^2 complex amplitudes, row-major (i, j).
class StateVec {
 public:
  StateVec(Prime p, Eigen::VectorXcd amplitudes);  // checks size and norm

  Prime prime() const { return p_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  std::complex<double> amp(unsigned i, unsigned j) const {
    return amps_(static_cast<Eigen::Index>(i) * p_.value() + j);
  }

 private:
  Prime p_;
  Eigen::VectorXcd amps_;
};

// w^k for w = e^{2 pi i / p}.
std::complex<double> root_of_unity_pow(Prime p, long long k);

StateVec bell_state(const BellLabel& label);

// (X(xa)Z(za) tensor X(xb)Z(zb)) |s>. Throws on modulus mismatch.
StateVec apply_pair(const LocalOp& alice, const LocalOp& bob,
                    const StateVec& s);

// <phi_label | s>.
std::complex<double> bell_overlap(const BellLabel& label, const StateVec& s);

// True iff |<s1|s2>| >= 1 - tol. Insensitive to a global phase.
bool equal_up_to_phase(const StateVec& s1, const StateVec& s2,
                       double tol = kStateTol);

// Projective measurement in the |phi_ij> basis; outcome (i, j) has
// probability |<phi_ij|s>|^2. Deterministic when s is a basis state up to
// phase.
BellLabel bell_measure(const StateVec& s, SeededRng& rng);

// The label of (X(xa)Z(za) tensor X(xb)Z(zb)) |phi_00>: both operators
// collapse to the single pair (xa - xb, za + zb).
BellLabel reduce_to_label(Fp xa, Fp za, Fp xb, Fp zb);
BellLabel reduce_to_label(const LocalOp& alice, const LocalOp& bob);

}  // namespace qprod
