#include "qprod/qudit.hpp"

#include <cmath>
#include <numbers>

namespace qprod {

namespace {

// Numeric state vectors are capped so p^2 amplitudes stay small.
constexpr unsigned kMaxNumericPrime = 97;

void require_numeric_prime(Prime p) {
  if (p.value() > kMaxNumericPrime) {
    throw std::invalid_argument("StateVec: numeric path supports p <= 97");
  }
}

}  // namespace

std::complex<double> root_of_unity_pow(Prime p, long long k) {
  long long r = k % static_cast<long long>(p.value());
  if (r < 0) r += p.value();
  const double angle =
      2.0 * std::numbers::pi * static_cast<double>(r) / p.value();
  return std::polar(1.0, angle);
}

StateVec::StateVec(Prime p, Eigen::VectorXcd amplitudes)
    : p_(p), amps_(std::move(amplitudes)) {
  require_numeric_prime(p);
  const auto dim = static_cast<Eigen::Index>(p.value()) * p.value();
  if (amps_.size() != dim) {
    throw std::invalid_argument("StateVec: expected p^2 amplitudes");
  }
  if (std::abs(amps_.norm() - 1.0) > kStateTol) {
    throw std::invalid_argument("StateVec: amplitudes are not normalized");
  }
}

StateVec bell_state(const BellLabel& label) {
  const Prime p = label.a.prime();
  require_numeric_prime(p);
  const unsigned pv = p.value();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(
      static_cast<Eigen::Index>(pv) * pv);
  const double scale = 1.0 / std::sqrt(static_cast<double>(pv));
  for (unsigned i = 0; i < pv; ++i) {
    const unsigned left = (i + label.a.value()) % pv;
    amps(static_cast<Eigen::Index>(left) * pv + i) =
        scale * root_of_unity_pow(p, static_cast<long long>(label.b.value()) *
                                         i);
  }
  return StateVec(p, std::move(amps));
}

StateVec apply_pair(const LocalOp& alice, const LocalOp& bob,
                    const StateVec& s) {
  const Prime p = s.prime();
  if (alice.x.prime() != p || bob.x.prime() != p) {
    throw std::invalid_argument("apply_pair: modulus mismatch");
  }
  const unsigned pv = p.value();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(s.amplitudes().size());
  for (unsigned i = 0; i < pv; ++i) {
    for (unsigned j = 0; j < pv; ++j) {
      const std::complex<double> a = s.amp(i, j);
      if (a == std::complex<double>{}) continue;
      const long long phase_exp =
          static_cast<long long>(alice.z.value()) * i +
          static_cast<long long>(bob.z.value()) * j;
      const unsigned ii = (i + alice.x.value()) % pv;
      const unsigned jj = (j + bob.x.value()) % pv;
      out(static_cast<Eigen::Index>(ii) * pv + jj) =
          root_of_unity_pow(p, phase_exp) * a;
    }
  }
  return StateVec(p, std::move(out));
}

std::complex<double> bell_overlap(const BellLabel& label, const StateVec& s) {
  const Prime p = s.prime();
  if (label.a.prime() != p) {
    throw std::invalid_argument("bell_overlap: modulus mismatch");
  }
  const unsigned pv = p.value();
  const double scale = 1.0 / std::sqrt(static_cast<double>(pv));
  std::complex<double> acc{};
  for (unsigned i = 0; i < pv; ++i) {
    const unsigned left = (i + label.a.value()) % pv;
    // conj of the basis amplitude w^{bi}/sqrt(p)
    acc += scale *
           root_of_unity_pow(
               p, -static_cast<long long>(label.b.value()) * i) *
           s.amp(left, i);
  }
  return acc;
}

bool equal_up_to_phase(const StateVec& s1, const StateVec& s2, double tol) {
  if (s1.prime() != s2.prime()) {
    throw std::invalid_argument("equal_up_to_phase: modulus mismatch");
  }
  return std::abs(s1.amplitudes().dot(s2.amplitudes())) >= 1.0 - tol;
}

BellLabel bell_measure(const StateVec& s, SeededRng& rng) {
  const Prime p = s.prime();
  const unsigned pv = p.value();
  const double u = rng.uniform_double();
  double cumulative = 0.0;
  BellLabel last{Fp(pv - 1, p), Fp(pv - 1, p)};
  for (unsigned i = 0; i < pv; ++i) {
    for (unsigned j = 0; j < pv; ++j) {
      BellLabel label{Fp(i, p), Fp(j, p)};
      cumulative += std::norm(bell_overlap(label, s));
      if (u < cumulative) return label;
      last = label;
    }
  }
  return last;  // u landed in the rounding slack at the top
}

BellLabel reduce_to_label(Fp xa, Fp za, Fp xb, Fp zb) {
  return {xa - xb, za + zb};
}

BellLabel reduce_to_label(const LocalOp& alice, const LocalOp& bob) {
  return reduce_to_label(alice.x, alice.z, bob.x, bob.z);
}

}  // namespace qprod
