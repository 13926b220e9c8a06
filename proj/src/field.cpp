#include "qprod/field.hpp"

namespace qprod {

namespace {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

unsigned reduce(long long v, unsigned m) {
  long long r = v % static_cast<long long>(m);
  if (r < 0) r += m;
  return static_cast<unsigned>(r);
}

void require_same(Prime a, Prime b) {
  if (a != b) throw std::invalid_argument("field: modulus mismatch");
}

}  // namespace

Prime::Prime(unsigned value) : p_(value) {
  if (value > 65521u || !is_prime(value)) {
    throw std::invalid_argument("Prime: value is not a prime <= 65521");
  }
}

Fp::Fp(long long value, Prime p) : v_(reduce(value, p.value())), p_(p) {}

Fp Fp::operator+(Fp o) const {
  require_same(p_, o.p_);
  return Fp(static_cast<long long>(v_) + o.v_, p_);
}

Fp Fp::operator-(Fp o) const {
  require_same(p_, o.p_);
  return Fp(static_cast<long long>(v_) - o.v_, p_);
}

Fp Fp::operator*(Fp o) const {
  require_same(p_, o.p_);
  return Fp(static_cast<long long>(v_) * o.v_, p_);
}

Fp Fp::operator-() const { return Fp(-static_cast<long long>(v_), p_); }

Fp Fp::inverse() const {
  if (v_ == 0) throw std::domain_error("Fp: 0 has no inverse");
  // Extended Euclid on (v, p); p prime so the gcd is 1.
  long long a = v_, m = p_.value();
  long long x0 = 1, x1 = 0;
  while (m != 0) {
    long long q = a / m;
    a -= q * m;
    std::swap(a, m);
    x0 -= q * x1;
    std::swap(x0, x1);
  }
  return Fp(x0, p_);
}

Fp Fp::pow(long long e) const {
  Fp base = *this;
  if (e < 0) {
    base = base.inverse();
    e = -e;
  }
  Fp acc(1, p_);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Exponent::Exponent(long long value, Prime p)
    : v_(0), m_(p.value() - 1) {  // p >= 2, so m >= 1; p = 2 collapses to {0}
  v_ = reduce(value, m_);
}

Exponent Exponent::operator+(Exponent o) const {
  if (m_ != o.m_) throw std::invalid_argument("Exponent: modulus mismatch");
  return Exponent(static_cast<long long>(v_) + o.v_, Prime(m_ + 1));
}

Exponent Exponent::operator-() const {
  return Exponent(-static_cast<long long>(v_), Prime(m_ + 1));
}

unsigned multiplicative_order(Fp x) {
  if (x.value() == 0) throw std::domain_error("multiplicative_order of 0");
  Fp acc = x;
  unsigned order = 1;
  const Fp one(1, x.prime());
  while (acc != one) {
    acc = acc * x;
    ++order;
  }
  return order;
}

PrimitiveRoot::PrimitiveRoot(Fp alpha) : alpha_(alpha) {
  if (alpha.value() == 0 ||
      multiplicative_order(alpha) != alpha.modulus() - 1) {
    throw std::invalid_argument("PrimitiveRoot: element does not generate");
  }
}

PrimitiveRoot find_primitive_root(Prime p) {
  for (unsigned g = 1; g < p.value(); ++g) {
    Fp cand(g, p);
    if (multiplicative_order(cand) == p.value() - 1) {
      return PrimitiveRoot(cand);
    }
  }
  throw std::logic_error("find_primitive_root: unreachable for prime p");
}

Fp alpha_pow(const PrimitiveRoot& alpha, long long n) {
  Exponent e(n, alpha.prime());
  return alpha.element().pow(e.value());
}

GroupElem group_identity(Prime p) { return {Exponent(0, p), Fp(0, p)}; }

GroupElem group_elem(Prime p, long long n, long long beta) {
  return {Exponent(n, p), Fp(beta, p)};
}

GroupElem group_compose(const PrimitiveRoot& alpha, const GroupElem& g,
                        const GroupElem& h) {
  require_same(alpha.prime(), g.beta.prime());
  require_same(g.beta.prime(), h.beta.prime());
  Fp scaled = alpha_pow(alpha, h.n.value()) * g.beta;
  return {g.n + h.n, scaled + h.beta};
}

GroupElem group_inverse(const PrimitiveRoot& alpha, const GroupElem& g) {
  require_same(alpha.prime(), g.beta.prime());
  Exponent neg = -g.n;
  return {neg, -(alpha_pow(alpha, neg.value()) * g.beta)};
}

}  // namespace qprod
