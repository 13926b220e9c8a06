#pragma once

// Exact arithmetic in the prime field F_p and in the exponent group Z_{p-1},
// primitive-root discovery, and the semidirect product Z_{p-1} x F_p whose
// composition is (n, b) o (n', b') = (n + n', a^{n'} b + b') for a fixed
// primitive element a. Everything is an immutable value type.

#include <compare>
#include <cstdint>
#include <stdexcept>

namespace qprod {

// A checked prime modulus, 2 <= p <= 65521.
class Prime {
 public:
  explicit Prime(unsigned value);
  unsigned value() const { return p_; }
  friend bool operator==(Prime a, Prime b) { return a.p_ == b.p_; }
  friend bool operator!=(Prime a, Prime b) { return a.p_ != b.p_; }

 private:
  unsigned p_;
};

// An element of F_p, stored reduced to [0, p). Mixed-modulus arithmetic
// throws.
class Fp {
 public:
  Fp(long long value, Prime p);
  unsigned value() const { return v_; }
  Prime prime() const { return p_; }
  unsigned modulus() const { return p_.value(); }

  Fp operator+(Fp o) const;
  Fp operator-(Fp o) const;
  Fp operator*(Fp o) const;
  Fp operator-() const;
  Fp inverse() const;        // throws for 0
  Fp pow(long long e) const; // negative e inverts first

  friend bool operator==(Fp a, Fp b) {
    return a.v_ == b.v_ && a.p_ == b.p_;
  }
  friend bool operator!=(Fp a, Fp b) { return !(a == b); }
  friend std::strong_ordering operator<=>(Fp a, Fp b) {
    if (auto c = a.modulus() <=> b.modulus(); c != 0) return c;
    return a.v_ <=> b.v_;
  }

 private:
  unsigned v_;
  Prime p_;
};

// An exponent of the primitive root, reduced modulo p - 1. For p = 2 the
// modulus is 1 and every exponent collapses to 0.
class Exponent {
 public:
  Exponent(long long value, Prime p);
  unsigned value() const { return v_; }
  unsigned modulus() const { return m_; }

  Exponent operator+(Exponent o) const;
  Exponent operator-() const;

  friend bool operator==(Exponent a, Exponent b) {
    return a.v_ == b.v_ && a.m_ == b.m_;
  }
  friend bool operator!=(Exponent a, Exponent b) { return !(a == b); }

 private:
  unsigned v_;
  unsigned m_;
};

// One element (n, beta) of the semidirect product Z_{p-1} x F_p.
struct GroupElem {
  Exponent n;
  Fp beta;

  friend bool operator==(const GroupElem& a, const GroupElem& b) {
    return a.n == b.n && a.beta == b.beta;
  }
  friend bool operator!=(const GroupElem& a, const GroupElem& b) {
    return !(a == b);
  }
};

// A generator of F_p*, i.e. an element of multiplicative order exactly p - 1.
class PrimitiveRoot {
 public:
  explicit PrimitiveRoot(Fp alpha);  // throws if the order is not p - 1
  Fp element() const { return alpha_; }
  Prime prime() const { return alpha_.prime(); }

 private:
  Fp alpha_;
};

// Order of x in F_p*; throws for 0.
unsigned multiplicative_order(Fp x);

// The smallest positive generator of F_p*. For p = 5 this is 2, for p = 2 it
// is 1 (the order-1 group generated by 1 is all of F_2*).
PrimitiveRoot find_primitive_root(Prime p);

// alpha^n with the exponent reduced modulo p - 1 first, so negative
// exponents are fine.
Fp alpha_pow(const PrimitiveRoot& alpha, long long n);

GroupElem group_identity(Prime p);
GroupElem group_elem(Prime p, long long n, long long beta);

// (n, b) o (n', b') = (n + n', alpha^{n'} b + b').
GroupElem group_compose(const PrimitiveRoot& alpha, const GroupElem& g,
                        const GroupElem& h);

// Inverse of (n, b) is (-n, -alpha^{-n} b).
GroupElem group_inverse(const PrimitiveRoot& alpha, const GroupElem& g);

}  // namespace qprod
