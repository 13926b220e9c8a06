#pragma once

// Encodings are bijections F_p^2 -> F_p^2 stored as dense tables, read as
// "input pair (i, j) is sent as the entangled state labelled eps(i, j)".
//
// This module provides:
//   - the product-compatibility predicates and the rectangle property that
//     characterizes encodings realizable by local operators,
//   - the two group actions phi/psi on the canonical encodings eps0 (the
//     identity) and eps0T (the transpose), and the family E built from their
//     four orbits,
//   - a solver mapping an encoding table to per-input local operator
//     parameters, and the closed-form systematic parameter choices,
//   - the three-table binary family that suffices for p = 2.
//
// All predicates and the audit work on the tables alone, never on the orbit
// descriptor that produced them.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qprod/field.hpp"
#include "qprod/qudit.hpp"

namespace qprod {

enum class EncodingBase : std::uint8_t { kEps0, kEps0T };
enum class ActionKind : std::uint8_t { kPhi, kPsi };
enum class Role : std::uint8_t { kAlice, kBob };

// Compact orbit descriptor (base, action, n, beta) of a family member.
// Members in the overlap of the two orbits carry one id per action.
struct EncodingId {
  EncodingBase base;
  ActionKind action;
  unsigned n;
  unsigned beta;

  friend auto operator<=>(const EncodingId&, const EncodingId&) = default;
};

std::string to_string(const EncodingId& id);           // "eps0:psi:3:2"
EncodingId parse_encoding_id(const std::string& text, Prime p);

// A bijection F_p^2 -> F_p^2 as a dense row-major table. Entries are packed
// as a*p + b, which caps the table representation at p <= 251.
class Encoding {
 public:
  Encoding(Prime p, const std::vector<BellLabel>& table);
  Encoding(Prime p, std::vector<std::uint16_t> packed_table);

  Prime prime() const { return p_; }
  BellLabel operator()(unsigned i, unsigned j) const {
    const std::uint16_t e = packed_[static_cast<std::size_t>(i) * p_.value() + j];
    return {Fp(e / p_.value(), p_), Fp(e % p_.value(), p_)};
  }
  std::uint16_t packed_at(unsigned i, unsigned j) const {
    return packed_[static_cast<std::size_t>(i) * p_.value() + j];
  }
  const std::vector<std::uint16_t>& packed() const { return packed_; }

  friend bool operator==(const Encoding& a, const Encoding& b) {
    return a.p_ == b.p_ && a.packed_ == b.packed_;
  }

 private:
  Prime p_;
  std::vector<std::uint16_t> packed_;  // bijection, checked at construction
};

Encoding identity_encoding(Prime p);    // eps0:  (i, j) -> (i, j)
Encoding transposed_encoding(Prime p);  // eps0T: (i, j) -> (j, i)

// pi(i, j) = i * j.
Fp product_map(Fp i, Fp j);
Fp product_map(const BellLabel& label);

// A p x p matrix over F_p; used for the per-coordinate view of a table.
struct CoordMatrix {
  Prime p;
  Eigen::MatrixXi entries;  // values reduced to [0, p)
};

// The two coordinate matrices of an encoding: x holds the first (shift)
// coordinate of eps(i, j), z the second (phase) coordinate.
struct CoordMatrices {
  CoordMatrix x;
  CoordMatrix z;
};
CoordMatrices label_coordinate_matrices(const Encoding& e);

// The rectangle property m[i][j] + m[i'][j'] = m[i][j'] + m[i'][j] (mod p)
// for all index quadruples. Checking it against the base point (0, 0) is
// equivalent: m[i][j] = m[i][0] + m[0][j] - m[0][0] forces the general case.
struct RectangleViolation {
  // Witness quadruple: m[i][j] + m[i2][j2] != m[i][j2] + m[i2][j].
  unsigned i, j, i2, j2;
};
std::optional<RectangleViolation> find_rectangle_violation(
    const CoordMatrix& m);
bool has_rectangle_property(const CoordMatrix& m);

// Additive split m[i][j] = row[i] + col[j] with col[0] = 0; exists iff the
// rectangle property holds.
struct RectangleSplit {
  std::vector<Fp> row;
  std::vector<Fp> col;
};
std::optional<RectangleSplit> decompose_rectangle(const CoordMatrix& m);

// Product-compatible: pi(eps(i, j)) = ij everywhere, and both coordinate
// matrices satisfy the rectangle property.
bool is_product_compatible(const Encoding& e);

// Domain of the phi action: product-compatible and the restriction to
// (., 0) has input-independent increments, eps(i+d, 0) - eps(i, 0) =
// eps(d, 0) - eps(0, 0). The psi domain mirrors this on (0, .).
bool in_phi_domain(const Encoding& e);
bool in_psi_domain(const Encoding& e);

// The actions
//   phi_{n,beta}(eps)(i, j) = eps(a^n i + beta, 0)        if j = 0
//                             eps(a^n i, a^{-n} j)        otherwise
//   psi_{n,beta}(eps)(i, j) = eps(0, a^{-n} j + beta)     if i = 0
//                             eps(a^n i, a^{-n} j)        otherwise
// Throw if e is outside the action's domain.
Encoding apply_phi(const PrimitiveRoot& alpha, const GroupElem& g,
                   const Encoding& e);
Encoding apply_psi(const PrimitiveRoot& alpha, const GroupElem& g,
                   const Encoding& e);

// Table of the encoding named by an id.
Encoding expand_id(const PrimitiveRoot& alpha, const EncodingId& id);

// The union of the four orbits, deduplicated by full table equality.
struct EncodingFamily {
  Prime p;
  PrimitiveRoot alpha;
  std::vector<Encoding> members;                  // first-seen order
  std::vector<std::vector<EncodingId>> member_ids;  // parallel to members
  std::map<EncodingId, std::size_t> id_index;     // id -> member position
  std::size_t h1_only = 0;       // members reached only through phi
  std::size_t h2_only = 0;       // members reached only through psi
  std::size_t intersection = 0;  // members reached through both
};
EncodingFamily build_family(Prime p, const PrimitiveRoot& alpha);

// Enumeration of all ids, the sampling domain of the family: base in
// {eps0, eps0T}, action in {phi, psi}, n in [0, p-1), beta in [0, p).
std::vector<EncodingId> all_encoding_ids(Prime p);

// Per-input operator parameters realizing an encoding: input i on the left
// side applies X(xa[i])Z(za[i]), input j on the right X(xb[j])Z(zb[j]).
struct LocalParams {
  std::vector<Fp> xa, za;
  std::vector<Fp> xb, zb;
};

// Canonical solution of { xa[i] - xb[j] = x(i,j), za[i] + zb[j] = z(i,j) }
// with xb[0] = zb[0] = 0, or nullopt when a coordinate matrix fails the
// rectangle property (no local realization exists).
std::optional<LocalParams> solve_local_params(const Encoding& e);

// Closed-form parameters realizing the encoding named by id, one operator
// per (role, input); depends only on the caller's own input.
LocalOp systematic_params(const PrimitiveRoot& alpha, const EncodingId& id,
                          Role role, Fp input);

// The three-encoding family for p = 2 and the operator tables behind it.
// binary_operator_tables()[k][a*2+b] is the (left, right) operator pair of
// encoding k at input (a, b); binary_minimal_family()[k] is its label table.
std::array<std::array<std::pair<LocalOp, LocalOp>, 4>, 3>
binary_operator_tables();
std::vector<Encoding> binary_minimal_family();

}  // namespace qprod
