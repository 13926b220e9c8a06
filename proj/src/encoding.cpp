#include "qprod/encoding.hpp"

#include <charconv>
#include <unordered_map>

namespace qprod {

namespace {

constexpr unsigned kMaxTablePrime = 251;  // packed entries must fit 16 bits

unsigned exponent_count(Prime p) { return p.value() == 2 ? 1u : p.value() - 1; }

void check_id_range(const EncodingId& id, Prime p) {
  if (id.n >= exponent_count(p) || id.beta >= p.value()) {
    throw std::invalid_argument("EncodingId: n or beta out of range");
  }
}

std::vector<std::uint16_t> checked_bijection(Prime p,
                                             std::vector<std::uint16_t> t) {
  if (p.value() > kMaxTablePrime) {
    throw std::invalid_argument("Encoding: tables support p <= 251");
  }
  const std::size_t size =
      static_cast<std::size_t>(p.value()) * p.value();
  if (t.size() != size) {
    throw std::invalid_argument("Encoding: expected p^2 table entries");
  }
  std::vector<bool> seen(size, false);
  for (std::uint16_t e : t) {
    if (e >= size || seen[e]) {
      throw std::invalid_argument("Encoding: table is not a bijection");
    }
    seen[e] = true;
  }
  return t;
}

// Entry-wise difference of two labels of one table, per coordinate.
struct LabelDiff {
  unsigned da, db;
};
LabelDiff packed_diff(const Encoding& e, unsigned i1, unsigned j1,
                      unsigned i2, unsigned j2) {
  const unsigned p = e.prime().value();
  const std::uint16_t u = e.packed_at(i1, j1);
  const std::uint16_t v = e.packed_at(i2, j2);
  return {(u / p + p - v / p) % p, (u % p + p - v % p) % p};
}

bool same_diff(LabelDiff a, LabelDiff b) {
  return a.da == b.da && a.db == b.db;
}

}  // namespace

std::string to_string(const EncodingId& id) {
  std::string s = id.base == EncodingBase::kEps0 ? "eps0" : "eps0T";
  s += id.action == ActionKind::kPhi ? ":phi:" : ":psi:";
  s += std::to_string(id.n);
  s += ':';
  s += std::to_string(id.beta);
  return s;
}

EncodingId parse_encoding_id(const std::string& text, Prime p) {
  std::array<std::string, 4> parts;
  std::size_t start = 0, field = 0;
  for (; field < 4; ++field) {
    const std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      if (field != 3) break;
      parts[field] = text.substr(start);
      start = text.size();
    } else {
      parts[field] = text.substr(start, colon - start);
      start = colon + 1;
    }
  }
  if (field != 4) {
    throw std::invalid_argument("encoding id: expected base:action:n:beta");
  }
  EncodingId id{EncodingBase::kEps0, ActionKind::kPhi, 0, 0};
  if (parts[0] == "eps0") {
    id.base = EncodingBase::kEps0;
  } else if (parts[0] == "eps0T") {
    id.base = EncodingBase::kEps0T;
  } else {
    throw std::invalid_argument("encoding id: base must be eps0 or eps0T");
  }
  if (parts[1] == "phi") {
    id.action = ActionKind::kPhi;
  } else if (parts[1] == "psi") {
    id.action = ActionKind::kPsi;
  } else {
    throw std::invalid_argument("encoding id: action must be phi or psi");
  }
  for (int k = 2; k < 4; ++k) {
    unsigned value = 0;
    const char* begin = parts[k].data();
    const char* end = begin + parts[k].size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
      throw std::invalid_argument("encoding id: n and beta must be integers");
    }
    (k == 2 ? id.n : id.beta) = value;
  }
  check_id_range(id, p);
  return id;
}

Encoding::Encoding(Prime p, std::vector<std::uint16_t> packed_table)
    : p_(p), packed_(checked_bijection(p, std::move(packed_table))) {}

Encoding::Encoding(Prime p, const std::vector<BellLabel>& table) : p_(p), packed_() {
  std::vector<std::uint16_t> packed;
  packed.reserve(table.size());
  for (const BellLabel& label : table) {
    if (label.a.prime() != p) {
      throw std::invalid_argument("Encoding: label modulus mismatch");
    }
    packed.push_back(static_cast<std::uint16_t>(
        label.a.value() * p.value() + label.b.value()));
  }
  packed_ = checked_bijection(p, std::move(packed));
}

Encoding identity_encoding(Prime p) {
  const unsigned pv = p.value();
  std::vector<std::uint16_t> t(static_cast<std::size_t>(pv) * pv);
  for (unsigned i = 0; i < pv; ++i)
    for (unsigned j = 0; j < pv; ++j)
      t[static_cast<std::size_t>(i) * pv + j] =
          static_cast<std::uint16_t>(i * pv + j);
  return Encoding(p, std::move(t));
}

Encoding transposed_encoding(Prime p) {
  const unsigned pv = p.value();
  std::vector<std::uint16_t> t(static_cast<std::size_t>(pv) * pv);
  for (unsigned i = 0; i < pv; ++i)
    for (unsigned j = 0; j < pv; ++j)
      t[static_cast<std::size_t>(i) * pv + j] =
          static_cast<std::uint16_t>(j * pv + i);
  return Encoding(p, std::move(t));
}

Fp product_map(Fp i, Fp j) { return i * j; }

Fp product_map(const BellLabel& label) { return label.a * label.b; }

CoordMatrices label_coordinate_matrices(const Encoding& e) {
  const unsigned pv = e.prime().value();
  CoordMatrix x{e.prime(), Eigen::MatrixXi(pv, pv)};
  CoordMatrix z{e.prime(), Eigen::MatrixXi(pv, pv)};
  for (unsigned i = 0; i < pv; ++i) {
    for (unsigned j = 0; j < pv; ++j) {
      const std::uint16_t entry = e.packed_at(i, j);
      x.entries(i, j) = entry / pv;
      z.entries(i, j) = entry % pv;
    }
  }
  return {std::move(x), std::move(z)};
}

std::optional<RectangleViolation> find_rectangle_violation(
    const CoordMatrix& m) {
  const unsigned pv = m.p.value();
  const int base = m.entries(0, 0);
  for (unsigned i = 1; i < pv; ++i) {
    for (unsigned j = 1; j < pv; ++j) {
      const int lhs = (m.entries(i, j) + base) % static_cast<int>(pv);
      const int rhs =
          (m.entries(i, 0) + m.entries(0, j)) % static_cast<int>(pv);
      if (lhs != rhs) return RectangleViolation{i, j, 0, 0};
    }
  }
  return std::nullopt;
}

bool has_rectangle_property(const CoordMatrix& m) {
  return !find_rectangle_violation(m).has_value();
}

std::optional<RectangleSplit> decompose_rectangle(const CoordMatrix& m) {
  if (find_rectangle_violation(m)) return std::nullopt;
  const Prime p = m.p;
  RectangleSplit split;
  split.row.reserve(p.value());
  split.col.reserve(p.value());
  for (unsigned i = 0; i < p.value(); ++i) {
    split.row.emplace_back(m.entries(i, 0), p);
  }
  for (unsigned j = 0; j < p.value(); ++j) {
    split.col.push_back(Fp(m.entries(0, j), p) - Fp(m.entries(0, 0), p));
  }
  return split;
}

bool is_product_compatible(const Encoding& e) {
  const unsigned pv = e.prime().value();
  for (unsigned i = 0; i < pv; ++i) {
    for (unsigned j = 0; j < pv; ++j) {
      const std::uint16_t entry = e.packed_at(i, j);
      if ((entry / pv) * (entry % pv) % pv != i * j % pv) return false;
    }
  }
  const CoordMatrices m = label_coordinate_matrices(e);
  return has_rectangle_property(m.x) && has_rectangle_property(m.z);
}

bool in_phi_domain(const Encoding& e) {
  if (!is_product_compatible(e)) return false;
  const unsigned pv = e.prime().value();
  for (unsigned delta = 0; delta < pv; ++delta) {
    const LabelDiff expected = packed_diff(e, delta, 0, 0, 0);
    for (unsigned i = 0; i < pv; ++i) {
      if (!same_diff(packed_diff(e, (i + delta) % pv, 0, i, 0), expected)) {
        return false;
      }
    }
  }
  return true;
}

bool in_psi_domain(const Encoding& e) {
  if (!is_product_compatible(e)) return false;
  const unsigned pv = e.prime().value();
  for (unsigned delta = 0; delta < pv; ++delta) {
    const LabelDiff expected = packed_diff(e, 0, delta, 0, 0);
    for (unsigned j = 0; j < pv; ++j) {
      if (!same_diff(packed_diff(e, 0, (j + delta) % pv, 0, j), expected)) {
        return false;
      }
    }
  }
  return true;
}

namespace {

Encoding apply_action(const PrimitiveRoot& alpha, const GroupElem& g,
                      const Encoding& e, ActionKind action) {
  const Prime p = e.prime();
  if (alpha.prime() != p || g.beta.prime() != p) {
    throw std::invalid_argument("encoding action: modulus mismatch");
  }
  const unsigned pv = p.value();
  const unsigned scale = alpha_pow(alpha, g.n.value()).value();
  const unsigned inv_scale =
      alpha_pow(alpha, -static_cast<long long>(g.n.value())).value();
  const unsigned beta = g.beta.value();
  std::vector<std::uint16_t> out(static_cast<std::size_t>(pv) * pv);
  for (unsigned i = 0; i < pv; ++i) {
    for (unsigned j = 0; j < pv; ++j) {
      unsigned si, sj;
      if (action == ActionKind::kPhi) {
        if (j == 0) {
          si = (scale * i + beta) % pv;
          sj = 0;
        } else {
          si = scale * i % pv;
          sj = inv_scale * j % pv;
        }
      } else {
        if (i == 0) {
          si = 0;
          sj = (inv_scale * j + beta) % pv;
        } else {
          si = scale * i % pv;
          sj = inv_scale * j % pv;
        }
      }
      out[static_cast<std::size_t>(i) * pv + j] = e.packed_at(si, sj);
    }
  }
  return Encoding(p, std::move(out));
}

}  // namespace

Encoding apply_phi(const PrimitiveRoot& alpha, const GroupElem& g,
                   const Encoding& e) {
  if (!in_phi_domain(e)) {
    throw std::invalid_argument("apply_phi: encoding outside the phi domain");
  }
  return apply_action(alpha, g, e, ActionKind::kPhi);
}

Encoding apply_psi(const PrimitiveRoot& alpha, const GroupElem& g,
                   const Encoding& e) {
  if (!in_psi_domain(e)) {
    throw std::invalid_argument("apply_psi: encoding outside the psi domain");
  }
  return apply_action(alpha, g, e, ActionKind::kPsi);
}

Encoding expand_id(const PrimitiveRoot& alpha, const EncodingId& id) {
  const Prime p = alpha.prime();
  check_id_range(id, p);
  const Encoding base = id.base == EncodingBase::kEps0
                            ? identity_encoding(p)
                            : transposed_encoding(p);
  const GroupElem g = group_elem(p, id.n, id.beta);
  return id.action == ActionKind::kPhi ? apply_phi(alpha, g, base)
                                       : apply_psi(alpha, g, base);
}

std::vector<EncodingId> all_encoding_ids(Prime p) {
  std::vector<EncodingId> ids;
  const unsigned n_count = exponent_count(p);
  ids.reserve(4 * static_cast<std::size_t>(n_count) * p.value());
  for (EncodingBase base : {EncodingBase::kEps0, EncodingBase::kEps0T}) {
    for (ActionKind action : {ActionKind::kPhi, ActionKind::kPsi}) {
      for (unsigned n = 0; n < n_count; ++n) {
        for (unsigned beta = 0; beta < p.value(); ++beta) {
          ids.push_back(EncodingId{base, action, n, beta});
        }
      }
    }
  }
  return ids;
}

EncodingFamily build_family(Prime p, const PrimitiveRoot& alpha) {
  if (alpha.prime() != p) {
    throw std::invalid_argument("build_family: modulus mismatch");
  }
  EncodingFamily family{p, alpha, {}, {}, {}, 0, 0, 0};

  // The bases are validated once; expansion can then skip the per-apply
  // domain check (it would re-examine the same two tables for every id).
  const Encoding bases[] = {identity_encoding(p), transposed_encoding(p)};
  for (const Encoding& base : bases) {
    if (!in_phi_domain(base) || !in_psi_domain(base)) {
      throw std::logic_error("build_family: base encoding out of domain");
    }
  }

  // Dedup by table hash, confirmed by exact table comparison.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;
  const auto table_hash = [](const std::vector<std::uint16_t>& t) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint16_t e : t) {
      h = (h ^ e) * 0x100000001b3ull;
    }
    return h;
  };

  for (const EncodingId& id : all_encoding_ids(p)) {
    const Encoding& base =
        bases[id.base == EncodingBase::kEps0 ? 0 : 1];
    Encoding e =
        apply_action(alpha, group_elem(p, id.n, id.beta), base, id.action);
    const std::uint64_t h = table_hash(e.packed());
    std::size_t index = family.members.size();
    for (std::size_t candidate : by_hash[h]) {
      if (family.members[candidate] == e) {
        index = candidate;
        break;
      }
    }
    if (index == family.members.size()) {
      by_hash[h].push_back(index);
      family.members.push_back(std::move(e));
      family.member_ids.emplace_back();
    }
    family.member_ids[index].push_back(id);
    family.id_index.emplace(id, index);
  }

  for (const auto& ids : family.member_ids) {
    bool via_phi = false, via_psi = false;
    for (const EncodingId& id : ids) {
      (id.action == ActionKind::kPhi ? via_phi : via_psi) = true;
    }
    if (via_phi && via_psi) {
      ++family.intersection;
    } else if (via_phi) {
      ++family.h1_only;
    } else {
      ++family.h2_only;
    }
  }
  return family;
}

std::optional<LocalParams> solve_local_params(const Encoding& e) {
  const CoordMatrices m = label_coordinate_matrices(e);
  const auto x_split = decompose_rectangle(m.x);
  const auto z_split = decompose_rectangle(m.z);
  if (!x_split || !z_split) return std::nullopt;

  LocalParams params;
  params.xa = x_split->row;
  params.za = z_split->row;
  params.xb.reserve(e.prime().value());
  for (Fp c : x_split->col) params.xb.push_back(-c);  // xa - xb = x(i, j)
  params.zb = z_split->col;
  return params;
}

LocalOp systematic_params(const PrimitiveRoot& alpha, const EncodingId& id,
                          Role role, Fp input) {
  const Prime p = alpha.prime();
  if (input.prime() != p) {
    throw std::invalid_argument("systematic_params: modulus mismatch");
  }
  check_id_range(id, p);

  const Fp zero(0, p);
  const Fp beta(id.beta, p);
  const Fp scaled = alpha_pow(alpha, id.n) * input;
  const Fp inv_scaled =
      alpha_pow(alpha, -static_cast<long long>(id.n)) * input;
  const bool zero_input = input.value() == 0;

  if (id.base == EncodingBase::kEps0) {
    if (id.action == ActionKind::kPhi) {
      return role == Role::kAlice
                 ? LocalOp{scaled, zero}
                 : LocalOp{zero_input ? -beta : zero, inv_scaled};
    }
    return role == Role::kAlice ? LocalOp{scaled, zero_input ? beta : zero}
                                : LocalOp{zero, inv_scaled};
  }
  if (id.action == ActionKind::kPhi) {
    return role == Role::kAlice
               ? LocalOp{zero, scaled}
               : LocalOp{-inv_scaled, zero_input ? beta : zero};
  }
  return role == Role::kAlice ? LocalOp{zero_input ? beta : zero, scaled}
                              : LocalOp{-inv_scaled, zero};
}

std::array<std::array<std::pair<LocalOp, LocalOp>, 4>, 3>
binary_operator_tables() {
  const Prime two(2);
  const LocalOp i{Fp(0, two), Fp(0, two)};
  const LocalOp x{Fp(1, two), Fp(0, two)};
  const LocalOp z{Fp(0, two), Fp(1, two)};
  // Row-major over inputs (a, b); entries are (left qudit, right qudit).
  return {{
      {{{i, i}, {i, z}, {x, i}, {x, z}}},
      {{{i, z}, {i, x}, {z, z}, {z, x}}},
      {{{x, i}, {x, x}, {z, i}, {z, x}}},
  }};
}

std::vector<Encoding> binary_minimal_family() {
  const Prime two(2);
  const auto label_table = [&](std::array<unsigned, 4> packed) {
    return Encoding(two,
                    std::vector<std::uint16_t>(packed.begin(), packed.end()));
  };
  // Label tables (a*2+b packed) matching the operator tables above.
  return {
      label_table({0, 1, 2, 3}),
      label_table({1, 2, 0, 3}),
      label_table({2, 0, 1, 3}),
  };
}

}  // namespace qprod
