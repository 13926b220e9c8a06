#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "qprod/encoding.hpp"
#include "qprod/json_io.hpp"

using namespace qprod;

namespace {

BellLabel label(unsigned a, unsigned b, Prime p) {
  return {Fp(a, p), Fp(b, p)};
}

CoordMatrix matrix(Prime p, std::initializer_list<std::initializer_list<int>> rows) {
  CoordMatrix m{p, Eigen::MatrixXi(p.value(), p.value())};
  unsigned i = 0;
  for (const auto& row : rows) {
    unsigned j = 0;
    for (int v : row) m.entries(i, j++) = v;
    ++i;
  }
  return m;
}

// All p x p matrices over F_p in lexicographic order.
std::vector<CoordMatrix> all_matrices(Prime p) {
  const unsigned pv = p.value();
  const unsigned cells = pv * pv;
  std::size_t total = 1;
  for (unsigned k = 0; k < cells; ++k) total *= pv;
  std::vector<CoordMatrix> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    CoordMatrix m{p, Eigen::MatrixXi(pv, pv)};
    std::size_t rest = code;
    for (unsigned cell = 0; cell < cells; ++cell) {
      m.entries(cell / pv, cell % pv) = static_cast<int>(rest % pv);
      rest /= pv;
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

TEST_CASE("canonical encodings and the product shorthand") {
  const Prime p(5);
  const Encoding eps0 = identity_encoding(p);
  const Encoding eps0t = transposed_encoding(p);
  CHECK(eps0(2, 4) == label(2, 4, p));
  CHECK(eps0t(2, 4) == label(4, 2, p));
  CHECK(is_product_compatible(eps0));
  CHECK(is_product_compatible(eps0t));

  CHECK(product_map(Fp(2, p), Fp(4, p)).value() == 3);
  CHECK(product_map(Fp(0, p), Fp(3, p)).value() == 0);
  CHECK(product_map(Fp(1, p), Fp(3, p)).value() == 3);
}

TEST_CASE("encodings must be bijections") {
  const Prime p(2);
  CHECK_THROWS_AS(Encoding(p, std::vector<std::uint16_t>{0, 0, 1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Encoding(p, std::vector<std::uint16_t>{0, 1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Encoding(p, std::vector<std::uint16_t>{0, 1, 2, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      Encoding(p, std::vector<BellLabel>{label(0, 0, Prime(3)),
                                         label(0, 1, Prime(3)),
                                         label(1, 0, Prime(3)),
                                         label(1, 1, Prime(3))}),
      std::invalid_argument);
}

TEST_CASE("product compatibility fails when a product is wrong") {
  // swap the identity's entries at (0,0) and (1,1): pi(eps(1,1)) becomes 0
  const Prime p(2);
  const Encoding swapped(p, std::vector<std::uint16_t>{3, 1, 2, 0});
  CHECK_FALSE(is_product_compatible(swapped));
}

TEST_CASE("product compatibility agrees with the definitional oracle") {
  for (unsigned pv : {2u, 3u}) {
    const EncodingFamily family =
        build_family(Prime(pv), find_primitive_root(Prime(pv)));
    for (const Encoding& e : family.members) {
      CHECK(is_product_compatible(e));
      CHECK(testing::naive_product_compatible(e));
    }
  }
  SeededRng rng(7);
  for (int k = 0; k < 1000; ++k) {
    const Encoding e = testing::random_bijection(rng, Prime(3));
    CHECK(is_product_compatible(e) == testing::naive_product_compatible(e));
  }
}

TEST_CASE("sum condition holds iff both coordinate matrices are rectangles") {
  SeededRng rng(11);
  const auto check_one = [](const Encoding& e) {
    const CoordMatrices m = label_coordinate_matrices(e);
    const bool rect =
        has_rectangle_property(m.x) && has_rectangle_property(m.z);
    CHECK(testing::naive_sum_condition(e) == rect);
    CHECK(testing::naive_rectangle(m.x) == has_rectangle_property(m.x));
    CHECK(testing::naive_rectangle(m.z) == has_rectangle_property(m.z));
  };
  const EncodingFamily family =
      build_family(Prime(3), find_primitive_root(Prime(3)));
  for (const Encoding& e : family.members) check_one(e);
  for (int k = 0; k < 1000; ++k) {
    check_one(testing::random_bijection(rng, Prime(3)));
  }
}

TEST_CASE("rectangle property basics") {
  const Prime p2(2);
  CHECK(has_rectangle_property(matrix(p2, {{0, 0}, {0, 0}})));
  CHECK_FALSE(has_rectangle_property(matrix(p2, {{0, 0}, {0, 1}})));

  const auto violation =
      find_rectangle_violation(matrix(p2, {{0, 0}, {0, 1}}));
  REQUIRE(violation.has_value());
  // The witness is a genuine counterexample to the quadruple condition.
  const auto m = matrix(p2, {{0, 0}, {0, 1}});
  const int lhs = (m.entries(violation->i, violation->j) +
                   m.entries(violation->i2, violation->j2)) %
                  2;
  const int rhs = (m.entries(violation->i, violation->j2) +
                   m.entries(violation->i2, violation->j)) %
                  2;
  CHECK(lhs != rhs);
}

TEST_CASE("rectangle matrices number p^(2p-1) and split additively") {
  for (unsigned pv : {2u, 3u}) {
    const Prime p(pv);
    std::size_t expected = 1;  // p^(2p-1)
    for (unsigned k = 0; k < 2 * pv - 1; ++k) expected *= pv;

    std::size_t count = 0;
    for (const CoordMatrix& m : all_matrices(p)) {
      const bool rect = has_rectangle_property(m);
      CHECK(rect == testing::naive_rectangle(m));
      if (!rect) continue;
      ++count;
      const auto split = decompose_rectangle(m);
      REQUIRE(split.has_value());
      CHECK(split->col[0].value() == 0);
      for (unsigned i = 0; i < pv; ++i)
        for (unsigned j = 0; j < pv; ++j) {
          CHECK((split->row[i] + split->col[j]).value() ==
                static_cast<unsigned>(m.entries(i, j)));
        }
    }
    CHECK(count == expected);
  }
}

TEST_CASE("phi and psi domains") {
  const Prime p(3);
  CHECK(in_phi_domain(identity_encoding(p)));
  CHECK(in_phi_domain(transposed_encoding(p)));
  CHECK(in_psi_domain(identity_encoding(p)));
  CHECK(in_psi_domain(transposed_encoding(p)));

  // oracle agreement on family members and random bijections
  SeededRng rng(23);
  const EncodingFamily family = build_family(p, find_primitive_root(p));
  for (const Encoding& e : family.members) {
    CHECK(in_phi_domain(e) == testing::naive_phi_domain(e));
    CHECK(in_psi_domain(e) == testing::naive_psi_domain(e));
  }
  for (int k = 0; k < 300; ++k) {
    const Encoding e = testing::random_bijection(rng, p);
    CHECK(in_phi_domain(e) == testing::naive_phi_domain(e));
    CHECK(in_psi_domain(e) == testing::naive_psi_domain(e));
  }

  // every member the phi orbit produces stays in the phi domain
  const PrimitiveRoot alpha = find_primitive_root(p);
  for (unsigned n = 0; n < 2; ++n)
    for (unsigned beta = 0; beta < 3; ++beta) {
      CHECK(in_phi_domain(
          apply_phi(alpha, group_elem(p, n, beta), identity_encoding(p))));
    }
}

TEST_CASE("worked psi action values at p = 5") {
  const Prime p(5);
  const PrimitiveRoot alpha = find_primitive_root(p);
  const Encoding e =
      apply_psi(alpha, group_elem(p, 3, 2), identity_encoding(p));
  CHECK(e(2, 4) == label(1, 3, p));  // (2^3 * 2, 2^-3 * 4)
  CHECK(e(0, 4) == label(0, 0, p));  // (0, 2^-3 * 4 + 2)

  // the group identity acts trivially
  const Encoding same =
      apply_phi(alpha, group_identity(p), transposed_encoding(p));
  CHECK(same == transposed_encoding(p));
}

TEST_CASE("actions reject encodings outside their domain") {
  // a product-incompatible bijection is outside both domains
  const Prime p(2);
  const Encoding bad(p, std::vector<std::uint16_t>{3, 1, 2, 0});
  const PrimitiveRoot alpha = find_primitive_root(p);
  CHECK_THROWS_AS(apply_phi(alpha, group_identity(p), bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_psi(alpha, group_identity(p), bad),
                  std::invalid_argument);
}

TEST_CASE("phi and psi are group actions") {
  // phi composes under the twisted product (n,b)(n',b') = (n+n', a^{n'}b+b').
  // psi shifts its base line by a^{-n}, so its composition law carries the
  // inverse twist instead; conjugating by n -> -n maps one onto the other.
  const auto compose_mirror = [](const PrimitiveRoot& alpha,
                                 const GroupElem& g, const GroupElem& h) {
    const auto flip = [](const GroupElem& e) {
      return GroupElem{-e.n, e.beta};
    };
    return flip(group_compose(alpha, flip(g), flip(h)));
  };

  for (unsigned pv : {3u, 5u}) {
    const Prime p(pv);
    const PrimitiveRoot alpha = find_primitive_root(p);
    std::vector<GroupElem> elems;
    for (unsigned n = 0; n + 1 < pv; ++n)
      for (unsigned beta = 0; beta < pv; ++beta)
        elems.push_back(group_elem(p, n, beta));

    for (const Encoding& base :
         {identity_encoding(p), transposed_encoding(p)}) {
      for (const GroupElem& g : elems)
        for (const GroupElem& h : elems) {
          CHECK(apply_phi(alpha, g, apply_phi(alpha, h, base)) ==
                apply_phi(alpha, group_compose(alpha, g, h), base));
          CHECK(apply_psi(alpha, g, apply_psi(alpha, h, base)) ==
                apply_psi(alpha, compose_mirror(alpha, g, h), base));
        }
    }
  }
}

TEST_CASE("orbits have full size and do not meet") {
  for (unsigned pv : {2u, 3u, 5u, 7u}) {
    const Prime p(pv);
    const PrimitiveRoot alpha = find_primitive_root(p);
    const unsigned n_count = pv == 2 ? 1 : pv - 1;

    for (ActionKind action : {ActionKind::kPhi, ActionKind::kPsi}) {
      std::set<std::vector<std::uint16_t>> orbit0, orbit0t;
      for (unsigned n = 0; n < n_count; ++n)
        for (unsigned beta = 0; beta < pv; ++beta) {
          const GroupElem g = group_elem(p, n, beta);
          if (action == ActionKind::kPhi) {
            orbit0.insert(apply_phi(alpha, g, identity_encoding(p)).packed());
            orbit0t.insert(
                apply_phi(alpha, g, transposed_encoding(p)).packed());
          } else {
            orbit0.insert(apply_psi(alpha, g, identity_encoding(p)).packed());
            orbit0t.insert(
                apply_psi(alpha, g, transposed_encoding(p)).packed());
          }
        }
      // |orbit| = |G| = p (p - 1), with the p = 2 exponent group degenerate
      CHECK(orbit0.size() == static_cast<std::size_t>(n_count) * pv);
      CHECK(orbit0t.size() == static_cast<std::size_t>(n_count) * pv);
      std::vector<std::vector<std::uint16_t>> overlap;
      std::ranges::set_intersection(orbit0, orbit0t,
                                    std::back_inserter(overlap));
      CHECK(overlap.empty());
    }
  }
}

TEST_CASE("family sizes and partition match the closed forms") {
  for (unsigned pv : {2u, 3u, 5u, 7u}) {
    const Prime p(pv);
    const EncodingFamily family = build_family(p, find_primitive_root(p));
    const std::size_t pm1 = pv - 1;
    CHECK(family.members.size() == 2 * pm1 * (2 * pv - 1));
    CHECK(family.h1_only == 2 * pm1 * pm1);
    CHECK(family.h2_only == 2 * pm1 * pm1);
    CHECK(family.intersection == 2 * pm1);
    for (const Encoding& e : family.members) {
      CHECK(is_product_compatible(e));
    }
  }
  CHECK(build_family(Prime(2), find_primitive_root(Prime(2))).members.size() ==
        6);
  CHECK(build_family(Prime(3), find_primitive_root(Prime(3))).members.size() ==
        20);
  CHECK(build_family(Prime(5), find_primitive_root(Prime(5))).members.size() ==
        72);
  CHECK(build_family(Prime(5), find_primitive_root(Prime(5))).intersection ==
        8);
}

TEST_CASE("the id index expands to the member tables") {
  for (unsigned pv : {2u, 3u, 5u}) {
    const Prime p(pv);
    const PrimitiveRoot alpha = find_primitive_root(p);
    const EncodingFamily family = build_family(p, alpha);

    CHECK(family.id_index.size() == all_encoding_ids(p).size());
    for (const auto& [id, index] : family.id_index) {
      CHECK(expand_id(alpha, id) == family.members[index]);
    }
    // overlap members carry exactly one phi id and one psi id, beta = 0
    for (std::size_t k = 0; k < family.members.size(); ++k) {
      const auto& ids = family.member_ids[k];
      const bool phi = std::ranges::any_of(ids, [](const EncodingId& id) {
        return id.action == ActionKind::kPhi;
      });
      const bool psi = std::ranges::any_of(ids, [](const EncodingId& id) {
        return id.action == ActionKind::kPsi;
      });
      if (phi && psi) {
        CHECK(ids.size() == 2);
        CHECK(ids[0].beta == 0);
        CHECK(ids[1].beta == 0);
        CHECK(ids[0].n == ids[1].n);
        CHECK(ids[0].base == ids[1].base);
      } else {
        CHECK(ids.size() == 1);
        CHECK(ids[0].beta != 0);
      }
    }
  }
}

TEST_CASE("solver returns the pinned canonical parameters") {
  const Prime p(3);
  const auto id_params = solve_local_params(identity_encoding(p));
  REQUIRE(id_params.has_value());
  for (unsigned v = 0; v < 3; ++v) {
    CHECK(id_params->xa[v].value() == v);
    CHECK(id_params->za[v].value() == 0);
    CHECK(id_params->xb[v].value() == 0);
    CHECK(id_params->zb[v].value() == v);
  }

  const auto t_params = solve_local_params(transposed_encoding(p));
  REQUIRE(t_params.has_value());
  for (unsigned v = 0; v < 3; ++v) {
    CHECK(t_params->xa[v].value() == 0);
    CHECK(t_params->za[v].value() == v);
    CHECK(t_params->xb[v] == -Fp(v, p));
    CHECK(t_params->zb[v].value() == 0);
  }
}

TEST_CASE("solver round-trips every family member") {
  for (unsigned pv : {2u, 3u, 5u, 7u}) {
    const Prime p(pv);
    const EncodingFamily family = build_family(p, find_primitive_root(p));
    for (const Encoding& e : family.members) {
      const auto params = solve_local_params(e);
      REQUIRE(params.has_value());
      CHECK(params->xb[0].value() == 0);
      CHECK(params->zb[0].value() == 0);
      for (unsigned i = 0; i < pv; ++i)
        for (unsigned j = 0; j < pv; ++j) {
          CHECK(reduce_to_label(params->xa[i], params->za[i], params->xb[j],
                                params->zb[j]) == e(i, j));
        }
    }
  }
}

TEST_CASE("solver rejects tables without the rectangle property") {
  // search a few shuffled bijections for one whose z-matrix violates the
  // rectangle condition, then confirm NoSolution
  SeededRng rng(99);
  const Prime p(3);
  bool found = false;
  for (int k = 0; k < 100 && !found; ++k) {
    const Encoding e = testing::random_bijection(rng, p);
    const CoordMatrices m = label_coordinate_matrices(e);
    if (testing::naive_rectangle(m.x) && testing::naive_rectangle(m.z)) {
      continue;
    }
    found = true;
    CHECK_FALSE(solve_local_params(e).has_value());
  }
  CHECK(found);
}

TEST_CASE("systematic parameters reproduce the worked example operators") {
  const Prime p(5);
  const PrimitiveRoot alpha = find_primitive_root(p);
  const EncodingId id{EncodingBase::kEps0, ActionKind::kPsi, 3, 2};

  const LocalOp alice = systematic_params(alpha, id, Role::kAlice, Fp(2, p));
  CHECK(alice == LocalOp{Fp(1, p), Fp(0, p)});  // X(2^3 * 2) Z(0) = X(1)

  const LocalOp bob = systematic_params(alpha, id, Role::kBob, Fp(4, p));
  CHECK(bob == LocalOp{Fp(0, p), Fp(3, p)});  // X(0) Z(2^-3 * 4) = Z(3)

  const LocalOp alice0 = systematic_params(alpha, id, Role::kAlice, Fp(0, p));
  CHECK(alice0 == LocalOp{Fp(0, p), Fp(2, p)});  // zero input picks up beta
}

TEST_CASE("systematic parameters realize every id exactly") {
  for (unsigned pv : {2u, 3u, 5u}) {
    const Prime p(pv);
    const PrimitiveRoot alpha = find_primitive_root(p);
    for (const EncodingId& id : all_encoding_ids(p)) {
      const Encoding table = expand_id(alpha, id);
      for (unsigned a = 0; a < pv; ++a)
        for (unsigned b = 0; b < pv; ++b) {
          const LocalOp alice =
              systematic_params(alpha, id, Role::kAlice, Fp(a, p));
          const LocalOp bob =
              systematic_params(alpha, id, Role::kBob, Fp(b, p));
          CHECK(reduce_to_label(alice, bob) == table(a, b));
        }
    }
  }
}

TEST_CASE("binary family tables") {
  const Prime p(2);
  const auto family = binary_minimal_family();
  REQUIRE(family.size() == 3);

  CHECK(family[0](1, 1) == label(1, 1, p));
  CHECK(family[1](1, 0) == label(0, 0, p));
  CHECK(family[1](0, 1) == label(1, 0, p));
  CHECK(family[2](0, 0) == label(1, 0, p));
  CHECK(family[2](0, 1) == label(0, 0, p));

  // operator tables reduce exactly to the label tables, all 12 entries
  const auto operators = binary_operator_tables();
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(is_product_compatible(family[k]));
    for (unsigned a = 0; a < 2; ++a)
      for (unsigned b = 0; b < 2; ++b) {
        const auto& [left, right] = operators[k][a * 2 + b];
        CHECK(reduce_to_label(left, right) == family[k](a, b));
      }
  }
}

TEST_CASE("encoding id strings") {
  const Prime p(5);
  const EncodingId id{EncodingBase::kEps0, ActionKind::kPsi, 3, 2};
  CHECK(to_string(id) == "eps0:psi:3:2");
  CHECK(parse_encoding_id("eps0:psi:3:2", p) == id);
  CHECK(parse_encoding_id("eps0T:phi:0:4", p) ==
        EncodingId{EncodingBase::kEps0T, ActionKind::kPhi, 0, 4});
  CHECK_THROWS_AS(parse_encoding_id("eps1:psi:3:2", p),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_encoding_id("eps0:rho:3:2", p),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_encoding_id("eps0:psi:4:2", p),
                  std::invalid_argument);  // n out of range
  CHECK_THROWS_AS(parse_encoding_id("eps0:psi:3:5", p),
                  std::invalid_argument);  // beta out of range
  CHECK_THROWS_AS(parse_encoding_id("eps0:psi:3", p), std::invalid_argument);
  // p = 2 forces n = 0
  CHECK_THROWS_AS(parse_encoding_id("eps0:phi:1:0", Prime(2)),
                  std::invalid_argument);
}

TEST_CASE("encoding JSON round-trip and family export shape") {
  const Prime p(3);
  const PrimitiveRoot alpha = find_primitive_root(p);
  const EncodingId id{EncodingBase::kEps0T, ActionKind::kPhi, 1, 2};
  const Encoding e = expand_id(alpha, id);

  const json j = encoding_to_json(e, id);
  CHECK(j["p"] == 3);
  CHECK(j["id"]["base"] == "eps0T");
  CHECK(j["id"]["action"] == "phi");
  CHECK(j["table"].size() == 9);
  CHECK(encoding_from_json(j) == e);
  CHECK(encoding_id_from_json(j["id"], p) == id);

  const json bare = encoding_to_json(e);
  CHECK(bare["id"].is_null());

  json broken = j;
  broken["table"][0] = json::array({0, 0});
  broken["table"][1] = json::array({0, 0});
  CHECK_THROWS_AS(encoding_from_json(broken), std::invalid_argument);

  const EncodingFamily family = build_family(p, alpha);
  const json fam = family_to_json(family);
  CHECK(fam["size"] == 20);
  CHECK(fam["partition"]["h1_only"] == 8);
  CHECK(fam["partition"]["h2_only"] == 8);
  CHECK(fam["partition"]["intersection"] == 4);
  CHECK(fam["members"].size() == 20);
  for (const auto& member : fam["members"]) {
    CHECK(encoding_from_json(member).prime() == p);
  }
}
