// qprod — command-line front end.
//
// Subcommands: run, family, audit, solve, psi, dot, demo-binary.
// Structured output is JSON on stdout; diagnostics go to stderr.
// Exit codes: 0 success, 1 usage or input error, 2 internal consistency
// failure, 3 no local realization exists.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "qprod/audit.hpp"
#include "qprod/encoding.hpp"
#include "qprod/json_io.hpp"
#include "qprod/protocol.hpp"
#include "qprod/qudit.hpp"

namespace {

using qprod::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;
constexpr int kExitNoSolution = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QPROD_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

qprod::ChannelMode parse_mode(const std::string& mode) {
  if (mode == "classical") return qprod::ChannelMode::kClassicalChannel;
  if (mode == "shared") return qprod::ChannelMode::kSharedRandomness;
  throw std::invalid_argument("mode must be classical or shared");
}

std::string op_name(const qprod::LocalOp& op) {
  const unsigned x = op.x.value(), z = op.z.value();
  if (x == 0 && z == 0) return "I";
  if (op.x.modulus() == 2) {
    if (z == 0) return "X";
    if (x == 0) return "Z";
    return "XZ";
  }
  if (z == 0) return "X(" + std::to_string(x) + ")";
  if (x == 0) return "Z(" + std::to_string(z) + ")";
  return "X(" + std::to_string(x) + ")Z(" + std::to_string(z) + ")";
}

std::string state_name(const qprod::BellLabel& label) {
  return "|φ" + std::to_string(label.a.value()) +
         std::to_string(label.b.value()) + "⟩";
}

struct RunOptions {
  unsigned p = 2;
  unsigned a = 0;
  unsigned b = 0;
  std::uint64_t seed = default_seed();
  std::string mode = "classical";
  std::string force_id;
  bool no_numeric_check = false;
  std::string dump_state;
};

int cmd_run(const RunOptions& opt) {
  const qprod::Prime p(opt.p);
  if (opt.a >= opt.p || opt.b >= opt.p) {
    throw std::invalid_argument("inputs must lie in [0, p)");
  }
  qprod::ProtocolConfig cfg = qprod::default_config(p);
  cfg.mode = parse_mode(opt.mode);
  cfg.numeric_check = !opt.no_numeric_check;
  if (cfg.numeric_check && opt.p > 97) {
    throw std::invalid_argument("numeric check supports p <= 97 only");
  }

  std::optional<qprod::EncodingId> forced;
  if (!opt.force_id.empty()) {
    forced = qprod::parse_encoding_id(opt.force_id, p);
  }

  qprod::SeededRng rng(opt.seed);
  const qprod::Transcript t = qprod::run_protocol(
      qprod::Fp(opt.a, p), qprod::Fp(opt.b, p), cfg, rng, nullptr, forced);
  emit(qprod::transcript_to_json(t));

  if (!opt.dump_state.empty()) {
    const qprod::StateVec state = qprod::apply_pair(
        t.alice_op, t.bob_op,
        qprod::bell_state({qprod::Fp(0, p), qprod::Fp(0, p)}));
    std::ofstream out(opt.dump_state);
    out << qprod::state_to_json(state).dump(2) << "\n";
  }

  const bool correct = t.product == qprod::Fp(opt.a, p) * qprod::Fp(opt.b, p);
  return correct ? kExitOk : kExitInternal;
}

struct FamilyOptions {
  unsigned p = 2;
  std::string export_path;
};

int cmd_family(const FamilyOptions& opt) {
  if (opt.p > 97) {
    throw std::invalid_argument("family enumeration supports p <= 97");
  }
  const qprod::Prime p(opt.p);
  const qprod::PrimitiveRoot alpha = qprod::find_primitive_root(p);
  const qprod::EncodingFamily family = qprod::build_family(p, alpha);
  emit(json{{"p", opt.p},
            {"alpha", alpha.element().value()},
            {"size", family.members.size()},
            {"partition",
             {{"h1_only", family.h1_only},
              {"h2_only", family.h2_only},
              {"intersection", family.intersection}}}});
  if (!opt.export_path.empty()) {
    std::ofstream out(opt.export_path);
    if (!out) throw std::invalid_argument("cannot open export path");
    out << qprod::family_to_json(family).dump(2) << "\n";
  }
  return kExitOk;
}

struct AuditOptions {
  unsigned p = 2;
  std::size_t empirical = 0;
  std::uint64_t seed = default_seed();
};

int cmd_audit(const AuditOptions& opt) {
  if (opt.p > 13) {
    throw std::invalid_argument("exhaustive audit supports p <= 13");
  }
  const qprod::Prime p(opt.p);
  const qprod::EncodingFamily family =
      qprod::build_family(p, qprod::find_primitive_root(p));
  const qprod::AuditReport report = qprod::check_privacy(family);

  json out = qprod::audit_report_to_json(report);
  out["privacy_equivalence"] = qprod::privacy_equivalence(family.members);
  bool ok = report.passed && out["privacy_equivalence"].get<bool>();

  if (opt.empirical > 0) {
    qprod::ProtocolConfig cfg = qprod::default_config(p);
    qprod::SeededRng rng(opt.seed);
    const qprod::ChiSquareResult chi = qprod::empirical_chi_square(
        opt.empirical, cfg, rng, qprod::Fp(0, p));
    json empirical = qprod::chi_square_to_json(chi);
    empirical["runs"] = opt.empirical;
    empirical["product"] = 0;
    empirical["seed"] = opt.seed;
    out["empirical"] = std::move(empirical);
    ok = ok && chi.passed;
  }
  emit(out);
  return ok ? kExitOk : kExitInternal;
}

struct SolveOptions {
  std::string path;
  unsigned p = 0;  // 0: take p from the file
};

int cmd_solve(const SolveOptions& opt) {
  std::ifstream in(opt.path);
  if (!in) throw std::invalid_argument("cannot open encoding file");
  json doc = json::parse(in);
  const qprod::Encoding e = qprod::encoding_from_json(doc);
  if (opt.p != 0 && opt.p != e.prime().value()) {
    throw std::invalid_argument("--p disagrees with the encoding file");
  }

  const auto params = qprod::solve_local_params(e);
  if (params) {
    emit(qprod::local_params_to_json(e.prime(), *params));
    return kExitOk;
  }
  const auto mats = qprod::label_coordinate_matrices(e);
  json witness;
  for (const auto& [name, mat] :
       {std::pair{"x", &mats.x}, std::pair{"z", &mats.z}}) {
    if (const auto v = qprod::find_rectangle_violation(*mat)) {
      witness = json{{"coordinate", name},
                     {"i", v->i},
                     {"j", v->j},
                     {"i2", v->i2},
                     {"j2", v->j2}};
      break;
    }
  }
  emit(json{{"p", e.prime().value()},
            {"no_solution", true},
            {"witness", std::move(witness)}});
  return kExitNoSolution;
}

struct PsiOptions {
  unsigned universe = 0;
  std::string a, b;
  std::uint64_t seed = default_seed();
  std::string mode = "classical";
};

std::vector<bool> parse_subset(const std::string& csv, unsigned universe) {
  std::vector<bool> member(universe, false);
  if (csv.empty()) return member;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string tok =
        csv.substr(start, comma == std::string::npos ? comma : comma - start);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("set elements must be integers");
    }
    if (used != tok.size() || v < 1 || v > universe) {
      throw std::invalid_argument("set elements must lie in [1, universe]");
    }
    member[v - 1] = true;
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return member;
}

int cmd_psi(const PsiOptions& opt) {
  if (opt.universe == 0) {
    throw std::invalid_argument("universe size must be positive");
  }
  qprod::ProtocolConfig cfg = qprod::default_config(qprod::Prime(2));
  cfg.mode = parse_mode(opt.mode);
  const std::vector<bool> set_a = parse_subset(opt.a, opt.universe);
  const std::vector<bool> set_b = parse_subset(opt.b, opt.universe);

  qprod::SeededRng rng(opt.seed);
  std::vector<qprod::Transcript> transcripts;
  const auto hits = qprod::psi_intersect(set_a, set_b, cfg, rng, &transcripts);

  json intersection = json::array();
  for (std::size_t k : hits) intersection.push_back(k + 1);
  json ts = json::array();
  for (const auto& t : transcripts) ts.push_back(qprod::transcript_to_json(t));
  emit(json{{"p", 2},
            {"universe", opt.universe},
            {"intersection", std::move(intersection)},
            {"seed", opt.seed},
            {"transcripts", std::move(ts)}});
  return kExitOk;
}

struct DotOptions {
  std::string a, b;
  std::uint64_t seed = default_seed();
  std::string mode = "classical";
};

std::vector<unsigned> parse_bits(const std::string& s) {
  std::vector<unsigned> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("vectors must be strings over {0, 1}");
    }
    bits.push_back(c == '1' ? 1u : 0u);
  }
  return bits;
}

int cmd_dot(const DotOptions& opt) {
  qprod::ProtocolConfig cfg = qprod::default_config(qprod::Prime(2));
  cfg.mode = parse_mode(opt.mode);
  const std::vector<unsigned> a = parse_bits(opt.a);
  const std::vector<unsigned> b = parse_bits(opt.b);

  qprod::SeededRng rng(opt.seed);
  std::vector<qprod::Transcript> transcripts;
  std::vector<std::size_t> perm;
  const unsigned dot = qprod::dot_product(a, b, cfg, rng, &transcripts, &perm);

  json ts = json::array();
  for (const auto& t : transcripts) ts.push_back(qprod::transcript_to_json(t));
  emit(json{{"p", 2},
            {"length", a.size()},
            {"a", opt.a},
            {"b", opt.b},
            {"dot", dot},
            {"permutation", perm},
            {"seed", opt.seed},
            {"transcripts", std::move(ts)}});
  return kExitOk;
}

int cmd_demo_binary(bool as_json) {
  const auto operators = qprod::binary_operator_tables();
  const auto expected = qprod::binary_minimal_family();

  unsigned matches = 0;
  std::vector<std::vector<qprod::BellLabel>> derived(3);
  for (std::size_t k = 0; k < 3; ++k) {
    for (unsigned cell = 0; cell < 4; ++cell) {
      derived[k].push_back(qprod::reduce_to_label(operators[k][cell].first,
                                                  operators[k][cell].second));
      if (derived[k][cell] == expected[k](cell / 2, cell % 2)) ++matches;
    }
  }

  if (as_json) {
    json encodings = json::array();
    for (std::size_t k = 0; k < 3; ++k) {
      json ops = json::array();
      json labels = json::array();
      for (unsigned cell = 0; cell < 4; ++cell) {
        const auto& [left, right] = operators[k][cell];
        ops.push_back(json::array(
            {json{{"x", left.x.value()}, {"z", left.z.value()}},
             json{{"x", right.x.value()}, {"z", right.z.value()}}}));
        labels.push_back(json::array(
            {derived[k][cell].a.value(), derived[k][cell].b.value()}));
      }
      encodings.push_back(
          json{{"operators", std::move(ops)}, {"labels", std::move(labels)}});
    }
    emit(json{{"p", 2},
              {"encodings", std::move(encodings)},
              {"matches", matches},
              {"total", 12}});
  } else {
    for (std::size_t k = 0; k < 3; ++k) {
      std::cout << "encoding " << (k + 1) << "\n";
      std::cout << "         b=0      b=1           b=0     b=1\n";
      for (unsigned a = 0; a < 2; ++a) {
        std::cout << "  a=" << a;
        for (unsigned b = 0; b < 2; ++b) {
          const auto& [left, right] = operators[k][a * 2 + b];
          std::string cell = op_name(left) + "⊗" + op_name(right);
          std::cout << "  " << cell;
          // pad on display width: count code points, not bytes
          std::size_t width = 0;
          for (char c : cell) width += (c & 0xc0) != 0x80;
          for (; width < 7; ++width) std::cout << ' ';
        }
        std::cout << "   ";
        for (unsigned b = 0; b < 2; ++b) {
          std::cout << "  " << state_name(derived[k][a * 2 + b]);
        }
        std::cout << "\n";
      }
    }
    std::cout << "derived states match the expected tables: " << matches
              << "/12\n";
  }
  return matches == 12 ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact simulator and auditor for entangled-pair private "
               "product computation over F_p"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "run one protocol instance");
  run->add_option("--p", run_opt.p, "prime field size")->required();
  run->add_option("--a", run_opt.a, "Alice's input")->required();
  run->add_option("--b", run_opt.b, "Bob's input")->required();
  run->add_option("--seed", run_opt.seed, "random seed");
  run->add_option("--mode", run_opt.mode, "classical|shared");
  run->add_option("--force-id", run_opt.force_id,
                  "encoding id base:action:n:beta (test hook)");
  run->add_flag("--no-numeric-check", run_opt.no_numeric_check,
                "skip the state-vector cross-check");
  run->add_option("--dump-state", run_opt.dump_state,
                  "write the sent two-qudit state as JSON");

  FamilyOptions family_opt;
  auto* family = app.add_subcommand("family", "enumerate the encoding family");
  family->add_option("--p", family_opt.p, "prime field size")->required();
  family->add_option("--export", family_opt.export_path,
                     "write the full family as JSON");

  AuditOptions audit_opt;
  auto* audit = app.add_subcommand("audit", "run the privacy audit");
  audit->add_option("--p", audit_opt.p, "prime field size")->required();
  audit->add_option("--empirical", audit_opt.empirical,
                    "also run N protocol instances and chi-square them");
  audit->add_option("--seed", audit_opt.seed, "random seed");

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand(
      "solve", "solve an encoding table for local operator parameters");
  solve->add_option("file", solve_opt.path, "encoding JSON file")->required();
  solve->add_option("--p", solve_opt.p, "prime field size (cross-check)");

  PsiOptions psi_opt;
  auto* psi = app.add_subcommand("psi", "binary set intersection (p = 2)");
  psi->add_option("--universe", psi_opt.universe, "universe size")->required();
  psi->add_option("--a", psi_opt.a, "Alice's set, e.g. 1,3");
  psi->add_option("--b", psi_opt.b, "Bob's set");
  psi->add_option("--seed", psi_opt.seed, "random seed");
  psi->add_option("--mode", psi_opt.mode, "classical|shared");

  DotOptions dot_opt;
  auto* dot = app.add_subcommand("dot", "binary dot product (p = 2)");
  dot->add_option("--a", dot_opt.a, "Alice's bits, e.g. 110")->required();
  dot->add_option("--b", dot_opt.b, "Bob's bits")->required();
  dot->add_option("--seed", dot_opt.seed, "random seed");
  dot->add_option("--mode", dot_opt.mode, "classical|shared");

  bool demo_json = false;
  auto* demo = app.add_subcommand("demo-binary",
                                  "print the three binary encodings");
  demo->add_flag("--json", demo_json, "emit JSON instead of tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (family->parsed()) return cmd_family(family_opt);
    if (audit->parsed()) return cmd_audit(audit_opt);
    if (solve->parsed()) return cmd_solve(solve_opt);
    if (psi->parsed()) return cmd_psi(psi_opt);
    if (dot->parsed()) return cmd_dot(dot_opt);
    if (demo->parsed()) return cmd_demo_binary(demo_json);
  } catch (const qprod::ProtocolMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
