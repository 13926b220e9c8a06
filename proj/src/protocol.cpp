#include "qprod/protocol.hpp"

#include <numeric>

namespace qprod {

namespace {

void require_binary(const ProtocolConfig& cfg, const char* what) {
  if (cfg.p.value() != 2) {
    throw std::invalid_argument(std::string(what) + ": requires p = 2");
  }
}

void log_message(ChannelLog* log, Party from, Party to, MessageKind kind,
                 std::string payload) {
  if (log) log->messages.push_back({from, to, kind, std::move(payload)});
}

}  // namespace

ProtocolConfig default_config(Prime p) {
  return {p, find_primitive_root(p), ChannelMode::kClassicalChannel, false};
}

EncodingId sample_encoding_id(SeededRng& rng, Prime p,
                              const PrimitiveRoot& alpha) {
  if (alpha.prime() != p) {
    throw std::invalid_argument("sample_encoding_id: modulus mismatch");
  }
  const unsigned pv = p.value();
  const unsigned n_count = pv == 2 ? 1u : pv - 1;

  const std::uint64_t trit = rng.uniform_below(2 * pv - 1);
  const EncodingBase base = rng.uniform_below(2) == 0 ? EncodingBase::kEps0
                                                      : EncodingBase::kEps0T;
  const unsigned n = static_cast<unsigned>(rng.uniform_below(n_count));
  if (trit < pv - 1) {
    // phi with beta != 0
    const unsigned beta = 1 + static_cast<unsigned>(rng.uniform_below(pv - 1));
    return {base, ActionKind::kPhi, n, beta};
  }
  if (trit < 2 * (pv - 1)) {
    // psi with beta != 0
    const unsigned beta = 1 + static_cast<unsigned>(rng.uniform_below(pv - 1));
    return {base, ActionKind::kPsi, n, beta};
  }
  // the overlap class, phi with beta = 0
  return {base, ActionKind::kPhi, n, 0};
}

Transcript run_protocol(Fp a, Fp b, const ProtocolConfig& cfg, SeededRng& rng,
                        ChannelLog* log,
                        const std::optional<EncodingId>& forced_id) {
  if (a.prime() != cfg.p || b.prime() != cfg.p) {
    throw std::invalid_argument("run_protocol: input modulus mismatch");
  }

  // Step 1: agree on the encoding. Under shared randomness both parties run
  // the same derivation on the shared stream, so no message is needed.
  const EncodingId id =
      forced_id ? *forced_id : sample_encoding_id(rng, cfg.p, cfg.alpha);
  if (cfg.mode == ChannelMode::kClassicalChannel) {
    log_message(log, Party::kAlice, Party::kBob, MessageKind::kClassical,
                "encoding " + to_string(id));
  }

  // Step 2: local operations, each a function of the owner's input only.
  const LocalOp alice_op =
      systematic_params(cfg.alpha, id, Role::kAlice, a);
  const LocalOp bob_op = systematic_params(cfg.alpha, id, Role::kBob, b);
  const BellLabel sent = reduce_to_label(alice_op, bob_op);

  // Step 3: both halves to Charlie, who measures.
  log_message(log, Party::kAlice, Party::kCharlie, MessageKind::kQuantum,
              "qudit");
  log_message(log, Party::kBob, Party::kCharlie, MessageKind::kQuantum,
              "qudit");

  BellLabel measured = sent;
  if (cfg.numeric_check) {
    const StateVec state =
        apply_pair(alice_op, bob_op,
                   bell_state({Fp(0, cfg.p), Fp(0, cfg.p)}));
    measured = bell_measure(state, rng);
    if (measured != sent) {
      throw ProtocolMismatchError(
          "run_protocol: numeric measurement disagrees with symbolic label "
          "(id " +
          to_string(id) + ")");
    }
  }

  const Fp product = product_map(measured);
  return Transcript{cfg.p,   a,        b,       id,       alice_op, bob_op,
                    sent,    measured, product, cfg.mode, rng.seed()};
}

std::vector<std::size_t> psi_intersect(const std::vector<bool>& set_a,
                                       const std::vector<bool>& set_b,
                                       const ProtocolConfig& cfg,
                                       SeededRng& rng,
                                       std::vector<Transcript>* transcripts,
                                       ChannelLog* log) {
  require_binary(cfg, "psi_intersect");
  if (set_a.size() != set_b.size()) {
    throw std::invalid_argument("psi_intersect: universe size mismatch");
  }
  std::vector<std::size_t> intersection;
  for (std::size_t k = 0; k < set_a.size(); ++k) {
    SeededRng child = rng.split(k);
    const Transcript t =
        run_protocol(Fp(set_a[k] ? 1 : 0, cfg.p), Fp(set_b[k] ? 1 : 0, cfg.p),
                     cfg, child, log);
    if (t.product.value() == 1) intersection.push_back(k);
    if (transcripts) transcripts->push_back(t);
  }
  return intersection;
}

unsigned dot_product(const std::vector<unsigned>& vec_a,
                     const std::vector<unsigned>& vec_b,
                     const ProtocolConfig& cfg, SeededRng& rng,
                     std::vector<Transcript>* transcripts,
                     std::vector<std::size_t>* permutation_out,
                     ChannelLog* log) {
  require_binary(cfg, "dot_product");
  if (vec_a.size() != vec_b.size()) {
    throw std::invalid_argument("dot_product: length mismatch");
  }
  for (std::size_t k = 0; k < vec_a.size(); ++k) {
    if (vec_a[k] > 1 || vec_b[k] > 1) {
      throw std::invalid_argument("dot_product: entries must be 0 or 1");
    }
  }

  // Alice samples the component order and (classically) shares it; under
  // shared randomness Bob derives it from the same stream.
  std::vector<std::size_t> perm(vec_a.size());
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(rng, perm);
  if (cfg.mode == ChannelMode::kClassicalChannel) {
    std::string payload = "permutation";
    for (std::size_t v : perm) payload += ' ' + std::to_string(v);
    log_message(log, Party::kAlice, Party::kBob, MessageKind::kClassical,
                payload);
  }
  if (permutation_out) *permutation_out = perm;

  unsigned count = 0;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    SeededRng child = rng.split(k);
    const std::size_t c = perm[k];
    const Transcript t = run_protocol(Fp(vec_a[c], cfg.p), Fp(vec_b[c], cfg.p),
                                      cfg, child, log);
    count += t.product.value();
    if (transcripts) transcripts->push_back(t);
  }
  return count;
}

}  // namespace qprod
