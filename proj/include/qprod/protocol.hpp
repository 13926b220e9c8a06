#pragma once

// The three-party product protocol over simulated channels.
//
// One run: Alice samples an encoding id (T1/T2/T3 trit scheme, uniform over
// the family), tells Bob over the classical channel (or both derive it from
// shared randomness), both apply their systematic local operator to one half
// of |phi_00>, both halves go to Charlie, who measures in the entangled
// basis and reads the product off the outcome label.
//
// Channels available: classical Alice->Bob, quantum Alice->Charlie and
// Bob->Charlie. Nothing else; in particular Charlie never receives classical
// data and Bob never talks back.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprod/encoding.hpp"
#include "qprod/field.hpp"
#include "qprod/qudit.hpp"
#include "qprod/rng.hpp"

namespace qprod {

enum class ChannelMode : std::uint8_t { kClassicalChannel, kSharedRandomness };
enum class Party : std::uint8_t { kAlice, kBob, kCharlie };
enum class MessageKind : std::uint8_t { kClassical, kQuantum };

struct ChannelMessage {
  Party from;
  Party to;
  MessageKind kind;
  std::string payload;
};

struct ChannelLog {
  std::vector<ChannelMessage> messages;
};

struct ProtocolConfig {
  Prime p;
  PrimitiveRoot alpha;
  ChannelMode mode = ChannelMode::kClassicalChannel;
  bool numeric_check = false;  // also run the state-vector path and compare
};

ProtocolConfig default_config(Prime p);

// Everything observable about one run.
struct Transcript {
  Prime p;
  Fp a;
  Fp b;
  EncodingId encoding_id;
  LocalOp alice_op;
  LocalOp bob_op;
  BellLabel sent_label;
  BellLabel measured_label;
  Fp product;
  ChannelMode mode;
  std::uint64_t seed;
};

// Raised when the numeric measurement disagrees with the symbolic label.
class ProtocolMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Uniform draw over the family: first a trit T with Pr[T=1] = Pr[T=2] =
// (p-1)/(2p-1) and Pr[T=3] = 1/(2p-1), then (base, n, beta) uniformly within
// the class (T=1: phi with beta != 0, T=2: psi with beta != 0, T=3: phi with
// beta = 0). The induced distribution over member tables is exactly uniform.
EncodingId sample_encoding_id(SeededRng& rng, Prime p,
                              const PrimitiveRoot& alpha);

using EncodingSampler = std::function<EncodingId(SeededRng&)>;

// One protocol run. forced_id bypasses sampling (test hook); log, when
// given, receives the channel traffic.
Transcript run_protocol(Fp a, Fp b, const ProtocolConfig& cfg, SeededRng& rng,
                        ChannelLog* log = nullptr,
                        const std::optional<EncodingId>& forced_id =
                            std::nullopt);

// Binary set intersection: one protocol instance per universe element,
// membership bits as inputs. Returns the indices decoded as 1. Requires
// p = 2. Component k runs on the child stream split(k) of rng.
std::vector<std::size_t> psi_intersect(const std::vector<bool>& set_a,
                                       const std::vector<bool>& set_b,
                                       const ProtocolConfig& cfg,
                                       SeededRng& rng,
                                       std::vector<Transcript>* transcripts =
                                           nullptr,
                                       ChannelLog* log = nullptr);

// Binary dot product: Alice samples a permutation of the component order,
// shares it with Bob, and the components are run (and sent to Charlie) in
// permuted order, so Charlie learns only how many components decode to 1.
// Entries must be 0/1 and lengths must match; requires p = 2.
unsigned dot_product(const std::vector<unsigned>& vec_a,
                     const std::vector<unsigned>& vec_b,
                     const ProtocolConfig& cfg, SeededRng& rng,
                     std::vector<Transcript>* transcripts = nullptr,
                     std::vector<std::size_t>* permutation_out = nullptr,
                     ChannelLog* log = nullptr);

}  // namespace qprod
