#pragma once

// JSON wire formats. Keys are emitted in a fixed order so equal inputs give
// byte-identical output.

#include <optional>

#include <nlohmann/json.hpp>

#include "qprod/audit.hpp"
#include "qprod/encoding.hpp"
#include "qprod/protocol.hpp"
#include "qprod/qudit.hpp"

namespace qprod {

using json = nlohmann::ordered_json;

// {"p": int, "amplitudes": [[re, im], ...]} row-major (i, j).
json state_to_json(const StateVec& s);

// {"base": "eps0"|"eps0T", "action": "phi"|"psi", "n": int, "beta": int}
json encoding_id_to_json(const EncodingId& id);
EncodingId encoding_id_from_json(const json& j, Prime p);

// {"p": int, "id": {...}|null, "table": [[a, b], ...]} row-major (i, j).
json encoding_to_json(const Encoding& e,
                      const std::optional<EncodingId>& id = std::nullopt);
Encoding encoding_from_json(const json& j);

// {"p", "size", "partition": {"h1_only", "h2_only", "intersection"},
//  "members": [encoding...]} with each member carrying its first id.
json family_to_json(const EncodingFamily& family);

json transcript_to_json(const Transcript& t);

// {"p", "family_size", "per_target": [{"target", "counts", "c"}, ...],
//  "class_constants": {"zero", "nonzero"}, "passed"}
json audit_report_to_json(const AuditReport& report);

json chi_square_to_json(const ChiSquareResult& r);

// {"p", "xA", "zA", "xB", "zB"} with one entry per input value.
json local_params_to_json(Prime p, const LocalParams& params);

}  // namespace qprod
