#include "qprod/json_io.hpp"

namespace qprod {

namespace {

json label_to_json(const BellLabel& label) {
  return json::array({label.a.value(), label.b.value()});
}

std::string mode_name(ChannelMode mode) {
  return mode == ChannelMode::kClassicalChannel ? "classical" : "shared";
}

json fp_array(const std::vector<Fp>& values) {
  json out = json::array();
  for (Fp v : values) out.push_back(v.value());
  return out;
}

}  // namespace

json state_to_json(const StateVec& s) {
  json amps = json::array();
  for (Eigen::Index k = 0; k < s.amplitudes().size(); ++k) {
    const auto& a = s.amplitudes()(k);
    amps.push_back(json::array({a.real(), a.imag()}));
  }
  return json{{"p", s.prime().value()}, {"amplitudes", std::move(amps)}};
}

json encoding_id_to_json(const EncodingId& id) {
  return json{
      {"base", id.base == EncodingBase::kEps0 ? "eps0" : "eps0T"},
      {"action", id.action == ActionKind::kPhi ? "phi" : "psi"},
      {"n", id.n},
      {"beta", id.beta},
  };
}

EncodingId encoding_id_from_json(const json& j, Prime p) {
  const std::string base = j.at("base").get<std::string>();
  const std::string action = j.at("action").get<std::string>();
  return parse_encoding_id(base + ":" + action + ":" +
                               std::to_string(j.at("n").get<unsigned>()) +
                               ":" +
                               std::to_string(j.at("beta").get<unsigned>()),
                           p);
}

json encoding_to_json(const Encoding& e,
                      const std::optional<EncodingId>& id) {
  json table = json::array();
  const unsigned pv = e.prime().value();
  for (unsigned i = 0; i < pv; ++i) {
    for (unsigned j = 0; j < pv; ++j) {
      table.push_back(label_to_json(e(i, j)));
    }
  }
  return json{{"p", pv},
              {"id", id ? encoding_id_to_json(*id) : json(nullptr)},
              {"table", std::move(table)}};
}

Encoding encoding_from_json(const json& j) {
  const Prime p(j.at("p").get<unsigned>());
  const auto& table = j.at("table");
  std::vector<BellLabel> labels;
  labels.reserve(table.size());
  for (const auto& entry : table) {
    if (!entry.is_array() || entry.size() != 2) {
      throw std::invalid_argument("encoding json: table entries are [a, b]");
    }
    labels.push_back(BellLabel{Fp(entry[0].get<long long>(), p),
                               Fp(entry[1].get<long long>(), p)});
  }
  return Encoding(p, labels);
}

json family_to_json(const EncodingFamily& family) {
  json members = json::array();
  for (std::size_t k = 0; k < family.members.size(); ++k) {
    members.push_back(encoding_to_json(family.members[k],
                                       family.member_ids[k].front()));
  }
  return json{{"p", family.p.value()},
              {"size", family.members.size()},
              {"partition",
               {{"h1_only", family.h1_only},
                {"h2_only", family.h2_only},
                {"intersection", family.intersection}}},
              {"members", std::move(members)}};
}

json transcript_to_json(const Transcript& t) {
  return json{{"p", t.p.value()},
              {"a", t.a.value()},
              {"b", t.b.value()},
              {"encoding_id", encoding_id_to_json(t.encoding_id)},
              {"alice_op", {{"x", t.alice_op.x.value()},
                            {"z", t.alice_op.z.value()}}},
              {"bob_op", {{"x", t.bob_op.x.value()},
                          {"z", t.bob_op.z.value()}}},
              {"sent_label", label_to_json(t.sent_label)},
              {"measured_label", label_to_json(t.measured_label)},
              {"product", t.product.value()},
              {"mode", mode_name(t.mode)},
              {"seed", t.seed}};
}

json audit_report_to_json(const AuditReport& report) {
  json per_target = json::array();
  for (const TargetReport& tr : report.per_target) {
    json counts = json::array();
    for (const auto& [cell, n] : tr.counts) {
      counts.push_back(json::array(
          {json::array({cell.first, cell.second}), n}));
    }
    per_target.push_back(json{
        {"target", label_to_json(tr.target)},
        {"counts", std::move(counts)},
        {"c", tr.constant ? json(*tr.constant) : json(nullptr)},
    });
  }
  return json{
      {"p", report.p.value()},
      {"family_size", report.family_size},
      {"per_target", std::move(per_target)},
      {"class_constants",
       {{"zero", report.zero_class_constant ? json(*report.zero_class_constant)
                                            : json(nullptr)},
        {"nonzero", report.nonzero_class_constant
                        ? json(*report.nonzero_class_constant)
                        : json(nullptr)}}},
      {"passed", report.passed},
  };
}

json chi_square_to_json(const ChiSquareResult& r) {
  return json{{"statistic", r.statistic},
              {"degrees_of_freedom", r.degrees_of_freedom},
              {"threshold", r.threshold},
              {"passed", r.passed}};
}

json local_params_to_json(Prime p, const LocalParams& params) {
  return json{{"p", p.value()},
              {"xA", fp_array(params.xa)},
              {"zA", fp_array(params.za)},
              {"xB", fp_array(params.xb)},
              {"zB", fp_array(params.zb)}};
}

}  // namespace qprod
