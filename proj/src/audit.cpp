#include "qprod/audit.hpp"

#include <cmath>
#include <limits>

namespace qprod {

std::vector<std::pair<unsigned, unsigned>> product_fiber(Prime p, Fp v) {
  if (v.prime() != p) {
    throw std::invalid_argument("product_fiber: modulus mismatch");
  }
  std::vector<std::pair<unsigned, unsigned>> cells;
  const unsigned pv = p.value();
  for (unsigned i = 0; i < pv; ++i) {
    for (unsigned j = 0; j < pv; ++j) {
      if (i * j % pv == v.value()) cells.emplace_back(i, j);
    }
  }
  return cells;
}

std::map<std::pair<unsigned, unsigned>, std::size_t> preimage_counts(
    const std::vector<Encoding>& members, const BellLabel& target) {
  const Prime p = target.a.prime();
  std::map<std::pair<unsigned, unsigned>, std::size_t> counts;
  const std::uint16_t packed_target =
      static_cast<std::uint16_t>(target.a.value() * p.value() +
                                 target.b.value());
  for (const auto& cell : product_fiber(p, product_map(target))) {
    std::size_t n = 0;
    for (const Encoding& e : members) {
      if (e.prime() != p) {
        throw std::invalid_argument("preimage_counts: modulus mismatch");
      }
      if (e.packed_at(cell.first, cell.second) == packed_target) ++n;
    }
    counts[cell] = n;
  }
  return counts;
}

AuditReport check_privacy(const std::vector<Encoding>& members) {
  if (members.empty()) {
    throw std::invalid_argument("check_privacy: empty family");
  }
  const Prime p = members.front().prime();
  AuditReport report{p, members.size(), {}, std::nullopt, std::nullopt, true};

  bool zero_mixed = false, nonzero_mixed = false;
  for (unsigned a = 0; a < p.value(); ++a) {
    for (unsigned b = 0; b < p.value(); ++b) {
      const BellLabel target{Fp(a, p), Fp(b, p)};
      TargetReport tr{target, {}, std::nullopt};
      for (const auto& [cell, n] : preimage_counts(members, target)) {
        tr.counts.emplace_back(cell, n);
      }
      bool constant = true;
      for (const auto& [cell, n] : tr.counts) {
        constant = constant && n == tr.counts.front().second;
      }
      if (constant) tr.constant = tr.counts.front().second;
      report.passed = report.passed && constant;

      auto& class_constant = product_map(target).value() == 0
                                 ? report.zero_class_constant
                                 : report.nonzero_class_constant;
      bool& mixed =
          product_map(target).value() == 0 ? zero_mixed : nonzero_mixed;
      if (!constant || (class_constant && *class_constant != *tr.constant)) {
        mixed = true;
      } else if (!class_constant) {
        class_constant = tr.constant;
      }
      report.per_target.push_back(std::move(tr));
    }
  }
  if (zero_mixed) report.zero_class_constant = std::nullopt;
  if (nonzero_mixed) report.nonzero_class_constant = std::nullopt;
  return report;
}

AuditReport check_privacy(const EncodingFamily& family) {
  return check_privacy(family.members);
}

LabelDistribution output_distribution(const std::vector<Encoding>& members,
                                      unsigned i, unsigned j) {
  if (members.empty()) {
    throw std::invalid_argument("output_distribution: empty family");
  }
  const Prime p = members.front().prime();
  if (i >= p.value() || j >= p.value()) {
    throw std::invalid_argument("output_distribution: cell out of range");
  }
  LabelDistribution dist{p, members.size(), {}};
  for (const Encoding& e : members) {
    ++dist.counts[e(i, j)];
  }
  return dist;
}

bool privacy_equivalence(const std::vector<Encoding>& members) {
  if (members.empty()) {
    throw std::invalid_argument("privacy_equivalence: empty family");
  }
  const Prime p = members.front().prime();
  for (unsigned v = 0; v < p.value(); ++v) {
    const auto fiber = product_fiber(p, Fp(v, p));
    const LabelDistribution first =
        output_distribution(members, fiber.front().first,
                            fiber.front().second);
    for (std::size_t k = 1; k < fiber.size(); ++k) {
      const LabelDistribution other =
          output_distribution(members, fiber[k].first, fiber[k].second);
      if (other.counts != first.counts) return false;
    }
  }
  return true;
}

namespace {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    // series expansion
    double term = 1.0 / a;
    double sum = term;
    double denom = a;
    for (int k = 0; k < 1000; ++k) {
      denom += 1.0;
      term *= x / denom;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(log_prefactor);
  }
  // continued fraction (modified Lentz) for the upper tail Q
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 1000; ++k) {
    const double an = -static_cast<double>(k) * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

double chi_square_cdf(double x, unsigned dof) {
  return gamma_p(dof / 2.0, x / 2.0);
}

}  // namespace

double chi_square_critical(unsigned degrees_of_freedom, double significance) {
  if (degrees_of_freedom == 0 || significance <= 0.0 || significance >= 1.0) {
    throw std::invalid_argument("chi_square_critical: bad arguments");
  }
  const double target = 1.0 - significance;
  double lo = 0.0, hi = 1.0;
  while (chi_square_cdf(hi, degrees_of_freedom) < target) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(mid, degrees_of_freedom) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ChiSquareResult empirical_chi_square(std::size_t n_runs,
                                     const ProtocolConfig& cfg,
                                     SeededRng& rng, Fp product_value,
                                     const EncodingSampler& sampler) {
  if (n_runs < 1000) {
    throw std::invalid_argument("empirical_chi_square: need >= 1000 runs");
  }
  const Prime p = cfg.p;
  const EncodingFamily family = build_family(p, cfg.alpha);
  const auto fiber = product_fiber(p, product_value);

  // Exact joint distribution of (input cell, output label) with the cell
  // uniform over the fiber and the member uniform over the family. The test
  // is stratified by cell: the label frequencies *given each input* must
  // match the enumerated distribution. The cell-marginalized label
  // frequencies would be too weak; a sampler restricted to one orbit class
  // still produces uniform labels overall and only the per-input
  // distributions reveal it.
  std::map<std::pair<std::size_t, BellLabel>, std::size_t> exact;
  for (std::size_t c = 0; c < fiber.size(); ++c) {
    const LabelDistribution d =
        output_distribution(family.members, fiber[c].first, fiber[c].second);
    for (const auto& [label, n] : d.counts) exact[{c, label}] += n;
  }
  const double total =
      static_cast<double>(fiber.size()) * family.members.size();

  std::map<std::pair<std::size_t, BellLabel>, std::size_t> observed;
  for (std::size_t run = 0; run < n_runs; ++run) {
    const std::size_t c = rng.uniform_below(fiber.size());
    const EncodingId id =
        sampler ? sampler(rng) : sample_encoding_id(rng, p, cfg.alpha);
    const Transcript t =
        run_protocol(Fp(fiber[c].first, p), Fp(fiber[c].second, p), cfg, rng,
                     nullptr, id);
    ++observed[{c, t.measured_label}];
  }

  ChiSquareResult result{0.0, 0, 0.0, false};
  result.degrees_of_freedom = static_cast<unsigned>(exact.size()) - 1;
  for (const auto& [key, numerator] : exact) {
    const double expected =
        static_cast<double>(n_runs) * static_cast<double>(numerator) / total;
    const auto it = observed.find(key);
    const double obs =
        it == observed.end() ? 0.0 : static_cast<double>(it->second);
    result.statistic += (obs - expected) * (obs - expected) / expected;
    if (it != observed.end()) observed.erase(it);
  }
  if (!observed.empty()) {
    // some (input, label) pair outside the exact support was observed
    result.statistic = std::numeric_limits<double>::infinity();
  }
  result.threshold = chi_square_critical(result.degrees_of_freedom, 0.01);
  result.passed = result.statistic <= result.threshold;
  return result;
}

}  // namespace qprod
