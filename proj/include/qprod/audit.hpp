#pragma once

// Brute-force and statistical verification of the privacy claims.
//
// The counting audits work on encoding tables alone (integer arithmetic
// only), so a bug in the family constructor cannot certify itself. The
// statistical audit runs the actual protocol and compares Charlie's label
// frequencies against the exact enumeration-derived distribution.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qprod/encoding.hpp"
#include "qprod/protocol.hpp"

namespace qprod {

// Cells (i, j) with i * j = v, in row-major order.
std::vector<std::pair<unsigned, unsigned>> product_fiber(Prime p, Fp v);

// For each cell of target's fiber, how many members map that cell to target.
std::map<std::pair<unsigned, unsigned>, std::size_t> preimage_counts(
    const std::vector<Encoding>& members, const BellLabel& target);

struct TargetReport {
  BellLabel target;
  // Fiber cells in row-major order with their counts.
  std::vector<std::pair<std::pair<unsigned, unsigned>, std::size_t>> counts;
  std::optional<std::size_t> constant;  // nullopt when counts differ
};

struct AuditReport {
  Prime p;
  std::size_t family_size;
  std::vector<TargetReport> per_target;  // all targets, row-major
  // Shared constant across all zero-product (resp. nonzero-product)
  // targets; nullopt when mixed.
  std::optional<std::size_t> zero_class_constant;
  std::optional<std::size_t> nonzero_class_constant;
  bool passed;  // every target has a constant fiber count
};

// The privacy audit: a family hides everything beyond the product iff for
// every output label the preimage count is constant over the label's
// product fiber.
AuditReport check_privacy(const std::vector<Encoding>& members);
AuditReport check_privacy(const EncodingFamily& family);

// Exact distribution of the output label for one input cell under a
// uniformly drawn member; probabilities are counts over a common
// denominator, so the audit path stays in integer arithmetic.
struct LabelDistribution {
  Prime p;
  std::size_t denominator;  // number of members
  std::map<BellLabel, std::size_t> counts;
};
LabelDistribution output_distribution(const std::vector<Encoding>& members,
                                      unsigned i, unsigned j);

// True iff input cells with equal product have identical output
// distributions.
bool privacy_equivalence(const std::vector<Encoding>& members);

struct ChiSquareResult {
  double statistic;
  unsigned degrees_of_freedom;
  double threshold;
  bool passed;  // statistic <= threshold
};

// Critical value c with P(X <= c) = 1 - significance for a chi-square
// variable with the given degrees of freedom.
double chi_square_critical(unsigned degrees_of_freedom, double significance);

// Runs the protocol n_runs times with inputs uniform over the fiber of
// product_value and chi-square-tests the observed (input, label) pairs
// against the exact conditional distribution at significance 0.01,
// stratified by input cell. A non-null sampler replaces the uniform
// encoding draw (negative-control hook).
ChiSquareResult empirical_chi_square(std::size_t n_runs,
                                     const ProtocolConfig& cfg,
                                     SeededRng& rng, Fp product_value,
                                     const EncodingSampler& sampler = {});

}  // namespace qprod
