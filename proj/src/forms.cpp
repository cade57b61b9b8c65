#include "ldg/forms.hpp"

#include <stdexcept>

namespace ldg {

std::string to_string(PenaltyScaling p) { return p == PenaltyScaling::local ? "local" : "global"; }

PenaltyScaling penalty_scaling_from_string(const std::string& s) {
  if (s == "local") return PenaltyScaling::local;
  if (s == "global") return PenaltyScaling::global;
  throw std::invalid_argument("penalty scaling must be 'local' or 'global', got '" + s + "'");
}

FormParams FormParams::defaults(int k) { return FormParams{10.0 * k * k, -1, PenaltyScaling::local}; }

void FormParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("penalty parameter sigma must be positive");
  if (lambda < -1 || lambda > 1)
    throw std::invalid_argument("lambda must be one of -1, 0, 1, got " + std::to_string(lambda));
}

double FormParams::penalty_weight(const Mesh& m, const Edge& e) const {
  return sigma / (penalty == PenaltyScaling::local ? e.length : m.h);
}

}  // namespace ldg
