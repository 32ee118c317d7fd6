#pragma once

#include <stdexcept>
#include <string>

namespace slopeforge {

enum class errc {
  ring_mismatch,
  length_mismatch,
  domain_mismatch,
  base_mismatch,
  precision_exhausted,
  not_full_rank,
  zero_object,
  bounded_search_inconclusive,
  search_budget_exceeded,
  step_budget_exceeded,
  verification_failed,
  no_adapted_basis,
  non_transitive_action,
  non_integral_filtration,
  not_diagonalizable,
  not_weakly_admissible,
  schema_error,
  parse_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::ring_mismatch: return "RingMismatch";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::base_mismatch: return "BaseMismatch";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::not_full_rank: return "NotFullRank";
    case errc::zero_object: return "ZeroObject";
    case errc::bounded_search_inconclusive: return "BoundedSearchInconclusive";
    case errc::search_budget_exceeded: return "SearchBudgetExceeded";
    case errc::step_budget_exceeded: return "StepBudgetExceeded";
    case errc::verification_failed: return "VerificationFailed";
    case errc::no_adapted_basis: return "NoAdaptedBasis";
    case errc::non_transitive_action: return "NonTransitiveAction";
    case errc::non_integral_filtration: return "NonIntegralFiltration";
    case errc::not_diagonalizable: return "NotDiagonalizable";
    case errc::not_weakly_admissible: return "NotWeaklyAdmissible";
    case errc::schema_error: return "SchemaError";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

class kernel_error : public std::runtime_error {
 public:
  kernel_error(errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) {
  throw kernel_error(c, msg);
}

}  // namespace slopeforge
