// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/error.hpp"

namespace cbr {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_pmf: return "invalid pmf";
    case Errc::empty_product: return "empty product";
    case Errc::unconditionable_subset: return "unconditionable subset";
    case Errc::mode_mismatch: return "mode mismatch";
    case Errc::partial_mapping: return "partial mapping";
    case Errc::requires_enumerated: return "requires enumerated model";
    case Errc::incommensurable_costs: return "incommensurable costs";
    case Errc::no_enumerated_impression: return "no enumerated impression available";
    case Errc::divergence_undefined: return "divergence undefined";
    case Errc::transformation_unnecessary: return "transformation unnecessary";
    case Errc::unscored_edge: return "unscored edge";
    case Errc::infeasible_budget: return "infeasible budget";
    case Errc::search_space_too_large: return "search space too large";
    case Errc::dangling_reference: return "dangling reference";
    case Errc::unknown_schema_version: return "unknown schema_version";
    case Errc::invariant_violation: return "invariant violation";
    case Errc::parse_error: return "parse error";
  }
  return "unknown error";
}

namespace {

std::string compose_message(Errc code, const std::string& detail) {
  std::string msg(to_string(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

}  // namespace

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(compose_message(code, detail)), code_(code) {}

}  // namespace cbr
