// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbr {

// Every failure raised by the library carries one of these codes so callers
// (and tests) can tell error paths apart without matching message text.
enum class Errc {
  invalid_pmf,
  empty_product,
  unconditionable_subset,
  mode_mismatch,
  partial_mapping,
  requires_enumerated,
  incommensurable_costs,
  no_enumerated_impression,
  divergence_undefined,
  transformation_unnecessary,
  unscored_edge,
  infeasible_budget,
  search_space_too_large,
  dangling_reference,
  unknown_schema_version,
  invariant_violation,
  parse_error,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cbr
