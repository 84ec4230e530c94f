#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cfsm {

enum class errc {
  unknown_state,
  invalid_label,
  // machine well-formedness
  output_without_tau_guard,
  tau_target_not_unique_output,
  self_loop_on_tau_or_output,
  non_local_label,
  multiple_incoming_to_output_source,
  // systems and semantics
  non_local_machine,
  dangling_participant,
  empty_system,
  foreign_configuration,
  state_explosion_limit,
  // gateways and composition
  peer_name_clash,
  invalid_input_machine,
  unknown_participant,
  domain_overlap,
  not_composable,
  // misc
  precondition_violation,
  syntax_error,
  assertion_failure,
  internal_inconsistency,
};

std::string_view to_string(errc code);

/// One located problem. `line`/`column` are 1-based and 0 when unknown.
struct diagnostic {
  errc code;
  std::string message;
  int line = 0;
  int column = 0;

  std::string str() const;
};

/// Library error; carries every diagnostic found, not just the first one.
class error : public std::runtime_error {
public:
  error(errc code, std::string message);
  explicit error(std::vector<diagnostic> diagnostics);

  errc code() const noexcept { return code_; }
  const std::vector<diagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

private:
  errc code_;
  std::vector<diagnostic> diagnostics_;
};

} // namespace cfsm
