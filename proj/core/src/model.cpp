#include "cfsm/model.hpp"

#include <sstream>

namespace cfsm {

std::string_view to_string(errc code) {
  switch (code) {
  case errc::unknown_state: return "unknown-state";
  case errc::invalid_label: return "invalid-label";
  case errc::output_without_tau_guard: return "output-without-tau-guard";
  case errc::tau_target_not_unique_output:
    return "tau-target-not-unique-output";
  case errc::self_loop_on_tau_or_output: return "self-loop-on-tau-or-output";
  case errc::non_local_label: return "non-local-label";
  case errc::multiple_incoming_to_output_source:
    return "multiple-incoming-to-output-source";
  case errc::non_local_machine: return "non-local-machine";
  case errc::dangling_participant: return "dangling-participant";
  case errc::empty_system: return "empty-system";
  case errc::foreign_configuration: return "foreign-configuration";
  case errc::state_explosion_limit: return "state-explosion-limit";
  case errc::peer_name_clash: return "peer-name-clash";
  case errc::invalid_input_machine: return "invalid-input-machine";
  case errc::unknown_participant: return "unknown-participant";
  case errc::domain_overlap: return "domain-overlap";
  case errc::not_composable: return "not-composable";
  case errc::precondition_violation: return "precondition-violation";
  case errc::syntax_error: return "syntax-error";
  case errc::assertion_failure: return "assertion-failure";
  case errc::internal_inconsistency: return "internal-inconsistency";
  }
  return "unknown";
}

std::string diagnostic::str() const {
  std::ostringstream os;
  if (line > 0) os << line << ':' << column << ": ";
  os << to_string(code) << ": " << message;
  return os.str();
}

namespace {

std::string join_diagnostics(const std::vector<diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += '\n';
    out += d.str();
  }
  return out;
}

} // namespace

error::error(errc code, std::string message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code), diagnostics_{diagnostic{code, std::move(message)}} {}

error::error(std::vector<diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)),
      code_(diagnostics.empty() ? errc::internal_inconsistency
                                : diagnostics.front().code),
      diagnostics_(std::move(diagnostics)) {}

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '\'';
    if (!ok) return false;
  }
  return true;
}

action_label::action_label(kind k, participant s, participant r, message m)
    : kind_(k), sender_(std::move(s)), receiver_(std::move(r)),
      msg_(std::move(m)) {
  if (sender_ == receiver_)
    throw error(errc::invalid_label,
                "sender and receiver coincide in " + str());
  if (sender_.name.empty() || receiver_.name.empty() || msg_.name.empty())
    throw error(errc::invalid_label, "empty name in label");
}

action_label action_label::output(participant sender, participant receiver,
                                  message msg) {
  return {kind::output, std::move(sender), std::move(receiver),
          std::move(msg)};
}

action_label action_label::input(participant sender, participant receiver,
                                 message msg) {
  return {kind::input, std::move(sender), std::move(receiver),
          std::move(msg)};
}

std::string action_label::str() const {
  switch (kind_) {
  case kind::tau: return "tau";
  case kind::output:
    return sender_.name + "->" + receiver_.name + "!" + msg_.name;
  case kind::input:
    return sender_.name + "->" + receiver_.name + "?" + msg_.name;
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const action_label& l) {
  return os << l.str();
}

std::string to_string(const transition& t) {
  return t.source + " -" + t.label.str() + "-> " + t.target;
}

} // namespace cfsm
