#pragma once

// Text format for systems, DOT export and JSON reports.
//
//   file    := "system" NAME machine+
//   machine := "machine" PARTICIPANT "{" "init" STATE edge* "}"
//   edge    := STATE "tau" STATE
//            | STATE "!" PARTICIPANT MESSAGE STATE
//            | STATE "?" PARTICIPANT MESSAGE STATE
//
// Identifiers are [A-Za-z0-9_']+ or double-quoted strings; `#` starts a
// comment. The owner of a machine is implicit in its edges.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cfsm/compatibility.hpp"
#include "cfsm/gateway.hpp"
#include "cfsm/properties.hpp"

namespace cfsm {

struct raw_machine {
  participant owner;
  fsa graph;
  int line = 0;
};

/// Syntax only: machines as written, not validated.
struct raw_system {
  std::string name;
  std::vector<raw_machine> machines;
};

raw_system parse_raw_system(std::string_view text);

/// Parses and validates; every diagnostic carries a line and column.
system parse_system_file(std::string_view text);

system read_system_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Canonical text: machines by participant, edges by (source, label,
/// target). Identifiers that are not plain tokens are quoted.
std::string serialize_system(const system& sys);
std::string serialize_raw_system(const raw_system& sys);

/// Like serialize_system, with a comment block above each gateway machine
/// listing where its fresh states come from.
std::string serialize_composed(const composed_system& cs);

std::string export_dot(const machine& m);
std::string export_dot(const sem_lts& lts);

std::string report_to_json(const property_report& r);
std::string certificate_to_json(const machine& m1, const machine& m2,
                                const compatibility_result& res);

} // namespace cfsm
