#include "cli.hpp"

#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "cfsm/fuzz.hpp"
#include "cfsm/io.hpp"

namespace cfsm::cli {

namespace {

constexpr int ok = 0;
constexpr int violated = 1;
constexpr int failure = 2;

std::size_t env_max_configs() {
  if (const char* v = std::getenv("CFSM_MAX_CONFIGS")) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("bad CFSM_MAX_CONFIGS value '") +
                               v + "'");
    }
  }
  return default_max_configurations;
}

void print_diagnostics(std::ostream& err, const std::string& file,
                       const error& e) {
  for (const auto& d : e.diagnostics())
    err << (file.empty() ? "" : file + ":") << d.str() << "\n";
}

void print_witness(std::ostream& out, const witness& w) {
  out << "  " << to_string(w.kind);
  if (w.who) out << " for " << w.who->name;
  out << " at " << to_string(w.config) << "\n";
  if (w.kind == witness_kind::lock) {
    out << "    " << w.reachable.size()
        << " reachable configuration(s), none involving " << w.who->name
        << "\n";
  } else if (w.kind == witness_kind::slf_violation) {
    out << "    run:";
    for (std::size_t i = 0; i < w.labels.size(); ++i) {
      if (w.cycle_start && *w.cycle_start == i) out << " [";
      out << " " << w.labels[i].str();
    }
    if (w.cycle_start) out << " ]*";
    if (w.labels.empty()) out << " (empty)";
    out << "\n";
  }
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Asymmetric communicating finite-state machines"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string file, file2, p1, p2, out_path, dot_path, json_path, cert_path;
  std::string property;
  std::size_t max_configs = 0;
  bool force = false, verify = false;
  fuzz_params fp;
  std::string report_path;

  auto* validate = app.add_subcommand("validate", "Parse and validate a system file");
  validate->add_option("file", file, "System file")->required();

  auto* semantics = app.add_subcommand("semantics", "Build the reachable LTS");
  semantics->add_option("file", file, "System file")->required();
  semantics->add_option("--dot", dot_path, "Write the LTS as DOT");
  semantics->add_option("--max-configs", max_configs, "Exploration cap");

  auto* check = app.add_subcommand("check", "Check a communication property");
  check->add_option("file", file, "System file")->required();
  check->add_option("--property", property, "Property to check")
      ->required()
      ->check(CLI::IsMember({"deadlock", "lock", "strong-lock"}));
  check->add_option("--json", json_path, "Write the report as JSON");
  check->add_option("--max-configs", max_configs, "Exploration cap");

  auto* compat = app.add_subcommand("compat", "Check compatibility of two machines");
  compat->add_option("file1", file, "First system file")->required();
  compat->add_option("P1", p1, "Participant in the first system")->required();
  compat->add_option("file2", file2, "Second system file")->required();
  compat->add_option("P2", p2, "Participant in the second system")->required();
  compat->add_option("--certificate", cert_path, "Write the relation as JSON");

  auto* compose = app.add_subcommand("compose", "Compose two systems via gateways");
  compose->add_option("file1", file, "First system file")->required();
  compose->add_option("H", p1, "Gateway participant of the first system")->required();
  compose->add_option("file2", file2, "Second system file")->required();
  compose->add_option("K", p2, "Gateway participant of the second system")->required();
  compose->add_option("-o,--output", out_path, "Write the composed system here");
  compose->add_flag("--force", force, "Compose even when not composable");
  compose->add_flag("--verify-projection", verify,
                    "Check the projection invariant on the composed LTS");
  compose->add_option("--max-configs", max_configs, "Exploration cap");

  auto* normalize = app.add_subcommand("normalize", "Guard unguarded outputs with tau");
  normalize->add_option("file", file, "System file")->required();
  normalize->add_option("-o,--output", out_path, "Output file")->required();

  auto* fuzz = app.add_subcommand("fuzz", "Randomized preservation checks");
  fuzz->add_option("--seed", fp.seed, "Random seed");
  fuzz->add_option("--iters", fp.iterations, "Iterations");
  fuzz->add_flag("--sequential", fp.require_sequential_gateways,
                 "Generate sequential gateway machines");
  fuzz->add_option("--threads", fp.threads, "Worker threads (0 = all cores)");
  fuzz->add_option("--report", report_path, "Write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : failure;
  }

  try {
    const auto cap = max_configs ? max_configs : env_max_configs();

    if (*validate) {
      auto sys = read_system_file(file);
      out << "ok: system " << sys.name() << " with " << sys.machines().size()
          << " machine(s)\n";
      return ok;
    }

    if (*semantics) {
      auto sys = read_system_file(file);
      auto lts = build_semantics(sys, cap);
      out << "configurations: " << lts.size() << "\n";
      out << "edges: " << lts.edges().size() << "\n";
      if (!dot_path.empty()) write_text_file(dot_path, export_dot(lts));
      return ok;
    }

    if (*check) {
      auto sys = read_system_file(file);
      auto lts = build_semantics(sys, cap);
      property_report r = property == "deadlock" ? find_deadlocks(sys, lts)
                          : property == "lock"   ? find_locks(sys, lts)
                                   : check_strong_lock_freedom(sys, lts);
      out << to_string(r.property) << ": " << (r.holds ? "holds" : "violated")
          << "\n";
      for (const auto& w : r.witnesses) print_witness(out, w);
      if (r.truncated) out << "  (more witnesses omitted)\n";
      if (!json_path.empty()) write_text_file(json_path, report_to_json(r));
      return r.holds ? ok : violated;
    }

    if (*compat) {
      auto s1 = read_system_file(file);
      auto s2 = read_system_file(file2);
      const auto& m1 = s1.at({p1});
      const auto& m2 = s2.at({p2});
      auto res = check_compatibility(m1, m2);
      out << p1 << " and " << p2 << (res.compatible ? " are compatible"
                                                    : " are not compatible")
          << "\n";
      if (!cert_path.empty())
        write_text_file(cert_path, certificate_to_json(m1, m2, res));
      return res.compatible ? ok : violated;
    }

    if (*compose) {
      auto s1 = read_system_file(file);
      auto s2 = read_system_file(file2);
      const participant h{p1}, k{p2};
      auto report = check_composability(s1, h, s2, k);
      if (!report.disjoint_domains) {
        err << "error: " << report.issues.front().detail << "\n";
        return failure;
      }
      if (!report.composable) {
        out << "not composable:";
        for (const auto& i : report.issues) out << "\n  " << i.detail;
        out << "\n";
        if (!force) return violated;
        out << "composing anyway (--force)\n";
      }
      auto cs = compose_systems(s1, h, s2, k, force);
      auto text = serialize_composed(cs);
      if (out_path.empty())
        out << text;
      else
        write_text_file(out_path, text);
      if (verify) {
        auto lts = build_semantics(cs.sys, cap);
        auto pl = verify_projection_lemma(cs, lts);
        out << "projection check: " << (pl.holds ? "holds" : "fails") << " on "
            << pl.checked << " configuration(s)\n";
        for (const auto& c : pl.counterexamples)
          out << "  " << c.clause << " at " << to_string(c.config) << "\n";
        if (!pl.holds) return violated;
      }
      return ok;
    }

    if (*normalize) {
      auto raw = parse_raw_system(read_text_file(file));
      std::map<participant, machine> ms;
      for (auto& rm : raw.machines) {
        if (cfsm_violations(rm.graph, rm.owner).empty())
          ms.emplace(rm.owner, validate_cfsm(rm.graph, rm.owner));
        else
          ms.emplace(rm.owner, normalize_outputs(rm.graph, rm.owner));
      }
      auto sys = validate_system(std::move(ms), raw.name);
      write_text_file(out_path, serialize_system(sys));
      return ok;
    }

    if (*fuzz) {
      auto r = run_preservation_fuzz(fp);
      const auto& s = r.stats;
      out << "iterations: " << s.iterations << "\n"
          << "composable: " << s.composable << "\n"
          << "skipped (exploration cap): " << s.skipped << "\n"
          << "deadlock-freedom premise: " << s.deadlock_premise << "\n"
          << "lock-freedom premise (sequential): " << s.lock_premise << "\n"
          << "strong-lock-freedom premise: " << s.strong_lock_premise << "\n"
          << "projection checks: " << s.projection_checked << "\n"
          << "violations: " << r.violations.size() << "\n";
      for (const auto& v : r.violations)
        out << "  iteration " << v.iteration << ": " << v.theorem << " ("
            << v.witness << ")\n";
      if (!report_path.empty())
        write_text_file(report_path, fuzz_report_to_json(r));
      return r.violations.empty() ? ok : violated;
    }
  } catch (const error& e) {
    print_diagnostics(err, file, e);
    return failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
  return failure;
}

} // namespace cfsm::cli
