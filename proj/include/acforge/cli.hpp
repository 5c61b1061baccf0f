#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "acforge/acforge.hpp"
#include "acforge/generate.hpp"

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it in-process.
namespace acforge::cli {

namespace detail {

struct Output {
  std::string path;
  std::ostream& fallback;

  // Writes through `emit` to the file at `path`, or to the fallback stream.
  void write(const std::function<void(std::ostream&)>& emit) const {
    if (path.empty()) {
      emit(fallback);
      return;
    }
    std::ofstream file(path);
    if (!file) throw InputError("cannot write " + path);
    emit(file);
  }
};

inline Factor joint_factor(const FactorFile& ff, std::size_t max_vars) {
  if (ff.factors.empty()) throw InputError("factor file has no factors");
  require_tabulable(ff.variables, max_vars);
  return factor_product(ff.factors);
}

inline void print_value_and_witness(std::ostream& os, const Rational& value,
                                    const Instantiation& witness, std::span<const Variable> vars) {
  os << format_rational(value) << '\n' << format_evidence(witness, vars) << '\n';
}

inline std::string describe_term(const Circuit& c, const Subcircuit& sc) {
  std::string out;
  for (const auto& [v, x] : sc.term) {
    if (!out.empty()) out += ',';
    out += c.variables()[v].name + "=" + c.variables()[v].values[x];
  }
  return out;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arithmetic circuits over discrete factors"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.fallthrough();

  Limits limits;
  std::optional<std::size_t> max_vars_flag, subcircuit_flag;
  app.add_option("--max-vars", max_vars_flag, "Variable limit for tabular procedures");
  app.add_option("--subcircuit-limit", subcircuit_flag, "Limit on enumerated subcircuits");

  std::string circuit_path, factors_path, nnf_path, evidence, output, over, sum_out, order;
  std::string method = "ordered", query = "marginal", threshold, kind = "smooth";
  std::vector<std::string> circuits;
  bool no_check = false, prune = false, drop_zeros = false, smooth_flag = false;
  std::uint64_t seed = 1;
  std::size_t num_vars = 3;

  std::function<void()> action;
  auto sub = [&](const char* name, const char* help, std::function<void()> body) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->callback([&action, body] { action = body; });
    return cmd;
  };
  auto circuit_opt = [&](CLI::App* cmd) { cmd->add_option("--circuit", circuit_path)->required(); };
  auto output_opt = [&](CLI::App* cmd) { cmd->add_option("-o,--output", output); };
  auto evidence_opt = [&](CLI::App* cmd) { cmd->add_option("--evidence", evidence); };
  detail::Output dest{"", out};
  auto emit = [&](const std::function<void(std::ostream&)>& f) {
    dest.path = output;
    dest.write(f);
  };
  auto write_ac = [&](const Circuit& c) { emit([&](std::ostream& os) { write_circuit(os, c); }); };

  auto* check = sub("check", "Decomposability, smoothness and determinism", [&] {
    Circuit c = read_circuit_file(circuit_path);
    auto report = check_properties(c, limits);
    out << render_summary(report) << '\n' << render_lines(c, report);
  });
  circuit_opt(check);

  auto* eval = sub("eval", "Evaluate under the indicators of an instantiation", [&] {
    Circuit c = read_circuit_file(circuit_path);
    out << format_rational(evaluate(c, input_from_instantiation(c, parse_evidence(evidence))))
        << '\n';
  });
  circuit_opt(eval);
  evidence_opt(eval);

  auto* marg = sub("marginal", "Marginal of an instantiation", [&] {
    Circuit c = read_circuit_file(circuit_path);
    out << format_rational(marginal(c, parse_evidence(evidence))) << '\n';
  });
  circuit_opt(marg);
  evidence_opt(marg);

  auto* mpe_cmd = sub("mpe", "Most probable explanation by maximizer evaluation", [&] {
    Circuit c = read_circuit_file(circuit_path);
    MpeOptions opts;
    opts.verify = !no_check;
    opts.max_vars = limits.max_vars;
    auto r = mpe(c, parse_evidence(evidence), opts);
    detail::print_value_and_witness(out, r.value, r.witness, c.variables());
  });
  circuit_opt(mpe_cmd);
  evidence_opt(mpe_cmd);
  mpe_cmd->add_flag("--no-check", no_check, "Skip the determinism check");

  auto* map_cmd = sub("map", "Maximum a posteriori instantiation of a variable subset", [&] {
    Circuit c = read_circuit_file(circuit_path);
    auto names = parse_name_list(over);
    auto r = map_bruteforce(c, names, limits.subcircuits);
    detail::print_value_and_witness(out, r.value, r.witness, c.variables());
  });
  circuit_opt(map_cmd);
  map_cmd->add_option("--over", over)->required();

  auto* smooth_cmd = sub("smooth", "Make a circuit smooth", [&] {
    write_ac(smooth(read_circuit_file(circuit_path)));
  });
  circuit_opt(smooth_cmd);
  output_opt(smooth_cmd);

  auto* project_cmd = sub("project", "Sum variables out", [&] {
    auto names = parse_name_list(sum_out);
    write_ac(project(read_circuit_file(circuit_path), names));
  });
  circuit_opt(project_cmd);
  project_cmd->add_option("--sum-out", sum_out)->required();
  output_opt(project_cmd);

  auto* multiply_cmd = sub("multiply", "Product of two circuits", [&] {
    if (circuits.size() != 2) throw InputError("multiply needs exactly two --circuit files");
    write_ac(multiply(read_circuit_file(circuits[0]), read_circuit_file(circuits[1])));
  });
  multiply_cmd->add_option("--circuit", circuits)->required();
  output_opt(multiply_cmd);

  auto* maximize_cmd = sub("maximize", "Evaluate the maximizer circuit", [&] {
    Circuit c = read_circuit_file(circuit_path);
    out << format_rational(to_maximizer(c).evaluate(input_from_instantiation(c, parse_evidence(evidence))))
        << '\n';
  });
  circuit_opt(maximize_cmd);
  evidence_opt(maximize_cmd);

  auto* subs_cmd = sub("subcircuits", "Enumerate complete subcircuits", [&] {
    Circuit c = read_circuit_file(circuit_path);
    auto subs = enumerate_subcircuits(c, limits.subcircuits);
    out << "count=" << subs.size() << '\n';
    for (const auto& sc : subs) {
      out << "coefficient=" << format_rational(sc.coefficient) << " term=" << detail::describe_term(c, sc)
          << '\n';
    }
  });
  circuit_opt(subs_cmd);

  auto* dead_cmd = sub("dead", "Nodes appearing only in zero-coefficient subcircuits", [&] {
    Circuit c = read_circuit_file(circuit_path);
    if (prune) {
      write_ac(prune_dead(c, limits.subcircuits));
      return;
    }
    auto dead = find_dead_nodes(c, limits.subcircuits);
    out << "dead=";
    for (std::size_t i = 0; i < dead.size(); ++i) out << (i ? "," : "") << dead[i];
    out << '\n';
  });
  circuit_opt(dead_cmd);
  dead_cmd->add_flag("--prune", prune, "Write the circuit without its dead nodes");
  output_opt(dead_cmd);

  auto* compile_cmd = sub("compile", "Compile a factor file into a circuit", [&] {
    FactorFile ff = read_factor_file(factors_path);
    if (ff.factors.empty()) throw InputError("factor file has no factors");
    PolynomialOptions popts{drop_zeros, limits.max_vars};
    if (method == "polynomial") {
      write_ac(compile_polynomial(factor_product(ff.factors), popts));
    } else if (method == "product") {
      write_ac(compile_product(ff.factors, popts));
    } else {
      OrderedOptions oopts;
      if (!order.empty()) oopts.order = parse_name_list(order);
      write_ac(compile_ordered(ff.factors, oopts));
    }
  });
  compile_cmd->add_option("--factors", factors_path)->required();
  compile_cmd->add_option("--method", method)->check(CLI::IsMember({"polynomial", "product", "ordered"}));
  compile_cmd->add_option("--order", order);
  compile_cmd->add_flag("--drop-zeros", drop_zeros);
  output_opt(compile_cmd);

  auto* oracle_cmd = sub("oracle", "Brute-force answers from the full table", [&] {
    Factor f = [&] {
      if (!factors_path.empty()) return detail::joint_factor(read_factor_file(factors_path), limits.max_vars);
      if (!circuit_path.empty()) return factor_of_circuit(read_circuit_file(circuit_path), limits.max_vars);
      throw InputError("oracle needs --factors or --circuit");
    }();
    const auto& vars = f.scope();
    if (query == "marginal") {
      out << format_rational(oracle_marginal(f, parse_evidence(evidence))) << '\n';
    } else if (query == "mpe") {
      auto r = oracle_mpe(f, parse_evidence(evidence));
      detail::print_value_and_witness(out, r.value, r.witness, vars);
    } else if (query == "map") {
      auto names = parse_name_list(over);
      auto r = oracle_map(f, names);
      detail::print_value_and_witness(out, r.value, r.witness, vars);
    } else {
      FactorFile table{f.scope(), {"joint"}, {f}};
      write_factor_file(out, table);
    }
  });
  oracle_cmd->add_option("--query", query)->check(CLI::IsMember({"marginal", "mpe", "map", "table"}));
  oracle_cmd->add_option("--factors", factors_path);
  oracle_cmd->add_option("--circuit", circuit_path);
  oracle_cmd->add_option("--over", over);
  evidence_opt(oracle_cmd);

  auto* reduce_cmd = sub("reduce", "Boolean factors positive exactly when some product exceeds k", [&] {
    FactorFile ff = read_factor_file(factors_path);
    if (ff.factors.empty()) throw InputError("factor file has no factors");
    Rational k = parse_rational(threshold);
    ScaledProblem scaled = scale_to_integers(ff.factors, k);
    auto cc = build_comparator_circuit(scaled.factors, scaled.threshold);
    CnfFactorSet cnf = tseitin(cc.circuit);
    FactorFile result{cnf.variables, {}, cnf.factors};
    for (std::size_t i = 0; i < cnf.factors.size(); ++i) result.names.push_back("g" + std::to_string(i));
    std::vector<std::string> comments{"threshold " + format_rational(k) + " scaled to " +
                                      scaled.threshold.str() + " with multiplier " +
                                      scaled.total_multiplier.str()};
    for (std::size_t w = 0; w < cnf.variables.size(); ++w) {
      comments.push_back(cnf.variables[w].name + ": " + cnf.wire_descriptions[w]);
    }
    emit([&](std::ostream& os) { write_factor_file(os, result, comments); });
  });
  reduce_cmd->add_option("--factors", factors_path)->required();
  reduce_cmd->add_option("--threshold", threshold)->required();
  output_opt(reduce_cmd);

  auto* via_pr = sub("mpe-via-pr", "MPE through the reduction and a marginal-computing compiler", [&] {
    FactorFile ff = read_factor_file(factors_path);
    if (ff.factors.empty()) throw InputError("factor file has no factors");
    if (!threshold.empty()) {
      out << (decide_mpe_via_pr(ff.factors, parse_rational(threshold, true)) ? "yes" : "no") << '\n';
    } else {
      out << format_rational(mpe_via_compiler(ff.factors)) << '\n';
    }
  });
  via_pr->add_option("--factors", factors_path)->required();
  via_pr->add_option("--threshold", threshold, "Answer the decision question instead");

  auto* nnf2ac = sub("nnf2ac", "Convert a decomposable NNF into a circuit", [&] {
    write_ac(nnf_to_ac(read_nnf_file(nnf_path), smooth_flag));
  });
  nnf2ac->add_option("--nnf", nnf_path)->required();
  nnf2ac->add_flag("--smooth", smooth_flag);
  output_opt(nnf2ac);

  auto* ac2nnf = sub("ac2nnf", "Support of a circuit as an NNF", [&] {
    NnfCircuit n = ac_to_nnf(read_circuit_file(circuit_path));
    emit([&](std::ostream& os) { write_nnf(os, n); });
  });
  circuit_opt(ac2nnf);
  output_opt(ac2nnf);

  auto* gen_cmd = sub("gen", "Random test data", [&] {
    gen::Rng rng(seed);
    if (kind == "factors") {
      auto fs = gen::random_factor_set(rng, num_vars, 3, 3, 7);
      FactorFile ff{gen::binary_variables(num_vars), {}, fs};
      for (std::size_t i = 0; i < fs.size(); ++i) ff.names.push_back("f" + std::to_string(i + 1));
      emit([&](std::ostream& os) { write_factor_file(os, ff); });
    } else if (kind == "nonsmooth") {
      write_ac(gen::unbalanced_circuit(rng, num_vars));
    } else if (kind == "deterministic") {
      write_ac(gen::deterministic_circuit(rng, num_vars));
    } else {
      write_ac(gen::smooth_decomposable_circuit(rng, num_vars));
    }
  });
  gen_cmd->add_option("--kind", kind)->check(CLI::IsMember({"smooth", "nonsmooth", "deterministic", "factors"}));
  gen_cmd->add_option("--vars", num_vars)->check(CLI::Range(1, 26));
  gen_cmd->add_option("--seed", seed);
  output_opt(gen_cmd);

  std::vector<const char*> argv{"acforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return 0;
    }
    err << "error=invalid-input reason=" << e.what() << '\n';
    return 2;
  }
  try {
    limits = Limits::from_environment();
    if (max_vars_flag) limits.max_vars = *max_vars_flag;
    if (subcircuit_flag) limits.subcircuits = *subcircuit_flag;
    action();
  } catch (const Error& e) {
    err << "error=" << e.kind_name() << " reason=" << e.what() << '\n';
    return e.exit_code();
  }
  return 0;
}

}  // namespace acforge::cli
