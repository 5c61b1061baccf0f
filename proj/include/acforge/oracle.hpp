#pragma once

#include <span>
#include <string>
#include <vector>

#include "acforge/core.hpp"
#include "acforge/evaluate.hpp"
#include "acforge/limits.hpp"

// Brute-force tabular ground truth. Everything here is exponential in the
// number of variables and exists only for desk-scale verification.
namespace acforge {

struct OracleResult {
  Rational value;
  Instantiation witness;
};

inline void require_tabulable(std::span<const Variable> vars, std::size_t max_vars) {
  if (vars.size() > max_vars) {
    throw LimitError("tabulating " + std::to_string(vars.size()) +
                     " variables exceeds max_vars=" + std::to_string(max_vars));
  }
}

// Tabulates the circuit at every complete instantiation of its variables.
inline Factor factor_of_circuit(const Circuit& circuit, std::size_t max_vars = Limits{}.max_vars) {
  require_tabulable(circuit.variables(), max_vars);
  std::vector<Rational> table;
  for_each_instantiation(circuit.variables(), [&](const std::vector<ValueIndex>& idx) {
    table.push_back(evaluate(circuit, CircuitInput::of_values(circuit.variables(), idx)));
  });
  return Factor(circuit.variables(), std::move(table));
}

inline bool row_compatible(std::span<const ValueIndex> row, std::span<const ValueIndex> y) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (y[i] != kUnassigned && y[i] != row[i]) return false;
  }
  return true;
}

// Σ_z f(y, z): exact sum over compatible rows.
inline Rational oracle_marginal(const Factor& f, const Instantiation& y) {
  auto yi = assignment_of(f.scope(), y);
  Rational total = 0;
  for_each_instantiation(f.scope(), [&](const std::vector<ValueIndex>& row) {
    if (row_compatible(row, yi)) total += f.at(row);
  });
  return total;
}

// Maximum over rows compatible with the evidence; the first maximal row in
// row-major order wins ties.
inline OracleResult oracle_mpe(const Factor& f, const Instantiation& evidence = {}) {
  auto ei = assignment_of(f.scope(), evidence);
  std::optional<OracleResult> best;
  for_each_instantiation(f.scope(), [&](const std::vector<ValueIndex>& row) {
    if (!row_compatible(row, ei)) return;
    if (!best || f.at(row) > best->value) {
      best = OracleResult{f.at(row), instantiation_of(f.scope(), row)};
    }
  });
  return std::move(*best);
}

// Explicit projection Σ_Z f onto the variables not in sum_out.
inline Factor project_factor(const Factor& f, std::span<const std::string> sum_out) {
  std::vector<Variable> kept;
  std::vector<std::size_t> kept_pos;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    const auto& v = f.scope()[i];
    if (std::find(sum_out.begin(), sum_out.end(), v.name) == sum_out.end()) {
      kept.push_back(v);
      kept_pos.push_back(i);
    }
  }
  for (const auto& name : sum_out) {
    if (!find_variable(f.scope(), name)) throw InputError("unknown variable " + name);
  }
  Factor zero = Factor::constant(kept, 0);
  std::vector<Rational> table = zero.table();
  std::vector<ValueIndex> sub(kept.size());
  for_each_instantiation(f.scope(), [&](const std::vector<ValueIndex>& row) {
    for (std::size_t j = 0; j < kept_pos.size(); ++j) sub[j] = row[kept_pos[j]];
    table[zero.offset(sub)] += f.at(row);
  });
  return Factor(std::move(kept), std::move(table));
}

// argmax_y Σ_z f(y, z) over the variables in `over` (kept in scope order).
inline OracleResult oracle_map(const Factor& f, std::span<const std::string> over) {
  std::vector<std::string> sum_out;
  for (const auto& v : f.scope()) {
    if (std::find(over.begin(), over.end(), v.name) == over.end()) sum_out.push_back(v.name);
  }
  for (const auto& name : over) {
    if (!find_variable(f.scope(), name)) throw InputError("unknown variable " + name);
  }
  return oracle_mpe(project_factor(f, sum_out));
}

}  // namespace acforge
