#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abb/alphabb.hpp"
#include "abb/problem.hpp"

namespace abb {

// Machine-readable analysis report. Numbers are written in their shortest
// round-trip form, so re-reading reproduces every double exactly.
nlohmann::ordered_json report_to_json(const UnderestimatorReport& r, const Problem& p);

struct CompareConfig {
  HessianRoute route = HessianRoute::SymbolicSimplified;
  AbsMode abs = AbsMode::SignDrop;
  RangeForm form = RangeForm::Best;
  SimplifyLevel simplify = SimplifyLevel::Full;
};

struct CompareRow {
  CompareConfig config;
  std::optional<UnderestimatorReport> report;
  std::string error;  // set when the configuration failed
};

// Cartesian product of the selections. The direct route ignores abs, form
// and simplify, so it contributes a single row.
std::vector<CompareConfig> compare_matrix(const std::vector<HessianRoute>& routes,
                                          const std::vector<AbsMode>& abs_modes,
                                          const std::vector<RangeForm>& forms,
                                          const std::vector<SimplifyLevel>& levels);

// Runs every configuration (concurrently when `threads` > 1) and returns rows
// sorted by lower bound, tightest first; failed rows go last. Ties keep the
// matrix order.
std::vector<CompareRow> run_compare(const Problem& p, const std::vector<CompareConfig>& configs,
                                    const AnalysisOptions& base, std::size_t threads);

// Fixed-width table, values rounded to 4 decimals.
std::string format_compare_table(const std::vector<CompareRow>& rows);
nlohmann::ordered_json compare_to_json(const std::vector<CompareRow>& rows, const Problem& p);

// CSV of f and g on a uniform grid of n points per axis (1 or 2 variables).
// Throws std::invalid_argument for other dimensions or n < 2.
void write_plot_csv(std::ostream& out, const Problem& p, const Expr& g, std::size_t n);

}  // namespace abb
