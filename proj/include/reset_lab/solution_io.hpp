#pragma once

// CSV and JSON forms of hybrid solutions. CSV rows are (t, j, q, tau, x_1..x_n)
// with 17 significant digits and '.' as decimal separator regardless of locale.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "reset_lab/hybrid_sim.hpp"

namespace reset_lab::io {

/// 17 significant digits, locale-independent; reads back to the same double.
[[nodiscard]] std::string format_double(double v);

/// Locale-independent parse; throws ArgumentError on malformed text.
[[nodiscard]] double parse_double(std::string_view text);

void write_solution_csv(std::ostream& os, const sim::HybridSolution& sol);

/// Rebuilds intervals from the j column; jump records are reconstructed from
/// the last sample before and the first sample after each change of j.
[[nodiscard]] sim::HybridSolution read_solution_csv(std::istream& is);

[[nodiscard]] nlohmann::json solution_to_json(const sim::HybridSolution& sol);
[[nodiscard]] sim::HybridSolution solution_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json matrix_to_json(const Mat& m);
/// Accepts a nested array of rows; a flat array becomes a column vector.
[[nodiscard]] Mat matrix_from_json(const nlohmann::json& j, std::string_view what);

}  // namespace reset_lab::io
