#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV forms of sets, systems, estimates and sweeps, and the
 * run manifest written next to sweep outputs.
 *
 * Rationals travel as lowest-terms strings "p/q" (or "p"). Decimal columns
 * in CSV output are for plotting only and are never read back.
 */

#include "taublab/ergodic.hpp"
#include "taublab/estimate.hpp"
#include "taublab/lattice.hpp"
#include "taublab/search.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace taublab::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; ParseError on I/O or syntax failure.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// "p/q" string or JSON integer.
Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& r);

/// {"dim": n, "points": [[x1, ..., xn], ...]}
LatticeSet lattice_set_from_json(const Json& j);
Json lattice_set_to_json(const LatticeSet& E);

/// {"masses": ["1/4", ...], "dim": n, "generators": [[...], ...]}. Shape
/// errors throw ParseError; the result is validated by the caller.
ergodic::SystemSpec system_spec_from_json(const Json& j);
Json system_to_json(const ergodic::AtomicSystem& system);

/// {"alpha", "value", "witness", "mode"} plus strategy and measures.
Json estimate_to_json(const TauberianEstimate& e);

Json config_to_json(const search::SearchConfig& c);
search::SearchConfig config_from_json(const Json& j);

/// Comma-separated list of rationals, e.g. "1/10,1/5,1/2".
std::vector<Rational> parse_grid(const std::string& text);

/// Fixed nine-decimal rendering for advisory columns.
std::string decimal(const Rational& r);

/// alpha,value,witness_size,halo_size,strategy,alpha_decimal,value_decimal
std::string sweep_to_csv(const search::SweepResult& s);
/// Config plus rows with embedded witnesses.
Json sweep_to_json(const search::SweepResult& s);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

}  // namespace taublab::io
