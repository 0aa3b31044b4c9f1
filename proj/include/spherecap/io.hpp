#pragma once

// JSON config parsing (strict: unknown keys rejected), CSV field files,
// report serialization, atomic file writes.

#include "spherecap/solver.hpp"
#include "spherecap/verify.hpp"

#include <json.hpp>

#include <string>

namespace spherecap {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  SolverConfig solver;
  VerifyOptions verify;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Field CSV: header `r,theta,u`, one row per node, pole written once with
// theta = 0.
void write_field_csv(const GridField& field, const std::string& path);
void write_radial_csv(const RadialField& field, const std::string& path);

// Reads a field CSV; a radial profile (all theta = 0) is revolved onto the
// configured Ntheta. Throws ConfigError if the nodes do not match the grid.
GridField read_field_csv(const std::string& path, const PolarGrid& grid);

nlohmann::json report_to_json(const ConcavityReport& rep);
nlohmann::json hypothesis_report_to_json(const HypothesisReport& rep);

// Writes text via a temp file plus rename.
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace spherecap
