#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsd/config.hpp"

namespace qsd {

// One grid point of a sweep. `fields` follows sweep_header() after the axis
// columns; a point that could not be evaluated carries an error message and
// empty result fields.
struct SweepRecord {
  std::vector<double> axis_values;
  std::vector<std::string> fields;
  std::string error;
  // Set when the failure was an internal invariant violation rather than a
  // rejected parameter combination.
  bool invariant_violation = false;
};

// Column names, axis columns first.
std::vector<std::string> sweep_header(const SweepConfig& cfg);

std::size_t sweep_size(const SweepConfig& cfg);

// Parameters for the grid point with row-major index i (first axis outermost).
MarketParams sweep_point_params(const SweepConfig& cfg, std::size_t i, double* w = nullptr);

// Evaluates every grid point on `threads` workers. Records come back in
// row-major order regardless of scheduling.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, unsigned threads = 1);

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg,
                     const std::vector<SweepRecord>& records);

}  // namespace qsd
