#pragma once

#include <iosfwd>
#include <string>

#include "mwnc/experiment.hpp"

namespace mwnc {

/// Scalar summary of one point as "key\tvalue" lines.
void write_summary(std::ostream& os, const PointResult& p);

/// "PASS|FAIL\tname\tdetail" lines.
void write_checks(std::ostream& os, const std::vector<Check>& checks);

/// One row per sweep point with the headline scalars.
void write_sweep_table(std::ostream& os, const ExperimentResult& r);

void write_rlnc_table(std::ostream& os, const RlncSweep& s);

/// Writes every table of an experiment under dir; one subdirectory per point.
void write_experiment(const std::string& dir, const ExperimentResult& r);
void write_baseline(const std::string& dir, const BaselineResult& r);

}  // namespace mwnc
