#pragma once

#include <map>
#include <string>
#include <vector>

#include "msgate/config.hpp"

namespace msgate {

struct ExperimentOutputs {
  std::vector<std::string> files;          // paths written, in order
  std::map<std::string, double> metrics;   // named scalar results (also in summary.txt)
  bool checks_passed = true;               // false when run.check comparisons fail
  std::string summary_text;
};

// Runs the configured experiment and writes, under run.out_dir:
//   timeseries.csv   sampled internal density matrix (schema=1)
//   summary.txt      human-readable results plus `name = value` metric lines
//   plot.gp          gnuplot script for the time series
//   config.resolved  every parameter made explicit; re-running it reproduces
//                    the CSV outputs byte for byte
//   jumps.csv        (heating only) jump log of trajectory 0
ExperimentOutputs run_experiment(const ExperimentConfig& config);

}  // namespace msgate
