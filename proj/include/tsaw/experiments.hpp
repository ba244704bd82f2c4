#pragma once

#include <string>
#include <vector>

#include "tsaw/io.hpp"

namespace tsaw::experiments {

// Subcommand names in the order the report lists them.
const std::vector<std::string>& names();

// Acceptance-scale defaults for an experiment.
io::ExperimentConfig default_config(const std::string& name);

// Small configuration running the same code paths in seconds.
io::ExperimentConfig smoke_config(const std::string& name);

// Runs the named experiment. Artifacts (the report JSON and any CSVs) go to
// cfg.out when it is set. Deterministic in the config, whatever the worker
// count. Invalid configs throw io::ConfigError; failures during the run
// (budget exhausted and the like) come back as a report with error set.
io::ExperimentReport run_experiment(const io::ExperimentConfig& cfg);

}  // namespace tsaw::experiments
