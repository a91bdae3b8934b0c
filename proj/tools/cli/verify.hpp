#pragma once

#include "config.hpp"
#include "report.hpp"

namespace freestate::cli {

// Runs every identity check that applies to the configured state. The config
// must already be validated. Checks run concurrently; the report lists them
// sorted by name.
VerificationReport run_verification(const JobConfig& cfg);

}  // namespace freestate::cli
