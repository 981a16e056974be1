#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nontwist/cli/config.hpp"
#include "nontwist/cli/dataset.hpp"

namespace nontwist::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitDomainError = 3,
  kExitNumericalFailure = 4,
};

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Provenance block: command, echoed config, tool version, timestamp.
Json provenance(const RunConfig& cfg);

/// Threshold report document (roots of both residuals plus the triple point,
/// or only the triple point when --triple is set).
Json thresholds_document(const RunConfig& cfg);

struct PortraitOutput {
  Dataset traces;      // trace_id, source, x, y, H
  Json equilibria;     // stability and chain labels
  std::string svg;     // empty unless requested
  std::size_t seed_count = 0;
  std::size_t failed_seeds = 0;
};
PortraitOutput portrait_output(const RunConfig& cfg);

Dataset scan_dataset(const RunConfig& cfg);

struct RotationOutput {
  Dataset profile;  // y, F, rho, dF
  Json summary;     // twistless block or a note
};
RotationOutput rotation_output(const RunConfig& cfg);

}  // namespace nontwist::cli
