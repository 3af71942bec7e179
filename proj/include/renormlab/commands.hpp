#pragma once

#include <optional>
#include <string>

#include "renormlab/config.hpp"
#include "renormlab/report.hpp"

namespace renormlab {

/// c range for cmd_ratios; defaults to the admissible interval of the side.
struct RatioRange {
    std::optional<double> lo;
    std::optional<double> hi;
};

CommandOutput cmd_ratios(const RunConfig& cfg, const RatioRange& range = {});
CommandOutput cmd_feasible(const RunConfig& cfg);
CommandOutput cmd_fixed_points(const RunConfig& cfg);
CommandOutput cmd_tower(const RunConfig& cfg);
CommandOutput cmd_renorm_check(const RunConfig& cfg);
CommandOutput cmd_extend(const RunConfig& cfg);
CommandOutput cmd_shift_check(const RunConfig& cfg);
CommandOutput cmd_perturb(const RunConfig& cfg);
/// Every command above on the configured sides, reports concatenated.
CommandOutput cmd_all(const RunConfig& cfg);

std::string render(const CommandOutput& out, OutputFormat format);

/// Writes to cfg.out, or to stdout when it is empty. Throws on I/O failure.
void emit(const CommandOutput& out, const RunConfig& cfg);

/// 0 iff every record passes.
int exit_code(const CommandOutput& out);

}  // namespace renormlab
