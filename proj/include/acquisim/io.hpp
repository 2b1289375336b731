#pragma once

#include <string>
#include <vector>

#include "acquisim/simulation.hpp"

namespace acquisim {

// runs.csv: one row per RunRecord. Columns: strategy, rep, budget, digest
// (16 hex digits), then the nine metric columns in kMetricNames order;
// missing metrics are empty cells.
void write_runs_csv(const std::vector<RunRecord>& records,
                    const std::string& path);

// groups.csv: one row per (record, declared group). Measured groups carry
// confusion counts and per-group metrics; groups absent from the holdout
// appear with n=0 and empty metric cells.
void write_groups_csv(const std::vector<RunRecord>& records,
                      const std::string& path);

// aggregates.csv: one row per (strategy, budget, metric) with bootstrap
// mean and interval; missing aggregates are empty cells.
void write_aggregates_csv(const std::vector<AggregateRecord>& aggregates,
                          const std::string& path);

// Reads runs.csv back into RunRecords (group panels stay empty; see
// attach_groups_csv). Throws ParseError with file:line anchors.
std::vector<RunRecord> read_runs_csv(const std::string& path);

// Fills each record's group panel from groups.csv, matching rows on
// (strategy, rep, budget). After write + read + attach, records compare
// equal to the originals.
void attach_groups_csv(std::vector<RunRecord>& records,
                       const std::string& path);

std::vector<AggregateRecord> read_aggregates_csv(const std::string& path);

std::string format_digest(std::uint64_t digest);

}  // namespace acquisim
