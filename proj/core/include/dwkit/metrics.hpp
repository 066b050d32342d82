#pragma once

#include <cstdint>

namespace dwkit {

// The six measured parameters of a query run. Scans are metered at full
// table size regardless of predicate selectivity (no indexes by design), so
// bytes_scanned is the sum of rows-read * record_length over scanned tables.
struct QueryMetrics {
  int64_t tables_used = 0;
  int64_t records_scanned = 0;
  int64_t record_length_sum = 0;  // bytes, summed over distinct base tables
  int64_t bytes_scanned = 0;
  double wall_time = 0.0;  // seconds, execution only
  int64_t rows_produced = 0;
};

}  // namespace dwkit
