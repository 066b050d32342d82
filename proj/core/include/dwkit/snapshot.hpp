#pragma once

#include <optional>
#include <string>

#include "dwkit/table.hpp"

namespace dwkit {

// Snapshot file: one header line ("dwkit-snapshot v1 kind=... config=...."),
// then per-table sections of pipe-delimited records in primary-key order.
// UTF-8, LF line endings, values trimmed on write and re-padded on load.
// Byte-identical for a given (config, seed).
void save_snapshot(const Database& db, const std::string& path);

std::string snapshot_to_string(const Database& db);

// Loads a campus snapshot, validating table names and field layouts against
// the built-in OLTP schema. A mismatching expected config hash is reported
// on the returned database, and warn (when set) receives a message.
Database load_snapshot(const std::string& path, std::string* warn = nullptr,
                       std::optional<uint64_t> expect_config = std::nullopt);

Database snapshot_from_string(const std::string& text, std::string* warn = nullptr,
                              std::optional<uint64_t> expect_config = std::nullopt);

}  // namespace dwkit
