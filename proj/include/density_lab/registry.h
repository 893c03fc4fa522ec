// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "density_lab/records.h"

namespace density_lab {

enum class RecordFormat { kCsv, kJson };

/// Loads model records in file order.
///
/// CSV columns are matched by header name. `name`, `param_count` and
/// `release_date` are required; `train_tokens`, `compressed_from`, `scores`,
/// `measured_loss` and `percent` are optional. Benchmark maps are written as
/// `id=value` pairs separated by `;` inside one field, e.g.
/// `mmlu=0.352;bbh=0.41`. A true `percent` column means the row's scores are
/// percentages and are divided by 100.
///
/// Throws Error with kParse (malformed input, line number in the message),
/// kValidation (detail names the field) or kDuplicateName.
std::vector<ModelRecord> load_models(std::istream& source, RecordFormat format);

/// `params,tokens,loss` CSV.
std::vector<ScalingObservation> load_observations(std::istream& source);

/// `loss,score` CSV.
std::vector<PerfObservation> load_perf(std::istream& source);

/// `model,date,usd_per_million_tokens` CSV, returned sorted by date
/// (stable for equal dates).
std::vector<PriceRecord> load_prices(std::istream& source);

void write_models(std::ostream& out, std::span<const ModelRecord> records,
                  RecordFormat format);
void write_observations(std::ostream& out,
                        std::span<const ScalingObservation> observations);
void write_perf(std::ostream& out, std::span<const PerfObservation> points);
void write_prices(std::ostream& out, std::span<const PriceRecord> prices);

/// Picks the format from the file extension (`.json` or anything else as
/// CSV) and loads. Throws Error(kIo) naming the path when it cannot be read.
std::vector<ModelRecord> load_models_file(const std::filesystem::path& path);

/// Immutable, name-indexed view over loaded records.
class ModelRegistry {
 public:
  /// Validates every record and rejects duplicate names.
  explicit ModelRegistry(std::vector<ModelRecord> records);

  std::span<const ModelRecord> records() const { return records_; }
  /// nullptr when absent.
  const ModelRecord* find(std::string_view name) const;

 private:
  std::vector<ModelRecord> records_;
};

}  // namespace density_lab
