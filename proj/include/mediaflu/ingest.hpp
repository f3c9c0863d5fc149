#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mediaflu/mediastats.hpp"
#include "mediaflu/observe.hpp"

namespace mediaflu {

struct DataRow {
  std::string season;
  std::string week_label;  // as written in the file
  long week = 0;           // numeric ordering key parsed from the label
  double value = 0.0;
};

struct DataTable {
  std::vector<DataRow> rows;  // file order
  SeriesKind kind = SeriesKind::LabConfirmedPct;
  std::string source;
};

// CSV with header "season,week,value". Blank lines and lines starting with
// '#' are skipped; fields may be double-quoted. Errors carry the 1-based
// line number: Schema for a bad header or column count, Parse for a
// non-numeric week or value or a negative value,
// Duplicate for a repeated (season, week) key.
DataTable parse_csv_text(std::string_view text, SeriesKind kind,
                         std::string source = "<memory>");
DataTable parse_csv(const std::filesystem::path& path, SeriesKind kind);

// Same schema; values use the shortest round-trip representation, so parsing
// the output reproduces the table exactly.
std::string serialize_csv(const DataTable& table);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// One series per season in order of first appearance, weeks sorted by index.
// Non-consecutive indices set has_gaps.
std::vector<WeeklySeries> split_seasons(const DataTable& table);

// Inner join on week label. Throws InsufficientOverlap for fewer than 3
// shared weeks and ComparisonMismatch when the seasons differ.
PairedSeries join_engagement(const WeeklySeries& ili,
                             const WeeklySeries& retweets);

}  // namespace mediaflu
