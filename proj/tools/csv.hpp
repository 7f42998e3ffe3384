#pragma once

#include "causal/timeseries.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace causal::cli
{

/// Asset columns of an input file. `dates` is empty when the file has no
/// leading "date" column.
struct CsvTable
{
    std::vector<std::string> dates;
    std::vector<TimeSeries> series;

    std::size_t rows() const noexcept { return series.empty() ? 0 : series.front().size(); }
    std::string date(std::size_t row) const { return row < dates.size() ? dates[row] : std::string{}; }
    /// Throws UnknownAsset.
    std::size_t index_of(const std::string &label) const;
};

/// Comma-separated, first line = headers. An optional first column named
/// "date" is carried as text; every other column is one asset of decimal
/// reals. Row numbers in errors are file line numbers (the header is row 1).
/// Throws ParseError (naming row and column) or EmptyInput.
CsvTable parse_csv(std::istream &in);

/// parse_csv on a file; throws Io if it cannot be opened.
CsvTable ingest_csv(const std::string &path);

/// Shortest text that reads back to the same double; NaN gives an empty
/// string and -0 prints as 0.
std::string format_double(double v);

/// Splits one CSV line on commas (no quoting), trimming blanks and a trailing CR.
std::vector<std::string> split_line(const std::string &line);

/// Text table keyed by header name, used to read long-format outputs back.
struct TextTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position of `name`, or header.size() when absent.
    std::size_t column(const std::string &name) const;
};

TextTable read_text_table(const std::string &path);

/// Replaces separators so free text fits in one CSV cell.
std::string csv_safe(std::string text);

} // namespace causal::cli
