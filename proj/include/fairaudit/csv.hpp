#ifndef FAIRAUDIT_CSV_HPP
#define FAIRAUDIT_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairaudit {

/// A parsed CSV table: column names plus rows of text cells.
/// Invariants: every row has exactly columns.size() cells; column names are
/// unique (duplicate header names get ".1", ".2", ... suffixes on load).
struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t row_count() const { return rows.size(); }

    /// Index of a named column, or -1.
    int column_index(const std::string& name) const;
};

/// Parse RFC-4180 CSV from a stream. Handles quoted fields, embedded commas,
/// escaped quotes and CRLF line endings. With has_header=false columns are
/// named "col0".."colK". Throws DataError on a ragged row (message carries the
/// 1-based data row index) or on an empty input when a header was expected.
RawTable parse_csv(std::istream& in, bool has_header);

/// parse_csv over a file. Throws DataError if the file cannot be opened.
RawTable load_csv(const std::string& path, bool has_header);

/// Quote a cell per RFC 4180 when it contains a comma, quote or newline.
std::string csv_escape(const std::string& cell);

} // namespace fairaudit

#endif
