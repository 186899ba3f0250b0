#include "fairaudit/csv.hpp"

#include "fairaudit/errors.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

namespace fairaudit {

int RawTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

// Reads one CSV record (possibly spanning several physical lines when quoted).
// Returns false at end of input with no record started.
bool read_record(std::istream& in, std::vector<std::string>& cells) {
    cells.clear();
    std::string cell;
    bool in_quotes = false;
    bool any = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        any = true;
        char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    cell.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            cells.push_back(std::move(cell));
            return true;
        } else if (c == '\n') {
            cells.push_back(std::move(cell));
            return true;
        } else {
            cell.push_back(c);
        }
    }
    if (!any) return false;
    cells.push_back(std::move(cell));
    return true;
}

std::vector<std::string> dedupe_names(std::vector<std::string> names) {
    std::unordered_set<std::string> seen;
    for (auto& n : names) {
        if (!seen.insert(n).second) {
            // pandas-style suffixing; real files (e.g. COMPAS) repeat names
            int k = 1;
            std::string candidate;
            do {
                candidate = n + "." + std::to_string(k++);
            } while (seen.count(candidate));
            n = candidate;
            seen.insert(n);
        }
    }
    return names;
}

} // namespace

RawTable parse_csv(std::istream& in, bool has_header) {
    RawTable table;
    std::vector<std::string> cells;

    if (has_header) {
        if (!read_record(in, cells))
            throw DataError("csv: missing header");
        table.columns = dedupe_names(cells);
    }

    std::size_t row_index = 0;
    while (read_record(in, cells)) {
        // skip a trailing blank line
        if (cells.size() == 1 && cells[0].empty() && in.peek() == EOF) break;
        ++row_index;
        if (table.columns.empty()) {
            table.columns.reserve(cells.size());
            for (std::size_t i = 0; i < cells.size(); ++i)
                table.columns.push_back("col" + std::to_string(i));
        }
        if (cells.size() != table.columns.size()) {
            std::ostringstream msg;
            msg << "csv: row " << row_index << " has " << cells.size()
                << " cells, expected " << table.columns.size();
            throw DataError(msg.str());
        }
        table.rows.push_back(cells);
    }
    return table;
}

RawTable load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("csv: cannot open " + path);
    return parse_csv(in, has_header);
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace fairaudit
