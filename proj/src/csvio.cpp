#include "sparsegen/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "sparsegen/errors.hpp"

namespace sparsegen {

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
    os_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) { row(cols); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os_ << csv_escape(cells[i]) << (i + 1 == cells.size() ? "" : ",");
    os_ << "\n";
}

namespace {
std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}
}  // namespace

CsvDoc parse_csv(std::istream& is) {
    CsvDoc doc;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            size_t start = body.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            body = body.substr(start);
            size_t eq = body.find('=');
            if (eq == std::string::npos) {
                doc.meta.emplace_back(body, "");
            } else {
                doc.meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
            }
            continue;
        }
        auto cells = split_row(line);
        if (!have_header) {
            doc.header = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != doc.header.size()) throw argument_error("csv: ragged row");
            doc.rows.push_back(std::move(cells));
        }
    }
    return doc;
}

std::string format_double(double v, int significant) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return buf;
}

}  // namespace sparsegen
