#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sparsegen {

inline constexpr const char* kLibraryVersion = "sparsegen 0.1.0";

// CSV with '#'-prefixed metadata lines, then a header row, then data rows.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void meta(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
};

struct CsvDoc {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvDoc parse_csv(std::istream& is);

std::string format_double(double v, int significant = 12);
std::string csv_escape(const std::string& cell);

}  // namespace sparsegen
