#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rtquad {

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

// Minimal CSV writer: fields are written verbatim (none of ours need quoting).
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string_view>& header);

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double x);
    CsvWriter& field(std::size_t n);
    CsvWriter& field(int n);
    CsvWriter& empty();
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t current_ = 0;
};

std::vector<std::string> split_csv_line(std::string_view line);

} // namespace rtquad
