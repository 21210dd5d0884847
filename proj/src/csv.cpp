#include "rtquad/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace rtquad {

std::string format_double(double x) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string_view>& header)
    : out_(out), columns_(header.size()) {
    for (auto name : header) {
        field(name);
    }
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
    if (current_ > 0) {
        out_ << ',';
    }
    out_ << text;
    ++current_;
    return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(format_double(x)); }
CsvWriter& CsvWriter::field(std::size_t n) { return field(std::to_string(n)); }
CsvWriter& CsvWriter::field(int n) { return field(std::to_string(n)); }
CsvWriter& CsvWriter::empty() { return field(std::string_view{}); }

void CsvWriter::end_row() {
    if (current_ != columns_) {
        throw std::logic_error("csv: row has " + std::to_string(current_) + " fields, expected " +
                               std::to_string(columns_));
    }
    out_ << '\n';
    current_ = 0;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace rtquad
