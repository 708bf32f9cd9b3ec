#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsched {

// Minimal CSV assembly: comma separators, header row, "." decimal point,
// reals at 12 significant digits. No quoting; field values must not
// contain commas or newlines.
std::string csv_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> fields);
    std::size_t rows() const { return rows_; }
    const std::string& body() const { return body_; }
    void save(const std::string& path) const;

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string body_;
};

} // namespace qsched
