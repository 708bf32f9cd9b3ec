#include "qsched/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qsched {

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw std::invalid_argument("csv: empty header");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += header[i];
    }
    body_ += '\n';
}

void CsvWriter::add_row(std::vector<std::string> fields) {
    if (fields.size() != columns_)
        throw std::invalid_argument("csv: row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) body_ += ',';
        body_ += fields[i];
    }
    body_ += '\n';
    ++rows_;
}

void CsvWriter::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("csv: cannot open " + path + " for writing");
    out << body_;
}

} // namespace qsched
