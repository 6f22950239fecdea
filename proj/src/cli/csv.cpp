#include "jch/cli/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace jch::cli {

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
}

void CsvWriter::comment(const std::string& line) {
    if (header_written_)
        throw std::logic_error("CsvWriter: comments must precede the header");
    out_ << "# " << line << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    if (header_written_) throw std::logic_error("CsvWriter: header already written");
    header_written_ = true;
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (!header_written_) throw std::logic_error("CsvWriter: header missing");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

void CsvWriter::close() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failure on " + path_);
    out_.close();
}

}  // namespace jch::cli
