// csv.hpp — deterministic CSV emission: LF endings, '.' decimals, 17
// significant digits, '#' metadata lines before the header row
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace jch::cli {

std::string format_number(double value);  // %.17g

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);

    void comment(const std::string& line);                 // "# line"
    void header(const std::vector<std::string>& columns);  // once, after comments
    void row(const std::vector<std::string>& cells);
    void close();

  private:
    std::ofstream out_;
    std::string path_;
    bool header_written_{false};
};

}  // namespace jch::cli
