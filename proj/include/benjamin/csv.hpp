#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace benjamin {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Minimal CSV writer; every float goes through format_double.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string> header);
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

private:
    std::ostream& out_;
    std::size_t columns_;
};

}  // namespace benjamin
