#include "benjamin/csv.hpp"

#include <cstdio>

#include "benjamin/error.hpp"

namespace benjamin {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string> header)
    : CsvWriter(out, std::vector<std::string>(header)) {}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) throw Error(ErrorCode::InvalidArgument, "CSV row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
}

}  // namespace benjamin
