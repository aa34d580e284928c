#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wavetwin {

/// RFC-4180 text: fields containing a comma, quote or line break are quoted,
/// quotes doubled, records end in CRLF.
std::string csv_escape(std::string_view field);
/// Shortest-round-trip-safe decimal form (%.17g).
std::string csv_number(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    /// Throws if the field count differs from the header.
    void add_row(std::vector<std::string> fields);
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace wavetwin
