#include "fracheat/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracheat/error.hpp"

namespace fracheat::csv {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw NumericalError("format_real: to_chars failed");
    return std::string(buf, end);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    require(!columns_.empty(), "csv::Table: at least one column required");
}

void Table::add_row(std::vector<std::string> cells) {
    require(cells.size() == columns_.size(), "csv::Table: row width does not match header");
    rows_.push_back(std::move(cells));
}

void Table::add_reals(std::initializer_list<double> values) {
    add_reals(std::vector<double>(values));
}

void Table::add_reals(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_real(v));
    add_row(std::move(cells));
}

std::string Table::str() const {
    std::ostringstream os;
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << escape(cells[i]);
        }
        os << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

void Table::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const std::string text = str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace fracheat::csv
