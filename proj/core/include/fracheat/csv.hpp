#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace fracheat::csv {

// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_real(double v);

class Table {
public:
    explicit Table(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t rows() const { return rows_.size(); }

    // Cells are pre-formatted strings; use format_real for numbers.
    void add_row(std::vector<std::string> cells);
    void add_reals(std::initializer_list<double> values);
    void add_reals(const std::vector<double>& values);

    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// Quote a field if it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace fracheat::csv
