#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace speclab {

/// Shortest round-trip decimal representation; "nan"/"inf" spelled out.
std::string format_number(double v);

/// One formatted table cell. Empty text means a missing value.
struct Cell {
    Cell(double v) : text{format_number(v)}, numeric{true} {}
    Cell(std::int64_t v) : text{std::to_string(v)}, numeric{true} {}
    Cell(int v) : Cell(static_cast<std::int64_t>(v)) {}
    Cell(bool v) : Cell(static_cast<std::int64_t>(v ? 1 : 0)) {}
    Cell(std::optional<double> v) : text{v ? format_number(*v) : std::string{}}, numeric{v.has_value()} {}

    std::string text;
    bool numeric = true;
};

/// A data table with a fixed column order, written as CSV or JSON.
class Table {
public:
    Table(std::string name, std::vector<std::string> columns);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    std::size_t rows() const noexcept { return cells_.size(); }
    const std::vector<Cell>& row(std::size_t i) const { return cells_.at(i); }

    /// Throws InvalidArgument when the cell count differs from the columns.
    void add_row(std::initializer_list<Cell> cells);

    std::string to_csv() const;
    /// {"name": ..., "columns": [...], "rows": [[...], ...]}; missing cells are null.
    std::string to_json() const;

    /// Writes <dir>/<name>.csv or .json and returns the path.
    std::filesystem::path write(const std::filesystem::path& dir, bool json) const;

private:
    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> cells_;
};

} // namespace speclab
