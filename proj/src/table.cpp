#include "speclab/table.hpp"

#include "speclab/error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace speclab {

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Table::Table(std::string name, std::vector<std::string> columns)
    : name_{std::move(name)}, columns_{std::move(columns)}
{
}

void Table::add_row(std::initializer_list<Cell> cells)
{
    if (cells.size() != columns_.size()) {
        throw InvalidArgument("table " + name_ + ": row has " + std::to_string(cells.size()) +
                              " cells, expected " + std::to_string(columns_.size()));
    }
    cells_.emplace_back(cells);
}

std::string Table::to_csv() const
{
    std::ostringstream out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        out << (c ? "," : "") << columns_[c];
    }
    out << '\n';
    for (const auto& row : cells_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << row[c].text;
        }
        out << '\n';
    }
    return out.str();
}

std::string Table::to_json() const
{
    // numbers are emitted from their formatted text so both outputs agree bit for bit
    std::ostringstream out;
    out << "{\"name\":" << nlohmann::json(name_).dump() << ",\"columns\":" << nlohmann::json(columns_).dump()
        << ",\"rows\":[";
    for (std::size_t r = 0; r < cells_.size(); ++r) {
        out << (r ? "," : "") << '[';
        const auto& row = cells_[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "");
            const auto& cell = row[c];
            if (cell.text.empty() || cell.text == "nan" || cell.text == "inf" || cell.text == "-inf") {
                out << (cell.text.empty() ? "null" : nlohmann::json(cell.text).dump());
            } else {
                out << cell.text;
            }
        }
        out << ']';
    }
    out << "]}\n";
    return out.str();
}

std::filesystem::path Table::write(const std::filesystem::path& dir, bool json) const
{
    std::filesystem::create_directories(dir);
    const auto path = dir / (name_ + (json ? ".json" : ".csv"));
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InvalidArgument("cannot open " + path.string() + " for writing");
    }
    f << (json ? to_json() : to_csv());
    return path;
}

} // namespace speclab
