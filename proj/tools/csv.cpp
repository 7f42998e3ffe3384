#include "csv.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace causal::cli
{

std::size_t CsvTable::index_of(const std::string &label) const
{
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].label() == label) {
            return i;
        }
    }
    fail(Errc::UnknownAsset, "no asset column named '" + label + "'");
}

std::vector<std::string> split_line(const std::string &line)
{
    std::vector<std::string> out;
    std::string text = line;
    if (!text.empty() && text.back() == '\r') {
        text.pop_back();
    }
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = text.find(',', begin);
        std::string cell = text.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
        const auto first = cell.find_first_not_of(" \t");
        const auto last = cell.find_last_not_of(" \t");
        out.push_back(first == std::string::npos ? std::string{} : cell.substr(first, last - first + 1));
        if (end == std::string::npos) {
            break;
        }
        begin = end + 1;
    }
    return out;
}

CsvTable parse_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line)) {
        fail(Errc::EmptyInput, "input has no header row");
    }
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) {
        line.erase(0, 3);
    }
    const std::vector<std::string> header = split_line(line);
    const bool has_date = !header.empty() && header.front() == "date";
    const std::size_t first_asset = has_date ? 1 : 0;
    if (header.size() <= first_asset) {
        fail(Errc::EmptyInput, "input has no asset columns");
    }
    for (std::size_t c = first_asset; c < header.size(); ++c) {
        if (header[c].empty()) {
            fail(Errc::ParseError, "row 1, column " + std::to_string(c + 1) + ": empty header");
        }
    }

    const std::size_t assets = header.size() - first_asset;
    std::vector<std::vector<double>> columns(assets);
    std::vector<std::string> dates;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            fail(Errc::ParseError, "row " + std::to_string(row) + ": expected " +
                                       std::to_string(header.size()) + " cells, found " +
                                       std::to_string(cells.size()));
        }
        if (has_date) {
            dates.push_back(cells.front());
        }
        for (std::size_t a = 0; a < assets; ++a) {
            const std::string &cell = cells[first_asset + a];
            double v = 0.0;
            const char *end = cell.data() + cell.size();
            const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
            if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
                fail(Errc::ParseError, "row " + std::to_string(row) + ", column '" +
                                           header[first_asset + a] + "': not a number: '" + cell + "'");
            }
            columns[a].push_back(v);
        }
    }
    if (columns.front().empty()) {
        fail(Errc::EmptyInput, "input has no data rows");
    }
    CsvTable out;
    out.dates = std::move(dates);
    for (std::size_t a = 0; a < assets; ++a) {
        out.series.emplace_back(std::move(columns[a]), header[first_asset + a]);
    }
    return out;
}

CsvTable ingest_csv(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(Errc::Io, "cannot open '" + path + "'");
    }
    try {
        return parse_csv(in);
    } catch (const Error &e) {
        throw e.with_context(path);
    }
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return {};
    }
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::size_t TextTable::column(const std::string &name) const
{
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

TextTable read_text_table(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(Errc::Io, "cannot open '" + path + "'");
    }
    TextTable out;
    std::string line;
    if (!std::getline(in, line)) {
        fail(Errc::EmptyInput, path + ": no header row");
    }
    out.header = split_line(line);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto cells = split_line(line);
        if (cells.size() != out.header.size()) {
            fail(Errc::ParseError, path + ": row " + std::to_string(row) + " has " +
                                       std::to_string(cells.size()) + " cells");
        }
        out.rows.push_back(std::move(cells));
    }
    return out;
}

std::string csv_safe(std::string text)
{
    for (char &c : text) {
        if (c == ',') {
            c = ';';
        } else if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    return text;
}

} // namespace causal::cli
