#include "fdboot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

namespace fdboot {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string unquote(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

double parse_number(std::string_view text, std::size_t line, std::size_t column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw CsvError(line, fmt::format("column {}: '{}' is not a number", column + 1, text));
    }
    if (!std::isfinite(value)) {
        throw CsvError(line, fmt::format("column {}: value is not finite", column + 1));
    }
    return value;
}

}  // namespace

CsvError::CsvError(std::size_t line, const std::string& message)
    : ValidationError(fmt::format("line {}: {}", line, message)), line_(line) {}

Dataset parse_dataset(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> ids;
    std::set<std::string> seen;

    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw CsvError(line_no, "missing header row");
    const auto header = split_fields(line);
    if (header.size() < 2) throw CsvError(line_no, "header needs a grid column and at least one curve");
    if (unquote(header[0]) != "t") throw CsvError(line_no, "first header field must be 't'");
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::string id = unquote(header[c]);
        if (id.empty()) throw CsvError(line_no, fmt::format("curve id in column {} is empty", c + 1));
        if (!seen.insert(id).second) throw CsvError(line_no, fmt::format("duplicate curve id '{}'", id));
        ids.push_back(std::move(id));
    }

    const std::size_t n = ids.size();
    std::vector<double> grid;
    std::vector<std::vector<double>> columns(n);
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != n + 1) {
            throw CsvError(line_no, fmt::format("expected {} fields, found {}", n + 1, fields.size()));
        }
        const double t = parse_number(fields[0], line_no, 0);
        if (!grid.empty() && !(t > grid.back())) {
            throw CsvError(line_no, "grid points must be strictly increasing");
        }
        grid.push_back(t);
        for (std::size_t c = 0; c < n; ++c) columns[c].push_back(parse_number(fields[c + 1], line_no, c + 1));
    }
    if (grid.size() < 2) throw CsvError(line_no, "dataset needs at least 2 grid rows");

    RowMatrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[i][j];
        }
    }
    return Dataset{std::move(ids), FunctionalSample(make_grid(Grid(std::move(grid))), std::move(values))};
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    return parse_dataset(in);
}

std::string format_shortest(double value) { return fmt::format("{}", value); }

std::string format_exact(double value) { return fmt::format("{:.17g}", value); }

std::vector<std::string> default_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back(fmt::format("curve_{}", i + 1));
    return ids;
}

void write_dataset(std::ostream& out, const FunctionalSample& sample,
                   const std::vector<std::string>& ids) {
    if (ids.size() != sample.size()) {
        throw ValidationError(fmt::format("{} ids for {} curves", ids.size(), sample.size()));
    }
    std::string buffer = "t";
    for (const auto& id : ids) {
        buffer += ',';
        buffer += id;
    }
    buffer += '\n';
    const Grid& grid = *sample.grid();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        buffer += format_exact(grid[j]);
        for (std::size_t i = 0; i < sample.size(); ++i) {
            buffer += ',';
            buffer += format_exact(sample.row(i)[j]);
        }
        buffer += '\n';
    }
    out << buffer;
}

void write_coverage_csv(std::ostream& out, const CoverageTable& table) {
    out << "statistic,depth,metric,bootstrap,method,n,B1,B2,R,nominal,empirical,mc_stderr\n";
    for (const auto& r : table.rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.statistic, r.depth, r.metric,
                           r.bootstrap, to_string(r.method), r.n, r.B1, r.B2, r.R,
                           format_shortest(r.nominal), format_shortest(r.empirical),
                           format_shortest(r.mc_stderr));
    }
}

void write_band_csv(std::ostream& out, const BandSet& bands) {
    out << "t,estimate,lower_single,upper_single,lower_double,upper_double\n";
    const Grid& grid = *bands.single.estimate.grid();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out << format_exact(grid[j]) << ',' << format_exact(bands.single.estimate[j]) << ','
            << format_exact(bands.single.lower[j]) << ',' << format_exact(bands.single.upper[j]) << ',';
        if (bands.double_level) {
            out << format_exact(bands.double_level->lower[j]) << ','
                << format_exact(bands.double_level->upper[j]);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

void write_depth_csv(std::ostream& out, const DepthScores& depth,
                     const std::vector<std::string>& ids) {
    out << "curve_id,score,rank\n";
    for (std::size_t rank = 0; rank < depth.order.size(); ++rank) {
        const std::size_t i = depth.order[rank];
        out << ids.at(i) << ',' << format_exact(depth.scores[i]) << ',' << rank + 1 << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out << content;
    out.flush();
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace fdboot
