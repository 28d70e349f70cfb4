// CSV formats exchanged with the command-line tool.
//
// Dataset files are long on the grid and wide on curves:
//
//     t,<id_1>,...,<id_n>
//     t_1,x_1(t_1),...,x_n(t_1)
//     ...
//
// Values are written with 17 significant digits so a write/read cycle is
// lossless.

#ifndef FDBOOT_IO_HPP
#define FDBOOT_IO_HPP

#include "fdboot/boot.hpp"
#include "fdboot/core.hpp"
#include "fdboot/sim.hpp"
#include "fdboot/stats.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fdboot {

/// Malformed CSV content; carries the 1-based line number.
class CsvError : public ValidationError {
public:
    CsvError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Dataset {
    std::vector<std::string> ids;
    FunctionalSample sample;
};

Dataset parse_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const FunctionalSample& sample,
                   const std::vector<std::string>& ids);
/// Default ids are curve_1, ..., curve_n.
std::vector<std::string> default_ids(std::size_t n);

/// Header: statistic,depth,metric,bootstrap,method,n,B1,B2,R,nominal,empirical,mc_stderr
void write_coverage_csv(std::ostream& out, const CoverageTable& table);

/// Header: t,estimate,lower_single,upper_single,lower_double,upper_double.
/// Double columns are left empty when no double band was computed.
void write_band_csv(std::ostream& out, const BandSet& bands);

/// Header: curve_id,score,rank; rows ordered deepest first (rank 1).
void write_depth_csv(std::ostream& out, const DepthScores& depth,
                     const std::vector<std::string>& ids);

/// Shortest representation that parses back to the same double.
std::string format_shortest(double value);
/// 17 significant digits.
std::string format_exact(double value);

/// Writes `content` to `path`, throwing IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace fdboot

#endif  // FDBOOT_IO_HPP
