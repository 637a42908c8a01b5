#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mechsq/observables.hpp"
#include "mechsq/types.hpp"

namespace mechsq::runner {

struct TimeSeriesRow {
    Real t = 0.0;
    Real var_x1 = 1.0;
    Real var_x2 = 1.0;
    Real cov = 0.0;
    Real var_x1_db = 0.0;
    Real var_x1_renorm_db = 0.0;
    Real purity = 1.0;
    std::optional<Real> p_e;
};

/// Per-timestamp observables of one run. The p_e column exists only for
/// protocol (measurement) runs.
struct TimeSeries {
    bool has_p_e = false;
    std::vector<TimeSeriesRow> rows;

    /// Appends a row computed from moments; t must exceed the previous row's.
    void append(Real t, const QuadratureMoments& m, Real purity, Real n_th, std::optional<Real> p_e = {});

    [[nodiscard]] std::vector<Real> var_x1() const;
    [[nodiscard]] std::vector<Real> column_p_e() const;
};

/// Locale-independent shortest round-trip formatting ('.' decimal separator).
std::string format_number(Real v);

/// Header: t,var_x1,var_x2,cov,var_x1_db,var_x1_renorm_db,purity[,p_e]
void write_csv(std::ostream& out, const TimeSeries& series);
void write_csv(const std::filesystem::path& file, const TimeSeries& series);

/// Header lines "nx ny", "x_min x_max", "y_min y_max", then one grid row
/// (fixed y, increasing x) per line.
void write_wigner(std::ostream& out, const WignerGrid& grid);
void write_wigner(const std::filesystem::path& file, const WignerGrid& grid);

/// Simple CSV table with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
void write_csv(const std::filesystem::path& file, const Table& table);

}  // namespace mechsq::runner
