#include "mechsq/runner/time_series.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mechsq::runner {

namespace {

std::ofstream open_for_write(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    return out;
}

}  // namespace

void TimeSeries::append(Real t, const QuadratureMoments& m, Real purity, Real n_th, std::optional<Real> p_e) {
    if (!rows.empty() && !(t > rows.back().t)) throw InvalidArgument("time series timestamps must increase strictly");
    TimeSeriesRow row;
    row.t = t;
    row.var_x1 = m.var_x1;
    row.var_x2 = m.var_x2;
    row.cov = m.cov;
    row.var_x1_db = to_db(m.var_x1);
    row.var_x1_renorm_db = to_db(renormalize(m.var_x1, n_th));
    row.purity = purity;
    row.p_e = has_p_e ? p_e : std::nullopt;
    rows.push_back(row);
}

std::vector<Real> TimeSeries::var_x1() const {
    std::vector<Real> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.var_x1);
    return out;
}

std::vector<Real> TimeSeries::column_p_e() const {
    std::vector<Real> out;
    for (const auto& r : rows) {
        if (r.p_e) out.push_back(*r.p_e);
    }
    return out;
}

std::string format_number(Real v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const TimeSeries& series) {
    out << "t,var_x1,var_x2,cov,var_x1_db,var_x1_renorm_db,purity";
    if (series.has_p_e) out << ",p_e";
    out << '\n';
    for (const auto& r : series.rows) {
        out << format_number(r.t) << ',' << format_number(r.var_x1) << ',' << format_number(r.var_x2) << ','
            << format_number(r.cov) << ',' << format_number(r.var_x1_db) << ',' << format_number(r.var_x1_renorm_db)
            << ',' << format_number(r.purity);
        if (series.has_p_e) out << ',' << (r.p_e ? format_number(*r.p_e) : std::string());
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& file, const TimeSeries& series) {
    auto out = open_for_write(file);
    write_csv(out, series);
}

void write_wigner(std::ostream& out, const WignerGrid& grid) {
    out << grid.xs.size() << ' ' << grid.ys.size() << '\n';
    out << format_number(grid.xs.front()) << ' ' << format_number(grid.xs.back()) << '\n';
    out << format_number(grid.ys.front()) << ' ' << format_number(grid.ys.back()) << '\n';
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
            if (j) out << ' ';
            out << format_number(grid.values(i, j));
        }
        out << '\n';
    }
}

void write_wigner(const std::filesystem::path& file, const WignerGrid& grid) {
    auto out = open_for_write(file);
    write_wigner(out, grid);
}

void write_csv(const std::filesystem::path& file, const Table& table) {
    auto out = open_for_write(file);
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

}  // namespace mechsq::runner
