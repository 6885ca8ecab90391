#include "csig/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "csig/errors.hpp"

namespace fs = std::filesystem;

namespace csig {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // Trim spaces and a trailing CR.
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool looks_like_date(const std::string& cell) {
    return cell.size() == 10 && cell[4] == '-' && cell[7] == '-';
}

double parse_price(const std::string& cell, const std::string& file, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(file + ":" + std::to_string(line_no) + ": bad numeric field '" + cell +
                         "'");
    }
}

Date parse_date_cell(const std::string& cell, const std::string& file, std::size_t line_no) {
    try {
        return Date::parse_iso(cell);
    } catch (const std::exception& e) {
        throw ParseError(file + ":" + std::to_string(line_no) + ": " + e.what());
    }
}

struct RawSeries {
    std::string id;
    std::vector<std::pair<Date, double>> rows;
};

// Parses one file into one or more raw (unsorted) series.
std::vector<RawSeries> parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            lines.push_back(line);
        } else {
            lines.emplace_back();  // keep numbering aligned with the file
        }
    }
    std::size_t first = 0;
    while (first < lines.size() && lines[first].empty()) ++first;
    if (first == lines.size()) throw ParseError(path + ": empty file");

    const auto header = split_csv_line(lines[first]);
    if (header.size() < 2) throw ParseError(path + ":" + std::to_string(first + 1) +
                                            ": expected at least 2 columns");

    const bool has_header = !looks_like_date(header[0]);
    const bool wide = header.size() > 2;
    if (wide && !has_header) {
        throw ParseError(path + ":" + std::to_string(first + 1) +
                         ": wide layout requires a header naming the tickers");
    }

    std::vector<RawSeries> out;
    if (wide) {
        out.resize(header.size() - 1);
        for (std::size_t c = 1; c < header.size(); ++c) {
            if (header[c].empty()) {
                throw ParseError(path + ":" + std::to_string(first + 1) + ": empty ticker name");
            }
            out[c - 1].id = header[c];
        }
    } else {
        out.resize(1);
        out[0].id = fs::path(path).stem().string();
    }

    const std::size_t data_start = has_header ? first + 1 : first;
    for (std::size_t i = data_start; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != header.size()) {
            throw ParseError(path + ":" + std::to_string(i + 1) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(cells.size()));
        }
        const Date d = parse_date_cell(cells[0], path, i + 1);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            if (cells[c].empty()) continue;  // missing observation for this ticker
            out[c - 1].rows.emplace_back(d, parse_price(cells[c], path, i + 1));
        }
    }
    return out;
}

Series finalize_raw(RawSeries raw, const std::string& path) {
    if (raw.rows.empty()) throw ParseError(path + ": series '" + raw.id + "' has no rows");
    std::stable_sort(raw.rows.begin(), raw.rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(raw.rows.size());
    values.reserve(raw.rows.size());
    for (const auto& [d, v] : raw.rows) {
        if (!dates.empty() && !(dates.back() < d)) {
            throw ParseError(path + ": series '" + raw.id + "' has duplicate date " + d.to_iso());
        }
        dates.push_back(d);
        values.push_back(v);
    }
    try {
        return make_series(std::move(raw.id), std::move(dates), std::move(values));
    } catch (const InvalidArgument& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace

IngestReport ingest_csv(const std::vector<std::string>& paths, double max_missing_frac) {
    if (paths.empty()) throw EmptyEnsemble("no input files");
    std::vector<Series> members;
    for (const auto& path : paths) {
        for (auto& raw : parse_file(path)) members.push_back(finalize_raw(std::move(raw), path));
    }
    AlignmentReport aligned = align_series(std::move(members), max_missing_frac);
    return IngestReport{std::move(aligned.ensemble), std::move(aligned.rejected),
                        aligned.dropped_dates};
}

IngestReport ingest_csv_dir(const std::string& dir, double max_missing_frac) {
    if (!fs::is_directory(dir)) throw ParseError(dir + ": not a directory");
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            paths.push_back(entry.path().string());
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw EmptyEnsemble(dir + ": no .csv files");
    return ingest_csv(paths, max_missing_frac);
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
    if (!out) throw ParseError(path + ": cannot open for writing");
    return out;
}

}  // namespace

void write_series_csv(const std::string& path, const Series& s) {
    auto out = open_out(path);
    out << "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << s.dates[i].to_iso() << ',' << format_real(s.values[i]) << '\n';
    }
}

Series read_series_csv(const std::string& path, const std::string& id) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::string line;
    std::vector<Date> dates;
    std::vector<double> values;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (line_no == 1 && !looks_like_date(cells[0])) continue;  // header
        if (cells.size() != 2) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 2 columns");
        }
        dates.push_back(parse_date_cell(cells[0], path, line_no));
        values.push_back(parse_price(cells[1], path, line_no));
    }
    return make_series(id, std::move(dates), std::move(values));
}

namespace {

void write_matrix_header(std::ofstream& out, const std::vector<std::string>& ids) {
    out << "id";
    for (const auto& id : ids) out << ',' << id;
    out << '\n';
}

}  // namespace

void write_verdict_matrix_csv(const std::string& path, const CausalityMatrix& matrix) {
    auto out = open_out(path);
    write_matrix_header(out, matrix.ids());
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out << matrix.ids()[i];
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            out << ',' << (i == j ? 0 : (matrix.verdict(i, j) ? 1 : 0));
        }
        out << '\n';
    }
}

void write_pvalue_matrix_csv(const std::string& path, const CausalityMatrix& matrix) {
    auto out = open_out(path);
    write_matrix_header(out, matrix.ids());
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out << matrix.ids()[i];
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            out << ',' << format_real(i == j ? 1.0 : matrix.p_value(i, j));
        }
        out << '\n';
    }
}

void write_real_matrix_csv(const std::string& path, const std::vector<std::string>& ids,
                           const Matrix& matrix) {
    auto out = open_out(path);
    write_matrix_header(out, ids);
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out << ids[i];
        for (std::size_t j = 0; j < matrix.cols(); ++j) out << ',' << format_real(matrix(i, j));
        out << '\n';
    }
}

void write_arqa_table_csv(const std::string& path, const std::vector<RqaSummary>& table) {
    auto out = open_out(path);
    out << "window_date,series,rr,det,lam,epsilon,achieved_rr\n";
    for (const auto& row : table) {
        out << row.window.label_date.to_iso() << ',' << row.series_id << ','
            << format_real(row.rr) << ',' << format_real(row.det) << ',' << format_real(row.lam)
            << ',' << format_real(row.epsilon) << ',' << format_real(row.achieved_rr) << '\n';
    }
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRow>& rows) {
    auto out = open_out(path);
    out << "stage,window,subject,detail\n";
    for (const auto& row : rows) {
        std::string detail = row.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        out << row.stage << ',' << row.window << ',' << row.subject << ',' << detail << '\n';
    }
}

}  // namespace csig
