#pragma once

#include <string>
#include <vector>

#include "csig/granger.hpp"
#include "csig/numstat.hpp"
#include "csig/rqa.hpp"
#include "csig/series.hpp"

namespace csig {

struct IngestReport {
    Ensemble prices;
    std::vector<std::pair<std::string, double>> rejected;  ///< id, missing fraction
    std::size_t dropped_dates = 0;
};

/// Reads daily closes from CSV. Two layouts are auto-detected per file:
/// one series per file with a `date,close` header (ticker = file stem), or a
/// wide file with a `date,<ticker>,...` header. Calendars are inner-joined;
/// members missing more than max_missing_frac of the union calendar are
/// rejected and reported.
IngestReport ingest_csv(const std::vector<std::string>& paths, double max_missing_frac = 0.05);

/// Ingests every *.csv under `dir` (sorted by name).
IngestReport ingest_csv_dir(const std::string& dir, double max_missing_frac = 0.05);

/// Decimal formatting used in every result file: 12 significant digits.
std::string format_real(double v);

void write_series_csv(const std::string& path, const Series& s);
Series read_series_csv(const std::string& path, const std::string& id);

void write_verdict_matrix_csv(const std::string& path, const CausalityMatrix& matrix);
void write_pvalue_matrix_csv(const std::string& path, const CausalityMatrix& matrix);
void write_real_matrix_csv(const std::string& path, const std::vector<std::string>& ids,
                           const Matrix& matrix);
void write_arqa_table_csv(const std::string& path, const std::vector<RqaSummary>& table);

struct DiagnosticRow {
    std::string stage;
    std::string window;
    std::string subject;
    std::string detail;
};

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRow>& rows);

}  // namespace csig
