#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mehpp {

/// Creates the directory (and parents); throws IoError with the path.
void ensure_directory(const std::filesystem::path& dir);

/// Full-precision number formatting used by every CSV file.
std::string format_number(double v);

/// Comma-separated table with a fixed header. Fields are written verbatim, so
/// callers pass plain identifiers or numbers formatted with format_number.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(long v);
    CsvWriter& operator<<(int v) { return *this << static_cast<long>(v); }
    CsvWriter& operator<<(std::size_t v) { return *this << static_cast<long>(v); }
    CsvWriter& operator<<(const std::string& field);
    CsvWriter& operator<<(const char* field) { return *this << std::string(field); }
    /// Ends the current row; throws if the column count does not match.
    void end_row();
    void close();

private:
    void put(const std::string& field);

    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Minimal SVG line chart: framed axes, tick labels at the extremes, one
/// coloured polyline per series and a legend.
std::string render_svg(const PlotSpec& plot);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace mehpp
