#pragma once

// Report plumbing: RFC-4180 CSV, SHA-256 digests for run manifests, tiny
// SVG 1.1 emitters, and a deterministic index-sharded parallel loop.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nlab {

std::string sha256_hex(const std::string& data);

std::string csv_field(const std::string& raw);

class CsvWriter {
public:
    void row(const std::vector<std::string>& fields);
    const std::string& text() const { return out_; }

private:
    std::string out_;
};

std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// scatter of (x, y) with axes; y grows downward in data terms (already
// transformed by the caller); series: (points, css color, radius)
struct SvgSeries {
    std::vector<std::pair<double, double>> points;
    std::string color = "#000000";
    double radius = 2.0;
    bool line = false;
};

std::string svg_chart(const std::vector<SvgSeries>& series, const std::string& x_label,
                      const std::string& y_label, const std::string& title,
                      int width = 640, int height = 420);

// runs fn(i) for i in [0, n) over up to NLAB_THREADS workers (default: all
// cores); work is sharded by index, so any per-index output is deterministic
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace nlab
