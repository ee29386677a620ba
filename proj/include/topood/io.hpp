#pragma once

#include "topood/bootstrap.hpp"
#include "topood/compare.hpp"
#include "topood/persistence.hpp"
#include "topood/pointcloud.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace topood::io {

enum class CloudFormat { Auto, Csv, Topd };

CloudFormat parse_cloud_format(std::string_view text);

/// Binary embedding file: 32-byte header then n_points * dim little-endian doubles.
///   "TOPD" | u32 version = 1 | u64 n_points | u64 dim | u8 role | 7 zero bytes
inline constexpr std::size_t kTopdHeaderSize = 32;
inline constexpr std::uint32_t kTopdVersion = 1;

/// Auto picks TOPD for a ".topd" extension and CSV otherwise.
/// CSV: one point per row, optional first line "dim=<d>,role=<r>".
/// Throws InputError with a distinct message per defect.
PointCloud read_point_cloud(const std::filesystem::path& path, CloudFormat format = CloudFormat::Auto,
                            std::optional<Role> role_override = std::nullopt);

PointCloud parse_csv_cloud(std::string_view text, const std::string& source = {});
PointCloud parse_topd_cloud(std::span<const unsigned char> bytes, const std::string& source = {});
std::string format_csv_cloud(const PointCloud& cloud);
std::vector<unsigned char> format_topd_cloud(const PointCloud& cloud);

void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path,
                       CloudFormat format = CloudFormat::Auto);

/// Provenance recorded in the comment header of a diagram file.
struct DiagramMeta {
    std::string source;
    ThresholdPolicy threshold;
    bool include_zero_h0_bars = true;
};

/// '#'-prefixed metadata lines, then one "dimension,birth,death" record per bar ("inf" for essential).
std::string format_diagram(const PersistenceDiagram& diagram, const DiagramMeta& meta);
std::string format_diagram_records(const PersistenceDiagram& diagram);
void write_diagram(const PersistenceDiagram& diagram, const DiagramMeta& meta, const std::filesystem::path& path);

struct Histogram {
    double min = 0.0;
    double max = 0.0;
    std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max]; the last bin is closed. NaNs are ignored.
Histogram histogram(std::span<const double> values, std::size_t bins);

inline constexpr std::size_t kDefaultHistogramBins = 100;

std::string format_distributions(const BootstrapResult& result, std::size_t bins = kDefaultHistogramBins);
void write_distributions(const BootstrapResult& result, const std::filesystem::path& path,
                         std::size_t bins = kDefaultHistogramBins);

/// Accepts files written by write_distributions and interval-only files whose entries carry
/// "ci" but no "values".
BootstrapResult parse_distributions(std::string_view text);
BootstrapResult read_distributions(const std::filesystem::path& path);

std::string format_report(const ComparisonReport& report, const OodVerdict& verdict);
void write_report(const ComparisonReport& report, const OodVerdict& verdict, const std::filesystem::path& path);

/// Train / Test / OOD rows of interval pairs per statistic, followed by the verdict.
std::string render_table(const ComparisonReport& report, const OodVerdict& verdict, int precision = 3);

/// Writes through a temporary sibling and renames, so readers never see a partial file.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

} // namespace topood::io
