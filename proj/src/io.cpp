#include "topood/io.hpp"

#include "topood/error.hpp"
#include "topood/numfmt.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace topood::io {

using json = nlohmann::ordered_json;

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

CloudFormat resolve(CloudFormat format, const std::filesystem::path& path) {
    if (format != CloudFormat::Auto) return format;
    return lower(path.extension().string()) == ".topd" ? CloudFormat::Topd : CloudFormat::Csv;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint64_t get_le(std::span<const unsigned char> bytes, std::size_t offset, int width) {
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v |= static_cast<std::uint64_t>(bytes[offset + b]) << (8 * b);
    return v;
}

// NaN is written as null by the JSON library; read it back the same way.
double number_or_nan(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json interval_json(const Interval& i) { return json::array({i.low, i.high}); }

json pair_json(const PairComparison& p) {
    return json{{"overlap", p.overlap}, {"gap", p.gap}, {"direction", p.direction}, {"smd", p.smd}};
}

json input_json(const InputSummary& s) {
    return json{{"source", s.source},
                {"seed", s.seed},
                {"source_points", s.source_points},
                {"empty_h1_samples", s.empty_h1_samples}};
}

json config_json(const BootstrapConfig& c) {
    json stats = json::array();
    for (const auto& id : c.statistics) stats.push_back(id.name());
    return json{{"sample_size", c.sample_size},
                {"iterations", c.iterations},
                {"ci_level", c.ci_level},
                {"seed", c.master_seed},
                {"threshold", c.threshold.to_string()},
                {"include_zero_h0_bars", c.include_zero_h0_bars},
                {"empty_h1", std::string(to_string(c.empty_h1))},
                {"statistics", stats},
                {"ci_method", "percentile"},
                {"quantile_rule", "linear interpolation, q = 1 + (n - 1) p"},
                {"rng", "splitmix64 counter stream keyed by (seed, iteration)"}};
}

std::string fixed(double v, int precision) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

} // namespace

CloudFormat parse_cloud_format(std::string_view text) {
    const std::string t = lower(text);
    if (t == "auto") return CloudFormat::Auto;
    if (t == "csv") return CloudFormat::Csv;
    if (t == "topd") return CloudFormat::Topd;
    throw InputError("unknown format '" + std::string(text) + "' (expected auto, csv or topd)");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw InputError("read error on '" + path.string() + "'");
    return ss.str();
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ResourceError("cannot open '" + tmp.string() + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw ResourceError("write error on '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ResourceError("cannot move output into place at '" + path.string() + "'");
    }
}

PointCloud parse_csv_cloud(std::string_view text, const std::string& source) {
    std::optional<std::size_t> dim;
    Role role = Role::Unlabeled;
    std::vector<double> coords;
    std::size_t n = 0;
    std::size_t line_no = 0;
    bool first_content = true;

    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        if (first_content && (line.starts_with("dim=") || line.starts_with("role="))) {
            first_content = false;
            for (std::string_view field : split(line, ',')) {
                field = trim(field);
                const auto eq = field.find('=');
                if (eq == std::string_view::npos)
                    throw InputError("malformed CSV header: field '" + std::string(field) + "' is not key=value");
                const std::string_view key = field.substr(0, eq), value = field.substr(eq + 1);
                if (key == "dim") {
                    const auto v = parse_real(value);
                    if (!v || *v < 1 || *v != std::floor(*v))
                        throw InputError("malformed CSV header: dim must be a positive integer, got '" +
                                         std::string(value) + "'");
                    dim = static_cast<std::size_t>(*v);
                } else if (key == "role") {
                    try {
                        role = parse_role(value);
                    } catch (const InputError& e) {
                        throw InputError(std::string("malformed CSV header: ") + e.what());
                    }
                } else {
                    throw InputError("malformed CSV header: unknown key '" + std::string(key) + "'");
                }
            }
            continue;
        }
        first_content = false;

        const auto fields = split(line, ',');
        if (!dim) dim = fields.size();
        if (fields.size() != *dim)
            throw InputError("dimension mismatch at line " + std::to_string(line_no) + ": expected " +
                             std::to_string(*dim) + " values, found " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_real(fields[c]);
            if (!v)
                throw InputError("unparseable value '" + std::string(trim(fields[c])) + "' at line " +
                                 std::to_string(line_no) + ", column " + std::to_string(c + 1));
            if (!std::isfinite(*v))
                throw InputError("non-finite value at line " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1));
            coords.push_back(*v);
        }
        ++n;
    }
    if (n == 0) throw InputError("no points found in CSV input");
    return PointCloud(n, *dim, std::move(coords), role, source);
}

PointCloud parse_topd_cloud(std::span<const unsigned char> bytes, const std::string& source) {
    if (bytes.size() < kTopdHeaderSize) throw InputError("TOPD input shorter than its 32-byte header");
    if (!std::equal(bytes.begin(), bytes.begin() + 4, "TOPD")) throw InputError("bad TOPD magic");
    const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
    if (version != kTopdVersion) throw InputError("unsupported TOPD version " + std::to_string(version));
    const std::uint64_t n = get_le(bytes, 8, 8), dim = get_le(bytes, 16, 8);
    const unsigned role_byte = bytes[24];
    if (role_byte > 3) throw InputError("invalid TOPD role byte " + std::to_string(role_byte));
    for (std::size_t k = 25; k < kTopdHeaderSize; ++k)
        if (bytes[k] != 0) throw InputError("TOPD reserved header bytes must be zero");
    if (n == 0 || dim == 0) throw InputError("TOPD header declares zero points or zero dimension");
    if (dim > std::numeric_limits<std::uint64_t>::max() / 8 / n)
        throw InputError("TOPD header sizes overflow");
    const std::uint64_t expected = n * dim * 8;
    if (bytes.size() - kTopdHeaderSize != expected)
        throw InputError("TOPD payload length mismatch: expected " + std::to_string(expected) + " bytes, found " +
                         std::to_string(bytes.size() - kTopdHeaderSize));

    std::vector<double> coords(n * dim);
    for (std::size_t k = 0; k < coords.size(); ++k)
        coords[k] = std::bit_cast<double>(get_le(bytes, kTopdHeaderSize + 8 * k, 8));
    return PointCloud(n, dim, std::move(coords), static_cast<Role>(role_byte), source);
}

PointCloud read_point_cloud(const std::filesystem::path& path, CloudFormat format, std::optional<Role> role_override) {
    const std::string contents = read_text_file(path);
    PointCloud cloud = [&] {
        try {
            if (resolve(format, path) == CloudFormat::Topd)
                return parse_topd_cloud({reinterpret_cast<const unsigned char*>(contents.data()), contents.size()},
                                        path.string());
            return parse_csv_cloud(contents, path.string());
        } catch (const InputError& e) {
            throw InputError(path.string() + ": " + e.what());
        }
    }();
    if (role_override) cloud.set_role(*role_override);
    return cloud;
}

std::string format_csv_cloud(const PointCloud& cloud) {
    std::string out = "dim=" + std::to_string(cloud.dim()) + ",role=" + std::string(to_string(cloud.role())) + "\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud.point(i);
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k) out += ',';
            out += format_real(p[k]);
        }
        out += '\n';
    }
    return out;
}

std::vector<unsigned char> format_topd_cloud(const PointCloud& cloud) {
    std::vector<unsigned char> out{'T', 'O', 'P', 'D'};
    out.reserve(kTopdHeaderSize + cloud.coords().size() * 8);
    put_u32(out, kTopdVersion);
    put_u64(out, cloud.size());
    put_u64(out, cloud.dim());
    out.push_back(static_cast<unsigned char>(cloud.role()));
    out.insert(out.end(), 7, 0);
    for (double x : cloud.coords()) put_u64(out, std::bit_cast<std::uint64_t>(x));
    return out;
}

void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format) {
    if (resolve(format, path) == CloudFormat::Topd) {
        const auto bytes = format_topd_cloud(cloud);
        write_file_atomically(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
    } else {
        write_file_atomically(path, format_csv_cloud(cloud));
    }
}

std::string format_diagram_records(const PersistenceDiagram& diagram) {
    std::string out;
    for (int dim : {0, 1})
        for (const Bar& b : diagram.bars(dim))
            out += std::to_string(b.dimension) + "," + format_real(b.birth) + "," + format_real(b.death) + "\n";
    return out;
}

std::string format_diagram(const PersistenceDiagram& diagram, const DiagramMeta& meta) {
    std::string out = "# topood persistence diagram (dimension,birth,death)\n";
    out += "# source=" + meta.source + "\n";
    out += "# n_points=" + std::to_string(diagram.n_points) + "\n";
    out += "# threshold_policy=" + meta.threshold.to_string() + "\n";
    out += "# threshold=" + format_real(diagram.threshold) + "\n";
    out += std::string("# include_zero_h0_bars=") + (meta.include_zero_h0_bars ? "true" : "false") + "\n";
    out += "# coefficients=Z/2\n";
    return out + format_diagram_records(diagram);
}

void write_diagram(const PersistenceDiagram& diagram, const DiagramMeta& meta, const std::filesystem::path& path) {
    write_file_atomically(path, format_diagram(diagram, meta));
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
    Histogram h;
    h.counts.assign(std::max<std::size_t>(bins, 1), 0);
    bool any = false;
    for (double v : values) {
        if (std::isnan(v)) continue;
        if (!any) {
            h.min = h.max = v;
            any = true;
        }
        h.min = std::min(h.min, v);
        h.max = std::max(h.max, v);
    }
    if (!any) return h;
    const double width = (h.max - h.min) / static_cast<double>(h.counts.size());
    for (double v : values) {
        if (std::isnan(v)) continue;
        std::size_t bin = width > 0.0 ? static_cast<std::size_t>((v - h.min) / width) : 0;
        bin = std::min(bin, h.counts.size() - 1);
        ++h.counts[bin];
    }
    return h;
}

std::string format_distributions(const BootstrapResult& result, std::size_t bins) {
    json dists = json::array();
    for (const auto& d : result.distributions) {
        const Histogram h = histogram(d.values, bins);
        dists.push_back(json{{"statistic", d.id.name()},
                             {"count", d.values.size()},
                             {"ci", json::array({d.ci_low, d.ci_high})},
                             {"mean", d.mean},
                             {"std", d.std},
                             {"histogram", json{{"min", h.min}, {"max", h.max}, {"counts", h.counts}}},
                             {"values", d.values}});
    }
    json doc{{"format", "topood-distributions"},
             {"version", 1},
             {"config", config_json(result.config)},
             {"input",
              json{{"source", result.source},
                   {"role", std::string(to_string(result.role))},
                   {"n_points", result.source_points},
                   {"dim", result.dim}}},
             {"empty_h1_samples", result.empty_h1_samples},
             {"histogram_bins", bins},
             {"distributions", dists}};
    return doc.dump(1) + "\n";
}

void write_distributions(const BootstrapResult& result, const std::filesystem::path& path, std::size_t bins) {
    write_file_atomically(path, format_distributions(result, bins));
}

BootstrapResult parse_distributions(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("distribution file is not valid JSON: ") + e.what());
    }
    try {
        if (doc.value("format", "") != "topood-distributions")
            throw InputError("not a topood distribution file (format field missing or wrong)");
        BootstrapResult r;
        const json& c = doc.at("config");
        r.config.sample_size = c.at("sample_size").get<std::size_t>();
        r.config.iterations = c.at("iterations").get<std::size_t>();
        r.config.ci_level = c.at("ci_level").get<double>();
        r.config.master_seed = c.value("seed", std::uint64_t{0});
        r.config.threshold = ThresholdPolicy::parse(c.value("threshold", std::string("enclosing")));
        r.config.include_zero_h0_bars = c.value("include_zero_h0_bars", true);
        r.config.empty_h1 = parse_empty_h1_policy(c.value("empty_h1", std::string("zeros")));
        r.config.statistics.clear();

        if (doc.contains("input")) {
            const json& in = doc.at("input");
            r.source = in.value("source", std::string());
            r.role = parse_role(in.value("role", std::string("unlabeled")));
            r.source_points = in.value("n_points", std::size_t{0});
            r.dim = in.value("dim", std::size_t{0});
        }
        r.empty_h1_samples = doc.value("empty_h1_samples", std::size_t{0});

        for (const json& d : doc.at("distributions")) {
            StatisticDistribution sd;
            sd.id = StatisticId::parse(d.at("statistic").get<std::string>());
            if (d.contains("values")) sd.values = d.at("values").get<std::vector<double>>();
            const json& ci = d.at("ci");
            if (!ci.is_array() || ci.size() != 2) throw InputError("'ci' must be a [low, high] pair");
            sd.ci_low = number_or_nan(ci[0]);
            sd.ci_high = number_or_nan(ci[1]);
            if (sd.ci_low > sd.ci_high) throw InputError("interval for " + sd.id.name() + " has low > high");
            sd.mean = d.contains("mean") ? number_or_nan(d.at("mean")) : std::numeric_limits<double>::quiet_NaN();
            sd.std = d.contains("std") ? number_or_nan(d.at("std")) : std::numeric_limits<double>::quiet_NaN();
            r.config.statistics.push_back(sd.id);
            r.distributions.push_back(std::move(sd));
        }
        if (r.distributions.empty()) throw InputError("distribution file lists no statistics");
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed distribution file: ") + e.what());
    }
}

BootstrapResult read_distributions(const std::filesystem::path& path) {
    try {
        return parse_distributions(read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string format_report(const ComparisonReport& report, const OodVerdict& verdict) {
    json conventions = json::object();
    for (const auto& [k, v] : report.conventions) conventions[k] = v;
    json inputs{{"train", input_json(report.train)}};
    if (report.test) inputs["test"] = input_json(*report.test);
    if (report.ood) inputs["ood"] = input_json(*report.ood);

    json entries = json::array();
    for (const auto& e : report.entries) {
        json j{{"statistic", e.id.name()}, {"train", interval_json(e.train)}};
        if (e.test) j["test"] = interval_json(*e.test);
        if (e.ood) j["ood"] = interval_json(*e.ood);
        if (e.test_vs_train) j["test_vs_train"] = pair_json(*e.test_vs_train);
        if (e.ood_vs_train) j["ood_vs_train"] = pair_json(*e.ood_vs_train);
        if (e.ood_vs_test) j["ood_vs_test"] = pair_json(*e.ood_vs_test);
        entries.push_back(j);
    }
    json evidence = json::array();
    for (const auto& id : verdict.evidence) evidence.push_back(id.name());

    json cfg = config_json(report.config);
    cfg.erase("seed");
    cfg.erase("statistics");
    json doc{{"format", "topood-report"},
             {"version", 1},
             {"config", cfg},
             {"conventions", conventions},
             {"inputs", inputs},
             {"entries", entries},
             {"verdict",
              json{{"decision", std::string(to_string(verdict.decision))},
                   {"margin", verdict.margin},
                   {"evidence", evidence}}}};
    return doc.dump(1) + "\n";
}

void write_report(const ComparisonReport& report, const OodVerdict& verdict, const std::filesystem::path& path) {
    write_file_atomically(path, format_report(report, verdict));
}

std::string render_table(const ComparisonReport& report, const OodVerdict& verdict, int precision) {
    auto interval = [precision](const Interval& i) {
        return "(" + fixed(i.low, precision) + ", " + fixed(i.high, precision) + ")";
    };
    auto relation = [precision](const PairComparison& p) {
        if (p.overlap) return std::string("overlapping");
        return std::string(p.direction > 0 ? "above" : "below") + ", gap " + fixed(p.gap, precision);
    };
    std::ostringstream os;
    const std::string level = format_real(report.config.ci_level * 100.0);
    const std::string level_label = level.ends_with(".0") ? level.substr(0, level.size() - 2) : level;
    for (const auto& e : report.entries) {
        os << e.id.name() << " (" << level_label << "% confidence intervals)\n";
        os << "  Train | " << interval(e.train) << "\n";
        if (e.test) os << "  Test  | " << interval(*e.test) << "\n";
        if (e.ood) os << "  OOD   | " << interval(*e.ood) << "\n";
        if (e.test_vs_train) os << "  test vs train: " << relation(*e.test_vs_train) << "\n";
        if (e.ood_vs_train) os << "  ood vs train: " << relation(*e.ood_vs_train) << "\n";
        if (e.ood_vs_test) os << "  ood vs test: " << relation(*e.ood_vs_test) << "\n";
        os << "\n";
    }
    os << "verdict: " << to_string(verdict.decision) << " (margin " << fixed(verdict.margin, precision) << ")";
    if (!verdict.evidence.empty()) {
        os << "; evidence:";
        for (const auto& id : verdict.evidence) os << " " << id.name();
    }
    os << "\n";
    return os.str();
}

} // namespace topood::io
