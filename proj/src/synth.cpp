#include "topood/synth.hpp"

#include "topood/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace topood {

namespace {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double gaussian() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    // Uniform in the ball of the given radius in R^dim.
    std::vector<double> in_ball(std::size_t dim, double radius) {
        std::vector<double> v(dim);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& x : v) {
                x = gaussian();
                norm += x * x;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        const double r = radius * std::pow(uniform(0.0, 1.0), 1.0 / static_cast<double>(dim));
        for (auto& x : v) x *= r / norm;
        return v;
    }

    void add_noise(std::span<double> point, double sigma) {
        if (sigma <= 0.0) return;
        const double scale = sigma / std::sqrt(static_cast<double>(point.size()));
        std::vector<double> noise(point.size());
        double norm = 0.0;
        for (auto& x : noise) {
            x = scale * gaussian();
            norm += x * x;
        }
        norm = std::sqrt(norm);
        const double shrink = norm > 3.0 * sigma ? 3.0 * sigma / norm : 1.0;
        for (std::size_t k = 0; k < point.size(); ++k) point[k] += shrink * noise[k];
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace

std::string_view to_string(SynthKind kind) {
    switch (kind) {
    case SynthKind::Circle: return "circle";
    case SynthKind::Clusters: return "clusters";
    case SynthKind::UniformCube: return "cube";
    case SynthKind::Hexagon: return "hexagon";
    case SynthKind::Square: return "square";
    case SynthKind::Line: return "line";
    }
    return "";
}

SynthKind parse_synth_kind(std::string_view text) {
    for (SynthKind k : {SynthKind::Circle, SynthKind::Clusters, SynthKind::UniformCube, SynthKind::Hexagon,
                        SynthKind::Square, SynthKind::Line})
        if (text == to_string(k)) return k;
    throw InputError("unknown generator '" + std::string(text) +
                     "' (expected circle, clusters, cube, hexagon, square or line)");
}

void SynthSpec::validate() const {
    if (count < 1 || k < 1 || dim < 1) throw InputError("generator counts and dimension must be at least 1");
    if (!(sigma >= 0.0)) throw InputError("noise sigma must be non-negative");
    if (!(radius >= 0.0)) throw InputError("radius must be non-negative");
    const bool planar = kind == SynthKind::Circle || kind == SynthKind::Hexagon || kind == SynthKind::Square;
    if (planar && dim < 2) throw InputError(std::string(to_string(kind)) + " needs dimension >= 2");
    if (kind == SynthKind::Clusters) {
        if (!(separation > 0.0)) throw InputError("cluster separation must be positive");
        if (k > dim) throw InputError("cluster count cannot exceed the ambient dimension");
    }
    if (kind == SynthKind::UniformCube && !(separation > 0.0)) throw InputError("cube extent must be positive");
}

PointCloud generate(const SynthSpec& spec) {
    spec.validate();
    Sampler rng(spec.seed);
    const std::size_t d = spec.dim;
    std::vector<double> coords;
    std::size_t n = 0;
    auto push_point = [&](std::vector<double> p) {
        rng.add_noise(p, spec.sigma);
        coords.insert(coords.end(), p.begin(), p.end());
        ++n;
    };

    switch (spec.kind) {
    case SynthKind::Circle:
        for (std::size_t i = 0; i < spec.count; ++i) {
            const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
            std::vector<double> p(d, 0.0);
            p[0] = spec.radius * std::cos(theta);
            p[1] = spec.radius * std::sin(theta);
            push_point(std::move(p));
        }
        break;
    case SynthKind::Clusters: {
        const double offset = spec.separation / std::numbers::sqrt2;
        for (std::size_t c = 0; c < spec.k; ++c)
            for (std::size_t i = 0; i < spec.count; ++i) {
                std::vector<double> p = rng.in_ball(d, spec.radius);
                p[c] += offset;
                push_point(std::move(p));
            }
        break;
    }
    case SynthKind::UniformCube: {
        const double extent = spec.separation / std::numbers::sqrt2;
        for (std::size_t i = 0; i < spec.count; ++i) {
            std::vector<double> p(d);
            for (auto& x : p) x = rng.uniform(0.0, extent);
            push_point(std::move(p));
        }
        break;
    }
    case SynthKind::Hexagon:
        for (int i = 0; i < 6; ++i) {
            const double theta = i * std::numbers::pi / 3.0;
            std::vector<double> p(d, 0.0);
            p[0] = spec.radius * std::cos(theta);
            p[1] = spec.radius * std::sin(theta);
            push_point(std::move(p));
        }
        break;
    case SynthKind::Square:
        for (int corner = 0; corner < 4; ++corner) {
            std::vector<double> p(d, 0.0);
            p[0] = (corner & 1) ? spec.radius : 0.0;
            p[1] = (corner & 2) ? spec.radius : 0.0;
            push_point(std::move(p));
        }
        break;
    case SynthKind::Line:
        for (std::size_t i = 0; i < spec.count; ++i) {
            std::vector<double> p(d, 0.0);
            p[0] = spec.radius * static_cast<double>(i * (i + 1) / 2);
            push_point(std::move(p));
        }
        break;
    }
    std::string source = "synth:" + std::string(to_string(spec.kind)) + ":seed=" + std::to_string(spec.seed);
    return PointCloud(n, d, std::move(coords), spec.role, std::move(source));
}

} // namespace topood
