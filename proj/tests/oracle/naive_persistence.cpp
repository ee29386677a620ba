#include "naive_persistence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace oracle {

Matrix brute_force_distances(std::span<const double> coords, std::size_t n, std::size_t dim) {
    Matrix dm(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = coords[i * dim + k] - coords[j * dim + k];
                s += diff * diff;
            }
            dm[i][j] = std::sqrt(s);
        }
    return dm;
}

namespace {

struct NaiveSimplex {
    std::vector<int> vertices;
    double diameter;
};

std::vector<int> symmetric_difference(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

std::vector<OracleBar> naive_rips_persistence(const Matrix& dm, double threshold) {
    const int n = static_cast<int>(dm.size());
    std::vector<NaiveSimplex> simplices;
    for (int i = 0; i < n; ++i) simplices.push_back({{i}, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dm[i][j] <= threshold) simplices.push_back({{i, j}, dm[i][j]});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const double d = std::max({dm[i][j], dm[i][k], dm[j][k]});
                if (d <= threshold) simplices.push_back({{i, j, k}, d});
            }
    // Diameter, then dimension (faces first), then lexicographic vertices.
    std::sort(simplices.begin(), simplices.end(), [](const NaiveSimplex& a, const NaiveSimplex& b) {
        return std::make_tuple(a.diameter, a.vertices.size(), a.vertices) <
               std::make_tuple(b.diameter, b.vertices.size(), b.vertices);
    });

    std::map<std::vector<int>, int> position;
    for (int p = 0; p < static_cast<int>(simplices.size()); ++p) position[simplices[p].vertices] = p;

    const int m = static_cast<int>(simplices.size());
    std::vector<std::vector<int>> columns(m);
    for (int p = 0; p < m; ++p) {
        const auto& v = simplices[p].vertices;
        if (v.size() < 2) continue;
        for (std::size_t drop = 0; drop < v.size(); ++drop) {
            std::vector<int> face;
            for (std::size_t q = 0; q < v.size(); ++q)
                if (q != drop) face.push_back(v[q]);
            columns[p].push_back(position.at(face));
        }
        std::sort(columns[p].begin(), columns[p].end());
    }

    std::map<int, int> low_owner; // low row -> column
    std::vector<bool> is_negative(m, false), is_paired_row(m, false);
    std::vector<OracleBar> bars;
    for (int j = 0; j < m; ++j) {
        auto& col = columns[j];
        while (!col.empty()) {
            auto it = low_owner.find(col.back());
            if (it == low_owner.end()) break;
            col = symmetric_difference(col, columns[it->second]);
        }
        if (col.empty()) continue;
        const int i = col.back();
        low_owner[i] = j;
        is_negative[j] = true;
        is_paired_row[i] = true;
        const int dim = static_cast<int>(simplices[i].vertices.size()) - 1;
        const double birth = simplices[i].diameter, death = simplices[j].diameter;
        if (dim == 0 || birth < death) bars.push_back({dim, birth, death});
    }
    for (int p = 0; p < m; ++p) {
        const int dim = static_cast<int>(simplices[p].vertices.size()) - 1;
        if (dim <= 1 && !is_negative[p] && !is_paired_row[p]) bars.push_back({dim, simplices[p].diameter, kInf});
    }
    std::sort(bars.begin(), bars.end());
    return bars;
}

std::vector<double> kruskal_mst_weights(const Matrix& dm) {
    const std::size_t n = dm.size();
    std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(dm[i][j], i, j);
    std::sort(edges.begin(), edges.end());
    std::vector<std::size_t> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = i;
    std::vector<double> weights;
    for (const auto& [w, i, j] : edges) {
        const std::size_t a = label[i], b = label[j];
        if (a == b) continue;
        for (auto& l : label)
            if (l == b) l = a;
        weights.push_back(w);
    }
    std::sort(weights.begin(), weights.end());
    return weights;
}

double naive_enclosing_radius(const Matrix& dm) {
    double best = kInf;
    for (const auto& row : dm) best = std::min(best, *std::max_element(row.begin(), row.end()));
    return dm.size() <= 1 ? 0.0 : best;
}

} // namespace oracle
