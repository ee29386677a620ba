#include "topood/persistence.hpp"

#include "topood/error.hpp"
#include "topood/numfmt.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace topood {

namespace {

constexpr scale_t kInf = std::numeric_limits<scale_t>::infinity();

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

struct H0Result {
    std::vector<Bar> bars;
    std::vector<bool> death_edge; // by edge position
};

H0Result h0_union_find(const Filtration& f, bool include_zero_bars) {
    const std::size_t n = f.n_points();
    const auto& edges = f.edges();
    H0Result out;
    out.death_edge.assign(edges.size(), false);
    UnionFind uf(n);
    std::size_t components = n;
    for (std::size_t p = 0; p < edges.size() && components > 1; ++p) {
        const Simplex& e = edges[p];
        if (!uf.unite(e.vertices[0], e.vertices[1])) continue;
        --components;
        out.death_edge[p] = true;
        if (include_zero_bars || e.diameter > 0.0) out.bars.push_back(Bar{0, 0.0, e.diameter});
    }
    for (std::size_t c = 0; c < components; ++c) out.bars.push_back(Bar{0, 0.0, kInf});
    return out;
}

// A triangle as a row of the coboundary matrix.
struct Entry {
    scale_t diameter;
    index_t index;
};

// Min-heap order on filtration position.
struct LaterInFiltration {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
        return filtration_less({b.diameter, b.index}, {a.diameter, a.index});
    }
};

// Reduces the edge -> triangle coboundary matrix. Columns are edges in reverse filtration
// order; the pivot of a column is its earliest triangle. Triangles are never stored up
// front: each column is enumerated from the distance matrix when needed.
class CoboundaryReducer {
public:
    CoboundaryReducer(const Filtration& f, bool shortcut)
        : f_(f), dm_(f.distances()), n_(static_cast<std::uint32_t>(f.n_points())), shortcut_(shortcut) {
        choose2_.resize(n_ + 1);
        choose3_.resize(n_ + 1);
        for (index_t v = 0; v <= static_cast<index_t>(n_); ++v) {
            choose2_[static_cast<std::size_t>(v)] = v * (v - 1) / 2;
            choose3_[static_cast<std::size_t>(v)] = v * (v - 1) * (v - 2) / 6;
        }
        const index_t n_triangles = choose3_[n_];
        if (n_triangles <= kDensePivotLimit)
            dense_pivot_.assign(static_cast<std::size_t>(n_triangles), -1);
        else
            sparse_pivot_.reserve(f.edges().size());
    }

    std::vector<Bar> run(const std::vector<bool>& cleared) {
        const auto& edges = f_.edges();
        columns_.assign(edges.size(), {});
        pristine_.assign(edges.size(), false);
        std::vector<Bar> bars;

        for (std::size_t p = edges.size(); p-- > 0;) {
            if (cleared[p]) continue;
            const Simplex& e = edges[p];
            if (shortcut_) {
                // A column whose leading coface is unclaimed is already reduced: pair it
                // without materializing (apparent and emergent pairs).
                const std::optional<Entry> first = leading_coface(e);
                if (!first) {
                    bars.push_back(Bar{1, e.diameter, kInf});
                    continue;
                }
                if (pivot_owner(first->index) < 0) {
                    set_pivot_owner(first->index, static_cast<std::int32_t>(p));
                    pristine_[p] = true;
                    emit(bars, e.diameter, first->diameter);
                    continue;
                }
            }
            reduce(p, bars);
        }
        return bars;
    }

private:
    static constexpr index_t kDensePivotLimit = index_t{1} << 22;

    template <typename Visit>
    void for_each_coface(const Simplex& e, Visit&& visit) const {
        const std::uint32_t i = e.vertices[0], j = e.vertices[1];
        const scale_t threshold = f_.threshold();
        const auto row_i = dm_.row(i), row_j = dm_.row(j);
        auto consider = [&](std::uint32_t k, index_t index) {
            const scale_t diam = std::max({e.diameter, row_i[k], row_j[k]});
            if (diam <= threshold) visit(Entry{diam, index});
        };
        const index_t tail_ij = choose2_[i] + choose3_[j];
        for (std::uint32_t k = 0; k < i; ++k) consider(k, k + tail_ij);
        for (std::uint32_t k = i + 1; k < j; ++k) consider(k, i + choose2_[k] + choose3_[j]);
        const index_t head_ij = i + choose2_[j];
        for (std::uint32_t k = j + 1; k < n_; ++k) consider(k, head_ij + choose3_[k]);
    }

    std::vector<Entry> coboundary(const Simplex& e) const {
        std::vector<Entry> out;
        out.reserve(n_);
        for_each_coface(e, [&](const Entry& t) { out.push_back(t); });
        return out;
    }

    // Coface indices grow with the third vertex k, so among equal diameters the largest k
    // comes first in the filtration and a single `<=` pass finds the leading coface.
    std::optional<Entry> leading_coface(const Simplex& e) const {
        const std::uint32_t i = e.vertices[0], j = e.vertices[1];
        const auto row_i = dm_.row(i), row_j = dm_.row(j);
        scale_t best = f_.threshold();
        std::uint32_t best_k = n_;
        for (std::uint32_t k = 0; k < n_; ++k) {
            const scale_t diam = std::max({e.diameter, row_i[k], row_j[k]});
            if (diam <= best && k != i && k != j) {
                best = diam;
                best_k = k;
            }
        }
        if (best_k == n_) return std::nullopt;
        return Entry{best, coface_index(i, j, best_k)};
    }

    index_t coface_index(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        if (k < i) return k + choose2_[i] + choose3_[j];
        if (k < j) return i + choose2_[k] + choose3_[j];
        return i + choose2_[j] + choose3_[k];
    }

    std::int32_t pivot_owner(index_t triangle) const {
        if (!dense_pivot_.empty()) return dense_pivot_[static_cast<std::size_t>(triangle)];
        auto it = sparse_pivot_.find(triangle);
        return it == sparse_pivot_.end() ? -1 : it->second;
    }

    void set_pivot_owner(index_t triangle, std::int32_t column) {
        if (!dense_pivot_.empty())
            dense_pivot_[static_cast<std::size_t>(triangle)] = column;
        else
            sparse_pivot_[triangle] = column;
    }

    static void emit(std::vector<Bar>& bars, scale_t birth, scale_t death) {
        if (birth < death) bars.push_back(Bar{1, birth, death});
    }

    // Pops the current pivot, cancelling duplicate entries (Z/2 coefficients).
    static std::optional<Entry> pop_pivot(std::vector<Entry>& heap) {
        LaterInFiltration later;
        while (!heap.empty()) {
            std::pop_heap(heap.begin(), heap.end(), later);
            const Entry top = heap.back();
            heap.pop_back();
            if (!heap.empty() && heap.front().index == top.index) {
                std::pop_heap(heap.begin(), heap.end(), later);
                heap.pop_back();
                continue;
            }
            return top;
        }
        return std::nullopt;
    }

    void reduce(std::size_t p, std::vector<Bar>& bars) {
        const Simplex& e = f_.edges()[p];
        LaterInFiltration later;
        std::vector<Entry> heap = coboundary(e);
        std::make_heap(heap.begin(), heap.end(), later);
        bool modified = false;

        while (true) {
            const std::optional<Entry> pivot = pop_pivot(heap);
            if (!pivot) {
                bars.push_back(Bar{1, e.diameter, kInf});
                return;
            }
            const std::int32_t owner = pivot_owner(pivot->index);
            if (owner < 0) {
                set_pivot_owner(pivot->index, static_cast<std::int32_t>(p));
                emit(bars, e.diameter, pivot->diameter);
                if (!modified && shortcut_) {
                    pristine_[p] = true;
                    return;
                }
                std::vector<Entry> reduced{*pivot};
                while (auto next = pop_pivot(heap)) reduced.push_back(*next);
                columns_[p] = std::move(reduced);
                return;
            }
            // The pivot cancels against the owner's pivot; add the rest of the owner column.
            const auto owner_pos = static_cast<std::size_t>(owner);
            std::vector<Entry> regenerated;
            if (pristine_[owner_pos]) regenerated = coboundary(f_.edges()[owner_pos]);
            const auto& addend = pristine_[owner_pos] ? regenerated : columns_[owner_pos];
            for (const Entry& x : addend) {
                if (x.index == pivot->index) continue;
                heap.push_back(x);
                std::push_heap(heap.begin(), heap.end(), later);
            }
            modified = true;
        }
    }

    const Filtration& f_;
    const DistanceMatrix& dm_;
    std::uint32_t n_;
    bool shortcut_;
    std::vector<index_t> choose2_, choose3_;
    std::vector<std::int32_t> dense_pivot_;
    std::unordered_map<index_t, std::int32_t> sparse_pivot_;
    std::vector<std::vector<Entry>> columns_; // reduced columns by edge position
    std::vector<bool> pristine_;              // column equals the raw coboundary; regenerate on use
};

void sort_bars(std::vector<Bar>& bars) { std::sort(bars.begin(), bars.end()); }

} // namespace

scale_t ThresholdPolicy::resolve(const DistanceMatrix& dm) const {
    return kind == Kind::EnclosingRadius ? enclosing_radius(dm) : value;
}

std::string ThresholdPolicy::to_string() const {
    return kind == Kind::EnclosingRadius ? std::string("enclosing") : format_real(value);
}

ThresholdPolicy ThresholdPolicy::parse(const std::string& text) {
    if (text == "enclosing") return enclosing();
    const auto v = parse_real(text);
    if (!v || std::isnan(*v) || *v < 0.0)
        throw InputError("threshold must be 'enclosing' or a non-negative number, got '" + text + "'");
    return fixed(*v);
}

const std::vector<Bar>& PersistenceDiagram::bars(int dimension) const {
    if (dimension == 0) return h0;
    if (dimension == 1) return h1;
    throw InputError("only homology dimensions 0 and 1 are computed");
}

PersistenceDiagram compute_h0(const Filtration& filtration, bool include_zero_bars) {
    PersistenceDiagram d;
    d.n_points = filtration.n_points();
    d.threshold = filtration.threshold();
    d.h0 = h0_union_find(filtration, include_zero_bars).bars;
    sort_bars(d.h0);
    return d;
}

PersistenceDiagram compute_h0(const DistanceMatrix& dm, bool include_zero_bars) {
    return compute_h0(build_filtration(dm, 1, kNoThreshold, TriangleMode::Lazy), include_zero_bars);
}

PersistenceDiagram compute_h1(const Filtration& filtration, bool use_apparent_pairs) {
    if (filtration.max_dim() < 2) throw InputError("H1 needs a filtration with max_dim = 2");
    PersistenceDiagram d;
    d.n_points = filtration.n_points();
    d.threshold = filtration.threshold();
    const H0Result h0 = h0_union_find(filtration, true);
    CoboundaryReducer reducer(filtration, use_apparent_pairs);
    d.h1 = reducer.run(h0.death_edge);
    sort_bars(d.h1);
    return d;
}

PersistenceDiagram compute_persistence(const DistanceMatrix& dm, const PersistenceConfig& config) {
    const scale_t threshold = config.threshold.resolve(dm);
    const Filtration f = build_filtration(dm, config.with_h1 ? 2 : 1, threshold, TriangleMode::Lazy);

    PersistenceDiagram d;
    d.n_points = dm.size();
    d.threshold = threshold;
    const H0Result h0 = h0_union_find(f, config.include_zero_h0_bars);
    d.h0 = h0.bars;
    if (config.with_h1) {
        CoboundaryReducer reducer(f, config.use_apparent_pairs);
        d.h1 = reducer.run(h0.death_edge);
    }
    sort_bars(d.h0);
    sort_bars(d.h1);
    return d;
}

PersistenceDiagram compute_persistence(const PointCloud& cloud, const PersistenceConfig& config) {
    return compute_persistence(pairwise_distances(cloud, config.exec), config);
}

BettiVector betti_at_scale(const PersistenceDiagram& diagram, scale_t eps) {
    if (std::isnan(eps) || eps < 0.0) throw InputError("scale must be non-negative");
    if (!(eps < diagram.threshold))
        throw InputError("scale " + format_real(eps) + " is not below the diagram threshold " +
                         format_real(diagram.threshold) + "; Betti numbers there are unknown");
    auto alive = [eps](const Bar& b) { return b.birth <= eps && eps < b.death; };
    BettiVector out;
    out.beta0 = static_cast<std::size_t>(std::count_if(diagram.h0.begin(), diagram.h0.end(), alive));
    out.beta1 = static_cast<std::size_t>(std::count_if(diagram.h1.begin(), diagram.h1.end(), alive));
    return out;
}

} // namespace topood
