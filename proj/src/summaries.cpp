#include "topood/summaries.hpp"

#include "topood/error.hpp"

#include <algorithm>

namespace topood {

DiagramSummary summarize(const PersistenceDiagram& diagram, int dimension) {
    DiagramSummary s;
    s.dimension = dimension;
    double sum_life = 0.0, sum_birth = 0.0, sum_death = 0.0;
    for (const Bar& b : diagram.bars(dimension)) {
        if (b.essential()) {
            ++s.n_essential_bars;
            continue;
        }
        ++s.n_finite_bars;
        sum_life += b.lifetime();
        sum_birth += b.birth;
        sum_death += b.death;
        s.max_lifetime = std::max(s.max_lifetime, b.lifetime());
    }
    if (s.n_finite_bars > 0) {
        const auto count = static_cast<double>(s.n_finite_bars);
        s.avg_lifetime = sum_life / count;
        s.avg_birth = sum_birth / count;
        s.avg_death = sum_death / count;
    }
    return s;
}

std::string_view to_string(StatisticKind kind) {
    switch (kind) {
    case StatisticKind::AvgLifetime: return "avg_lifetime";
    case StatisticKind::MaxLifetime: return "max_lifetime";
    case StatisticKind::AvgBirth: return "avg_birth";
    case StatisticKind::AvgDeath: return "avg_death";
    }
    return "";
}

std::string StatisticId::name() const {
    return "h" + std::to_string(dimension) + "." + std::string(to_string(kind));
}

StatisticId StatisticId::parse(std::string_view name) {
    if (name.size() > 3 && name[0] == 'h' && (name[1] == '0' || name[1] == '1') && name[2] == '.') {
        const std::string_view rest = name.substr(3);
        for (StatisticKind k : kAllStatisticKinds)
            if (rest == to_string(k)) return StatisticId{name[1] - '0', k};
    }
    throw InputError("unknown statistic '" + std::string(name) + "' (expected h0|h1 . avg_lifetime|max_lifetime|avg_birth|avg_death)");
}

double statistic_value(const DiagramSummary& s, StatisticKind kind) noexcept {
    switch (kind) {
    case StatisticKind::AvgLifetime: return s.avg_lifetime;
    case StatisticKind::MaxLifetime: return s.max_lifetime;
    case StatisticKind::AvgBirth: return s.avg_birth;
    case StatisticKind::AvgDeath: return s.avg_death;
    }
    return 0.0;
}

} // namespace topood
