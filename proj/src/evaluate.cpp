#include "mobrisk/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>

#include "mobrisk/rng.hpp"
#include "mobrisk/util.hpp"

namespace mobrisk {

namespace {

constexpr std::uint64_t kTagZoneNoise = 0x7a6e6e73;  // base-case zone scores

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    std::size_t n = 0;
    for (const std::string& s : small) n += large.count(s);
    return n;
}

// Average ranks (1-based); equal values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        double shared = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
        i = j;
    }
    return ranks;
}

bool has_ties(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("spearman: input lengths differ");
    if (x.size() < 2) throw DataError("spearman: need at least two observations");
}

}  // namespace

double recall(const std::set<std::string>& tested, const std::set<std::string>& infected) {
    if (infected.empty()) throw DataError("recall is undefined for an empty infected set");
    return static_cast<double>(intersection_size(tested, infected)) /
           static_cast<double>(infected.size());
}

RecallCurve recall_curve(const PriorityList& priority, const std::set<std::string>& infected,
                         std::span<const double> capacities) {
    if (capacities.empty()) throw UsageError("recall_curve: empty capacity grid");
    RecallCurve curve;
    curve.strategy = priority.strategy;
    double prev = 0.0;
    for (double c : capacities) {
        if (!(c > 0.0) || c > 1.0) throw UsageError("capacity must lie in (0, 1]");
        if (!curve.points.empty() && c <= prev)
            throw UsageError("capacities must be strictly increasing");
        prev = c;
        curve.points.emplace_back(c, recall(select_tested(priority, c), infected));
    }
    return curve;
}

std::map<std::string, double> aggregate_zone_scores(const BipartiteGraph& graph,
                                                    const ScoreVector& scores,
                                                    const LocationMetaMap& meta, int* skipped) {
    std::map<std::string, double> zones;
    int missing = 0;
    for (std::size_t j = 0; j < graph.location_count(); ++j) {
        auto it = meta.find(graph.locations()[j]);
        if (it == meta.end() || !it->second.zone_id) {
            ++missing;
            continue;
        }
        zones[*it->second.zone_id] += scores.values[graph.person_count() + j];
    }
    if (skipped) *skipped = missing;
    return zones;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("percentile of an empty sample");
    if (q < 0.0 || q > 1.0) throw UsageError("percentile fraction must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::set<std::string> classify_high_risk(const std::map<std::string, double>& zone_scores) {
    if (zone_scores.empty()) throw DataError("classify_high_risk: no zones");
    std::vector<double> scores;
    scores.reserve(zone_scores.size());
    for (const auto& [zone, score] : zone_scores) scores.push_back(score);
    double threshold = percentile(std::move(scores), 0.8);
    std::set<std::string> high;
    for (const auto& [zone, score] : zone_scores)
        if (score > threshold) high.insert(zone);
    return high;
}

double accuracy(const std::set<std::string>& high_risk,
                const std::map<std::string, std::int64_t>& case_counts) {
    std::int64_t total = 0, captured = 0;
    for (const auto& [zone, cases] : case_counts) {
        total += cases;
        if (high_risk.count(zone)) captured += cases;
    }
    if (total <= 0) throw DataError("accuracy is undefined without confirmed cases");
    return static_cast<double>(captured) / static_cast<double>(total);
}

double spearman_exact(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    if (has_ties(x) || has_ties(y)) throw UsageError("spearman_exact requires tie-free inputs");
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    auto rx = average_ranks(x);  // tie-free: integral ranks 1..n
    auto ry = average_ranks(y);
    std::int64_t sum_d2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(rx[i]) - static_cast<std::int64_t>(ry[i]);
        sum_d2 += d * d;
    }
    // (den - 6*sum d^2) / den with exact integers, so 1 - 6*4/120 prints 0.8,
    // not 0.7999999999999999.
    std::int64_t den = n * (n * n - 1);
    return static_cast<double>(den - 6 * sum_d2) / static_cast<double>(den);
}

double spearman_rank_pearson(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    double mean = (n + 1.0) / 2.0;  // both rank vectors average to this
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        double a = rx[i] - mean, b = ry[i] - mean;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DataError("spearman: zero rank variance (all values tied)");
    return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    // n^3 must stay within exact integer range for the closed form.
    if (!has_ties(x) && !has_ties(y) && x.size() <= 1000000) return spearman_exact(x, y);
    return spearman_rank_pearson(x, y);
}

namespace {

ScoreVector distance_scores(const BipartiteGraph& graph, const std::vector<double>& distances) {
    ScoreVector scores;
    scores.values.assign(graph.node_count(), 0.0);
    scores.converged = true;
    for (std::size_t j = 0; j < graph.location_count(); ++j)
        scores.values[graph.person_count() + j] = 1.0 / (1.0 + distances[j]);
    return scores;
}

std::optional<NodeRef> context_source(const ExperimentSpec& spec) {
    if (spec.sim.source.kind == SourceSpec::Kind::FixedPerson)
        return NodeRef{NodeClass::Person, spec.sim.source.id};
    return NodeRef{NodeClass::Location, spec.sim.source.id};
}

}  // namespace

PriorityList strategy_priority(Strategy kind, const ExperimentSpec& spec,
                               const BipartiteGraph& graph) {
    StrategyContext ctx{graph,      spec.dataset.meta, context_source(spec),
                        spec.route, spec.rank_config,  spec.seed};
    return prioritize(kind, ctx);
}

ZoneReport make_zone_report(std::map<std::string, double> zone_scores,
                            const std::map<std::string, std::int64_t>& case_counts) {
    ZoneReport report;
    report.high_risk = classify_high_risk(zone_scores);
    report.zone_scores = std::move(zone_scores);
    report.case_counts = case_counts;
    return report;
}

std::map<std::string, double> strategy_zone_scores(Strategy kind, const ExperimentSpec& spec,
                                                   const BipartiteGraph& graph, int* skipped) {
    ScoreVector scores;
    switch (kind) {
        case Strategy::Base: {
            scores.values.assign(graph.node_count(), 0.0);
            scores.converged = true;
            for (std::size_t j = 0; j < graph.location_count(); ++j)
                scores.values[graph.person_count() + j] =
                    rng::keyed_unit(spec.seed, kTagZoneNoise, j);
            break;
        }
        case Strategy::LocationBased: {
            auto source = context_source(spec);
            if (!source) throw UsageError("location-based strategy: missing source location");
            scores = distance_scores(graph, location_distances(graph, spec.dataset.meta, *source));
            break;
        }
        case Strategy::RouteBased: {
            if (!spec.route) throw UsageError("route-based strategy: missing route");
            scores = distance_scores(graph, route_distances(graph, spec.dataset.meta, *spec.route));
            break;
        }
        case Strategy::PrBased: {
            RankConfig config = spec.rank_config;
            config.source.reset();
            scores = pagerank(graph, config);
            break;
        }
        case Strategy::PprBased: {
            RankConfig config = spec.rank_config;
            config.source = context_source(spec);
            scores = personalized_pagerank(graph, config);
            break;
        }
        case Strategy::AllKnowing:
            throw UsageError("all-knowing has no zone scores");
    }
    return aggregate_zone_scores(graph, scores, spec.dataset.meta, skipped);
}

EvalReport build_report(const ExperimentSpec& spec) {
    if (spec.strategies.empty()) throw UsageError("no strategies requested");
    for (std::size_t i = 0; i < spec.strategies.size(); ++i) {
        if (spec.strategies[i] == Strategy::AllKnowing)
            throw UsageError("all-knowing is always included; do not request it");
        for (std::size_t j = i + 1; j < spec.strategies.size(); ++j)
            if (spec.strategies[i] == spec.strategies[j])
                throw UsageError("duplicate strategy '" + to_string(spec.strategies[i]) + "'");
    }

    BipartiteGraph graph = build_graph(spec.dataset, spec.weighting);
    InfectionTally tally = run_simulation(spec.dataset, spec.sim);

    EvalReport report;
    report.population = graph.person_count();
    report.infected = infected_set(tally, spec.infected_threshold);
    report.full_recall_capacity = static_cast<double>(report.infected.size()) /
                                  static_cast<double>(report.population);

    for (Strategy kind : spec.strategies)
        report.curves.push_back(
            recall_curve(strategy_priority(kind, spec, graph), report.infected, spec.capacities));
    report.curves.push_back(recall_curve(all_knowing(report.infected, graph.persons()),
                                         report.infected, spec.capacities));

    bool any_zone = false;
    for (const auto& [id, entry] : spec.dataset.meta) any_zone = any_zone || entry.zone_id.has_value();
    if (!spec.case_counts.empty() && any_zone) {
        for (Strategy kind : spec.strategies) {
            int skipped = 0;
            ZoneReport zones = make_zone_report(strategy_zone_scores(kind, spec, graph, &skipped),
                                                spec.case_counts);
            report.zone_warning_count = skipped;
            report.accuracy[kind] = accuracy(zones.high_risk, spec.case_counts);

            // Align zones across both inputs; absent entries count as zero.
            std::set<std::string> all_zones;
            for (const auto& [zone, score] : zones.zone_scores) all_zones.insert(zone);
            for (const auto& [zone, cases] : spec.case_counts) all_zones.insert(zone);
            std::vector<double> cases_v, scores_v;
            for (const std::string& zone : all_zones) {
                auto c = spec.case_counts.find(zone);
                cases_v.push_back(c == spec.case_counts.end() ? 0.0
                                                              : static_cast<double>(c->second));
                auto s = zones.zone_scores.find(zone);
                scores_v.push_back(s == zones.zone_scores.end() ? 0.0 : s->second);
            }
            report.spearman[kind] = spearman(cases_v, scores_v);
            report.zones.emplace(kind, std::move(zones));
        }
    }
    return report;
}

void write_report_json(std::ostream& out, const EvalReport& report) {
    nlohmann::json doc;
    doc["population"] = report.population;
    doc["infected_count"] = report.infected.size();
    doc["full_recall_capacity"] = report.full_recall_capacity;
    doc["zone_warning_count"] = report.zone_warning_count;
    doc["curves"] = nlohmann::json::array();
    for (const RecallCurve& curve : report.curves) {
        nlohmann::json entry;
        entry["strategy"] = to_string(curve.strategy);
        entry["points"] = nlohmann::json::array();
        for (const auto& [capacity, value] : curve.points)
            entry["points"].push_back({{"capacity", capacity}, {"recall", value}});
        doc["curves"].push_back(std::move(entry));
    }
    if (!report.accuracy.empty()) {
        for (const auto& [kind, value] : report.accuracy)
            doc["accuracy"][to_string(kind)] = value;
        for (const auto& [kind, value] : report.spearman)
            doc["spearman"][to_string(kind)] = value;
    }
    out << doc.dump(2) << "\n";
}

void write_curves_csv(std::ostream& out, const EvalReport& report) {
    out << "strategy,capacity,recall\n";
    for (const RecallCurve& curve : report.curves)
        for (const auto& [capacity, value] : curve.points)
            out << to_string(curve.strategy) << ',' << format_double(capacity) << ','
                << format_double(value) << "\n";
}

void write_metric_csv(std::ostream& out, const std::map<Strategy, double>& metric,
                      const std::string& header) {
    out << header << "\n";
    for (const auto& [kind, value] : metric)
        out << to_string(kind) << ',' << format_double(value) << "\n";
}

void write_zone_csv(std::ostream& out, const ZoneReport& report) {
    out << "zone,score,high_risk,cases\n";
    for (const auto& [zone, score] : report.zone_scores) {
        auto cases = report.case_counts.find(zone);
        out << zone << ',' << format_double(score) << ','
            << (report.high_risk.count(zone) ? 1 : 0) << ','
            << (cases == report.case_counts.end() ? 0 : cases->second) << "\n";
    }
}

}  // namespace mobrisk
