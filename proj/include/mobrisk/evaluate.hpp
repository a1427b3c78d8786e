#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mobrisk/graph.hpp"
#include "mobrisk/rank.hpp"
#include "mobrisk/simulate.hpp"
#include "mobrisk/strategy.hpp"
#include "mobrisk/types.hpp"

namespace mobrisk {

struct RecallCurve {
    Strategy strategy = Strategy::Base;
    std::vector<std::pair<double, double>> points;  // (capacity, recall)
};

struct ZoneReport {
    std::map<std::string, double> zone_scores;
    std::set<std::string> high_risk;
    std::map<std::string, std::int64_t> case_counts;
};

struct EvalReport {
    std::vector<RecallCurve> curves;  // requested strategies plus AllKnowing
    std::map<Strategy, double> accuracy;
    std::map<Strategy, double> spearman;
    std::map<Strategy, ZoneReport> zones;     // present iff accuracy/spearman are
    std::set<std::string> infected;           // ground-truth positives
    std::size_t population = 0;
    double full_recall_capacity = 0.0;        // |infected| / population
    int zone_warning_count = 0;               // scored locations without a zone
};

// |tested ∩ infected| / |infected|. The infected set must be nonempty.
double recall(const std::set<std::string>& tested, const std::set<std::string>& infected);

// One recall point per capacity, via select_tested. Capacities must be
// strictly increasing within (0, 1].
RecallCurve recall_curve(const PriorityList& priority, const std::set<std::string>& infected,
                         std::span<const double> capacities);

// Sums location scores into their zones. Locations without a zone are
// skipped and counted in `skipped`. Scores are taken from the graph's
// location nodes.
std::map<std::string, double> aggregate_zone_scores(const BipartiteGraph& graph,
                                                    const ScoreVector& scores,
                                                    const LocationMetaMap& meta, int* skipped);

// Linear-interpolation percentile (order statistics at positions
// q * (n - 1)); q in [0, 1]. Input need not be sorted.
double percentile(std::vector<double> values, double q);

// Zones whose score is strictly above the 80th percentile of all zone
// scores. Errors on an empty map; equal-score degenerate inputs yield the
// empty set.
std::set<std::string> classify_high_risk(const std::map<std::string, double>& zone_scores);

// Share of all confirmed cases that fall inside the high-risk zones.
// Total cases must be positive.
double accuracy(const std::set<std::string>& high_risk,
                const std::map<std::string, std::int64_t>& case_counts);

// Rank correlation. Tie-free inputs go through the exact integer form
// 1 - 6*sum(d^2) / (n(n^2-1)); ties are assigned average ranks and the
// coefficient is the Pearson correlation of the rank vectors. Throws
// DataError for n < 2 or zero rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

// Both evaluation paths, exposed for cross-checking. spearman_exact requires
// tie-free inputs.
double spearman_exact(std::span<const double> x, std::span<const double> y);
double spearman_rank_pearson(std::span<const double> x, std::span<const double> y);

// Everything build_report needs to run ingestion -> graph -> ranking ->
// simulation -> strategies -> metrics as one reproducible experiment.
struct ExperimentSpec {
    const MobilityDataset& dataset;
    BipartiteGraph::Weighting weighting = BipartiteGraph::Weighting::Binary;
    RankConfig rank_config;
    SimConfig sim;
    std::vector<Strategy> strategies;
    std::vector<double> capacities;
    int infected_threshold = 1;
    std::optional<std::string> route;
    std::map<std::string, std::int64_t> case_counts;  // empty: skip zone metrics
    std::uint64_t seed = 0;                           // base permutation + base zone scores
};

// Runs the full pipeline and assembles recall curves for every requested
// strategy (plus the all-knowing upper bound) and, when zone metadata and
// case counts are available, per-strategy accuracy and Spearman coefficients.
EvalReport build_report(const ExperimentSpec& spec);

// Zone-level risk scores for one strategy, used by build_report and exposed
// for the CLI: rank strategies use their location scores; distance strategies
// use 1 / (1 + distance); Base draws a seeded uniform score per location.
std::map<std::string, double> strategy_zone_scores(Strategy kind, const ExperimentSpec& spec,
                                                   const BipartiteGraph& graph, int* skipped);

// The testing order one strategy produces under this experiment's settings.
PriorityList strategy_priority(Strategy kind, const ExperimentSpec& spec,
                               const BipartiteGraph& graph);

ZoneReport make_zone_report(std::map<std::string, double> zone_scores,
                            const std::map<std::string, std::int64_t>& case_counts);

void write_report_json(std::ostream& out, const EvalReport& report);
void write_curves_csv(std::ostream& out, const EvalReport& report);
void write_metric_csv(std::ostream& out, const std::map<Strategy, double>& metric,
                      const std::string& header);
// `zone,score,high_risk,cases`, one line per zone.
void write_zone_csv(std::ostream& out, const ZoneReport& report);

}  // namespace mobrisk
