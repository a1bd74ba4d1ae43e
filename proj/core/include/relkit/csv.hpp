#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "relkit/assoc.hpp"
#include "relkit/experiment.hpp"
#include "relkit/model.hpp"

namespace relkit {

/// Real values are written with 17 significant digits for lossless round trips.
std::string format_real(double x);

// Column orders:
//   items:     a,b,c,dim
//   sample:    eta_1..eta_d,y_1..y_m
//   scores:    s_1,s_2,xi_1,xi_2
//   battery:   name,raw,clamped,direction,condition
//   aggregate: m,condition,metric,mean,sd,count

void write_item_bank_csv(const ItemBank& bank, const std::filesystem::path& path);
ItemBank read_item_bank_csv(const std::filesystem::path& path);

void write_sample_csv(const MonteCarloSample& sample, const std::filesystem::path& path);
MonteCarloSample read_sample_csv(const std::filesystem::path& path);

void write_scores_csv(const ScoreSet& scores, const std::filesystem::path& path);
ScoreSet read_scores_csv(const std::filesystem::path& path, Transform transform);

void write_battery_csv(const std::vector<ReliabilityEstimate>& estimates,
                       Transform condition, const std::filesystem::path& path);

void write_aggregate_csv(const AggregateTable& table, const std::filesystem::path& path);
AggregateTable read_aggregate_csv(const std::filesystem::path& path);

}  // namespace relkit
