#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ohlc/feature_space.hpp"
#include "ohlc/ohlc_core.hpp"
#include "ohlc/ppca.hpp"
#include "ohlc/simulate.hpp"

// Serial counterparts of the OpenMP kernels, written as plain loops. The
// equivalence tests hold them bit-identical to the parallel versions, and the
// benchmark tool compares the two.
namespace ohlc::reference {

std::vector<FeatureVec> transform_bars(std::span<const OhlcBar> bars);
std::vector<OhlcBar> inverse_bars(std::span<const FeatureVec> features);

SummaryStats column_stats(const FeatureMatrix& m);
std::pair<FeatureMatrix, SummaryStats> standardize(const FeatureMatrix& m);
CorrelationMatrices corr_matrix(const FeatureMatrix& m);

ScoreMatrix scores(const PseudoPcModel& model, const FeatureMatrix& m);

SimReport run_study(const SimConfig& config, const StructuralModel& model = {});

}  // namespace ohlc::reference
