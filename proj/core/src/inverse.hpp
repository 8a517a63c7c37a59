#pragma once

#include "cwphase/model.hpp"

namespace cwphase::detail {

/// x with phi1(x, p) = mean. No lower cutoff on the mean, unlike x_of_y.
double x_of_mean(double mean, double p, const ModelParams& params, const SeriesAccuracy& acc);

}  // namespace cwphase::detail
