#pragma once

#include "uem/model.hpp"
#include "uem/vec.hpp"

namespace uem::kernels {

/// Straightforward single-pass loops, kept as the reference the parallel
/// kernels are tested against.
namespace serial {

Vec mean_iter(const model::Dataset& data, const Vec& theta, double beta);
double weight_iter(const model::Dataset& data, const Vec& theta, double beta);
std::vector<double> second_moment(const model::Dataset& data);  // d x d row-major

}  // namespace serial

/// OpenMP kernels. Rows are reduced in fixed-size chunks whose partial sums
/// are folded in chunk order, so the result is bitwise identical for any
/// thread count.
namespace parallel {

Vec mean_iter(const model::Dataset& data, const Vec& theta, double beta);
double weight_iter(const model::Dataset& data, const Vec& theta, double beta);
std::vector<double> second_moment(const model::Dataset& data);

}  // namespace parallel

}  // namespace uem::kernels
