#ifndef HEGNN_DATASET_HPP
#define HEGNN_DATASET_HPP

#include <string>
#include <vector>

#include "hegnn/geomgraph.hpp"

namespace hegnn::geom {

// Line-delimited JSON dataset: one object per sample with the flat
// row-major fields charges, positions_t0, velocities_t0, positions_t1.
// See docs/FORMATS.md for the byte-level description.
void write_dataset(const std::vector<NBodySample>& samples, const std::string& path);
std::vector<NBodySample> read_dataset(const std::string& path);

} // namespace hegnn::geom

#endif
