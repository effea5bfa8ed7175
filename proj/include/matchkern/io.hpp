#pragma once

#include <string>
#include <vector>

#include "matchkern/kernel.hpp"
#include "matchkern/matching.hpp"
#include "matchkern/partition.hpp"

namespace matchkern {

// Matching JSON form: array of 2-element arrays, canonical order, 1-indexed,
// e.g. [[1,5],[2,3],[4,6],[7,8]]. Partitions serialize as [4,2,1].
std::string matching_to_json(const Matching& m);
Matching matching_from_json(const std::string& text);
std::vector<Matching> matchings_from_json(const std::string& text);
std::string matchings_to_json(const std::vector<Matching>& ms);
std::string partition_to_json(const Partition& p);

// Fixed CSV float format: decimal point, 12 significant digits.
std::string format_double(double v);

std::string matrix_to_csv(const DenseMatrix& m);
std::string matrix_to_json(const DenseMatrix& m);

}  // namespace matchkern
