#pragma once

#include "lml/types.hpp"

#include <cstdint>
#include <iosfwd>

namespace lml {

/// Builds the triplet side-information for one task: for each anchor its
/// nearest same-class points (Euclidean, ties broken by lowest index) become
/// positives, and for each (anchor, positive) pair a set of distinct
/// different-class impostors is sampled uniformly. Deterministic for fixed
/// inputs and seed. Classes with a single member anchor no triplets.
TripletSet mine_triplets(const LabeledDataset& D, int neighbors_per_anchor,
                         int impostors_per_pair, std::uint64_t seed);

/// Every admissible (i, j, k) in lexicographic order. Guarded to n <= 200;
/// the full enumeration is cubic.
TripletSet enumerate_triplets(const LabeledDataset& D);

/// Plain-text cache: header "# n=<source_n>", then one "i j k" per line.
void save_triplets(const TripletSet& T, std::ostream& out);
void save_triplets(const TripletSet& T, const std::string& path);
TripletSet load_triplets(std::istream& in);
TripletSet load_triplets(const std::string& path);

}  // namespace lml
