#ifndef TRAJMINE_INGEST_HPP
#define TRAJMINE_INGEST_HPP

#include <map>
#include <string>

#include "trajmine/types.hpp"

namespace trajmine {

/// Loads the canonical point CSV ("trajectory_id,seq,x,y", header required).
/// Points are ordered by seq and re-indexed to 0..L-1; gaps in seq are
/// tolerated, duplicates are not. Malformed rows raise DataError naming the
/// line number.
Dataset load_csv(const std::string& path);

/// Writes a dataset back out in the same schema; round-trips exactly.
void save_csv(const Dataset& dataset, const std::string& path);

/// Loads a NOAA HURDAT2 best-track file. One trajectory per storm;
/// x = signed longitude (W negative), y = signed latitude (S negative).
/// Each point keeps its calendar month for split_by_month.
Dataset load_hurdat2(const std::string& path);

/// Partitions a month-tagged dataset into per-month datasets. Trajectories
/// crossing a month boundary are cut at the boundary; point counts are
/// conserved across the partition.
std::map<int, Dataset> split_by_month(const Dataset& dataset);

/// Maps each axis independently so its min lands on 0 and its max on 1000.
/// A zero-extent axis maps everything to 500 and records scale 0.
Dataset normalize(const Dataset& dataset);

/// Drops trajectories that cannot produce flow vectors: fewer than 2 points,
/// or a single coordinate pair repeated.
Dataset prune_degenerate(const Dataset& dataset);

}  // namespace trajmine

#endif
