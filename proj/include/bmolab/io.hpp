#pragma once

#include <string>

#include <json.hpp>

#include "bmolab/decomposition.hpp"
#include "bmolab/harness.hpp"
#include "bmolab/pair_search.hpp"
#include "bmolab/rearrangement.hpp"

namespace bmolab {

using ojson = nlohmann::ordered_json;

// Values travel as decimal strings when the denominator allows it (all
// dyadic rationals do), falling back to "p/q"; set membership as hex bitmaps.
ojson to_json(const GridSpec& spec);
GridSpec gridspec_from_json(const ojson& j);

ojson to_json(const GridFunction& f);
GridFunction gridfunction_from_json(const ojson& j);

ojson to_json(const CellSet& s);
CellSet cellset_from_json(const ojson& j);

ojson to_json(const StepFunction& f);  // [(length, value)] pairs
StepFunction stepfunction_from_json(const ojson& j);

ojson to_json(const Region& r);
ojson to_json(const OscillationReport& rep);
ojson to_json(const MarginReport& rep);
ojson to_json(const BalanceCertificate& cert);
ojson to_json(const SearchReport& rep, bool include_timing = true);
ojson to_json(const MinimalityReport& rep);
ojson to_json(const QuestionBReport& rep);
ojson to_json(const JnConstants& c);

SearchConfig search_config_from_json(const ojson& j);
ojson to_json(const SearchConfig& cfg);

/// CSV of (cell index, value) per row.
std::string gridfunction_to_csv(const GridFunction& f);
GridFunction gridfunction_from_csv(const std::string& text, int dim, int level);

/// One row per shard/batch of a search.
std::string search_report_to_csv(const SearchReport& rep);

/// JSON by default; paths ending in .csv need the grid shape passed in.
GridFunction load_gridfunction(const std::string& path, int csv_dim = 0, int csv_level = -1);
ojson load_json(const std::string& path);
void save_json(const std::string& path, const ojson& j);

}  // namespace bmolab
