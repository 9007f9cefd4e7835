#ifndef SVFA_IO_HPP
#define SVFA_IO_HPP

#include <string>
#include <vector>

#include "svfa/analysis.hpp"
#include "svfa/selections.hpp"
#include "svfa/sets.hpp"
#include "svfa/svf.hpp"

namespace svfa {

// CompactSet <-> JSON array of arrays, e.g. [[0.0],[1.0]].
std::string compact_set_to_json(const CompactSet& A);
CompactSet compact_set_from_json(const std::string& text);

// Grid-backed SVF file format:
// {"a":..., "b":..., "grid":[x_0,...,x_N], "sets":[[[...]],...]}.
std::string svf_to_json(const SetValuedFunction& F);
SetValuedFunction svf_from_json(const std::string& text, const std::string& name = "file");
SetValuedFunction load_svf(const std::string& path);

/// Built-in catalog: "const-c", "jump-pair", "lipschitz-tube",
/// "annulus-slice". fiber_points controls the per-fiber sampling of the
/// continuum examples.
SetValuedFunction catalog_svf(const std::string& name, int fiber_points = 5);
std::vector<std::string> catalog_names();

/// CSV with header n,x,observed,bound,delta_star,slope; floats printed
/// with 17 significant digits so identical runs are byte-identical.
std::string table_to_csv(const ConvergenceTable& table);
std::string table_to_json(const ConvergenceTable& table);

/// One CSV per selection (columns x,y_1..y_d) plus a manifest JSON
/// listing the seeds; returns the file names written.
std::vector<std::string> export_selections(const std::vector<Selection>& family,
                                           const std::string& out_dir,
                                           const std::string& stem = "selection");

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string format_float(double v);  ///< %.17g

const char* norm_name(NormChoice norm);
NormChoice norm_from_name(const std::string& name);

}  // namespace svfa

#endif  // SVFA_IO_HPP
