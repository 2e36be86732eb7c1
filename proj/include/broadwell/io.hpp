#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "broadwell/characteristics.hpp"
#include "broadwell/constants.hpp"
#include "broadwell/data.hpp"
#include "broadwell/field.hpp"
#include "broadwell/march.hpp"
#include "broadwell/norms.hpp"
#include "broadwell/picard.hpp"
#include "broadwell/verify.hpp"

namespace broadwell {

/// Columns x, y, N1..N4; rows with y outer and x inner; 17 significant digits.
void write_slice_csv(const std::filesystem::path& path, const Field4& field, std::size_t k);

/// Reads one slice written by write_slice_csv into time plane k of `field`.
/// Throws SizeError when the rows do not match the lattice.
void read_slice_csv(const std::filesystem::path& path, Field4& field, std::size_t k);

/// Lattice table from a CSV with a header: the first two columns are the
/// coordinates (u, v) and `column` names the value column. The rows must
/// cover a full uniform lattice, in any order.
Table2D read_table_csv(const std::filesystem::path& path, const std::string& column);

std::string format_double(double v);

nlohmann::json to_json(const TheoremConstants& k);
nlohmann::json to_json(const HypothesisVerdict& v);
nlohmann::json to_json(const NormReport& r);
nlohmann::json to_json(const SlabRecord& r);
nlohmann::json to_json(const MeasuredConstants& m);
nlohmann::json to_json(const ShiftedNormReport& r);

}  // namespace broadwell
