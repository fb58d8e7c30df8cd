#pragma once

#include "latharm/multiplier.hpp"
#include "latharm/regularity.hpp"
#include "latharm/wave.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace latharm {

/// Failure to read, write, or decode a data file. The CLI maps this to its
/// I/O exit code.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// GridFunction <-> CSV with header n_1,...,n_d,re,im and rows in box
// enumeration order. Doubles are shortest-round-trip decimals, so
// save -> load -> save is bit exact.
std::string to_csv(const GridFunction& f);
GridFunction grid_function_from_csv(const std::string& text);

// JSON variant carrying the box explicitly alongside the coefficient arrays.
nlohmann::json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const nlohmann::json& j);

// TorusSamples -> CSV with header k_1,...,k_d,xi_1,...,xi_d,re,im plus a JSON
// sidecar describing the grid.
std::string to_csv(const TorusSamples& samples);
nlohmann::json grid_metadata(const TorusSamples& samples);

// KernelTable -> CSV (same layout as a grid function) plus a JSON sidecar
// recording how the table was synthesized; the pair reassembles exactly.
std::string to_csv(const KernelTable& table);
nlohmann::json kernel_metadata(const KernelTable& table);
KernelTable kernel_table_from_parts(const std::string& csv, const nlohmann::json& meta);

// Report serializers used by the CLI and tests.
nlohmann::json to_json(const WeakLorentzReport& report);
nlohmann::json to_json(const MikhlinReport& report);
nlohmann::json to_json(const NormEstimate& estimate);
nlohmann::json to_json(const StrichartzReport& report);

// Whole-file helpers. Writes land in a temp file in the target directory and
// are renamed into place, so readers never observe a partial file.
std::string read_file(const std::filesystem::path& path);
void atomic_write(const std::filesystem::path& path, const std::string& text);

}  // namespace latharm
