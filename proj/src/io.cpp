#include "latharm/io.hpp"

#include "latharm/format.hpp"
#include "latharm/version.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace latharm {

namespace {

long parse_long(const std::string& token, const char* where) {
  long value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw IoError(std::string(where) + ": expected an integer, got \"" + token + "\"");
  }
  return value;
}

double parse_field_double(const std::string& token, const char* where) {
  double value = 0.0;
  if (!detail::parse_double(token, value)) {
    throw IoError(std::string(where) + ": expected a number, got \"" + token + "\"");
  }
  return value;
}

// Split one CSV line on commas; tolerates a trailing carriage return.
std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::vector<std::string> non_empty_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") lines.push_back(line);
  }
  return lines;
}

nlohmann::json ivector_json(const IVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(static_cast<int>(i)));
  return arr;
}

IVector ivector_from_json(const nlohmann::json& arr, const char* where) {
  if (!arr.is_array() || arr.empty() || arr.size() > static_cast<std::size_t>(kMaxDim)) {
    throw IoError(std::string(where) + ": expected an array of 1 to 3 integers");
  }
  IVector v(static_cast<int>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_integer()) {
      throw IoError(std::string(where) + ": expected an array of integers");
    }
    v(static_cast<int>(i)) = arr[i].get<int>();
  }
  return v;
}

void append_complex_fields(std::string& out, Complex z) {
  out += detail::format_double(z.real());
  out += ',';
  out += detail::format_double(z.imag());
  out += '\n';
}

}  // namespace

std::string to_csv(const GridFunction& f) {
  std::string out;
  for (int j = 0; j < f.dim(); ++j) {
    out += "n_" + std::to_string(j + 1) + ",";
  }
  out += "re,im\n";
  IVector n(f.dim());
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    f.box().point_at(i, n);
    for (int j = 0; j < f.dim(); ++j) {
      out += std::to_string(n(j));
      out += ',';
    }
    append_complex_fields(out, f.values()(i));
  }
  return out;
}

GridFunction grid_function_from_csv(const std::string& text) {
  const std::vector<std::string> lines = non_empty_lines(text);
  if (lines.empty()) throw IoError("grid csv: empty input");
  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.size() < 3 || header.size() > static_cast<std::size_t>(kMaxDim) + 2) {
    throw IoError("grid csv: header must be n_1,...,n_d,re,im with 1 <= d <= 3");
  }
  const int d = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < d; ++j) {
    if (header[static_cast<std::size_t>(j)] != "n_" + std::to_string(j + 1)) {
      throw IoError("grid csv: bad header column \"" + header[static_cast<std::size_t>(j)] +
                    "\"");
    }
  }
  if (header[static_cast<std::size_t>(d)] != "re" ||
      header[static_cast<std::size_t>(d) + 1] != "im") {
    throw IoError("grid csv: header must end with re,im");
  }

  const std::size_t rows = lines.size() - 1;
  if (rows == 0) throw IoError("grid csv: no data rows");
  std::vector<IVector> coords(rows, IVector(d));
  CVector values(static_cast<Index>(rows));
  IVector lo(d), hi(d);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::vector<std::string> fields = split_csv_line(lines[r + 1]);
    const std::string where = "grid csv row " + std::to_string(r + 1);
    if (fields.size() != header.size()) {
      throw IoError(where + ": expected " + std::to_string(header.size()) + " fields");
    }
    for (int j = 0; j < d; ++j) {
      const long c = parse_long(fields[static_cast<std::size_t>(j)], where.c_str());
      coords[r](j) = static_cast<int>(c);
    }
    values(static_cast<Index>(r)) =
        Complex(parse_field_double(fields[static_cast<std::size_t>(d)], where.c_str()),
                parse_field_double(fields[static_cast<std::size_t>(d) + 1], where.c_str()));
    for (int j = 0; j < d; ++j) {
      lo(j) = (r == 0) ? coords[r](j) : std::min(lo(j), coords[r](j));
      hi(j) = (r == 0) ? coords[r](j) : std::max(hi(j), coords[r](j));
    }
  }
  const LatticeBox box(lo, hi);
  if (box.cardinality() != static_cast<Index>(rows)) {
    throw IoError("grid csv: rows do not fill the bounding box exactly");
  }
  IVector expected(d);
  for (std::size_t r = 0; r < rows; ++r) {
    box.point_at(static_cast<Index>(r), expected);
    if (expected != coords[r]) {
      throw IoError("grid csv row " + std::to_string(r + 1) + ": out of enumeration order");
    }
  }
  return GridFunction(box, std::move(values));
}

nlohmann::json to_json(const GridFunction& f) {
  const IVector lo = f.box().point_at(0);
  const IVector hi = f.box().point_at(f.box().cardinality() - 1);
  std::vector<double> re(static_cast<std::size_t>(f.values().size()));
  std::vector<double> im(re.size());
  for (Index i = 0; i < f.values().size(); ++i) {
    re[static_cast<std::size_t>(i)] = f.values()(i).real();
    im[static_cast<std::size_t>(i)] = f.values()(i).imag();
  }
  return nlohmann::json{{"box_lo", ivector_json(lo)},
                        {"box_hi", ivector_json(hi)},
                        {"re", re},
                        {"im", im}};
}

GridFunction grid_function_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("box_lo") || !j.contains("box_hi") || !j.contains("re") ||
      !j.contains("im")) {
    throw IoError("grid json: need box_lo, box_hi, re, im");
  }
  const IVector lo = ivector_from_json(j["box_lo"], "grid json box_lo");
  const IVector hi = ivector_from_json(j["box_hi"], "grid json box_hi");
  LatticeBox box(lo, hi);
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array() ||
      re.size() != static_cast<std::size_t>(box.cardinality()) || im.size() != re.size()) {
    throw IoError("grid json: re/im arrays must match the box cardinality");
  }
  CVector values(box.cardinality());
  for (Index i = 0; i < box.cardinality(); ++i) {
    const auto& a = re[static_cast<std::size_t>(i)];
    const auto& b = im[static_cast<std::size_t>(i)];
    if (!a.is_number() || !b.is_number()) throw IoError("grid json: re/im must be numbers");
    values(i) = Complex(a.get<double>(), b.get<double>());
  }
  return GridFunction(std::move(box), std::move(values));
}

std::string to_csv(const TorusSamples& samples) {
  const int d = samples.dim();
  std::string out;
  for (int j = 0; j < d; ++j) out += "k_" + std::to_string(j + 1) + ",";
  for (int j = 0; j < d; ++j) out += "xi_" + std::to_string(j + 1) + ",";
  out += "re,im\n";
  IVector k(d);
  RVector xi(d);
  for (Index i = 0; i < samples.grid().cardinality(); ++i) {
    samples.grid().indices_at(i, k);
    samples.grid().point_at(i, xi);
    for (int j = 0; j < d; ++j) {
      out += std::to_string(k(j));
      out += ',';
    }
    for (int j = 0; j < d; ++j) {
      out += detail::format_double(xi(j));
      out += ',';
    }
    append_complex_fields(out, samples.values()(i));
  }
  return out;
}

nlohmann::json grid_metadata(const TorusSamples& samples) {
  return nlohmann::json{{"sizes", ivector_json(samples.grid().sizes())},
                        {"library_version", kVersion}};
}

std::string to_csv(const KernelTable& table) { return to_csv(table.as_grid_function()); }

nlohmann::json kernel_metadata(const KernelTable& table) {
  return nlohmann::json{{"symbol", table.symbol_tag},
                        {"dim", table.box.dim()},
                        {"N", table.quadrature_size},
                        {"aliasing_estimate", table.aliasing_estimate},
                        {"tol", table.tol},
                        {"converged", table.converged},
                        {"doubling_deltas", table.doubling_deltas},
                        {"library_version", kVersion}};
}

KernelTable kernel_table_from_parts(const std::string& csv, const nlohmann::json& meta) {
  GridFunction values = grid_function_from_csv(csv);
  if (!meta.is_object() || !meta.contains("symbol") || !meta.contains("N") ||
      !meta.contains("aliasing_estimate") || !meta.contains("tol")) {
    throw IoError("kernel metadata: need symbol, N, aliasing_estimate, tol");
  }
  KernelTable table(meta["symbol"].get<std::string>(), values.box(), meta["tol"].get<double>());
  table.values = values.values();
  table.quadrature_size = meta["N"].get<long>();
  table.aliasing_estimate = meta["aliasing_estimate"].get<double>();
  if (meta.contains("converged")) table.converged = meta["converged"].get<bool>();
  if (meta.contains("doubling_deltas")) {
    table.doubling_deltas = meta["doubling_deltas"].get<std::vector<double>>();
  }
  return table;
}

nlohmann::json to_json(const WeakLorentzReport& report) {
  return nlohmann::json{{"symbol", report.symbol_tag},
                        {"dim", report.dim},
                        {"alpha", report.alpha},
                        {"grid", report.grid},
                        {"s_ladder", report.s_ladder},
                        {"distribution", report.distribution},
                        {"constant", report.constant},
                        {"constant_refined", report.constant_refined},
                        {"refinement_delta", std::abs(report.constant - report.constant_refined)},
                        {"library_version", kVersion}};
}

nlohmann::json to_json(const MikhlinReport& report) {
  return nlohmann::json{
      {"symbol", report.symbol_tag},
      {"dim", report.dim},
      {"max_order", report.max_order},
      {"grid", report.grid},
      {"scheme",
       report.scheme == DerivativeScheme::analytic ? "analytic" : "finite-difference"},
      {"constants", report.constants},
      {"constants_refined", report.constants_refined},
      {"excluded", report.excluded},
      {"library_version", kVersion}};
}

nlohmann::json to_json(const NormEstimate& estimate) {
  const IVector lo = estimate.window.point_at(0);
  const IVector hi = estimate.window.point_at(estimate.window.cardinality() - 1);
  return nlohmann::json{{"symbol", estimate.symbol_tag},
                        {"p", estimate.p},
                        {"q", estimate.q},
                        {"lower_bound", estimate.lower_bound},
                        {"method", estimate.method},
                        {"witness", to_json(estimate.witness)},
                        {"window_lo", ivector_json(lo)},
                        {"window_hi", ivector_json(hi)},
                        {"grid_sizes", ivector_json(estimate.grid_sizes)},
                        {"spectral", estimate.spectral},
                        {"trials", estimate.trials},
                        {"seed", estimate.seed},
                        {"library_version", kVersion}};
}

nlohmann::json to_json(const StrichartzReport& report) {
  const IVector lo = report.window.point_at(0);
  const IVector hi = report.window.point_at(report.window.cardinality() - 1);
  return nlohmann::json{{"dim", report.dim},
                        {"t", report.t},
                        {"p", report.p},
                        {"q", report.q},
                        {"support_radius", report.support_radius},
                        {"trials", report.trials},
                        {"seed", report.seed},
                        {"window_lo", ivector_json(lo)},
                        {"window_hi", ivector_json(hi)},
                        {"ratios", report.ratios},
                        {"max_ratio", report.max_ratio},
                        {"library_version", kVersion}};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return buffer.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + temp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out.good()) throw IoError("write failed on " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) throw IoError("cannot move " + temp.string() + " into place: " + ec.message());
}

}  // namespace latharm
