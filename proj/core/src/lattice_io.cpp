#include "latticepde/lattice_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

namespace latticepde {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& cell, int line_no) {
  T value{};
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
  }
  return value;
}

}  // namespace

void write_csv(const LatticeFunction& u, std::ostream& os) {
  for (int k = 1; k <= u.dim(); ++k) os << 'x' << k << ',';
  os << "value\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    const Site& x = u.box().site(i);
    for (int k = 0; k < u.dim(); ++k) os << x[static_cast<std::size_t>(k)] << ',';
    os << format_double(u[i]) << '\n';
  }
}

std::string to_csv(const LatticeFunction& u) {
  std::ostringstream os;
  write_csv(u, os);
  return os.str();
}

void emit_solution_csv(const LatticeFunction& u, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(u, os);
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

LatticeFunction read_csv(std::istream& is, int radius) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv is empty");
  const auto header = split(line, ',');
  if (header.size() < 3 || header.back() != "value") throw std::invalid_argument("csv header must be x1,...,xN,value");
  const int dim = static_cast<int>(header.size()) - 1;
  for (int k = 0; k < dim; ++k) {
    if (header[static_cast<std::size_t>(k)] != "x" + std::to_string(k + 1)) {
      throw std::invalid_argument("csv header column " + std::to_string(k + 1) + " must be x" + std::to_string(k + 1));
    }
  }
  LatticeFunction u{LatticeBox(dim, radius)};
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != dim + 1) {
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected " + std::to_string(dim + 1) + " columns");
    }
    std::vector<int> coords(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) coords[static_cast<std::size_t>(k)] = parse_number<int>(cells[static_cast<std::size_t>(k)], line_no);
    const Site x(std::move(coords));
    if (!u.box().contains(x)) {
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": site " + x.to_string() + " outside B_" +
                                  std::to_string(radius));
    }
    u.set(x, parse_number<double>(cells.back(), line_no));
  }
  return u;
}

LatticeFunction load_csv(const std::filesystem::path& path, int radius) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_csv(is, radius);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::filesystem::path save_sequence(const FunctionSequence& seq, const std::filesystem::path& directory,
                                    const std::string& stem) {
  seq.validate();
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory '" + directory.string() + "': " + ec.message());
  nlohmann::ordered_json manifest;
  manifest["dim"] = seq.dim();
  manifest["level"] = seq.level ? nlohmann::ordered_json(*seq.level) : nlohmann::ordered_json(nullptr);
  manifest["terms"] = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < seq.terms.size(); ++n) {
    std::ostringstream name;
    name << stem << "_term_" << std::setw(3) << std::setfill('0') << n << ".csv";
    emit_solution_csv(seq.terms[n], directory / name.str());
    manifest["terms"].push_back({{"radius", seq.terms[n].box().radius()}, {"csv", name.str()}});
  }
  const auto path = directory / (stem + ".json");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << manifest.dump(2) << '\n';
  if (!os) throw IoError("write to '" + path.string() + "' failed");
  return path;
}

FunctionSequence load_sequence(const std::filesystem::path& manifest_path) {
  std::ifstream is(manifest_path, std::ios::binary);
  if (!is) throw IoError("cannot open manifest '" + manifest_path.string() + "'");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("manifest '" + manifest_path.string() + "': " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("terms") || !manifest["terms"].is_array()) {
    throw std::invalid_argument("manifest '" + manifest_path.string() + "' needs a 'terms' array");
  }
  for (const auto& [key, value] : manifest.items()) {
    if (key != "dim" && key != "level" && key != "terms") throw std::invalid_argument("manifest: unknown key '" + key + "'");
  }
  FunctionSequence seq;
  if (manifest.contains("level") && !manifest["level"].is_null()) seq.level = manifest["level"].get<double>();
  const auto base = manifest_path.parent_path();
  for (const auto& term : manifest["terms"]) {
    const int radius = term.at("radius").get<int>();
    seq.terms.push_back(load_csv(base / term.at("csv").get<std::string>(), radius));
  }
  seq.validate();
  if (manifest.contains("dim") && manifest["dim"].get<int>() != seq.dim()) {
    throw std::invalid_argument("manifest dim does not match its CSV files");
  }
  return seq;
}

}  // namespace latticepde
