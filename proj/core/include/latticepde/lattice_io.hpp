#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "latticepde/decomposer.hpp"
#include "latticepde/lattice.hpp"

namespace latticepde {

/// Raised for unreadable or unwritable files; the message names the path.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// CSV with header x1,...,xN,value and one row per nonzero site in
/// lexicographic order. Values use the shortest round-trip representation.
void write_csv(const LatticeFunction& u, std::ostream& os);
std::string to_csv(const LatticeFunction& u);
void emit_solution_csv(const LatticeFunction& u, const std::filesystem::path& path);

/// Reads the CSV format back onto a box of the given radius.
LatticeFunction read_csv(std::istream& is, int radius);
LatticeFunction load_csv(const std::filesystem::path& path, int radius);

/// Manifest: {"dim": N, "level": c | null, "terms": [{"radius": R, "csv": "term_000.csv"}, ...]}.
/// CSV paths are relative to the manifest's directory.
std::filesystem::path save_sequence(const FunctionSequence& seq, const std::filesystem::path& directory,
                                    const std::string& stem = "sequence");
FunctionSequence load_sequence(const std::filesystem::path& manifest);

}  // namespace latticepde
