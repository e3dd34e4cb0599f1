#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mcout/chain.hpp"

namespace mcout {

/// Comma-delimited chain file: a required header row of column labels, then
/// one row per draw. Blank lines are skipped. Throws ParseError with the
/// 1-based line number on a malformed row.
ChainMatrix read_chain_csv(std::istream& in);
ChainMatrix read_chain_csv(const std::filesystem::path& path);

/// Writes the header and rows with shortest round-trip number formatting.
void write_chain_csv(std::ostream& out, const ChainMatrix& chain);
void write_chain_csv(const std::filesystem::path& path, const ChainMatrix& chain);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace mcout
