#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "roughmax/error.hpp"
#include "roughmax/growth.hpp"

namespace roughmax::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumeric = 3;

class GrammarError : public DomainError {
 public:
  GrammarError(const std::string& what, std::size_t position)
      : DomainError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// variant:c:C_h[:A[:B|:m]][@x0]
//   pure:c:C_h            powerlog:c:C_h:A
//   powerexplog:c:C_h:A:B poweriterlog:c:C_h:m
GrowthFunction parse_growth_spec(const std::string& text);

struct ExperimentConfig {
  std::string command;
  std::string growth = "pure:1.02:1";
  int n_lo = 8;
  int n_hi = 18;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::map<std::string, std::string> params;  // command-specific
  // Execution settings, kept out of the output header.
  int workers = 1;
  std::string out;
  std::map<std::string, std::string> destinations;

  // key=value;key=value over every field.
  std::string to_string() const;
  static ExperimentConfig parse(const std::string& text);

  // The fields that determine the numbers (no workers, no paths).
  std::string experiment_string() const;

  bool operator==(const ExperimentConfig&) const = default;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // trailing comment lines
};

// CSV with '#' metadata lines, or the JSON mirror.
void write_table(std::ostream& os, const Table& t, const ExperimentConfig& cfg);

std::string version();

// Full command line without the program name. Output goes to --out when
// given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roughmax::cli
