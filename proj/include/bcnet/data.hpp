#pragma once

#include "bcnet/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bcnet {

struct Variable {
  std::string name;
  std::vector<std::string> states;

  int cardinality() const { return static_cast<int>(states.size()); }
  // Index of `label` in `states`, or kMissing when absent.
  StateIndex state_index(const std::string& label) const;
};

// Row-major so that each case is a contiguous span.
using EntryMatrix =
    Eigen::Array<StateIndex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// n cases over I categorical variables. Immutable once built; the constructor
// checks every invariant (unique names, c_i >= 2, entries in range).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Variable> variables, EntryMatrix entries);

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int i) const { return variables_[i]; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  std::int64_t num_cases() const { return entries_.rows(); }
  const EntryMatrix& entries() const { return entries_; }

  StateIndex at(std::int64_t row, int var) const { return entries_(row, var); }
  std::span<const StateIndex> row(std::int64_t r) const {
    return {entries_.data() + r * entries_.cols(),
            static_cast<std::size_t>(entries_.cols())};
  }

  // Index of the variable called `name`, or -1.
  int find_variable(const std::string& name) const;
  std::vector<int> cardinalities() const;

  // Distinct cases and how often each occurs, in order of first occurrence.
  // Counting passes run over these instead of over every case. Built on first
  // use and shared by copies; safe to call concurrently.
  struct Patterns {
    EntryMatrix rows;
    std::vector<std::int64_t> weights;
  };
  const Patterns& patterns() const;

  // Same variables, different entries (validated).
  Dataset with_entries(EntryMatrix entries) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::vector<Variable> variables_;
  EntryMatrix entries_;
  struct LazyPatterns {
    std::once_flag once;
    Patterns value;
  };
  std::shared_ptr<LazyPatterns> patterns_ = std::make_shared<LazyPatterns>();
};

// Variable name -> ordered state labels.
using Schema = std::map<std::string, std::vector<std::string>>;

Schema load_schema(const std::filesystem::path& path);
Schema schema_of(const Dataset& d);
void write_schema(const Dataset& d, const std::filesystem::path& path);

// States of a column are the schema's list when present, otherwise the sorted
// distinct observed labels.
Dataset parse_csv(std::istream& in, const std::string& missing_token = "?",
                  const std::optional<Schema>& schema = std::nullopt);
Dataset load_csv(const std::filesystem::path& path,
                 const std::string& missing_token = "?",
                 const std::optional<Schema>& schema = std::nullopt);

void write_csv(const Dataset& d, std::ostream& out,
               const std::string& missing_token = "?");
void write_csv(const Dataset& d, const std::filesystem::path& path,
               const std::string& missing_token = "?");

struct MissingnessSummary {
  std::vector<std::int64_t> missing_per_variable;
  std::int64_t total_entries = 0;
  std::int64_t total_missing = 0;
  double fraction_missing = 0.0;
};

MissingnessSummary summarize_missingness(const Dataset& d);

}  // namespace bcnet
