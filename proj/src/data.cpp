#include "bcnet/data.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <span>
#include <sstream>
#include <unordered_map>

namespace bcnet {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double-quoted fields may contain commas; "" inside a
// quoted field is a literal quote.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      out.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else if (!was_quoted || (ch != ' ' && ch != '\t')) {
      field += ch;
    }
  }
  if (quoted) throw ValidationError("unterminated quoted field in: " + line);
  out.push_back(was_quoted ? field : trim(field));
  return out;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos && trim(s) == s) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

void check_unique_states(const Variable& v) {
  std::set<std::string> seen(v.states.begin(), v.states.end());
  if (seen.size() != v.states.size())
    throw ValidationError("duplicate state label in variable '" + v.name + "'");
}

}  // namespace

StateIndex Variable::state_index(const std::string& label) const {
  const auto it = std::find(states.begin(), states.end(), label);
  return it == states.end() ? kMissing
                            : static_cast<StateIndex>(it - states.begin());
}

namespace {

struct RowHash {
  std::size_t operator()(std::span<const StateIndex> row) const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (StateIndex s : row) {
      h ^= static_cast<std::uint32_t>(s);
      h *= 0x100000001B3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct RowEqual {
  bool operator()(std::span<const StateIndex> a,
                  std::span<const StateIndex> b) const {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
};

Dataset::Patterns find_patterns(const EntryMatrix& entries) {
  const auto cols = static_cast<std::size_t>(entries.cols());
  std::unordered_map<std::span<const StateIndex>, std::size_t, RowHash, RowEqual>
      index;
  std::vector<Eigen::Index> first;
  std::vector<std::int64_t> weights;
  for (Eigen::Index r = 0; r < entries.rows(); ++r) {
    const std::span<const StateIndex> row(entries.data() + r * entries.cols(), cols);
    const auto [it, inserted] = index.try_emplace(row, first.size());
    if (inserted) {
      first.push_back(r);
      weights.push_back(1);
    } else {
      ++weights[it->second];
    }
  }
  Dataset::Patterns out;
  out.rows.resize(static_cast<Eigen::Index>(first.size()), entries.cols());
  for (std::size_t p = 0; p < first.size(); ++p)
    out.rows.row(static_cast<Eigen::Index>(p)) = entries.row(first[p]);
  out.weights = std::move(weights);
  return out;
}

}  // namespace

Dataset::Dataset(std::vector<Variable> variables, EntryMatrix entries)
    : variables_(std::move(variables)), entries_(std::move(entries)) {
  std::set<std::string> names;
  for (const auto& v : variables_) {
    if (!names.insert(v.name).second)
      throw ValidationError("duplicate variable name '" + v.name + "'");
    if (v.cardinality() < 2)
      throw ValidationError("variable '" + v.name +
                            "' needs at least 2 states (supply a schema)");
    check_unique_states(v);
  }
  if (entries_.rows() > 0 && entries_.cols() != num_variables())
    throw ValidationError("row length does not match the variable count");
  if (entries_.rows() == 0) entries_.resize(0, num_variables());
  for (Eigen::Index r = 0; r < entries_.rows(); ++r) {
    for (int i = 0; i < num_variables(); ++i) {
      const StateIndex s = entries_(r, i);
      if (s != kMissing && (s < 0 || s >= variables_[i].cardinality()))
        throw ValidationError("entry out of range for variable '" +
                              variables_[i].name + "'");
    }
  }
}

const Dataset::Patterns& Dataset::patterns() const {
  std::call_once(patterns_->once,
                 [this] { patterns_->value = find_patterns(entries_); });
  return patterns_->value;
}

int Dataset::find_variable(const std::string& name) const {
  for (int i = 0; i < num_variables(); ++i)
    if (variables_[i].name == name) return i;
  return -1;
}

std::vector<int> Dataset::cardinalities() const {
  std::vector<int> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.cardinality());
  return out;
}

Dataset Dataset::with_entries(EntryMatrix entries) const {
  return Dataset(variables_, std::move(entries));
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.num_variables() != b.num_variables()) return false;
  for (int i = 0; i < a.num_variables(); ++i) {
    if (a.variables_[i].name != b.variables_[i].name ||
        a.variables_[i].states != b.variables_[i].states)
      return false;
  }
  return a.entries_.rows() == b.entries_.rows() &&
         (a.entries_ == b.entries_).all();
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read schema file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed schema " + path.string() + ": " +
                          e.what());
  }
  if (!j.is_object())
    throw ValidationError("schema must be an object {variable: [states]}");
  Schema schema;
  for (const auto& [name, states] : j.items()) {
    if (!states.is_array())
      throw ValidationError("schema entry '" + name + "' must be a list");
    auto& list = schema[name];
    for (const auto& s : states) {
      if (!s.is_string())
        throw ValidationError("schema states of '" + name +
                              "' must be strings");
      list.push_back(s.get<std::string>());
    }
  }
  return schema;
}

Schema schema_of(const Dataset& d) {
  Schema schema;
  for (const auto& v : d.variables()) schema[v.name] = v.states;
  return schema;
}

void write_schema(const Dataset& d, const std::filesystem::path& path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& v : d.variables()) j[v.name] = v.states;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Dataset parse_csv(std::istream& in, const std::string& missing_token,
                  const std::optional<Schema>& schema) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("CSV has no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  const std::vector<std::string> header = split_record(line);
  const std::size_t width = header.size();
  {
    std::set<std::string> seen;
    for (const auto& h : header) {
      if (h.empty()) throw ValidationError("empty column name in header");
      if (!seen.insert(h).second)
        throw ValidationError("duplicate header name '" + h + "'");
    }
  }

  std::vector<std::vector<std::string>> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto rec = split_record(line);
    if (rec.size() != width)
      throw ValidationError("line " + std::to_string(line_no) + " has " +
                            std::to_string(rec.size()) + " fields, expected " +
                            std::to_string(width));
    cells.push_back(std::move(rec));
  }

  std::vector<Variable> vars(width);
  for (std::size_t c = 0; c < width; ++c) {
    vars[c].name = header[c];
    if (schema) {
      if (auto it = schema->find(header[c]); it != schema->end()) {
        vars[c].states = it->second;
        continue;
      }
    }
    std::set<std::string> observed;
    for (const auto& rec : cells)
      if (rec[c] != missing_token) observed.insert(rec[c]);
    if (observed.empty())
      throw ValidationError("uninferable cardinality for column '" +
                            header[c] + "' (all entries missing)");
    vars[c].states.assign(observed.begin(), observed.end());
  }

  EntryMatrix entries(static_cast<Eigen::Index>(cells.size()),
                      static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::string& cell = cells[r][c];
      if (cell == missing_token) {
        entries(r, c) = kMissing;
        continue;
      }
      const StateIndex s = vars[c].state_index(cell);
      if (s == kMissing)
        throw ValidationError("value '" + cell + "' is not a state of '" +
                              vars[c].name + "'");
      entries(r, c) = s;
    }
  }
  return Dataset(std::move(vars), std::move(entries));
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::string& missing_token,
                 const std::optional<Schema>& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read data file " + path.string());
  return parse_csv(in, missing_token, schema);
}

void write_csv(const Dataset& d, std::ostream& out,
               const std::string& missing_token) {
  for (int i = 0; i < d.num_variables(); ++i)
    out << (i ? "," : "") << quote_if_needed(d.variable(i).name);
  out << '\n';
  for (std::int64_t r = 0; r < d.num_cases(); ++r) {
    for (int i = 0; i < d.num_variables(); ++i) {
      const StateIndex s = d.at(r, i);
      out << (i ? "," : "")
          << (is_missing(s) ? missing_token
                            : quote_if_needed(d.variable(i).states[s]));
    }
    out << '\n';
  }
}

void write_csv(const Dataset& d, const std::filesystem::path& path,
               const std::string& missing_token) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_csv(d, out, missing_token);
}

MissingnessSummary summarize_missingness(const Dataset& d) {
  MissingnessSummary s;
  s.missing_per_variable.assign(d.num_variables(), 0);
  s.total_entries = d.num_cases() * d.num_variables();
  for (int i = 0; i < d.num_variables(); ++i) {
    s.missing_per_variable[i] = (d.entries().col(i) == kMissing).count();
    s.total_missing += s.missing_per_variable[i];
  }
  s.fraction_missing =
      s.total_entries == 0
          ? 0.0
          : static_cast<double>(s.total_missing) / s.total_entries;
  return s;
}

}  // namespace bcnet
