#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cli/cli.hpp"
#include "wmwplan/datasets.hpp"

namespace wmwplan::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

double require_number(std::string_view text, const char* what) {
  const auto v = parse_double(text);
  if (!v) throw std::invalid_argument(std::string("invalid ") + what + " '" + std::string(text) + "'");
  return *v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

WeightedSample apply_ordinal_shift(const WeightedSample& f1, const std::vector<std::string_view>& parts,
                                   std::optional<std::size_t> ordinal_levels) {
  if (parts.size() < 4) {
    throw std::invalid_argument("ordshift expects ordshift:<frac>:up|down:cats=<i,j,...>[:levels=<K>]");
  }
  const double fraction = require_number(parts[1], "move fraction");
  ShiftDirection direction;
  if (parts[2] == "up") {
    direction = ShiftDirection::up;
  } else if (parts[2] == "down") {
    direction = ShiftDirection::down;
  } else {
    throw std::invalid_argument("ordshift direction must be 'up' or 'down'");
  }

  std::vector<std::size_t> categories;
  std::optional<std::size_t> levels = ordinal_levels;
  for (std::size_t i = 3; i < parts.size(); ++i) {
    const std::string_view part = parts[i];
    if (part.starts_with("cats=")) {
      for (std::string_view c : split(part.substr(5), ',')) {
        const double v = require_number(c, "category");
        if (v < 0 || v != std::floor(v)) throw std::invalid_argument("categories must be integer codes >= 0");
        categories.push_back(static_cast<std::size_t>(v));
      }
    } else if (part.starts_with("levels=")) {
      const double v = require_number(part.substr(7), "levels");
      if (v < 1 || v != std::floor(v)) throw std::invalid_argument("levels must be a positive integer");
      levels = static_cast<std::size_t>(v);
    } else {
      throw std::invalid_argument("unknown ordshift option '" + std::string(part) + "'");
    }
  }
  if (categories.empty()) throw std::invalid_argument("ordshift needs cats=<i,j,...>");

  double max_code = 0.0;
  for (double v : f1.values()) {
    if (v < 0 || v != std::floor(v)) {
      throw std::invalid_argument("ordshift needs a first group coded as categories 0, 1, 2, ...");
    }
    max_code = std::max(max_code, v);
  }
  const std::size_t k = levels.value_or(static_cast<std::size_t>(max_code) + 1);
  if (static_cast<std::size_t>(max_code) >= k) {
    throw std::invalid_argument("first group uses category codes beyond levels=" + std::to_string(k));
  }
  std::vector<double> counts(k, 0.0);
  for (std::size_t i = 0; i < f1.size(); ++i) {
    counts[static_cast<std::size_t>(f1.values()[i])] += f1.weights()[i];
  }
  return from_frequency_table(ordinal_shift(counts, fraction, direction, categories));
}

}  // namespace

WeightedSample read_sample(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::vector<double> weights;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_comment(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() > 2) fail_at(source, line_no, "expected 'value' or 'value,weight'");
    const auto value = parse_double(fields[0]);
    if (!value) fail_at(source, line_no, "invalid value '" + std::string(trim(fields[0])) + "'");
    double weight = 1.0;
    if (fields.size() == 2) {
      const auto w = parse_double(fields[1]);
      if (!w || !(*w > 0.0)) fail_at(source, line_no, "weight must be a positive number");
      weight = *w;
    }
    values.push_back(*value);
    weights.push_back(weight);
  }
  if (values.empty()) throw std::runtime_error(source + ": no observations");
  return {std::move(values), std::move(weights)};
}

WeightedSample read_sample_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_sample(in, path);
}

FrequencyTable read_frequency_table(std::istream& in, const std::string& source) {
  FrequencyTable table;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool first_row = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_comment(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2 && fields.size() != 3) {
      fail_at(source, line_no, "expected 'category,count_g1[,count_g2]'");
    }
    std::vector<std::optional<double>> counts;
    for (std::size_t i = 1; i < fields.size(); ++i) counts.push_back(parse_double(fields[i]));
    const bool numeric = std::all_of(counts.begin(), counts.end(), [](const auto& c) { return c.has_value(); });
    if (first_row && !numeric) {
      first_row = false;
      continue;  // header
    }
    first_row = false;
    if (!numeric) fail_at(source, line_no, "counts must be numbers");
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) fail_at(source, line_no, "inconsistent number of columns");
    for (const auto& c : counts) {
      if (*c < 0.0) fail_at(source, line_no, "counts must be >= 0");
    }
    table.categories.emplace_back(trim(fields[0]));
    table.counts_g1.push_back(*counts[0]);
    if (columns == 3) table.counts_g2.push_back(*counts[1]);
  }
  if (table.categories.empty()) throw std::runtime_error(source + ": no categories");
  return table;
}

FrequencyTable read_frequency_table_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_frequency_table(in, path);
}

WeightedSample apply_effect(const WeightedSample& f1, std::string_view spec,
                            std::optional<std::size_t> ordinal_levels) {
  const auto parts = split(spec, ':');
  const std::string_view kind = parts[0];
  if (kind == "scale") {
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("scale expects scale:<q>[:floor]");
    const double q = require_number(parts[1], "scale factor");
    bool floor = false;
    if (parts.size() == 3) {
      if (parts[2] != "floor") throw std::invalid_argument("unknown scale option '" + std::string(parts[2]) + "'");
      floor = true;
    }
    return scale_effect(f1, q, floor);
  }
  if (kind == "shift") {
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("shift expects shift:<delta>[:round=<k>]");
    const double delta = require_number(parts[1], "shift");
    std::optional<int> decimals;
    if (parts.size() == 3) {
      if (!parts[2].starts_with("round=")) throw std::invalid_argument("unknown shift option '" + std::string(parts[2]) + "'");
      const double k = require_number(parts[2].substr(6), "rounding");
      if (k != std::floor(k)) throw std::invalid_argument("rounding must be an integer");
      decimals = static_cast<int>(k);
    }
    return shift_effect(f1, delta, decimals);
  }
  if (kind == "ordshift") return apply_ordinal_shift(f1, parts, ordinal_levels);
  throw std::invalid_argument("unknown effect '" + std::string(kind) + "' (expected scale, shift or ordshift)");
}

ResolvedInputs resolve_inputs(const RunConfig& config) {
  const int first_sources = (config.example ? 1 : 0) + (config.group1_path ? 1 : 0) + (config.table_path ? 1 : 0);
  if (first_sources != 1) {
    throw std::invalid_argument("give exactly one of --example, --group1 or --table");
  }

  if (config.example) {
    if (config.group2_path || config.effect) {
      throw std::invalid_argument("--example already defines the second group");
    }
    NamedExample ex = load_example(*config.example, config.grid_size);
    return {ex.name, std::move(ex.f1), std::move(ex.f2), ex.defaults};
  }

  ResolvedInputs r;
  std::optional<std::size_t> levels;
  std::optional<WeightedSample> table_f2;
  if (config.table_path) {
    const FrequencyTable table = read_frequency_table_file(*config.table_path);
    r.source = *config.table_path;
    r.f1 = from_frequency_table(table.categories, table.counts_g1);
    levels = table.categories.size();
    if (!table.counts_g2.empty()) table_f2 = from_frequency_table(table.categories, table.counts_g2);
  } else {
    r.source = *config.group1_path;
    r.f1 = read_sample_file(*config.group1_path);
  }

  const int second_sources = (table_f2 ? 1 : 0) + (config.group2_path ? 1 : 0) + (config.effect ? 1 : 0);
  if (second_sources != 1) {
    throw std::invalid_argument(
        "the second group needs exactly one source: a three-column table, --group2 or --effect");
  }
  if (table_f2) {
    r.f2 = std::move(*table_f2);
  } else if (config.group2_path) {
    r.f2 = read_sample_file(*config.group2_path);
  } else {
    r.f2 = apply_effect(r.f1, *config.effect, levels);
  }
  return r;
}

}  // namespace wmwplan::cli
