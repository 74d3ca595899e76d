#include "expeng/frame.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "expeng/csv.hpp"
#include "expeng/errors.hpp"

namespace expeng {

namespace {

constexpr int kMaxArms = 64;

bool parse_number(std::string_view s, double& out) {
  // from_chars does not accept leading '+' or whitespace; trim blanks.
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool is_missing(std::string_view s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null" ||
         s == "NULL";
}

class StringInterner {
 public:
  std::int32_t intern(std::string_view s) {
    auto it = index_.find(s);
    if (it != index_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(names_.size());
    names_.emplace_back(s);
    index_.emplace(names_.back(), id);
    return id;
  }
  std::vector<std::string> take_names() { return std::move(names_); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  // Views key into names_; std::deque-like stability is guaranteed because
  // names_ strings never move their heap storage on vector growth.
  std::unordered_map<std::string_view, std::int32_t> index_;
};

void log_info(std::vector<LogEvent>& log, std::string code, std::string message) {
  log.push_back({LogEvent::Level::info, std::move(code), std::move(message)});
}

}  // namespace

const char* role_name(Role role) {
  switch (role) {
    case Role::intent_to_treat: return "intent_to_treat";
    case Role::treated: return "treated";
    case Role::propensity: return "propensity";
    case Role::instrument: return "instrument";
    case Role::cluster: return "cluster";
    case Role::covariate: return "covariate";
    case Role::metric: return "metric";
    case Role::time: return "time";
    case Role::unit_id: return "unit_id";
  }
  return "?";
}

Role role_from_string(std::string_view name) {
  for (int r = 0; r <= static_cast<int>(Role::unit_id); ++r) {
    if (name == role_name(static_cast<Role>(r))) return static_cast<Role>(r);
  }
  throw SchemaError("unknown column role: " + std::string(name));
}

int Covariate::level_of(std::string_view level) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == level) return static_cast<int>(i);
  }
  return -1;
}

std::int64_t ExperimentFrame::cluster_count() const {
  if (cluster.empty()) return static_cast<std::int64_t>(n());
  return static_cast<std::int64_t>(cluster_names.size());
}

bool ExperimentFrame::singleton_clusters() const {
  if (cluster.empty()) return true;
  std::vector<std::int8_t> seen(cluster_names.size(), 0);
  for (auto c : cluster) {
    if (seen[c]) return false;
    seen[c] = 1;
  }
  return true;
}

bool ExperimentFrame::constant_propensity() const {
  if (w.empty()) return true;
  for (double v : w) {
    if (v != w.front()) return false;
  }
  return true;
}

const Covariate* ExperimentFrame::find_covariate(std::string_view name) const {
  for (const auto& c : covariates) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const std::vector<double>* ExperimentFrame::find_metric(std::string_view name) const {
  for (std::size_t i = 0; i < metric_names.size(); ++i) {
    if (metric_names[i] == name) return &metrics[i];
  }
  return nullptr;
}

ExperimentFrame finalize_frame(FrameDraft&& draft) {
  if (!draft.has_a && !draft.has_t) {
    throw SchemaError("at least one of intent_to_treat/treated must be bound");
  }
  const std::size_t n = draft.has_a ? draft.a.size() : draft.t.size();
  if (n < 2) {
    throw ValidationError("frame requires at least 2 rows, got " + std::to_string(n));
  }

  ExperimentFrame frame;
  frame.log = std::move(draft.log);
  frame.dropped_rows = draft.dropped_rows;

  // Defaults for the identification variables, logged individually.
  if (!draft.has_a) {
    draft.a = draft.t;
    log_info(frame.log, "default_intent_to_treat", "A defaulted to treated column");
  }
  if (!draft.has_t) {
    draft.t = draft.a;
    log_info(frame.log, "default_treated", "T defaulted to A (full compliance)");
  }
  if (!draft.has_z) {
    draft.z = draft.a;
    log_info(frame.log, "default_instrument", "Z defaulted to A");
  }

  // Arm labels: sorted distinct values over A, T, Z; smallest = control.
  std::set<std::int64_t> labels(draft.a.begin(), draft.a.end());
  labels.insert(draft.t.begin(), draft.t.end());
  labels.insert(draft.z.begin(), draft.z.end());
  if (labels.size() > kMaxArms) {
    throw ValidationError("too many distinct arm labels (" +
                          std::to_string(labels.size()) + "); not an arm column?");
  }
  frame.arm_labels.assign(labels.begin(), labels.end());
  std::map<std::int64_t, std::int8_t> code;
  for (std::size_t i = 0; i < frame.arm_labels.size(); ++i) {
    code[frame.arm_labels[i]] = static_cast<std::int8_t>(i);
  }
  auto encode = [&](const std::vector<std::int64_t>& raw) {
    std::vector<std::int8_t> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = code.at(raw[i]);
    return out;
  };
  frame.a = encode(draft.a);
  frame.t = encode(draft.t);
  frame.z = encode(draft.z);

  // Propensity: bound per row, or the constant empirical share of
  // non-control assignment.
  if (draft.has_w) {
    if (draft.w.size() != n) throw ValidationError("propensity column length mismatch");
    for (double v : draft.w) {
      if (!(v > 0.0 && v < 1.0)) {
        throw DomainError("propensity value outside (0,1): " + std::to_string(v));
      }
    }
    frame.w = std::move(draft.w);
  } else {
    std::size_t assigned = 0;
    for (auto av : frame.a) assigned += (av != 0);
    const double share = static_cast<double>(assigned) / static_cast<double>(n);
    if (!(share > 0.0 && share < 1.0)) {
      throw ValidationError(
          "cannot default propensity: all rows share one assignment");
    }
    frame.w_constant = share;
    log_info(frame.log, "default_propensity",
             "W defaulted to constant assignment share " + std::to_string(share));
  }

  // Clusters: bound ids are interned; unbound means singleton clusters.
  if (draft.has_cluster) {
    if (draft.cluster_ids.size() != n) {
      throw ValidationError("cluster column length mismatch");
    }
    StringInterner interner;
    frame.cluster.reserve(n);
    for (const auto& id : draft.cluster_ids) frame.cluster.push_back(interner.intern(id));
    frame.cluster_names = interner.take_names();
    frame.cluster_bound = true;
  } else {
    log_info(frame.log, "default_cluster", "C defaulted to row index (singleton clusters)");
  }

  for (auto& cov : draft.covariates) {
    if (cov.size() != n) {
      throw ValidationError("covariate column length mismatch: " + cov.name);
    }
  }
  frame.covariates = std::move(draft.covariates);
  frame.metric_names = std::move(draft.metric_names);
  frame.metrics = std::move(draft.metric_values);
  for (std::size_t i = 0; i < frame.metrics.size(); ++i) {
    if (frame.metrics[i].size() != n) {
      throw ValidationError("metric column length mismatch: " + frame.metric_names[i]);
    }
  }

  if (!draft.time_column.empty()) {
    const Covariate* tc = frame.find_covariate(draft.time_column);
    if (!tc) {
      throw SchemaError("time column not among covariates: " + draft.time_column);
    }
    if (tc->categorical) {
      throw SchemaError("time column must be numeric: " + draft.time_column);
    }
    frame.time_column = draft.time_column;
  }

  if (draft.has_unit) {
    if (draft.unit_ids.size() != n) throw ValidationError("unit_id column length mismatch");
    StringInterner interner;
    frame.unit.reserve(n);
    for (const auto& id : draft.unit_ids) frame.unit.push_back(interner.intern(id));
    const std::size_t n_units = interner.size();
    frame.unit_names = interner.take_names();
    frame.unit_bound = true;
    // Repeated observations require explicit clustering.
    if (!frame.time_column.empty() && n_units < n && !frame.cluster_bound) {
      throw ValidationError(
          "repeated observations per unit require an explicit cluster binding");
    }
  }

  return frame;
}

namespace {

struct BoundColumn {
  Role role;
  std::size_t field_index;
  ColumnKind kind;
  std::string name;
};

}  // namespace

ExperimentFrame load_table(const std::string& path, const TableSchema& schema,
                           const LoadOptions& options) {
  CsvReader reader(path, options.delimiter);
  const auto& header = reader.header();

  auto field_of = [&](const std::string& column) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == column) return i;
    }
    throw SchemaError("column not found in " + path + ": " + column);
  };

  std::vector<BoundColumn> bound;
  int role_counts[5] = {0, 0, 0, 0, 0};
  for (const auto& binding : schema) {
    bound.push_back({binding.role, field_of(binding.column), binding.kind, binding.column});
    const int r = static_cast<int>(binding.role);
    if (r <= static_cast<int>(Role::cluster)) {
      if (++role_counts[r] > 1) {
        throw SchemaError(std::string("role bound to more than one column: ") +
                          role_name(binding.role));
      }
    }
  }

  FrameDraft draft;
  std::vector<Covariate*> cov_ptr;  // parallel to `bound` covariate entries
  std::vector<std::vector<double>*> metric_ptr;
  std::vector<int> cov_state;  // 0 = undecided, 1 = numeric, 2 = categorical
  std::vector<StringInterner> cov_interner;
  for (const auto& b : bound) {
    switch (b.role) {
      case Role::intent_to_treat: draft.has_a = true; break;
      case Role::treated: draft.has_t = true; break;
      case Role::instrument: draft.has_z = true; break;
      case Role::propensity: draft.has_w = true; break;
      case Role::cluster: draft.has_cluster = true; break;
      case Role::unit_id: draft.has_unit = true; break;
      case Role::time:
      case Role::covariate: {
        draft.covariates.push_back({});
        draft.covariates.back().name = b.name;
        if (b.role == Role::time) draft.time_column = b.name;
        break;
      }
      case Role::metric: {
        draft.metric_names.push_back(b.name);
        draft.metric_values.emplace_back();
        break;
      }
    }
  }
  // Second pass over bindings to wire pointers (vectors are stable now).
  {
    std::size_t ci = 0, mi = 0;
    for (const auto& b : bound) {
      if (b.role == Role::covariate || b.role == Role::time) {
        cov_ptr.push_back(&draft.covariates[ci++]);
        cov_state.push_back(b.kind == ColumnKind::numeric      ? 1
                            : b.kind == ColumnKind::categorical ? 2
                                                                : 0);
        cov_interner.emplace_back();
      } else if (b.role == Role::metric) {
        metric_ptr.push_back(&draft.metric_values[mi++]);
      }
    }
  }

  std::vector<std::string_view> fields;
  std::vector<std::string_view> row_cov;  // covariate raw values for this row
  row_cov.resize(cov_ptr.size());
  const std::size_t n_cov = cov_ptr.size();

  while (reader.next_record(fields)) {
    if (fields.size() != header.size()) {
      throw DataTypeError("row " + std::to_string(reader.record_number()) +
                          ": expected " + std::to_string(header.size()) +
                          " fields, got " + std::to_string(fields.size()));
    }
    // Covariate missingness drops the row (counted); check before committing
    // anything for this record.
    {
      std::size_t ci = 0;
      bool drop = false;
      for (const auto& b : bound) {
        if (b.role == Role::covariate || b.role == Role::time) {
          row_cov[ci] = fields[b.field_index];
          if (is_missing(row_cov[ci])) drop = true;
          ++ci;
        }
      }
      if (drop) {
        ++draft.dropped_rows;
        continue;
      }
    }

    std::size_t ci = 0, mi = 0;
    for (const auto& b : bound) {
      const std::string_view cell = fields[b.field_index];
      const auto row_err = [&](const char* what) {
        return DataTypeError("row " + std::to_string(reader.record_number()) +
                             ", column '" + b.name + "': " + what + " ('" +
                             std::string(cell) + "')");
      };
      switch (b.role) {
        case Role::intent_to_treat:
        case Role::treated:
        case Role::instrument: {
          double v;
          if (is_missing(cell)) {
            throw ValidationError("row " + std::to_string(reader.record_number()) +
                                  ": missing value in bound '" +
                                  std::string(role_name(b.role)) + "' column");
          }
          if (!parse_number(cell, v) || v != std::floor(v)) {
            throw row_err("expected an integer arm label");
          }
          auto& dst = b.role == Role::intent_to_treat ? draft.a
                      : b.role == Role::treated       ? draft.t
                                                      : draft.z;
          dst.push_back(static_cast<std::int64_t>(v));
          break;
        }
        case Role::propensity: {
          double v;
          if (is_missing(cell) || !parse_number(cell, v)) {
            throw row_err("expected a numeric propensity");
          }
          if (!(v > 0.0 && v < 1.0)) {
            throw DomainError("row " + std::to_string(reader.record_number()) +
                              ": propensity outside (0,1): " + std::string(cell));
          }
          draft.w.push_back(v);
          break;
        }
        case Role::cluster: {
          if (is_missing(cell)) {
            throw ValidationError("row " + std::to_string(reader.record_number()) +
                                  ": missing value in bound 'cluster' column");
          }
          draft.cluster_ids.emplace_back(cell);
          break;
        }
        case Role::unit_id: {
          if (is_missing(cell)) {
            throw ValidationError("row " + std::to_string(reader.record_number()) +
                                  ": missing value in bound 'unit_id' column");
          }
          draft.unit_ids.emplace_back(cell);
          break;
        }
        case Role::metric: {
          double v;
          if (!parse_number(cell, v)) {
            throw row_err("non-numeric metric value");
          }
          metric_ptr[mi]->push_back(v);
          ++mi;
          break;
        }
        case Role::covariate:
        case Role::time: {
          Covariate& cov = *cov_ptr[ci];
          int& state = cov_state[ci];
          if (state == 0) {
            double v;
            state = parse_number(cell, v) ? 1 : 2;
            if (b.role == Role::time && state == 2) {
              throw row_err("time column must be numeric");
            }
            cov.categorical = (state == 2);
          }
          if (state == 1) {
            double v;
            if (!parse_number(cell, v)) {
              throw row_err("expected a numeric value in a numeric covariate");
            }
            cov.values.push_back(v);
          } else {
            cov.codes.push_back(cov_interner[ci].intern(cell));
          }
          ++ci;
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < cov_ptr.size(); ++i) {
    if (cov_ptr[i]->categorical) cov_ptr[i]->levels = cov_interner[i].take_names();
  }
  (void)n_cov;
  if (draft.dropped_rows > 0) {
    draft.log.push_back({LogEvent::Level::warning, "dropped_rows",
                         std::to_string(draft.dropped_rows) +
                             " row(s) dropped for missing covariate values"});
  }
  return finalize_frame(std::move(draft));
}

}  // namespace expeng
