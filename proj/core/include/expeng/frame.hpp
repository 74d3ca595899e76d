#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace expeng {

/// Roles a raw table column can be bound to. The five identification roles
/// (intent_to_treat, treated, propensity, instrument, cluster) determine how
/// the effect is identified; the rest bind analysis inputs.
enum class Role {
  intent_to_treat,
  treated,
  propensity,
  instrument,
  cluster,
  covariate,
  metric,
  time,
  unit_id,
};

const char* role_name(Role role);
Role role_from_string(std::string_view name);

/// How to interpret a covariate column's cells. `automatic` decides from the
/// first non-missing value: numeric if it parses as a number, categorical
/// otherwise.
enum class ColumnKind { automatic, numeric, categorical };

struct ColumnBinding {
  Role role;
  std::string column;
  ColumnKind kind = ColumnKind::automatic;
};

using TableSchema = std::vector<ColumnBinding>;

struct Covariate {
  std::string name;
  bool categorical = false;
  std::vector<double> values;       // numeric columns
  std::vector<std::int32_t> codes;  // categorical columns
  std::vector<std::string> levels;  // level names, code order

  std::size_t size() const { return categorical ? codes.size() : values.size(); }
  /// Index of a level name, or -1.
  int level_of(std::string_view level) const;
};

struct LogEvent {
  enum class Level { info, warning };
  Level level = Level::info;
  std::string code;     // stable machine-readable tag, e.g. "default_instrument"
  std::string message;  // human-readable detail
};

/// Columnar experiment dataset carrying the identification variables
/// (A, T, W, Z, C), covariates and metric columns. Immutable after
/// validation; safe to share across parallel jobs.
///
/// Arm labels are the sorted distinct values observed across A, T and Z;
/// code 0 (the smallest label) is the control arm. A/T/Z are stored as codes
/// into `arm_labels`.
struct ExperimentFrame {
  std::vector<std::int64_t> arm_labels;
  std::vector<std::int8_t> a;  // intent-to-treat assignment
  std::vector<std::int8_t> t;  // treatment received
  std::vector<std::int8_t> z;  // instrument

  // Propensity: per-row when bound, otherwise the constant default
  // (empirical share of non-control assignment).
  std::vector<double> w;
  double w_constant = 0.0;

  // Clusters: empty vector means singleton clusters (row index).
  bool cluster_bound = false;
  std::vector<std::int32_t> cluster;
  std::vector<std::string> cluster_names;

  std::vector<Covariate> covariates;
  std::vector<std::string> metric_names;
  std::vector<std::vector<double>> metrics;

  std::string time_column;  // empty when unbound; names a numeric covariate
  bool unit_bound = false;
  std::vector<std::int32_t> unit;
  std::vector<std::string> unit_names;

  std::vector<LogEvent> log;  // applied defaults, drops, warnings
  std::int64_t dropped_rows = 0;

  std::size_t n() const { return a.size(); }
  int n_arms() const { return static_cast<int>(arm_labels.size()); }
  double propensity(std::size_t i) const { return w.empty() ? w_constant : w[i]; }
  std::int32_t cluster_of(std::size_t i) const {
    return cluster.empty() ? static_cast<std::int32_t>(i) : cluster[i];
  }
  std::int64_t cluster_count() const;
  bool singleton_clusters() const;
  bool constant_propensity() const;

  const Covariate* find_covariate(std::string_view name) const;
  const std::vector<double>* find_metric(std::string_view name) const;
};

/// In-memory staging area for building a frame. load_table fills one from a
/// CSV file; simgen and tests fill one directly. finalize_frame applies the
/// documented defaults (Z <- A, T <- A, W <- assignment share, C <- row
/// index), validates every frame invariant and logs each applied default.
struct FrameDraft {
  std::vector<std::int64_t> a, t, z;
  bool has_a = false, has_t = false, has_z = false;
  std::vector<double> w;
  bool has_w = false;
  std::vector<std::string> cluster_ids;
  bool has_cluster = false;
  std::vector<Covariate> covariates;
  std::vector<std::string> metric_names;
  std::vector<std::vector<double>> metric_values;
  std::string time_column;
  std::vector<std::string> unit_ids;
  bool has_unit = false;
  std::vector<LogEvent> log;
  std::int64_t dropped_rows = 0;
};

ExperimentFrame finalize_frame(FrameDraft&& draft);

struct LoadOptions {
  char delimiter = ',';
};

/// Loads a delimited text file (RFC 4180, header row) and binds columns per
/// the schema. Rows with missing covariate values are dropped and counted;
/// missing values in identification or metric columns are errors.
ExperimentFrame load_table(const std::string& path, const TableSchema& schema,
                           const LoadOptions& options = {});

}  // namespace expeng
