#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dymgnn/mlgraph.hpp"

namespace dymgnn {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kFeatureCount = 16;

// Order is the CSV column order.
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "fico",        "if_fthb",      "mi_pct",         "cnt_units",
    "if_prim_res", "dti",          "ltv",            "if_corr",
    "if_sf",       "if_purc",      "cnt_borr",       "if_sc",
    "current_upb", "if_delq_sts",  "mths_remng",     "current_int_rt"};

inline constexpr std::array<bool, kFeatureCount> kBinaryFeature = {
    false, true,  false, false, true,  false, false, true,
    true,  true,  false, true,  false, true,  false, false};

// Month-to-month features; everything else is fixed at application time.
inline constexpr std::array<bool, kFeatureCount> kBehaviouralFeature = {
    false, false, false, false, false, false, false, false,
    false, false, false, false, true,  true,  true,  true};

std::vector<std::size_t> behavioural_feature_indices();

// Months since year zero; periods are written as YYYY-MM.
int parse_period(const std::string& label);
std::string format_period(int period);

struct LoanRecord {
    std::string loan_id;
    int period = 0;
    std::array<double, kFeatureCount> features{};
    std::array<bool, kFeatureCount> missing{};
    std::string zip;      // 5-digit zip, first two digits are the area key
    std::string company;  // lending company identifier
};

struct LoanPanel {
    std::vector<LoanRecord> records;  // sorted by (loan_id, period)
    std::map<std::string, std::optional<int>> default_month;  // first 90+ arrears month
    int min_period = 0;
    int max_period = 0;

    bool empty() const { return records.empty(); }
    void sort_and_index();
};

struct RejectedRow {
    std::size_t line;
    std::string reason;
};

LoanPanel ingest_panel(const std::string& csv_path,
                       std::vector<RejectedRow>* rejects = nullptr);
void write_panel_csv(const LoanPanel& panel, const std::string& csv_path);

struct FeatureStat {
    double p1 = 0.0, p99 = 0.0;   // capping bounds (linear-interpolation percentiles)
    double median = 0.0;
    double mode = 0.0;            // imputation value for binary features
    double min = 0.0, max = 1.0;  // post-capping training range for min-max scaling
};

// Statistics fitted on training periods only.
struct FeatureSpec {
    std::array<FeatureStat, kFeatureCount> stats{};
    int train_begin = 0;
    int train_end = 0;  // inclusive
};

FeatureSpec fit_feature_spec(const LoanPanel& panel, int train_begin, int train_end);
// Caps numeric features to [p1, p99], imputes missing values (median / mode).
void clean_features(LoanPanel& panel, const FeatureSpec& spec);
// (x - min) / (max - min) on training statistics; constant features map to 0;
// out-of-range values clamp to [0, 1].
void scale_minmax(LoanPanel& panel, const FeatureSpec& spec);

struct Connectors {
    // Loans with a malformed zip are excluded from the area layer only.
    std::map<std::string, std::optional<std::string>> area_key;
    std::map<std::string, std::string> company_key;
};

Connectors derive_connectors(const LoanPanel& panel);

struct Window {
    int start = 0, end = 0;           // snapshot period range, inclusive
    std::vector<std::string> node_ids;
    SnapshotSequence seq;
    std::vector<double> labels;       // one per node
};

struct WindowDataset {
    std::vector<Window> windows;
    std::vector<std::string> layer_names;
    FeatureSpec spec;
};

struct WindowOptions {
    int window_len = 6;
    int stride = 1;
    int horizon = 12;
    std::vector<std::string> layers = {"area", "company"};
    double isolate_fraction = 0.5;
    std::uint64_t seed = 0;
    // Last period for which outcomes are known; windows whose horizon extends
    // beyond it are dropped with a warning.
    int outcome_through = 0;
    // Off-by-default: resample the isolated node set per epoch rather than
    // fixing it per window (training hook; the fixed set is the default).
    bool redraw_isolation_per_epoch = false;
};

WindowDataset build_windows(const LoanPanel& scaled_panel, const Connectors& connectors,
                            const WindowOptions& opts,
                            std::vector<std::string>* warnings = nullptr);

void write_window_dataset(const WindowDataset& ds, const std::string& dir);
WindowDataset read_window_dataset(const std::string& dir);

enum class HazardMode {
    Full,             // features + current delinquency + neighbour contagion
    FinalDelinqOnly,  // default hazard driven by the current delinquency flag alone
};

struct SynthSpec {
    std::size_t n_loans = 2000;
    int months = 18;
    int start_period = 0;  // defaults to 2012-01 when 0
    std::size_t areas = 40;
    std::size_t companies = 60;
    double base_rate = 0.10;  // target fraction of loans defaulting over the panel
    double contagion = 2.0;
    std::uint64_t seed = 1;
    HazardMode hazard_mode = HazardMode::Full;
    int horizon = 12;  // outcomes are simulated this far past the last panel month
};

// Seeded panel generator; static features are calibrated to the reference
// means/standard deviations, behavioural features follow a monthly process,
// and the default hazard carries a network contagion term.
LoanPanel synth_generate(const SynthSpec& spec);

}  // namespace dymgnn
