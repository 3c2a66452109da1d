#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "auxnet/metrics.hpp"
#include "auxnet/model.hpp"
#include "auxnet/stream.hpp"

namespace auxnet {

enum class Mode { kAuxNet, kOdl };

const char* mode_name(Mode mode);
Mode parse_mode(const std::string& text);

struct ExperimentConfig {
    std::filesystem::path dataset;
    Mode mode = Mode::kAuxNet;
    // Aux-Net: the first B features are base, the rest auxiliary.
    // ODL: the first B features are the whole input (0 = all features).
    std::size_t base_features = 12;
    double p = 1.0;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    // Layer counts, width and optimizer settings. Feature counts, class count
    // and seed are filled in per run.
    NetworkConfig network;
    std::optional<std::filesystem::path> schedule_in;
    std::optional<std::filesystem::path> schedule_out;
    std::filesystem::path out_dir;  // empty: no files written
    std::size_t threads = 0;        // 0: hardware concurrency
};

struct SeedRun {
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& values);

// Runs one (mode, B, p, seed) cell on an already loaded dataset. When
// `schedule` is null a fresh one is drawn from the seed.
RunMetrics run_cell(const Dataset& ds, Mode mode, std::size_t base_features, double p,
                    std::uint64_t seed, const NetworkConfig& network,
                    const AvailabilitySchedule* schedule = nullptr);

// One run per seed. With out_dir set, writes steps_<tag>_seed<s>.csv for
// every seed and summary_<tag>.csv with per-seed rows plus mean/std rows.
std::vector<SeedRun> run_experiment(const ExperimentConfig& cfg);
std::vector<SeedRun> run_experiment(const ExperimentConfig& cfg, const Dataset& ds);

struct SweepRow {
    std::string model;  // "auxnet" or "odl"
    std::size_t base_features = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    double avg_accuracy = 0.0;
    double avg_loss = 0.0;
};

// Aux-Net over every p value and seed. Writes sweep_p.csv
// (p,seed,avg_accuracy,avg_loss) and sweep_p_means.csv.
std::vector<SweepRow> sweep_p(const ExperimentConfig& base, const Dataset& ds,
                              const std::vector<double>& ps);

// For every B: Aux-Net with B base features (rest auxiliary at base.p) and
// ODL on the first B features. Writes sweep_b.csv
// (B,model,seed,avg_accuracy,avg_loss) and sweep_b_means.csv.
std::vector<SweepRow> sweep_b(const ExperimentConfig& base, const Dataset& ds,
                              const std::vector<std::size_t>& bs);

// Mean and std over seeds for each (model, B, p) group, in first-seen order.
struct SweepSummary {
    std::string model;
    std::size_t base_features = 0;
    double p = 0.0;
    MeanStd accuracy;
    MeanStd loss;
};
std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows);

void write_steps_csv(std::ostream& out, const RunMetrics& metrics);
void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SeedRun>& runs);

std::string run_tag(Mode mode, std::size_t base_features, double p);

}  // namespace auxnet
